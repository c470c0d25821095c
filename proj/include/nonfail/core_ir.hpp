#pragma once

// Kernel intermediate language: data declarations plus one rule per
// operation. Expressions are immutable and shared via ExprPtr.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nonfail {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct SourcePos {
    int line = 0;
    int column = 0;
};

struct Diagnostic {
    SourcePos pos;
    std::string message;

    std::string str() const;
};

/// Raised by parsing, name resolution and normalization. Carries every
/// diagnostic collected before giving up.
class IrError : public std::runtime_error {
public:
    explicit IrError(std::vector<Diagnostic> diagnostics);
    explicit IrError(const std::string& message, SourcePos pos = {});

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// Module-qualified name. An empty module means "not yet resolved".
struct QName {
    std::string module;
    std::string name;

    std::string str() const { return module.empty() ? name : module + "." + name; }

    friend auto operator<=>(const QName&, const QName&) = default;
    friend bool operator==(const QName&, const QName&) = default;
};

/// Integer and character literals behave as 0-ary constructors of the open
/// types Int and Char.
struct Literal {
    enum class Kind { Int, Char };
    Kind kind = Kind::Int;
    std::int64_t value = 0;

    static Literal integer(std::int64_t v) { return {Kind::Int, v}; }
    static Literal character(std::int64_t codepoint) { return {Kind::Char, codepoint}; }

    /// Rendering used in abstract values and reports: `3`, `'a'`.
    std::string label() const;

    friend auto operator<=>(const Literal&, const Literal&) = default;
    friend bool operator==(const Literal&, const Literal&) = default;
};

std::string encode_utf8(std::int64_t codepoint);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct VarExpr {
    std::string name;
};
struct LitExpr {
    Literal lit;
};
struct ConsExpr {
    QName ctor;
    std::vector<ExprPtr> args;
};
/// Function call. Fewer arguments than the callee's arity denotes a partial
/// application (a function value).
struct CallExpr {
    QName func;
    std::vector<ExprPtr> args;
};
struct OrExpr {
    ExprPtr left;
    ExprPtr right;
};
struct FreeExpr {
    std::vector<std::string> vars;
    ExprPtr body;
};
struct LetExpr {
    std::string var;
    ExprPtr bound;
    ExprPtr body;
};

struct Pattern {
    enum class Kind { Cons, Lit, Default };
    Kind kind = Kind::Default;
    QName ctor;
    std::vector<std::string> vars;
    Literal lit;

    static Pattern cons(QName c, std::vector<std::string> vars) {
        return {Kind::Cons, std::move(c), std::move(vars), {}};
    }
    static Pattern literal(Literal l) { return {Kind::Lit, {}, {}, l}; }
    static Pattern fallback() { return {}; }
};

struct Branch {
    Pattern pattern;
    ExprPtr body;
};

struct CaseExpr {
    std::string scrutinee;
    std::vector<Branch> branches;
};
struct FailedExpr {};

struct Expr {
    using Node = std::variant<VarExpr, LitExpr, ConsExpr, CallExpr, OrExpr, FreeExpr, LetExpr,
                              CaseExpr, FailedExpr>;
    Node node;
    SourcePos pos;

    template <class T>
    const T* as() const {
        return std::get_if<T>(&node);
    }
    template <class T>
    bool is() const {
        return std::holds_alternative<T>(node);
    }
};

ExprPtr make_expr(Expr::Node node, SourcePos pos = {});
ExprPtr var(std::string name);
ExprPtr lit(Literal l);
ExprPtr cons(QName c, std::vector<ExprPtr> args);
ExprPtr call(QName f, std::vector<ExprPtr> args);
ExprPtr failed();

/// Name of a variable argument. Only valid on normalized programs, where
/// every constructor and call argument is a variable.
const std::string& arg_var(const ExprPtr& arg);

/// Structural equality, ignoring source positions.
bool structurally_equal(const Expr& a, const Expr& b);

/// Syntactic type used for constructor fields: a variable (lowercase), a
/// constructor application, or the arrow `->`.
struct TypeExpr {
    bool is_var = false;
    std::string var;
    QName con;
    std::vector<TypeExpr> args;

    friend bool operator==(const TypeExpr&, const TypeExpr&) = default;
};

struct ConstructorDecl {
    QName name;
    int arity = 0;
    /// Field types, when the declaration carries them.
    std::optional<std::vector<TypeExpr>> fields;
    SourcePos pos;
};

struct DataDecl {
    QName name;
    /// Type parameters in order of first appearance in the field types.
    std::vector<std::string> params;
    std::vector<ConstructorDecl> constructors;
    SourcePos pos;
};

enum class Visibility { Public, Private };

struct FuncDecl {
    QName name;
    int arity = 0;
    std::vector<std::string> params;
    ExprPtr body;  // null for externals
    Visibility visibility = Visibility::Public;
    bool external = false;
    SourcePos pos;
};

struct CoreProgram {
    std::string module;
    std::vector<std::string> imports;
    std::vector<DataDecl> data;
    std::vector<FuncDecl> functions;

    const FuncDecl* find_function(const std::string& name) const;
    const DataDecl* find_data(const std::string& name) const;
};

bool structurally_equal(const CoreProgram& a, const CoreProgram& b);

/// Calls `fn` on `e` and on every subexpression, pre-order.
template <class Fn>
void for_each_subexpr(const Expr& e, Fn&& fn) {
    fn(e);
    std::visit(overloaded{
                   [&](const ConsExpr& c) {
                       for (const auto& a : c.args) for_each_subexpr(*a, fn);
                   },
                   [&](const CallExpr& c) {
                       for (const auto& a : c.args) for_each_subexpr(*a, fn);
                   },
                   [&](const OrExpr& o) {
                       for_each_subexpr(*o.left, fn);
                       for_each_subexpr(*o.right, fn);
                   },
                   [&](const FreeExpr& f) { for_each_subexpr(*f.body, fn); },
                   [&](const LetExpr& l) {
                       for_each_subexpr(*l.bound, fn);
                       for_each_subexpr(*l.body, fn);
                   },
                   [&](const CaseExpr& c) {
                       for (const auto& b : c.branches) for_each_subexpr(*b.body, fn);
                   },
                   [](const auto&) {},
               },
               e.node);
}

}  // namespace nonfail
