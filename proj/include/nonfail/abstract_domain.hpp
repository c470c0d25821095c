#pragma once

// Depth-k abstraction of data terms. A value is Bottom, Any, or a set of
// constructor shapes; each shape carries one child value per argument and
// children below depth k are Any.

#include <concepts>
#include <memory>
#include <string>
#include <vector>

#include "nonfail/core_ir.hpp"

namespace nonfail {

class SymbolTable;

/// Head of a shape: a constructor or a literal (a 0-ary constructor of the
/// open type Int or Char).
struct Symbol {
    enum class Kind { Constructor, Literal };
    Kind kind = Kind::Constructor;
    QName name;  // constructor name; empty for literals
    Literal lit;
    QName type;
    int arity = 0;

    static Symbol constructor(QName name, QName type, int arity);
    static Symbol literal(Literal l);

    std::string label() const;

    /// Orders by rendered label first so that sets print sorted.
    friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b);
    friend bool operator==(const Symbol& a, const Symbol& b);
};

/// Constructor symbol for a declared constructor. Throws std::out_of_range
/// for unknown names.
Symbol symbol_of(const SymbolTable& symbols, const QName& ctor);

struct Shape;

class AbstractValue {
public:
    enum class Kind { Bottom, Any, Shapes };

    AbstractValue() = default;  // Bottom
    static AbstractValue bottom() { return {}; }
    static AbstractValue any();
    /// Canonicalizes: merges shapes with equal heads, drops shapes with a
    /// Bottom child, sorts. Mixed types give Any.
    static AbstractValue of(std::vector<Shape> shapes);

    Kind kind() const { return kind_; }
    bool is_bottom() const { return kind_ == Kind::Bottom; }
    bool is_any() const { return kind_ == Kind::Any; }
    const std::vector<Shape>& shapes() const;

    /// `_`, `{}`, or `{Cons(_,_),Nil}`.
    std::string str() const;

    friend bool operator==(const AbstractValue& a, const AbstractValue& b);
    friend std::strong_ordering operator<=>(const AbstractValue& a, const AbstractValue& b);

private:
    Kind kind_ = Kind::Bottom;
    std::shared_ptr<const std::vector<Shape>> shapes_;
};

struct Shape {
    Symbol head;
    std::vector<AbstractValue> children;

    friend bool operator==(const Shape&, const Shape&) = default;
    friend std::strong_ordering operator<=>(const Shape& a, const Shape& b);
};

bool leq(const AbstractValue& a, const AbstractValue& b);
AbstractValue lub(const AbstractValue& a, const AbstractValue& b);
AbstractValue glb(const AbstractValue& a, const AbstractValue& b);

/// Depth of the deepest shape (0 for Any and Bottom).
int depth(const AbstractValue& a);

/// Ground term: constructor application, literal, or (for higher-order
/// arguments in the oracle) a possibly partially applied function.
struct DataTerm {
    enum class Kind { Constructor, Literal, Function };
    Kind kind = Kind::Constructor;
    QName name;
    Literal lit;
    std::vector<DataTerm> args;

    static DataTerm constructor(QName c, std::vector<DataTerm> args = {});
    static DataTerm literal(Literal l);
    static DataTerm function(QName f, std::vector<DataTerm> captured = {});

    /// Number of constructor and literal nodes.
    int size() const;
    /// IR syntax, e.g. `(cons Cons (cons True) (cons Nil))`.
    std::string ir() const;
    /// Compact syntax, e.g. `Cons(True,Nil)`.
    std::string str() const;

    friend std::strong_ordering operator<=>(const DataTerm& a, const DataTerm& b);
    friend bool operator==(const DataTerm& a, const DataTerm& b) { return (a <=> b) == 0; }
};

/// t ∈ γ(a). Function values belong to Any only.
bool member(const DataTerm& t, const AbstractValue& a);

struct DomainConfig {
    int k = 1;
    int literal_widen_cap = 16;
};

class DepthKDomain {
public:
    using Value = AbstractValue;

    explicit DepthKDomain(DomainConfig cfg = {});

    const DomainConfig& config() const { return cfg_; }

    Value bottom() const { return Value::bottom(); }
    Value top() const { return Value::any(); }
    bool leq(const Value& a, const Value& b) const { return nonfail::leq(a, b); }
    Value lub(const Value& a, const Value& b) const { return nonfail::lub(a, b); }
    Value glb(const Value& a, const Value& b) const { return nonfail::glb(a, b); }
    bool member(const DataTerm& t, const Value& a) const { return nonfail::member(t, a); }

    /// c^α(args): Bottom if any argument is Bottom, else the single shape
    /// c(cut_{k-1}(args)). Throws std::invalid_argument on arity mismatch.
    Value cons(const Symbol& c, const std::vector<Value>& args) const;
    /// c^α(⊤,…,⊤).
    Value cons_top(const Symbol& c) const;
    Value literal(const Literal& l) const;

    /// Truncates to depth d; depth 0 gives Any (Bottom stays Bottom).
    Value cut(const Value& a, int d) const;

    /// Any when a literal set (at any level) exceeds the cap.
    Value widen_literals(const Value& a) const;

private:
    DomainConfig cfg_;
};

template <class D>
concept AbstractLattice = requires(const D& d, const typename D::Value& a, const typename D::Value& b,
                                   const Symbol& c, const std::vector<typename D::Value>& args,
                                   const DataTerm& t) {
    { d.bottom() } -> std::same_as<typename D::Value>;
    { d.top() } -> std::same_as<typename D::Value>;
    { d.leq(a, b) } -> std::same_as<bool>;
    { d.lub(a, b) } -> std::same_as<typename D::Value>;
    { d.glb(a, b) } -> std::same_as<typename D::Value>;
    { d.cons(c, args) } -> std::same_as<typename D::Value>;
    { d.member(t, a) } -> std::same_as<bool>;
};

static_assert(AbstractLattice<DepthKDomain>);

}  // namespace nonfail
