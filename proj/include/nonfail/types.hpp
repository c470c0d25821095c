#pragma once

// Small Hindley-Milner inference over normalized programs. The analyses
// never look at types; the oracle uses them to pick well-typed argument
// terms and free-variable instantiations.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nonfail/core_ir.hpp"
#include "nonfail/symbols.hpp"

namespace nonfail {

struct Type {
    enum class Kind { Var, Con };
    Kind kind = Kind::Var;
    int var = 0;
    QName con;
    std::vector<Type> args;

    static Type variable(int v) { return {Kind::Var, v, {}, {}}; }
    static Type constructor(QName c, std::vector<Type> args = {}) { return {Kind::Con, 0, std::move(c), std::move(args)}; }
    static Type arrow(Type from, Type to) { return constructor(builtin::Arrow, {std::move(from), std::move(to)}); }

    bool is_var() const { return kind == Kind::Var; }
    bool is_arrow() const { return kind == Kind::Con && con == builtin::Arrow; }
    std::string str() const;

    friend std::strong_ordering operator<=>(const Type& a, const Type& b);
    friend bool operator==(const Type& a, const Type& b) { return (a <=> b) == 0; }
};

/// Replaces every type variable by Bool, the smallest nontrivial type.
Type ground(const Type& t);

/// Curried function type `params -> result`.
Type curried(const std::vector<Type>& params, const Type& result);

/// Type of a function: every variable is generic.
struct FunctionType {
    std::vector<Type> params;
    Type result;
};

class Unifier {
public:
    int fresh() { return next_++; }
    Type fresh_var() { return Type::variable(fresh()); }
    /// Fully substituted form of t.
    Type resolve(const Type& t) const;
    bool unify(const Type& a, const Type& b);
    /// Copies t with its variables renamed to fresh ones.
    Type instantiate(const Type& t, std::map<int, Type>& renaming);

private:
    Type walk(const Type& t) const;
    bool occurs(int v, const Type& t) const;

    std::map<int, Type> subst_;
    int next_ = 0;
};

/// Types of all functions in a set of programs, plus the types of the local
/// variables of each rule.
class ProgramTypes {
public:
    explicit ProgramTypes(const SymbolTable& symbols) : symbols_(symbols) {}

    /// Infers a module; its imports must have been inferred before.
    /// Throws IrError on a type error.
    void infer(const CoreProgram& program);

    const FunctionType* function(const QName& f) const;
    /// Type of a parameter or local variable of a rule (variables left
    /// polymorphic are kept as variables).
    std::optional<Type> variable(const QName& f, const std::string& var) const;

    /// Type of a constructor application result and its fields, with fresh
    /// variables drawn from `u`.
    std::pair<Type, std::vector<Type>> instantiate_constructor(const QName& ctor, Unifier& u) const;

private:
    const SymbolTable& symbols_;
    std::map<QName, FunctionType> functions_;
    std::map<QName, std::map<std::string, Type>> locals_;
};

/// Builtin signature of an external operation keyed by its unqualified name.
std::optional<FunctionType> external_type(const std::string& name, int arity);

}  // namespace nonfail
