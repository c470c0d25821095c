#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nonfail/analysis_env.hpp"
#include "nonfail/inout_analysis.hpp"
#include "nonfail/value_analysis.hpp"

namespace nonfail {

/// (z, io, x1...xn): z may take the result of some entry of io, and then
/// x1...xn have the entry's argument values.
struct VarTriple {
    std::string subject;
    InOutType io;
    std::vector<std::string> args;

    /// The shorthand x :: a.
    static VarTriple simple(std::string x, AbstractValue a) { return {std::move(x), {{{}, std::move(a)}}, {}}; }

    friend bool operator==(const VarTriple&, const VarTriple&) = default;
};

/// Δ: a set of variable types. Triples with the same subject are
/// alternatives.
using VarTypes = std::vector<VarTriple>;

/// Lub of the results of all entries of all triples for x. Throws
/// std::out_of_range when x has no triple.
AbstractValue delta_value(const VarTypes& delta, const std::string& x);

bool delta_contains(const VarTypes& delta, const std::string& x);

/// Δ ∧ [x ↦ a]: results of x's entries are met with a, entries that become
/// Bottom are dropped, then definite bindings are propagated.
VarTypes delta_meet(VarTypes delta, const std::string& x, const AbstractValue& a);

/// Δ ∧ [x ↦ c] with c^α(⊤,…,⊤).
VarTypes delta_meet_cons(VarTypes delta, const std::string& x, const Symbol& c, const DepthKDomain& domain);

/// Removes the given literals from x's entry results (the default branch
/// of a literal case); entries left empty are dropped.
VarTypes delta_exclude_literals(VarTypes delta, const std::string& x, const std::set<Literal>& literals);

/// Repeats until stable: a subject with exactly one entry in total passes
/// that entry's argument values on to its argument variables.
VarTypes propagate_definite(VarTypes delta);

std::string delta_str(const VarTypes& delta);

struct CallSite {
    QName function;  // the operation whose rule contains the call
    QName callee;
    SourcePos pos;
};

struct Requirement {
    std::string variable;
    AbstractValue required;
    CallSite site;
};

struct CheckOutcome {
    enum class Kind { Verified, Refine, Fail };
    Kind kind = Kind::Verified;
    VarTypes result;                        // Verified: Δ'
    std::vector<Requirement> requirements;  // Refine (and reported on Fail)
    std::string reason;                     // Fail
};

struct CheckContext {
    const AnalysisEnv& env;
    const std::map<QName, CallType>& calltypes;
    const std::map<QName, InOutType>& inout;
    QName function;
};

/// The judgement Δ, z = e ⊢ Δ'. Unsatisfied call types are collected as
/// requirements and checking continues; a reachable `failed` that is not
/// a case branch, or a call of a failing operation, makes the outcome Fail.
CheckOutcome check_expr(const VarTypes& delta, const std::string& z, const Expr& e, const CheckContext& ctx);

/// Checks a rule against a call type: Δ0 = {param_i :: ct_i}.
CheckOutcome check_function(const FuncDecl& f, const CallType& ct, const CheckContext& ctx);

/// Call types read off the case structure on parameters, before any
/// checking. Externals get their builtin call type from `known`.
std::map<QName, CallType> initial_call_types(const CoreProgram& program, const AnalysisEnv& env, const Tables& known);

/// Any when `a` lists every constructor of an algebraic type with Any
/// children.
AbstractValue collapse_complete(const AbstractValue& a, const SymbolTable& symbols);

enum class Status { Verified, Refined, Failing, External };

std::string status_name(Status s);

struct FunctionResult {
    QName name;
    int arity = 0;
    Visibility visibility = Visibility::Public;
    bool external = false;
    CallType initial;
    CallType calltype;
    InOutType inout;
    AbstractValue result;
    Status status = Status::Verified;
    /// Unsatisfied requirements of the last check (failing functions).
    std::vector<Requirement> requirements;
    std::string reason;
};

struct PublicAll {
    int public_count = 0;
    int all = 0;

    friend bool operator==(const PublicAll&, const PublicAll&) = default;
};

struct Summary {
    PublicAll operations;
    PublicAll nontrivial_inout;
    PublicAll initial_nontrivial;
    PublicAll final_nontrivial;
    PublicAll final_failing;
    int iterations = 0;
    double time_ms = 0;
};

struct AnalysisOptions {
    int max_iterations = 100;
    /// Reverses the order in which functions are checked within a round;
    /// results must not depend on it.
    bool reverse_order = false;
};

struct AnalysisResult {
    std::string module;
    DomainConfig domain;
    std::vector<FunctionResult> functions;  // declaration order
    int iterations = 0;
    Summary summary;
    std::vector<std::string> diagnostics;

    const FunctionResult* find(const std::string& name) const;
    /// Facts of the module's functions, for importers.
    Tables tables() const;
};

/// Whole pipeline on a normalized module: R, IO, initial call types, then
/// rounds of checking and refinement until nothing changes.
AnalysisResult analyze_fixpoint(const CoreProgram& program, const AnalysisEnv& env,
                                const AnalysisOptions& options = {});

Summary summarize(const std::vector<FunctionResult>& functions, int iterations, double time_ms);

}  // namespace nonfail
