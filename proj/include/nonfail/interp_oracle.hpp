#pragma once

// Concrete nondeterministic evaluator over ground data terms. Every
// derivation is explored up to a bound; it is the reference the analyses
// are tested against.
//
// Let bindings are evaluated strictly: a binding that fails makes the whole
// path fail even if a lazy implementation would never demand it. The oracle
// may therefore report more failures than a lazy system, never fewer.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nonfail/abstract_domain.hpp"
#include "nonfail/builtins.hpp"
#include "nonfail/core_ir.hpp"
#include "nonfail/symbols.hpp"
#include "nonfail/tables.hpp"
#include "nonfail/terms.hpp"
#include "nonfail/types.hpp"

namespace nonfail {

struct Outcome {
    enum class Kind {
        Value,
        Failure,
        /// A call of `error` when errors are not treated as failures.
        Error,
        /// The step budget ran out on this path.
        Cutoff,
    };
    Kind kind = Kind::Value;
    DataTerm value;    // Value
    std::string site;  // Failure and Error: where it happened

    std::string str() const;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct EvalConfig {
    /// Function unfoldings allowed along one derivation path.
    long step_budget = 10000;
    /// Free variables are guessed among terms of at most this size.
    int free_term_size = 4;
    std::vector<Literal> literal_pool = nonfail::literal_pool();
    bool error_as_failure = false;
    /// Unfoldings allowed over all paths of one evaluation; the remaining
    /// paths become Cutoff.
    long work_limit = 5'000'000;
};

/// Values of function type offered to higher-order arguments and free
/// variables; each must be of the requested (ground) arrow type.
using FunctionPool = std::function<std::vector<DataTerm>(const Type&)>;

class Oracle {
public:
    /// `programs` are normalized and resolved, imports before importers;
    /// `types` has inferred all of them.
    Oracle(const SymbolTable& symbols, std::vector<const CoreProgram*> programs, const ProgramTypes& types,
           EvalConfig config, FunctionPool functions = {});

    /// All outcomes of `e` under σ, in exploration order. `context` is the
    /// function whose rule `e` belongs to; it types the free variables.
    std::vector<Outcome> eval_all(const QName& context, const Expr& e, const std::map<std::string, DataTerm>& sigma);

    /// All outcomes of f(args).
    std::vector<Outcome> call(const QName& f, const std::vector<DataTerm>& args);

    /// Argument types of f with type variables instantiated to Bool.
    std::vector<Type> param_types(const QName& f) const;

    TermEnumerator& terms() { return terms_; }
    const EvalConfig& config() const { return config_; }

private:
    struct Res {
        Outcome outcome;
        long fuel;
    };
    using Env = std::map<std::string, DataTerm>;

    void eval(const QName& fn, const Expr& e, const Env& env, long fuel, std::vector<Res>& out);
    void invoke(const QName& f, std::vector<DataTerm> args, long fuel, SourcePos pos, std::vector<Res>& out);
    void external(const QName& f, const std::vector<DataTerm>& args, long fuel, SourcePos pos, std::vector<Res>& out);
    void eval_free(const QName& fn, const FreeExpr& free, std::size_t i, Env& env, long fuel, std::vector<Res>& out);
    const FuncDecl* find(const QName& f) const;
    int compare(const DataTerm& a, const DataTerm& b) const;

    const SymbolTable& symbols_;
    std::vector<const CoreProgram*> programs_;
    const ProgramTypes& types_;
    EvalConfig config_;
    TermEnumerator terms_;
    long work_ = 0;
};

/// Runs `body` on a thread with a large stack; deep recursion in the
/// evaluator stays within bounds for large step budgets.
void run_with_large_stack(const std::function<void()>& body);

struct Counterexample {
    QName function;
    std::vector<DataTerm> args;
    /// The uncovered value (in/out checks only).
    std::optional<DataTerm> value;
    std::string detail;

    std::string str() const;
};

struct OracleVerdict {
    int tuples = 0;        // argument tuples evaluated
    int observations = 0;  // Value outcomes seen
    int cutoffs = 0;
    std::vector<Counterexample> counterexamples;

    bool pass() const { return counterexamples.empty(); }
};

/// Every argument tuple of terms of size ≤ term_size inside ct must evaluate
/// without a Failure outcome.
OracleVerdict check_calltype_oracle(Oracle& oracle, const QName& f, const CallType& ct, int term_size);

/// Every value of f on argument tuples of size ≤ term_size must be covered,
/// together with its arguments, by some entry of io.
OracleVerdict check_inout_oracle(Oracle& oracle, const QName& f, const InOutType& io, int term_size);

/// Named functions with trivial, non-failing call types whose type fits the
/// requested arrow type, as function values.
FunctionPool make_function_pool(const ProgramTypes& types, std::vector<const CoreProgram*> programs,
                                std::map<QName, CallType> calltypes);

}  // namespace nonfail
