#pragma once

// Shared fixtures for the test binaries: corpus loading and random
// generators for property tests.

#include <random>
#include <string>
#include <vector>

#include "nonfail/driver.hpp"
#include "nonfail/interp_oracle.hpp"
#include "nonfail/report.hpp"

namespace nftest {

using namespace nonfail;

std::string corpus_path(const std::string& file);
std::string read_text(const std::string& path);

/// The corpus modules, imports before importers.
const std::vector<std::string>& corpus_modules();

struct CorpusRun {
    Workspace ws;

    const AnalyzedModule& module(const std::string& name) const;
    const FunctionResult& fn(const std::string& module, const std::string& name) const;
};

/// Analyzes every corpus module from source.
CorpusRun analyze_corpus(int k = 1, bool error_as_failure = false, bool reverse_order = false);

/// Analyzes in-memory sources (imports before importers).
Workspace analyze_texts(const std::vector<std::string>& texts, const DriverOptions& options = {});

/// Oracle over all modules of a workspace with the analysis' own call
/// types feeding the function pool.
struct OracleSetup {
    std::unique_ptr<ProgramTypes> types;
    std::unique_ptr<Oracle> oracle;
};
OracleSetup make_oracle(const Workspace& ws, long step_budget = 10000, int free_term_size = 3,
                        bool error_as_failure = false);

/// Small test universe: Bool, List, Maybe, Pair and Int literals.
struct Universe {
    SymbolTable symbols;
    CoreProgram program;

    Universe();
    Symbol ctor(const std::string& name) const;
    /// Parses the printed form, e.g. `{Cons(_,{Nil}),Nil}`.
    AbstractValue value(std::string_view text) const;
    /// Ground types used for random values and enumeration.
    std::vector<Type> types() const;
};

/// Random abstract values of a given ground type, truncated to depth k.
class ValueGen {
public:
    ValueGen(const Universe& u, int k, std::uint64_t seed);

    AbstractValue value(const Type& t);
    /// A value of a random type among Universe::types().
    AbstractValue any_type_value();
    /// Two values, usually of the same type.
    std::pair<AbstractValue, AbstractValue> pair();
    Type random_type();
    std::mt19937_64& rng() { return rng_; }

private:
    AbstractValue shapes(const Type& t, int depth);

    const Universe& u_;
    DepthKDomain domain_;
    std::mt19937_64 rng_;
};

struct LawResult {
    std::string law;
    int cases = 0;
    int violations = 0;
    std::string example;  // first violation
};

/// Randomized checks of the partial order, lub/glb laws, their agreement
/// with membership, and soundness of constructor application and cut.
/// Memberships are decided on enumerated terms of size <= 3.
std::vector<LawResult> lattice_laws(int cases_per_law, int k, std::uint64_t seed);

}  // namespace nftest
