#pragma once

#include <map>
#include <string>
#include <vector>

#include "nonfail/analysis_env.hpp"
#include "nonfail/value_analysis.hpp"

namespace nonfail {

using TypeEnv = std::map<std::string, AbstractValue>;

struct EnvResult {
    TypeEnv env;
    AbstractValue result;
    /// Produced by a syntactic `failed` leaf; such pairs are dropped when
    /// building in/out types.
    bool failed = false;
};

/// The judgement Γ ⊢ e : {(Γ1, a1), ..., (Γk, ak)}.
std::vector<EnvResult> infer_expr(const TypeEnv& gamma, const Expr& e, const ResultMap& r, const AnalysisEnv& env);

/// In/out type of a rule: the judgement started with all parameters at Any,
/// projected onto the parameters. Failed-derived pairs are dropped, equal
/// argument tuples merged, and results met with R(f).
InOutType infer_inout(const FuncDecl& f, const ResultMap& r, const AnalysisEnv& env);

/// In/out types of every local function; externals take their builtin
/// entry from `known`.
std::map<QName, InOutType> infer_inout_types(const CoreProgram& program, const ResultMap& r, const AnalysisEnv& env,
                                             const Tables& known);

}  // namespace nonfail
