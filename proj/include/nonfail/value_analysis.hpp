#pragma once

#include <map>

#include "nonfail/analysis_env.hpp"

namespace nonfail {

using ResultMap = std::map<QName, AbstractValue>;

/// Least fixpoint of the abstract result values of the module's functions,
/// starting from Bottom. `known` supplies the values of imported functions
/// and externals. Returns the values of every local function (externals
/// included).
ResultMap infer_result_values(const CoreProgram& program, const AnalysisEnv& env, const Tables& known);

/// Abstract value of `e` given R and the values of let-bound variables;
/// other variables are Any.
AbstractValue result_of_expr(const Expr& e, const AnalysisEnv& env, const ResultMap& r,
                             std::map<std::string, AbstractValue>& locals);

}  // namespace nonfail
