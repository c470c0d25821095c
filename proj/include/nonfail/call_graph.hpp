#pragma once

#include <map>
#include <set>
#include <vector>

#include "nonfail/core_ir.hpp"

namespace nonfail {

/// Callees of every function of the module (including partial
/// applications and calls into other modules).
std::map<QName, std::set<QName>> callees(const CoreProgram& program);

/// Strongly connected components of the module-local call graph, callees
/// before callers. Components and their members follow declaration order
/// where the graph leaves a choice.
std::vector<std::vector<QName>> components_bottom_up(const CoreProgram& program);

}  // namespace nonfail
