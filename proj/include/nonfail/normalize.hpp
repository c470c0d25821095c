#pragma once

#include <set>
#include <string>

#include "nonfail/core_ir.hpp"
#include "nonfail/symbols.hpp"

namespace nonfail {

/// Brings a resolved program into the form the analyses expect:
///  - non-variable constructor and call arguments are lifted into lets,
///    except the argument of `allValues`, which must stay encapsulated;
///  - case branches over algebraic types are sorted into declaration order,
///    `default` is expanded to the missing constructors and uncovered
///    constructors get a `failed` branch;
///  - literal cases get a `(default failed)` branch unless they have one;
///  - every binder in a rule gets a unique name.
/// Recursive lets and overlapping patterns are rejected with IrError.
CoreProgram normalize(const CoreProgram& program, const SymbolTable& symbols);

std::set<std::string> free_vars(const Expr& e);

/// True when `e` is a call of the encapsulation builtin.
bool is_all_values_call(const CallExpr& c, const SymbolTable& symbols);

/// Checks the post-normalization invariants; returns a description of the
/// first violation, or an empty string.
std::string normal_form_violation(const CoreProgram& program, const SymbolTable& symbols);

}  // namespace nonfail
