#pragma once

// Fixed call types, in/out types and result values of external
// operations, keyed by their unqualified name.

#include <optional>
#include <string>
#include <vector>

#include "nonfail/abstract_domain.hpp"
#include "nonfail/tables.hpp"

namespace nonfail {

struct BuiltinOptions {
    /// Treat `error` like `failed`.
    bool error_as_failure = false;
};

enum class BuiltinKind {
    Plain,
    /// Encapsulation: the argument is not checked against a call type.
    AllValues,
    /// Higher-order application of its first argument.
    Apply,
};

struct Builtin {
    CallType calltype;
    InOutType inout;
    AbstractValue result;
    BuiltinKind kind = BuiltinKind::Plain;
    /// Every call fails (`failed`, and `error` when treated as failure).
    bool always_fails = false;
};

/// Nullopt for unknown names or a wrong arity.
std::optional<Builtin> lookup_builtin(const std::string& name, int arity, const BuiltinOptions& options,
                                      const DepthKDomain& domain);

/// Names with a builtin definition, for diagnostics.
const std::vector<std::string>& builtin_names();

}  // namespace nonfail
