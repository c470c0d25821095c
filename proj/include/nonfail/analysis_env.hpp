#pragma once

#include <optional>

#include "nonfail/abstract_domain.hpp"
#include "nonfail/builtins.hpp"
#include "nonfail/core_ir.hpp"
#include "nonfail/symbols.hpp"
#include "nonfail/tables.hpp"

namespace nonfail {

/// Everything the analyses of one module need besides the module itself.
struct AnalysisEnv {
    const SymbolTable& symbols;
    DepthKDomain domain;
    BuiltinOptions builtins;
    /// Facts about functions of previously analyzed modules.
    Tables imported;

    /// The builtin entry of `f` if it is declared external.
    std::optional<Builtin> builtin(const QName& f) const;
};

/// Imported facts plus the builtin facts of the module's own externals.
/// Throws IrError for externals without a builtin definition.
Tables seed_tables(const CoreProgram& program, const AnalysisEnv& env);

}  // namespace nonfail
