#pragma once

// Loading modules (sources and interface files) in import order, and the
// analyze / verify commands.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nonfail/calltype_checker.hpp"
#include "nonfail/symbols.hpp"

namespace nonfail {

struct SourceFile {
    std::string path;  // for diagnostics and the default output directory
    std::string text;
};

struct DriverOptions {
    DomainConfig domain;
    BuiltinOptions builtins;
    AnalysisOptions analysis;
    /// Searched for `<Module>.nonfail.json` (or `<Module>.fcir` when
    /// imports_from_source is set) for imports that are not inputs.
    std::vector<std::filesystem::path> include_dirs;
    bool imports_from_source = false;
};

struct AnalyzedModule {
    std::string origin;
    CoreProgram program;  // resolved and normalized
    AnalysisResult result;
    bool input = false;  // named on the command line (not pulled in by an import)
};

struct Workspace {
    std::unique_ptr<SymbolTable> symbols = std::make_unique<SymbolTable>();
    /// Facts of every loaded module.
    Tables facts;
    /// Modules analyzed from source, imports before importers.
    std::vector<std::unique_ptr<AnalyzedModule>> modules;
    /// Modules known only through their interface files.
    std::vector<std::string> interface_modules;

    const AnalyzedModule* find(const std::string& module) const;
    std::vector<const CoreProgram*> programs() const;
};

/// Parses, resolves and normalizes one module against `symbols` (which
/// must already know its imports) and registers its signature.
CoreProgram load_program(std::string_view text, SymbolTable& symbols);

/// Loads and analyzes `inputs` with their imports. Throws IrError for
/// invalid sources and InterfaceError for unusable interface files.
Workspace analyze_workspace(const std::vector<SourceFile>& inputs, const DriverOptions& options);

struct CliOptions {
    std::vector<std::string> inputs;
    std::vector<std::string> include_dirs;
    int depth = 1;
    bool error_as_failure = false;
    bool strict = false;
    std::string format = "text";  // text | json
    int max_iterations = 100;
    int term_size = 4;
    long step_budget = 10000;
    /// Where interface files are written; defaults to each input's directory.
    std::optional<std::string> output_dir;
    /// verify: take call types and in/out types from this interface file
    /// instead of analyzing.
    std::optional<std::string> interface_file;
};

DriverOptions driver_options(const CliOptions& cli);

/// Exit codes: 0 done, 1 invalid input, 2 `strict` and some operation is
/// failing.
int run_analyze(const CliOptions& cli, std::ostream& out, std::ostream& err);

/// Exit code 0 iff the oracle finds no counterexample, 1 on invalid input,
/// 3 on counterexamples.
int run_verify(const CliOptions& cli, std::ostream& out, std::ostream& err);

}  // namespace nonfail
