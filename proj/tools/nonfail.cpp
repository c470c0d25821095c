#include <iostream>

#include <CLI11.hpp>

#include "nonfail/driver.hpp"

namespace {

void add_common(CLI::App* cmd, nonfail::CliOptions& o) {
    cmd->add_option("inputs", o.inputs, "IR source files (.fcir)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--include", o.include_dirs, "Directory searched for imported modules");
    cmd->add_option("--depth", o.depth, "Depth k of the term abstraction")->check(CLI::PositiveNumber);
    cmd->add_flag("--error-as-failure", o.error_as_failure, "Treat calls of error like failed");
    cmd->add_option("--max-iterations", o.max_iterations, "Bound on refinement rounds")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-failure analysis of kernel functional-logic programs"};
    app.require_subcommand(1);
    nonfail::CliOptions opts;

    auto* analyze = app.add_subcommand("analyze", "Infer and check call types; write interface files");
    add_common(analyze, opts);
    analyze->add_flag("--strict", opts.strict, "Exit with 2 when some operation is failing");
    analyze->add_option("--format", opts.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    analyze->add_option("-o,--output-dir", opts.output_dir, "Directory for <Module>.nonfail.json");

    auto* verify = app.add_subcommand("verify", "Check the inferred facts against the reference interpreter");
    add_common(verify, opts);
    verify->add_option("--term-size", opts.term_size, "Largest argument term size")->check(CLI::PositiveNumber);
    verify->add_option("--step-budget", opts.step_budget, "Function unfoldings per derivation")
        ->check(CLI::PositiveNumber);
    verify->add_option("--interface", opts.interface_file, "Check the facts of this interface file instead")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    if (*analyze) return nonfail::run_analyze(opts, std::cout, std::cerr);
    return nonfail::run_verify(opts, std::cout, std::cerr);
}
