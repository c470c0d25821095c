#include "nonfail/driver.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "nonfail/interp_oracle.hpp"
#include "nonfail/normalize.hpp"
#include "nonfail/parser.hpp"
#include "nonfail/report.hpp"

namespace fs = std::filesystem;

namespace nonfail {

const AnalyzedModule* Workspace::find(const std::string& module) const {
    for (const auto& m : modules) {
        if (m->program.module == module) return m.get();
    }
    return nullptr;
}

std::vector<const CoreProgram*> Workspace::programs() const {
    std::vector<const CoreProgram*> out;
    for (const auto& m : modules) out.push_back(&m->program);
    return out;
}

CoreProgram load_program(std::string_view text, SymbolTable& symbols) {
    auto program = parse_program(text);
    resolve_program(program, symbols);
    return normalize(program, symbols);
}

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IrError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void merge(Tables& into, const Tables& from) {
    for (const auto& [k, v] : from.result) into.result[k] = v;
    for (const auto& [k, v] : from.inout) into.inout[k] = v;
    for (const auto& [k, v] : from.calltype) into.calltype[k] = v;
}

class Loader {
public:
    Loader(const DriverOptions& options, Workspace& ws) : options_(options), ws_(ws) {}

    void run(const std::vector<SourceFile>& inputs) {
        for (const auto& in : inputs) {
            auto parsed = parse_program(in.text);
            if (pending_.count(parsed.module)) throw IrError("module " + parsed.module + " given twice");
            search_.push_back(fs::path(in.path).parent_path());
            pending_.emplace(parsed.module, Pending{in.path, in.text, std::move(parsed.imports)});
            order_.push_back(parsed.module);
        }
        for (const auto& m : order_) load(m);
    }

private:
    struct Pending {
        std::string path;
        std::string text;
        std::vector<std::string> imports;
    };

    void load(const std::string& module) {
        if (done_.count(module)) return;
        if (active_.count(module)) throw IrError("import cycle through module " + module);
        active_.insert(module);
        auto it = pending_.find(module);
        if (it != pending_.end()) {
            for (const auto& imp : it->second.imports) load(imp);
            analyze(it->second.path, it->second.text, true);
        } else {
            load_import(module);
        }
        active_.erase(module);
        done_.insert(module);
    }

    std::optional<fs::path> locate(const std::string& file) const {
        std::vector<fs::path> dirs(options_.include_dirs.begin(), options_.include_dirs.end());
        dirs.insert(dirs.end(), search_.begin(), search_.end());
        for (const auto& d : dirs) {
            auto p = (d.empty() ? fs::path(".") : d) / file;
            if (fs::exists(p)) return p;
        }
        return std::nullopt;
    }

    void load_import(const std::string& module) {
        if (options_.imports_from_source) {
            if (auto p = locate(module + ".fcir")) {
                auto text = read_file(*p);
                auto parsed = parse_program(text);
                for (const auto& imp : parsed.imports) load(imp);
                analyze(p->string(), text, false);
                return;
            }
            throw IrError("missing source for imported module " + module + " (looked for " + module + ".fcir)");
        }
        auto p = locate(module + ".nonfail.json");
        if (!p) throw IrError("missing interface for imported module " + module + " (looked for " + module +
                              ".nonfail.json)");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(*p));
        } catch (const nlohmann::json::exception& e) {
            throw InterfaceError(p->string() + ": " + e.what());
        }
        auto header = interface_header(j);
        if (header.module != module) throw InterfaceError(p->string() + " describes module " + header.module);
        for (const auto& imp : header.imports) load(imp);
        ws_.symbols->add(header.signature);
        merge(ws_.facts, interface_tables(j, *ws_.symbols, options_.domain));
        ws_.interface_modules.push_back(module);
    }

    void analyze(const std::string& path, const std::string& text, bool input) {
        auto m = std::make_unique<AnalyzedModule>();
        m->origin = path;
        m->input = input;
        m->program = load_program(text, *ws_.symbols);
        AnalysisEnv env{*ws_.symbols, DepthKDomain(options_.domain), options_.builtins, ws_.facts};
        m->result = analyze_fixpoint(m->program, env, options_.analysis);
        merge(ws_.facts, m->result.tables());
        ws_.modules.push_back(std::move(m));
    }

    const DriverOptions& options_;
    Workspace& ws_;
    std::map<std::string, Pending> pending_;
    std::vector<std::string> order_;
    std::vector<fs::path> search_;
    std::set<std::string> done_;
    std::set<std::string> active_;
};

}  // namespace

Workspace analyze_workspace(const std::vector<SourceFile>& inputs, const DriverOptions& options) {
    Workspace ws;
    Loader(options, ws).run(inputs);
    return ws;
}

DriverOptions driver_options(const CliOptions& cli) {
    DriverOptions o;
    o.domain.k = cli.depth;
    o.builtins.error_as_failure = cli.error_as_failure;
    o.analysis.max_iterations = cli.max_iterations;
    for (const auto& d : cli.include_dirs) o.include_dirs.emplace_back(d);
    return o;
}

namespace {

void print_ir_error(const IrError& e, const std::string& origin, std::ostream& err) {
    if (e.diagnostics().empty()) {
        err << origin << ": " << e.what() << "\n";
        return;
    }
    for (const auto& d : e.diagnostics()) err << origin << ":" << d.str() << "\n";
}

/// Runs `body`, mapping invalid input to exit code 1.
int guarded(const CliOptions& cli, std::ostream& err, const std::function<int()>& body) {
    if (cli.depth < 1 || cli.max_iterations < 1 || cli.term_size < 1 || cli.step_budget < 1) {
        err << "error: --depth, --max-iterations, --term-size and --step-budget must be positive\n";
        return 1;
    }
    try {
        return body();
    } catch (const IrError& e) {
        print_ir_error(e, cli.inputs.size() == 1 ? cli.inputs[0] : "input", err);
    } catch (const InterfaceError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return 1;
}

std::vector<SourceFile> read_inputs(const CliOptions& cli) {
    std::vector<SourceFile> files;
    for (const auto& p : cli.inputs) files.push_back({p, read_file(p)});
    if (files.empty()) throw IrError("no input files");
    return files;
}

}  // namespace

int run_analyze(const CliOptions& cli, std::ostream& out, std::ostream& err) {
    return guarded(cli, err, [&] {
        auto ws = analyze_workspace(read_inputs(cli), driver_options(cli));
        bool failing = false;
        nlohmann::json reports = nlohmann::json::array();
        for (const auto& m : ws.modules) {
            if (!m->input) continue;
            for (const auto& d : m->result.diagnostics) err << "warning: " << m->program.module << ": " << d << "\n";
            for (const auto& f : m->result.functions) failing = failing || f.status == Status::Failing;
            if (cli.format == "json") reports.push_back(report_json(m->program, m->result));
            else out << render_text(m->result);

            fs::path dir = cli.output_dir ? fs::path(*cli.output_dir) : fs::path(m->origin).parent_path();
            if (dir.empty()) dir = ".";
            std::error_code ec;
            fs::create_directories(dir, ec);
            std::ofstream iface(dir / (m->program.module + ".nonfail.json"));
            if (!iface) {
                err << "error: cannot write interface file in " << dir.string() << "\n";
                return 1;
            }
            iface << interface_json(m->program, m->result).dump(2) << "\n";
        }
        if (cli.format == "json") out << (reports.size() == 1 ? reports[0] : reports).dump(2) << "\n";
        return cli.strict && failing ? 2 : 0;
    });
}

int run_verify(const CliOptions& cli, std::ostream& out, std::ostream& err) {
    return guarded(cli, err, [&] {
        auto options = driver_options(cli);
        options.imports_from_source = true;
        auto ws = analyze_workspace(read_inputs(cli), options);

        ProgramTypes types(*ws.symbols);
        for (const auto& m : ws.modules) types.infer(m->program);

        Tables claimed = ws.facts;
        std::string claimed_module;
        if (cli.interface_file) {
            auto j = nlohmann::json::parse(read_file(*cli.interface_file));
            claimed_module = interface_header(j).module;
            if (!ws.find(claimed_module))
                throw InterfaceError(*cli.interface_file + " describes module " + claimed_module +
                                     ", which is not loaded");
            merge(claimed, interface_tables(j, *ws.symbols, options.domain));
        }

        std::vector<Literal> extra;
        for (const auto& m : ws.modules) {
            auto l = literals_of(m->program);
            extra.insert(extra.end(), l.begin(), l.end());
        }
        EvalConfig config;
        config.step_budget = cli.step_budget;
        config.free_term_size = cli.term_size;
        config.literal_pool = literal_pool(extra);
        config.error_as_failure = cli.error_as_failure;
        Oracle oracle(*ws.symbols, ws.programs(), types, config,
                      make_function_pool(types, ws.programs(), claimed.calltype));

        int counterexamples = 0;
        for (const auto& m : ws.modules) {
            if (!m->input && m->program.module != claimed_module) continue;
            out << "module " << m->program.module << " (term size " << cli.term_size << ")\n";
            for (const auto& f : m->program.functions) {
                if (f.external) continue;
                const auto& ct = claimed.calltype.at(f.name);
                std::string line = "  " + f.name.name + "/" + std::to_string(f.arity) + "  ";
                std::vector<Counterexample> found;
                int cutoffs = 0, tuples = 0, observations = 0;
                if (ct.failing) {
                    line += "call type failing (nothing to check)";
                } else {
                    auto v = check_calltype_oracle(oracle, f.name, ct, cli.term_size);
                    found = v.counterexamples;
                    tuples = v.tuples;
                    cutoffs += v.cutoffs;
                    observations += v.observations;
                    line += "call type " + ct.str() + ": " + std::to_string(v.tuples) + " tuples";
                }
                auto io = check_inout_oracle(oracle, f.name, claimed.inout.at(f.name), cli.term_size);
                found.insert(found.end(), io.counterexamples.begin(), io.counterexamples.end());
                cutoffs += io.cutoffs;
                observations += io.observations;
                line += "; in/out: " + std::to_string(io.observations) + " values";
                line += found.empty() ? "  ok" : "  COUNTEREXAMPLES";
                out << line << "\n";
                for (const auto& c : found) out << "    " << c.str() << "\n";
                counterexamples += static_cast<int>(found.size());
                if (!ct.failing && tuples == 0)
                    out << "    note: no argument tuple of size <= " << cli.term_size
                        << " lies in the call type; the check is vacuous\n";
                if (cutoffs > 0 && observations == 0)
                    err << "warning: " << f.name.name << ": the step budget produced no value, only cutoffs\n";
            }
        }
        out << (counterexamples == 0 ? "verified: no counterexamples\n"
                                     : std::to_string(counterexamples) + " counterexample(s)\n");
        return counterexamples == 0 ? 0 : 3;
    });
}

}  // namespace nonfail
