#include "nonfail/analysis_env.hpp"

namespace nonfail {

std::optional<Builtin> AnalysisEnv::builtin(const QName& f) const {
    const auto* sig = symbols.function(f);
    if (sig == nullptr || !sig->external) return std::nullopt;
    return lookup_builtin(f.name, sig->arity, builtins, domain);
}

Tables seed_tables(const CoreProgram& program, const AnalysisEnv& env) {
    Tables t = env.imported;
    std::vector<Diagnostic> diags;
    for (const auto& f : program.functions) {
        if (!f.external) continue;
        auto b = lookup_builtin(f.name.name, f.arity, env.builtins, env.domain);
        if (!b) {
            std::string known;
            for (const auto& n : builtin_names()) known += (known.empty() ? "" : ", ") + n;
            diags.push_back({f.pos, "unknown external " + f.name.name + "/" + std::to_string(f.arity) +
                                        " (known: " + known + ")"});
            continue;
        }
        t.result[f.name] = b->result;
        t.inout[f.name] = b->inout;
        t.calltype[f.name] = b->calltype;
    }
    if (!diags.empty()) throw IrError(std::move(diags));
    return t;
}

}  // namespace nonfail
