#include "nonfail/inout_analysis.hpp"

#include <cassert>

namespace nonfail {

namespace {

void infer_into(const TypeEnv& gamma, const Expr& e, const ResultMap& r, const AnalysisEnv& env,
                std::vector<EnvResult>& out) {
    auto lookup = [&](const std::string& v) {
        auto it = gamma.find(v);
        assert(it != gamma.end());
        return it->second;
    };
    std::visit(
        overloaded{
            [&](const VarExpr& v) { out.push_back({gamma, lookup(v.name), false}); },
            [&](const LitExpr& l) { out.push_back({gamma, env.domain.literal(l.lit), false}); },
            [&](const FailedExpr&) { out.push_back({gamma, AbstractValue::bottom(), true}); },
            [&](const ConsExpr& c) {
                std::vector<AbstractValue> args;
                for (const auto& a : c.args) args.push_back(lookup(arg_var(a)));
                out.push_back({gamma, env.domain.cons(symbol_of(env.symbols, c.ctor), args), false});
            },
            [&](const CallExpr& c) {
                const auto* sig = env.symbols.function(c.func);
                AbstractValue v = AbstractValue::any();
                if (static_cast<int>(c.args.size()) == sig->arity) {
                    if (auto it = r.find(c.func); it != r.end()) v = it->second;
                }
                out.push_back({gamma, v, false});
            },
            [&](const OrExpr& o) {
                infer_into(gamma, *o.left, r, env, out);
                infer_into(gamma, *o.right, r, env, out);
            },
            [&](const FreeExpr& f) {
                TypeEnv g = gamma;
                for (const auto& v : f.vars) g[v] = AbstractValue::any();
                infer_into(g, *f.body, r, env, out);
            },
            [&](const LetExpr& l) {
                TypeEnv g = gamma;
                g[l.var] = AbstractValue::any();
                infer_into(g, *l.body, r, env, out);
            },
            [&](const CaseExpr& c) {
                for (const auto& b : c.branches) {
                    TypeEnv g = gamma;
                    switch (b.pattern.kind) {
                    case Pattern::Kind::Cons:
                        g[c.scrutinee] = env.domain.cons_top(symbol_of(env.symbols, b.pattern.ctor));
                        for (const auto& v : b.pattern.vars) g[v] = AbstractValue::any();
                        break;
                    case Pattern::Kind::Lit: g[c.scrutinee] = env.domain.literal(b.pattern.lit); break;
                    case Pattern::Kind::Default: break;
                    }
                    infer_into(g, *b.body, r, env, out);
                }
            },
        },
        e.node);
}

}  // namespace

std::vector<EnvResult> infer_expr(const TypeEnv& gamma, const Expr& e, const ResultMap& r, const AnalysisEnv& env) {
    std::vector<EnvResult> out;
    infer_into(gamma, e, r, env, out);
    return out;
}

InOutType infer_inout(const FuncDecl& f, const ResultMap& r, const AnalysisEnv& env) {
    TypeEnv gamma;
    for (const auto& p : f.params) gamma[p] = AbstractValue::any();
    auto bound = r.count(f.name) ? r.at(f.name) : AbstractValue::any();
    InOutType io;
    for (auto& pair : infer_expr(gamma, *f.body, r, env)) {
        if (pair.failed) continue;
        IOEntry entry;
        for (const auto& p : f.params) entry.args.push_back(pair.env.at(p));
        entry.result = glb(pair.result, bound);
        io.push_back(std::move(entry));
    }
    return normalize_io(std::move(io));
}

std::map<QName, InOutType> infer_inout_types(const CoreProgram& program, const ResultMap& r, const AnalysisEnv& env,
                                             const Tables& known) {
    std::map<QName, InOutType> out;
    for (const auto& f : program.functions) {
        out[f.name] = f.external ? known.inout.at(f.name) : infer_inout(f, r, env);
    }
    return out;
}

}  // namespace nonfail
