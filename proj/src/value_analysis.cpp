#include "nonfail/value_analysis.hpp"

#include <deque>
#include <set>

#include "nonfail/call_graph.hpp"

namespace nonfail {

namespace {

AbstractValue var_value(const std::map<std::string, AbstractValue>& locals, const std::string& v) {
    auto it = locals.find(v);
    return it == locals.end() ? AbstractValue::any() : it->second;
}

}  // namespace

AbstractValue result_of_expr(const Expr& e, const AnalysisEnv& env, const ResultMap& r,
                             std::map<std::string, AbstractValue>& locals) {
    return std::visit(
        overloaded{
            [&](const VarExpr& v) { return var_value(locals, v.name); },
            [&](const LitExpr& l) { return env.domain.literal(l.lit); },
            [&](const FailedExpr&) { return AbstractValue::bottom(); },
            [&](const ConsExpr& c) {
                std::vector<AbstractValue> args;
                for (const auto& a : c.args) args.push_back(var_value(locals, arg_var(a)));
                return env.domain.cons(symbol_of(env.symbols, c.ctor), args);
            },
            [&](const CallExpr& c) {
                const auto* sig = env.symbols.function(c.func);
                if (static_cast<int>(c.args.size()) < sig->arity) return AbstractValue::any();
                auto it = r.find(c.func);
                return it == r.end() ? AbstractValue::any() : it->second;
            },
            [&](const OrExpr& o) {
                return lub(result_of_expr(*o.left, env, r, locals), result_of_expr(*o.right, env, r, locals));
            },
            [&](const FreeExpr& f) { return result_of_expr(*f.body, env, r, locals); },
            [&](const LetExpr& l) {
                locals[l.var] = result_of_expr(*l.bound, env, r, locals);
                return result_of_expr(*l.body, env, r, locals);
            },
            [&](const CaseExpr& c) {
                auto out = AbstractValue::bottom();
                for (const auto& b : c.branches) out = lub(out, result_of_expr(*b.body, env, r, locals));
                return out;
            },
        },
        e.node);
}

ResultMap infer_result_values(const CoreProgram& program, const AnalysisEnv& env, const Tables& known) {
    ResultMap r = known.result;
    std::map<QName, std::set<QName>> callers;
    for (const auto& [f, cs] : callees(program)) {
        for (const auto& g : cs) callers[g].insert(f);
    }
    std::deque<QName> work;
    std::set<QName> queued;
    for (const auto& f : program.functions) {
        if (f.external) continue;
        r[f.name] = AbstractValue::bottom();
        work.push_back(f.name);
        queued.insert(f.name);
    }
    while (!work.empty()) {
        auto name = work.front();
        work.pop_front();
        queued.erase(name);
        const auto* f = program.find_function(name.name);
        std::map<std::string, AbstractValue> locals;
        // Joining with the old value keeps the sequence ascending.
        auto v = env.domain.widen_literals(lub(r[name], result_of_expr(*f->body, env, r, locals)));
        if (v == r[name]) continue;
        r[name] = v;
        for (const auto& c : callers[name]) {
            if (queued.insert(c).second) work.push_back(c);
        }
    }
    ResultMap out;
    for (const auto& f : program.functions) out[f.name] = r.at(f.name);
    return out;
}

}  // namespace nonfail
