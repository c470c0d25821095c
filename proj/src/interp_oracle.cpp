#include "nonfail/interp_oracle.hpp"

#include <pthread.h>

#include <algorithm>
#include <cassert>
#include <exception>
#include <stdexcept>

namespace nonfail {

std::string Outcome::str() const {
    switch (kind) {
    case Kind::Value: return value.str();
    case Kind::Failure: return "failure (" + site + ")";
    case Kind::Error: return "error (" + site + ")";
    case Kind::Cutoff: return "cutoff";
    }
    return "?";
}

std::string Counterexample::str() const {
    std::string out = function.name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + args[i].ir();
    out += ")";
    if (value) out += " = " + value->ir();
    if (!detail.empty()) out += ": " + detail;
    return out;
}

namespace {

std::string at(SourcePos pos) { return std::to_string(pos.line) + ":" + std::to_string(pos.column); }

DataTerm bool_term(bool b) { return DataTerm::constructor(b ? builtin::True : builtin::False); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    auto q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

Oracle::Oracle(const SymbolTable& symbols, std::vector<const CoreProgram*> programs, const ProgramTypes& types,
               EvalConfig config, FunctionPool functions)
    : symbols_(symbols),
      programs_(std::move(programs)),
      types_(types),
      config_(std::move(config)),
      terms_(symbols, config_.literal_pool, std::move(functions)) {}

const FuncDecl* Oracle::find(const QName& f) const {
    for (const auto* p : programs_) {
        if (p->module != f.module) continue;
        if (const auto* d = p->find_function(f.name)) return d;
    }
    throw std::logic_error("oracle: unknown function " + f.str());
}

std::vector<Type> Oracle::param_types(const QName& f) const {
    const auto* ft = types_.function(f);
    if (!ft) throw std::logic_error("oracle: no type for " + f.str());
    std::vector<Type> out;
    for (const auto& p : ft->params) out.push_back(ground(p));
    return out;
}

int Oracle::compare(const DataTerm& a, const DataTerm& b) const {
    if (a.kind == DataTerm::Kind::Literal && b.kind == DataTerm::Kind::Literal) {
        if (a.lit.value != b.lit.value) return a.lit.value < b.lit.value ? -1 : 1;
        return 0;
    }
    if (a.kind == DataTerm::Kind::Constructor && b.kind == DataTerm::Kind::Constructor) {
        int ia = symbols_.constructor(a.name)->index, ib = symbols_.constructor(b.name)->index;
        if (ia != ib) return ia < ib ? -1 : 1;
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (int c = compare(a.args[i], b.args[i])) return c;
        }
        return 0;
    }
    auto c = a <=> b;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

void Oracle::external(const QName& f, const std::vector<DataTerm>& args, long fuel, SourcePos pos,
                      std::vector<Res>& out) {
    const auto& n = f.name;
    auto value = [&](DataTerm t) { out.push_back({{Outcome::Kind::Value, std::move(t), {}}, fuel}); };
    if (n == "failed") {
        out.push_back({{Outcome::Kind::Failure, {}, "failed at " + at(pos)}, fuel});
    } else if (n == "error") {
        auto kind = config_.error_as_failure ? Outcome::Kind::Failure : Outcome::Kind::Error;
        out.push_back({{kind, {}, "error at " + at(pos)}, fuel});
    } else if (n == "div" || n == "mod") {
        auto a = args[0].lit.value, b = args[1].lit.value;
        if (b == 0) {
            out.push_back({{Outcome::Kind::Failure, {}, n + " by zero at " + at(pos)}, fuel});
            return;
        }
        auto q = floor_div(a, b);
        value(DataTerm::literal(Literal::integer(n == "div" ? q : a - q * b)));
    } else if (n == "+" || n == "-" || n == "*") {
        auto a = args[0].lit.value, b = args[1].lit.value;
        value(DataTerm::literal(Literal::integer(n == "+" ? a + b : n == "-" ? a - b : a * b)));
    } else if (n == "==") {
        value(bool_term(compare(args[0], args[1]) == 0));
    } else if (n == "/=") {
        value(bool_term(compare(args[0], args[1]) != 0));
    } else if (n == "<=") {
        value(bool_term(compare(args[0], args[1]) <= 0));
    } else if (n == "<") {
        value(bool_term(compare(args[0], args[1]) < 0));
    } else if (n == ">") {
        value(bool_term(compare(args[0], args[1]) > 0));
    } else if (n == ">=") {
        value(bool_term(compare(args[0], args[1]) >= 0));
    } else if (n == "otherwise") {
        value(bool_term(true));
    } else if (n == "apply") {
        const auto& fn = args[0];
        if (fn.kind != DataTerm::Kind::Function) throw std::logic_error("oracle: apply of a non-function");
        auto captured = fn.args;
        captured.push_back(args[1]);
        invoke(fn.name, std::move(captured), fuel, pos, out);
    } else {
        throw std::logic_error("oracle: no evaluation rule for external " + f.str());
    }
}

void Oracle::invoke(const QName& f, std::vector<DataTerm> args, long fuel, SourcePos pos, std::vector<Res>& out) {
    const auto* d = find(f);
    if (static_cast<int>(args.size()) < d->arity) {
        out.push_back({{Outcome::Kind::Value, DataTerm::function(f, std::move(args)), {}}, fuel});
        return;
    }
    if (d->external) {
        external(f, args, fuel, pos, out);
        return;
    }
    if (fuel <= 0 || work_ >= config_.work_limit) {
        out.push_back({{Outcome::Kind::Cutoff, {}, {}}, 0});
        return;
    }
    ++work_;
    Env env;
    for (std::size_t i = 0; i < args.size(); ++i) env.emplace(d->params[i], std::move(args[i]));
    eval(f, *d->body, env, fuel - 1, out);
}

void Oracle::eval_free(const QName& fn, const FreeExpr& free, std::size_t i, Env& env, long fuel,
                       std::vector<Res>& out) {
    if (i == free.vars.size()) {
        eval(fn, *free.body, env, fuel, out);
        return;
    }
    const auto& v = free.vars[i];
    auto t = types_.variable(fn, v);
    auto type = t ? ground(*t) : Type::constructor(builtin::Bool);
    for (const auto& term : terms_.up_to(type, config_.free_term_size)) {
        env[v] = term;
        eval_free(fn, free, i + 1, env, fuel, out);
    }
    env.erase(v);
}

void Oracle::eval(const QName& fn, const Expr& e, const Env& env, long fuel, std::vector<Res>& out) {
    auto lookup = [&](const std::string& v) -> const DataTerm& {
        auto it = env.find(v);
        assert(it != env.end() && "unbound variable during evaluation");
        return it->second;
    };
    std::visit(
        overloaded{
            [&](const VarExpr& v) { out.push_back({{Outcome::Kind::Value, lookup(v.name), {}}, fuel}); },
            [&](const LitExpr& l) { out.push_back({{Outcome::Kind::Value, DataTerm::literal(l.lit), {}}, fuel}); },
            [&](const FailedExpr&) {
                out.push_back({{Outcome::Kind::Failure, {}, "failed at " + at(e.pos) + " in " + fn.name}, fuel});
            },
            [&](const ConsExpr& c) {
                std::vector<DataTerm> args;
                for (const auto& a : c.args) args.push_back(lookup(arg_var(a)));
                out.push_back({{Outcome::Kind::Value, DataTerm::constructor(c.ctor, std::move(args)), {}}, fuel});
            },
            [&](const CallExpr& c) {
                const auto* d = find(c.func);
                if (d->external && c.func.name == "allValues" && c.args.size() == 1) {
                    std::vector<Res> inner;
                    eval(fn, *c.args[0], env, fuel, inner);
                    std::vector<DataTerm> values;
                    long left = fuel;
                    for (auto& r : inner) {
                        if (r.outcome.kind == Outcome::Kind::Cutoff || r.outcome.kind == Outcome::Kind::Error) {
                            out.push_back(std::move(r));
                            return;
                        }
                        if (r.outcome.kind == Outcome::Kind::Value) values.push_back(std::move(r.outcome.value));
                        left = std::min(left, r.fuel);
                    }
                    DataTerm list = DataTerm::constructor(builtin::Nil);
                    for (auto it = values.rbegin(); it != values.rend(); ++it)
                        list = DataTerm::constructor(builtin::Cons, {std::move(*it), std::move(list)});
                    out.push_back({{Outcome::Kind::Value, std::move(list), {}}, left});
                    return;
                }
                std::vector<DataTerm> args;
                for (const auto& a : c.args) args.push_back(lookup(arg_var(a)));
                invoke(c.func, std::move(args), fuel, e.pos, out);
            },
            [&](const OrExpr& o) {
                eval(fn, *o.left, env, fuel, out);
                eval(fn, *o.right, env, fuel, out);
            },
            [&](const FreeExpr& f) {
                Env extended = env;
                eval_free(fn, f, 0, extended, fuel, out);
            },
            [&](const LetExpr& l) {
                std::vector<Res> bound;
                eval(fn, *l.bound, env, fuel, bound);
                for (auto& r : bound) {
                    if (r.outcome.kind != Outcome::Kind::Value) {
                        out.push_back(std::move(r));
                        continue;
                    }
                    Env extended = env;
                    extended[l.var] = std::move(r.outcome.value);
                    eval(fn, *l.body, extended, r.fuel, out);
                }
            },
            [&](const CaseExpr& c) {
                const auto& t = lookup(c.scrutinee);
                for (const auto& b : c.branches) {
                    bool match = false;
                    switch (b.pattern.kind) {
                    case Pattern::Kind::Cons:
                        match = t.kind == DataTerm::Kind::Constructor && t.name == b.pattern.ctor;
                        break;
                    case Pattern::Kind::Lit: match = t.kind == DataTerm::Kind::Literal && t.lit == b.pattern.lit; break;
                    case Pattern::Kind::Default: match = true; break;
                    }
                    if (!match) continue;
                    if (b.pattern.kind != Pattern::Kind::Cons || b.pattern.vars.empty()) {
                        eval(fn, *b.body, env, fuel, out);
                        return;
                    }
                    Env extended = env;
                    for (std::size_t i = 0; i < b.pattern.vars.size(); ++i) extended[b.pattern.vars[i]] = t.args[i];
                    eval(fn, *b.body, extended, fuel, out);
                    return;
                }
                throw std::logic_error("oracle: no branch of case " + c.scrutinee + " matches " + t.str());
            },
        },
        e.node);
}

std::vector<Outcome> Oracle::eval_all(const QName& context, const Expr& e, const std::map<std::string, DataTerm>& sigma) {
    std::vector<Res> raw;
    work_ = 0;
    run_with_large_stack([&] { eval(context, e, sigma, config_.step_budget, raw); });
    std::vector<Outcome> out;
    for (auto& r : raw) out.push_back(std::move(r.outcome));
    return out;
}

std::vector<Outcome> Oracle::call(const QName& f, const std::vector<DataTerm>& args) {
    std::vector<Res> raw;
    work_ = 0;
    run_with_large_stack([&] { invoke(f, args, config_.step_budget, {}, raw); });
    std::vector<Outcome> out;
    for (auto& r : raw) out.push_back(std::move(r.outcome));
    return out;
}

void run_with_large_stack(const std::function<void()>& body) {
    struct Job {
        const std::function<void()>* body;
        std::exception_ptr error;
    } job{&body, nullptr};
    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, std::size_t{1} << 30);
    pthread_t thread;
    auto entry = [](void* p) -> void* {
        auto* j = static_cast<Job*>(p);
        try {
            (*j->body)();
        } catch (...) {
            j->error = std::current_exception();
        }
        return nullptr;
    };
    if (pthread_create(&thread, &attr, entry, &job) != 0) {
        pthread_attr_destroy(&attr);
        body();
        return;
    }
    pthread_join(thread, nullptr);
    pthread_attr_destroy(&attr);
    if (job.error) std::rethrow_exception(job.error);
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

/// Calls `visit` on every tuple of the cartesian product.
template <class F>
void for_each_tuple(const std::vector<std::vector<DataTerm>>& choices, F&& visit) {
    for (const auto& c : choices) {
        if (c.empty()) return;
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    std::vector<DataTerm> tuple(choices.size());
    while (true) {
        for (std::size_t i = 0; i < choices.size(); ++i) tuple[i] = choices[i][idx[i]];
        visit(tuple);
        std::size_t i = choices.size();
        while (i > 0) {
            --i;
            if (++idx[i] < choices[i].size()) break;
            idx[i] = 0;
            if (i == 0) return;
        }
        if (choices.empty()) return;
    }
}

}  // namespace

OracleVerdict check_calltype_oracle(Oracle& oracle, const QName& f, const CallType& ct, int term_size) {
    if (ct.failing) throw std::invalid_argument("check_calltype_oracle: call type of " + f.str() + " is failing");
    OracleVerdict v;
    auto types = oracle.param_types(f);
    std::vector<std::vector<DataTerm>> choices;
    for (std::size_t i = 0; i < types.size(); ++i) choices.push_back(oracle.terms().members(ct.args[i], types[i], term_size));
    for_each_tuple(choices, [&](const std::vector<DataTerm>& args) {
        ++v.tuples;
        for (const auto& o : oracle.call(f, args)) {
            if (o.kind == Outcome::Kind::Value) ++v.observations;
            if (o.kind == Outcome::Kind::Cutoff) ++v.cutoffs;
            if (o.kind == Outcome::Kind::Failure) {
                v.counterexamples.push_back({f, args, std::nullopt, o.site});
                break;
            }
        }
    });
    return v;
}

OracleVerdict check_inout_oracle(Oracle& oracle, const QName& f, const InOutType& io, int term_size) {
    OracleVerdict v;
    auto types = oracle.param_types(f);
    std::vector<std::vector<DataTerm>> choices;
    for (const auto& t : types) choices.push_back(oracle.terms().up_to(t, term_size));
    for_each_tuple(choices, [&](const std::vector<DataTerm>& args) {
        ++v.tuples;
        for (const auto& o : oracle.call(f, args)) {
            if (o.kind == Outcome::Kind::Cutoff) ++v.cutoffs;
            if (o.kind != Outcome::Kind::Value) continue;
            ++v.observations;
            bool covered = std::any_of(io.begin(), io.end(), [&](const IOEntry& e) {
                if (!member(o.value, e.result)) return false;
                for (std::size_t i = 0; i < args.size(); ++i) {
                    if (!member(args[i], e.args[i])) return false;
                }
                return true;
            });
            if (!covered) v.counterexamples.push_back({f, args, o.value, "not covered by " + io_str(io)});
        }
    });
    return v;
}

FunctionPool make_function_pool(const ProgramTypes& types, std::vector<const CoreProgram*> programs,
                                std::map<QName, CallType> calltypes) {
    std::vector<std::pair<QName, Type>> candidates;
    for (const auto* p : programs) {
        for (const auto& f : p->functions) {
            if (f.external || f.arity == 0) continue;
            auto it = calltypes.find(f.name);
            if (it == calltypes.end() || it->second.failing || !it->second.is_trivial()) continue;
            const auto* ft = types.function(f.name);
            if (!ft) continue;
            candidates.emplace_back(f.name, curried(ft->params, ft->result));
        }
    }
    return [candidates = std::move(candidates)](const Type& target) {
        std::vector<DataTerm> out;
        for (const auto& [name, type] : candidates) {
            Unifier u;
            std::map<int, Type> renaming;
            if (u.unify(u.instantiate(type, renaming), target)) out.push_back(DataTerm::function(name));
        }
        return out;
    };
}

}  // namespace nonfail
