#include "nonfail/calltype_checker.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "nonfail/call_graph.hpp"

namespace nonfail {

// ---------------------------------------------------------------------------
// Variable types

bool delta_contains(const VarTypes& delta, const std::string& x) {
    return std::any_of(delta.begin(), delta.end(), [&](const VarTriple& t) { return t.subject == x; });
}

AbstractValue delta_value(const VarTypes& delta, const std::string& x) {
    bool found = false;
    auto v = AbstractValue::bottom();
    for (const auto& t : delta) {
        if (t.subject != x) continue;
        found = true;
        for (const auto& e : t.io) v = lub(v, e.result);
    }
    if (!found) throw std::out_of_range("variable " + x + " has no type");
    return v;
}

namespace {

/// Meets the results of x's entries with a; true if anything changed.
bool meet_results(VarTypes& delta, const std::string& x, const AbstractValue& a) {
    bool changed = false;
    for (auto& t : delta) {
        if (t.subject != x) continue;
        InOutType kept;
        for (const auto& e : t.io) {
            auto r = glb(e.result, a);
            if (r != e.result) changed = true;
            if (!r.is_bottom()) kept.push_back({e.args, r});
        }
        t.io = std::move(kept);
    }
    return changed;
}

}  // namespace

VarTypes propagate_definite(VarTypes delta) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::string, std::pair<int, const VarTriple*>> entries;
        for (const auto& t : delta) {
            auto& slot = entries[t.subject];
            slot.first += static_cast<int>(t.io.size());
            if (!t.io.empty()) slot.second = &t;
        }
        // Collect first: meeting may modify the triples the pointers refer to.
        std::vector<std::pair<std::string, AbstractValue>> meets;
        for (const auto& [subject, slot] : entries) {
            if (slot.first != 1) continue;
            const auto& t = *slot.second;
            for (std::size_t i = 0; i < t.args.size(); ++i) meets.emplace_back(t.args[i], t.io[0].args[i]);
        }
        for (const auto& [x, a] : meets) {
            if (meet_results(delta, x, a)) changed = true;
        }
    }
    return delta;
}

VarTypes delta_meet(VarTypes delta, const std::string& x, const AbstractValue& a) {
    meet_results(delta, x, a);
    return propagate_definite(std::move(delta));
}

VarTypes delta_meet_cons(VarTypes delta, const std::string& x, const Symbol& c, const DepthKDomain& domain) {
    return delta_meet(std::move(delta), x, domain.cons_top(c));
}

VarTypes delta_exclude_literals(VarTypes delta, const std::string& x, const std::set<Literal>& literals) {
    for (auto& t : delta) {
        if (t.subject != x) continue;
        InOutType kept;
        for (const auto& e : t.io) {
            if (e.result.kind() != AbstractValue::Kind::Shapes) {
                kept.push_back(e);
                continue;
            }
            std::vector<Shape> rest;
            for (const auto& s : e.result.shapes()) {
                if (s.head.kind != Symbol::Kind::Literal || !literals.count(s.head.lit)) rest.push_back(s);
            }
            auto r = AbstractValue::of(std::move(rest));
            if (!r.is_bottom()) kept.push_back({e.args, r});
        }
        t.io = std::move(kept);
    }
    return propagate_definite(std::move(delta));
}

std::string delta_str(const VarTypes& delta) {
    std::string out = "{";
    for (std::size_t i = 0; i < delta.size(); ++i) {
        const auto& t = delta[i];
        if (i) out += ", ";
        out += "(" + t.subject + ", " + io_str(t.io) + ", [";
        for (std::size_t j = 0; j < t.args.size(); ++j) out += (j ? " " : "") + t.args[j];
        out += "])";
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// Checking

namespace {

const QName kFailedSite{kBuiltinModule, "failed"};

class Checker {
public:
    explicit Checker(const CheckContext& ctx) : ctx_(ctx) {}

    std::vector<Requirement> requirements;
    std::string fail_reason;

    VarTypes check(const VarTypes& delta, const std::string& z, const Expr& e) {
        const auto& dom = ctx_.env.domain;
        return std::visit(
            overloaded{
                [&](const VarExpr& v) -> VarTypes { return {VarTriple::simple(z, value(delta, v.name))}; },
                [&](const LitExpr& l) -> VarTypes { return {VarTriple::simple(z, dom.literal(l.lit))}; },
                [&](const FailedExpr&) -> VarTypes {
                    fail(e.pos, "reachable failure");
                    return {};
                },
                [&](const ConsExpr& c) -> VarTypes {
                    std::vector<AbstractValue> args;
                    std::vector<std::string> names;
                    for (const auto& a : c.args) {
                        names.push_back(arg_var(a));
                        args.push_back(value(delta, names.back()));
                    }
                    auto tops = std::vector<AbstractValue>(args.size(), AbstractValue::any());
                    return {{z, {{tops, dom.cons(symbol_of(ctx_.env.symbols, c.ctor), args)}}, names}};
                },
                [&](const CallExpr& c) -> VarTypes { return call(delta, z, c, e.pos); },
                [&](const OrExpr& o) -> VarTypes {
                    auto l = check(delta, z, *o.left);
                    auto r = check(delta, z, *o.right);
                    l.insert(l.end(), r.begin(), r.end());
                    return l;
                },
                [&](const FreeExpr& f) -> VarTypes {
                    VarTypes d = delta;
                    for (const auto& v : f.vars) d.push_back(VarTriple::simple(v, AbstractValue::any()));
                    return check(d, z, *f.body);
                },
                [&](const LetExpr& l) -> VarTypes {
                    auto bound = check(delta, l.var, *l.bound);
                    // A binding without any possible value makes the body
                    // unreachable.
                    if (!delta_contains(bound, l.var)) return {};
                    VarTypes d = delta;
                    d.insert(d.end(), bound.begin(), bound.end());
                    d = propagate_definite(std::move(d));
                    if (delta_value(d, l.var).is_bottom()) return {};
                    return check(d, z, *l.body);
                },
                [&](const CaseExpr& c) -> VarTypes { return case_expr(delta, z, c, e.pos); },
            },
            e.node);
    }

private:
    AbstractValue value(const VarTypes& delta, const std::string& x) const {
        return delta_contains(delta, x) ? delta_value(delta, x) : AbstractValue::bottom();
    }

    void fail(SourcePos pos, const std::string& why) {
        if (fail_reason.empty()) fail_reason = why + " at " + std::to_string(pos.line) + ":" + std::to_string(pos.column);
    }

    VarTypes call(const VarTypes& delta, const std::string& z, const CallExpr& c, SourcePos pos) {
        const auto* sig = ctx_.env.symbols.function(c.func);
        auto top = VarTypes{VarTriple::simple(z, AbstractValue::any())};
        if (auto b = ctx_.env.builtin(c.func); b && b->kind == BuiltinKind::AllValues) return top;
        auto ct_it = ctx_.calltypes.find(c.func);
        if (ct_it == ctx_.calltypes.end()) throw std::logic_error("no call type for " + c.func.str());
        const auto& ct = ct_it->second;
        if (static_cast<int>(c.args.size()) < sig->arity) {
            if (!ct.is_trivial()) fail(pos, "partial application of " + c.func.name + " with call type " + ct.str());
            return top;
        }
        if (ct.failing) {
            fail(pos, "call of failing operation " + c.func.name);
            return top;
        }
        std::vector<std::string> names;
        for (std::size_t i = 0; i < c.args.size(); ++i) {
            names.push_back(arg_var(c.args[i]));
            auto a = value(delta, names.back());
            if (!leq(a, ct.args[i]))
                requirements.push_back({names.back(), glb(a, ct.args[i]), {ctx_.function, c.func, pos}});
        }
        return {{z, ctx_.inout.at(c.func), names}};
    }

    VarTypes case_expr(const VarTypes& delta, const std::string& z, const CaseExpr& c, SourcePos pos) {
        const auto& dom = ctx_.env.domain;
        const auto& x = c.scrutinee;
        std::set<Literal> explicit_literals;
        for (const auto& b : c.branches) {
            if (b.pattern.kind == Pattern::Kind::Lit) explicit_literals.insert(b.pattern.lit);
        }

        VarTypes out;
        bool reachable_failure = false;
        SourcePos failure_pos = pos;
        for (const auto& b : c.branches) {
            VarTypes d;
            switch (b.pattern.kind) {
            case Pattern::Kind::Cons:
                d = delta_meet_cons(delta, x, symbol_of(ctx_.env.symbols, b.pattern.ctor), dom);
                for (const auto& v : b.pattern.vars) d.push_back(VarTriple::simple(v, AbstractValue::any()));
                break;
            case Pattern::Kind::Lit: d = delta_meet(delta, x, dom.literal(b.pattern.lit)); break;
            case Pattern::Kind::Default: d = delta_exclude_literals(delta, x, explicit_literals); break;
            }
            if (value(d, x).is_bottom()) continue;
            if (b.body->is<FailedExpr>()) {
                reachable_failure = true;
                failure_pos = b.body->pos;
                continue;
            }
            auto r = check(d, z, *b.body);
            out.insert(out.end(), r.begin(), r.end());
        }
        if (reachable_failure) require_excluding_failed(delta, c, failure_pos);
        return out;
    }

    /// A reachable failed branch demands that the scrutinee avoids it: the
    /// requirement is the lub of the patterns of the non-failing branches.
    void require_excluding_failed(const VarTypes& delta, const CaseExpr& c, SourcePos pos) {
        const auto& dom = ctx_.env.domain;
        auto allowed = AbstractValue::bottom();
        for (const auto& b : c.branches) {
            if (b.body->is<FailedExpr>()) continue;
            switch (b.pattern.kind) {
            case Pattern::Kind::Cons: allowed = lub(allowed, dom.cons_top(symbol_of(ctx_.env.symbols, b.pattern.ctor))); break;
            case Pattern::Kind::Lit: allowed = lub(allowed, dom.literal(b.pattern.lit)); break;
            case Pattern::Kind::Default: allowed = AbstractValue::any(); break;
            }
        }
        auto current = value(delta, c.scrutinee);
        auto required = glb(current, allowed);
        if (required == current) {
            fail(pos, "reachable failure");
            return;
        }
        requirements.push_back({c.scrutinee, required, {ctx_.function, kFailedSite, pos}});
    }

    const CheckContext& ctx_;
};

}  // namespace

CheckOutcome check_expr(const VarTypes& delta, const std::string& z, const Expr& e, const CheckContext& ctx) {
    Checker checker(ctx);
    auto result = checker.check(propagate_definite(delta), z, e);
    CheckOutcome out;
    out.requirements = std::move(checker.requirements);
    if (!checker.fail_reason.empty()) {
        out.kind = CheckOutcome::Kind::Fail;
        out.reason = std::move(checker.fail_reason);
    } else if (!out.requirements.empty()) {
        out.kind = CheckOutcome::Kind::Refine;
    } else {
        out.result = std::move(result);
    }
    return out;
}

namespace {

/// A result variable name that cannot clash with program variables.
const std::string kResultVar = "%z";

}  // namespace

CheckOutcome check_function(const FuncDecl& f, const CallType& ct, const CheckContext& ctx) {
    VarTypes delta;
    for (std::size_t i = 0; i < f.params.size(); ++i) delta.push_back(VarTriple::simple(f.params[i], ct.args[i]));
    return check_expr(delta, kResultVar, *f.body, ctx);
}

// ---------------------------------------------------------------------------
// Initial call types

AbstractValue collapse_complete(const AbstractValue& a, const SymbolTable& symbols) {
    if (a.kind() != AbstractValue::Kind::Shapes) return a;
    const auto& shapes = a.shapes();
    if (shapes.front().head.kind != Symbol::Kind::Constructor) return a;
    for (const auto& s : shapes) {
        for (const auto& c : s.children) {
            if (!c.is_any()) return a;
        }
    }
    return shapes.size() == symbols.constructors_of(shapes.front().head.type).size() ? AbstractValue::any() : a;
}

namespace {

class InitialScan {
public:
    InitialScan(const FuncDecl& f, const AnalysisEnv& env) : env_(env) {
        for (std::size_t i = 0; i < f.params.size(); ++i) index_[f.params[i]] = i;
        ok_.assign(f.params.size(), AbstractValue::bottom());
    }

    void scan(const Expr& e, std::vector<AbstractValue> tuple) {
        std::visit(overloaded{
                       [&](const FailedExpr&) {},
                       [&](const CallExpr& c) {
                           auto b = env_.builtin(c.func);
                           if (b && b->always_fails) return;
                           accept(tuple);
                       },
                       [&](const LetExpr& l) { scan(*l.body, std::move(tuple)); },
                       [&](const FreeExpr& f) { scan(*f.body, std::move(tuple)); },
                       [&](const CaseExpr& c) {
                           auto it = index_.find(c.scrutinee);
                           for (const auto& b : c.branches) {
                               auto t = tuple;
                               if (it != index_.end()) {
                                   auto& slot = t[it->second];
                                   switch (b.pattern.kind) {
                                   case Pattern::Kind::Cons:
                                       slot = glb(slot, env_.domain.cons_top(symbol_of(env_.symbols, b.pattern.ctor)));
                                       break;
                                   case Pattern::Kind::Lit: slot = glb(slot, env_.domain.literal(b.pattern.lit)); break;
                                   case Pattern::Kind::Default: break;
                                   }
                                   if (slot.is_bottom()) continue;
                               }
                               scan(*b.body, std::move(t));
                           }
                       },
                       [&](const auto&) { accept(tuple); },
                   },
                   e.node);
    }

    CallType result() const {
        if (!any_ok_) return CallType::fail();
        CallType ct;
        for (const auto& a : ok_) ct.args.push_back(collapse_complete(a, env_.symbols));
        return ct;
    }

private:
    void accept(const std::vector<AbstractValue>& tuple) {
        any_ok_ = true;
        for (std::size_t i = 0; i < tuple.size(); ++i) ok_[i] = lub(ok_[i], tuple[i]);
    }

    const AnalysisEnv& env_;
    std::map<std::string, std::size_t> index_;
    std::vector<AbstractValue> ok_;
    bool any_ok_ = false;
};

}  // namespace

std::map<QName, CallType> initial_call_types(const CoreProgram& program, const AnalysisEnv& env, const Tables& known) {
    std::map<QName, CallType> out;
    for (const auto& f : program.functions) {
        if (f.external) {
            out[f.name] = known.calltype.at(f.name);
            continue;
        }
        InitialScan scan(f, env);
        scan.scan(*f.body, std::vector<AbstractValue>(f.arity, AbstractValue::any()));
        out[f.name] = scan.result();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fixpoint

std::string status_name(Status s) {
    switch (s) {
    case Status::Verified: return "verified";
    case Status::Refined: return "refined";
    case Status::Failing: return "failing";
    case Status::External: return "external";
    }
    return "?";
}

const FunctionResult* AnalysisResult::find(const std::string& name) const {
    for (const auto& f : functions) {
        if (f.name.name == name) return &f;
    }
    return nullptr;
}

Tables AnalysisResult::tables() const {
    Tables t;
    for (const auto& f : functions) {
        t.result[f.name] = f.result;
        t.inout[f.name] = f.inout;
        t.calltype[f.name] = f.calltype;
    }
    return t;
}

Summary summarize(const std::vector<FunctionResult>& functions, int iterations, double time_ms) {
    Summary s;
    auto count = [](PublicAll& c, const FunctionResult& f, bool cond) {
        if (!cond) return;
        ++c.all;
        if (f.visibility == Visibility::Public) ++c.public_count;
    };
    for (const auto& f : functions) {
        if (f.external) continue;
        count(s.operations, f, true);
        count(s.nontrivial_inout, f, !io_is_trivial(f.inout));
        count(s.initial_nontrivial, f, !f.initial.is_trivial());
        count(s.final_nontrivial, f, !f.calltype.is_trivial());
        count(s.final_failing, f, f.calltype.failing);
    }
    s.iterations = iterations;
    s.time_ms = time_ms;
    return s;
}

AnalysisResult analyze_fixpoint(const CoreProgram& program, const AnalysisEnv& env, const AnalysisOptions& options) {
    auto start = std::chrono::steady_clock::now();
    AnalysisResult res;
    res.module = program.module;
    res.domain = env.domain.config();

    Tables known = seed_tables(program, env);
    auto r = infer_result_values(program, env, known);
    for (const auto& [f, v] : r) known.result[f] = v;
    auto io = infer_inout_types(program, r, env, known);
    for (const auto& [f, v] : io) known.inout[f] = v;
    auto initial = initial_call_types(program, env, known);

    std::map<QName, CallType> ct = known.calltype;
    for (const auto& [f, c] : initial) ct[f] = c;

    std::map<QName, std::set<QName>> callers;
    for (const auto& [f, cs] : callees(program)) {
        for (const auto& g : cs) callers[g].insert(f);
    }

    std::vector<const FuncDecl*> order;
    for (const auto& f : program.functions) {
        if (!f.external) order.push_back(&f);
    }
    if (options.reverse_order) std::reverse(order.begin(), order.end());

    std::map<QName, std::vector<Requirement>> last_requirements;
    std::map<QName, std::string> reasons;
    std::set<QName> pending;
    for (const auto* f : order) pending.insert(f->name);

    int rounds = 0;
    while (!pending.empty()) {
        if (rounds == options.max_iterations) {
            for (const auto& f : pending) {
                if (ct[f].failing) continue;
                ct[f] = CallType::fail();
                reasons[f] = "iteration budget exhausted";
            }
            res.diagnostics.push_back("iteration budget of " + std::to_string(options.max_iterations) +
                                      " exhausted; unfinished operations are marked failing");
            break;
        }
        ++rounds;
        // Every check in a round sees the call types of the previous round.
        const auto snapshot = ct;
        std::set<QName> changed;
        for (const auto* f : order) {
            if (!pending.count(f->name)) continue;
            const auto& current = snapshot.at(f->name);
            if (current.failing) continue;
            CheckContext ctx{env, snapshot, known.inout, f->name};
            auto outcome = check_function(*f, current, ctx);
            last_requirements[f->name] = outcome.requirements;
            CallType next = current;
            if (outcome.kind == CheckOutcome::Kind::Fail) {
                next = CallType::fail();
                reasons[f->name] = outcome.reason;
            } else if (outcome.kind == CheckOutcome::Kind::Refine) {
                std::map<std::string, std::size_t> index;
                for (std::size_t i = 0; i < f->params.size(); ++i) index[f->params[i]] = i;
                bool on_params = std::all_of(outcome.requirements.begin(), outcome.requirements.end(),
                                             [&](const Requirement& q) { return index.count(q.variable) != 0; });
                if (on_params) {
                    for (const auto& q : outcome.requirements) {
                        auto& slot = next.args[index[q.variable]];
                        slot = glb(slot, q.required);
                    }
                    bool empty = std::any_of(next.args.begin(), next.args.end(),
                                             [](const AbstractValue& a) { return a.is_bottom(); });
                    if (empty || next == current) {
                        next = CallType::fail();
                        reasons[f->name] = empty ? "requirements contradict each other"
                                                 : "requirements cannot be met by refining the call type";
                    }
                } else {
                    next = CallType::fail();
                    const auto& q = *std::find_if(outcome.requirements.begin(), outcome.requirements.end(),
                                                  [&](const Requirement& q) { return !index.count(q.variable); });
                    reasons[f->name] = "requirement " + q.required.str() + " on non-parameter variable " + q.variable;
                }
            }
            if (next != current) {
                ct[f->name] = next;
                changed.insert(f->name);
            }
        }
        pending.clear();
        for (const auto& f : changed) {
            pending.insert(f);
            for (const auto& g : callers[f]) {
                if (program.find_function(g.name) && g.module == program.module) pending.insert(g);
            }
        }
    }

    for (const auto& f : program.functions) {
        FunctionResult fr;
        fr.name = f.name;
        fr.arity = f.arity;
        fr.visibility = f.visibility;
        fr.external = f.external;
        fr.initial = initial.at(f.name);
        fr.calltype = ct.at(f.name);
        fr.inout = known.inout.at(f.name);
        fr.result = known.result.at(f.name);
        if (f.external) {
            fr.status = Status::External;
        } else if (fr.calltype.failing) {
            fr.status = Status::Failing;
            fr.requirements = last_requirements[f.name];
            fr.reason = reasons.count(f.name) ? reasons[f.name] : "every branch fails";
        } else {
            fr.status = fr.calltype == fr.initial ? Status::Verified : Status::Refined;
        }
        res.functions.push_back(std::move(fr));
    }
    res.iterations = rounds;
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    res.summary = summarize(res.functions, rounds, ms);
    return res;
}

}  // namespace nonfail
