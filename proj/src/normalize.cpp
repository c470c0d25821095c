#include "nonfail/normalize.hpp"

#include <algorithm>
#include <map>

namespace nonfail {

namespace {

void collect_names(const Expr& root, std::set<std::string>& out) {
    for_each_subexpr(root, [&](const Expr& e) {
        std::visit(overloaded{
                       [&](const VarExpr& v) { out.insert(v.name); },
                       [&](const FreeExpr& f) { out.insert(f.vars.begin(), f.vars.end()); },
                       [&](const LetExpr& l) { out.insert(l.var); },
                       [&](const CaseExpr& c) {
                           out.insert(c.scrutinee);
                           for (const auto& b : c.branches) out.insert(b.pattern.vars.begin(), b.pattern.vars.end());
                       },
                       [](const auto&) {},
                   },
                   e.node);
    });
}

class NameSupply {
public:
    explicit NameSupply(std::set<std::string> used) : used_(std::move(used)) {}

    std::string fresh(const std::string& base) {
        for (;;) {
            auto name = base + std::to_string(++counter_[base]);
            if (used_.insert(name).second) return name;
        }
    }

    /// Returns `name` if it has not been claimed as a binder yet, else a
    /// fresh variant of it.
    std::string claim(const std::string& name) {
        if (claimed_.insert(name).second) return name;
        for (;;) {
            auto candidate = name + "_" + std::to_string(++counter_[name + "_"]);
            if (used_.insert(candidate).second) {
                claimed_.insert(candidate);
                return candidate;
            }
        }
    }

private:
    std::set<std::string> used_;
    std::set<std::string> claimed_;
    std::map<std::string, int> counter_;
};

class Normalizer {
public:
    Normalizer(const SymbolTable& s, std::vector<Diagnostic>& diags) : syms_(s), diags_(diags) {}

    ExprPtr function_body(const FuncDecl& f) {
        std::set<std::string> used(f.params.begin(), f.params.end());
        collect_names(*f.body, used);
        NameSupply supply(std::move(used));
        supply_ = &supply;
        check_lets(*f.body);
        auto e = complete(lift(f.body));
        std::map<std::string, std::string> env;
        for (const auto& p : f.params) env[p] = supply.claim(p);
        e = rename(e, env);
        supply_ = nullptr;
        return e;
    }

private:
    void check_lets(const Expr& root) {
        for_each_subexpr(root, [&](const Expr& e) {
            if (const auto* l = e.as<LetExpr>(); l && free_vars(*l->bound).count(l->var))
                diags_.push_back({e.pos, "recursive let binding of " + l->var + " is not supported"});
        });
    }

    // Step 1: argument lifting.
    std::vector<ExprPtr> lift_all(const std::vector<ExprPtr>& args,
                                  std::vector<std::pair<std::string, ExprPtr>>& lets) {
        std::vector<ExprPtr> out;
        for (const auto& a : args) {
            if (a->is<VarExpr>()) {
                out.push_back(a);
                continue;
            }
            auto name = supply_->fresh("_l");
            lets.emplace_back(name, lift(a));
            out.push_back(make_expr(VarExpr{name}, a->pos));
        }
        return out;
    }

    static ExprPtr wrap_lets(ExprPtr body, const std::vector<std::pair<std::string, ExprPtr>>& lets) {
        for (auto it = lets.rbegin(); it != lets.rend(); ++it)
            body = make_expr(LetExpr{it->first, it->second, body}, it->second->pos);
        return body;
    }

    ExprPtr lift(const ExprPtr& e) {
        return std::visit(
            overloaded{
                [&](const ConsExpr& c) -> ExprPtr {
                    std::vector<std::pair<std::string, ExprPtr>> lets;
                    auto args = lift_all(c.args, lets);
                    return wrap_lets(make_expr(ConsExpr{c.ctor, std::move(args)}, e->pos), lets);
                },
                [&](const CallExpr& c) -> ExprPtr {
                    if (is_all_values_call(c, syms_)) {
                        std::vector<ExprPtr> args;
                        for (const auto& a : c.args) args.push_back(lift(a));
                        return make_expr(CallExpr{c.func, std::move(args)}, e->pos);
                    }
                    std::vector<std::pair<std::string, ExprPtr>> lets;
                    auto args = lift_all(c.args, lets);
                    return wrap_lets(make_expr(CallExpr{c.func, std::move(args)}, e->pos), lets);
                },
                [&](const OrExpr& o) -> ExprPtr { return make_expr(OrExpr{lift(o.left), lift(o.right)}, e->pos); },
                [&](const FreeExpr& f) -> ExprPtr { return make_expr(FreeExpr{f.vars, lift(f.body)}, e->pos); },
                [&](const LetExpr& l) -> ExprPtr {
                    return make_expr(LetExpr{l.var, lift(l.bound), lift(l.body)}, e->pos);
                },
                [&](const CaseExpr& c) -> ExprPtr {
                    CaseExpr out{c.scrutinee, {}};
                    for (const auto& b : c.branches) out.branches.push_back({b.pattern, lift(b.body)});
                    return make_expr(std::move(out), e->pos);
                },
                [&](const auto&) -> ExprPtr { return e; },
            },
            e->node);
    }

    // Step 2: case completion.
    ExprPtr complete(const ExprPtr& e) {
        return std::visit(
            overloaded{
                [&](const CallExpr& c) -> ExprPtr {
                    if (!is_all_values_call(c, syms_)) return e;
                    std::vector<ExprPtr> args;
                    for (const auto& a : c.args) args.push_back(complete(a));
                    return make_expr(CallExpr{c.func, std::move(args)}, e->pos);
                },
                [&](const OrExpr& o) -> ExprPtr {
                    return make_expr(OrExpr{complete(o.left), complete(o.right)}, e->pos);
                },
                [&](const FreeExpr& f) -> ExprPtr { return make_expr(FreeExpr{f.vars, complete(f.body)}, e->pos); },
                [&](const LetExpr& l) -> ExprPtr {
                    return make_expr(LetExpr{l.var, complete(l.bound), complete(l.body)}, e->pos);
                },
                [&](const CaseExpr& c) -> ExprPtr { return complete_case(c, e->pos); },
                [&](const auto&) -> ExprPtr { return e; },
            },
            e->node);
    }

    ExprPtr complete_case(const CaseExpr& c, SourcePos pos) {
        std::vector<Branch> cons_branches, lit_branches;
        std::optional<Branch> fallback;
        for (const auto& b : c.branches) {
            Branch nb{b.pattern, complete(b.body)};
            switch (b.pattern.kind) {
            case Pattern::Kind::Cons: cons_branches.push_back(std::move(nb)); break;
            case Pattern::Kind::Lit: lit_branches.push_back(std::move(nb)); break;
            case Pattern::Kind::Default:
                if (fallback) diag(pos, "overlapping case patterns: more than one default branch");
                fallback = std::move(nb);
                break;
            }
        }
        if (!cons_branches.empty() && !lit_branches.empty()) {
            diag(pos, "case mixes constructor and literal patterns");
            return make_expr(CaseExpr{c}, pos);
        }
        if (cons_branches.empty() && lit_branches.empty()) return fallback->body;

        CaseExpr out{c.scrutinee, {}};
        if (!lit_branches.empty()) {
            std::set<Literal> seen;
            for (const auto& b : lit_branches) {
                if (b.pattern.lit.kind != lit_branches.front().pattern.lit.kind)
                    diag(pos, "case mixes integer and character literals");
                if (!seen.insert(b.pattern.lit).second)
                    diag(pos, "overlapping case patterns: literal " + b.pattern.lit.label() + " appears twice");
                out.branches.push_back(b);
            }
            out.branches.push_back(fallback ? *fallback : Branch{Pattern::fallback(), make_expr(FailedExpr{}, pos)});
            return make_expr(std::move(out), pos);
        }

        const auto* first = syms_.constructor(cons_branches.front().pattern.ctor);
        std::map<int, Branch> by_index;
        for (auto& b : cons_branches) {
            const auto* info = syms_.constructor(b.pattern.ctor);
            if (info->type != first->type) {
                diag(pos, "case mixes constructors of types " + first->type.str() + " and " + info->type.str());
                continue;
            }
            if (by_index.count(info->index)) {
                diag(pos, "overlapping case patterns: constructor " + info->name.name + " appears twice");
                continue;
            }
            by_index.emplace(info->index, std::move(b));
        }
        for (const auto* info : syms_.constructors_of(first->type)) {
            auto it = by_index.find(info->index);
            if (it != by_index.end()) {
                out.branches.push_back(std::move(it->second));
                continue;
            }
            std::vector<std::string> vars;
            for (int i = 0; i < info->arity; ++i) vars.push_back(supply_->fresh("_p"));
            // Copies of a default body share binder names; renaming apart
            // happens afterwards.
            auto body = fallback ? fallback->body : make_expr(FailedExpr{}, pos);
            out.branches.push_back({Pattern::cons(info->name, std::move(vars)), body});
        }
        return make_expr(std::move(out), pos);
    }

    // Step 3: renaming apart.
    ExprPtr rename(const ExprPtr& e, std::map<std::string, std::string>& env) {
        auto lookup = [&](const std::string& v) {
            auto it = env.find(v);
            return it == env.end() ? v : it->second;
        };
        auto rename_args = [&](const std::vector<ExprPtr>& args) {
            std::vector<ExprPtr> out;
            for (const auto& a : args) out.push_back(rename(a, env));
            return out;
        };
        // Binds `names`, runs `fn`, restores the shadowed entries.
        auto scoped = [&](const std::vector<std::string>& names, auto fn) {
            std::map<std::string, std::string> saved = env;
            std::vector<std::string> renamed;
            for (const auto& n : names) {
                auto fresh = supply_->claim(n);
                env[n] = fresh;
                renamed.push_back(fresh);
            }
            auto result = fn(renamed);
            env = std::move(saved);
            return result;
        };
        return std::visit(
            overloaded{
                [&](const VarExpr& v) -> ExprPtr { return make_expr(VarExpr{lookup(v.name)}, e->pos); },
                [&](const ConsExpr& c) -> ExprPtr { return make_expr(ConsExpr{c.ctor, rename_args(c.args)}, e->pos); },
                [&](const CallExpr& c) -> ExprPtr { return make_expr(CallExpr{c.func, rename_args(c.args)}, e->pos); },
                [&](const OrExpr& o) -> ExprPtr {
                    auto l = rename(o.left, env);
                    auto r = rename(o.right, env);
                    return make_expr(OrExpr{l, r}, e->pos);
                },
                [&](const FreeExpr& f) -> ExprPtr {
                    return scoped(f.vars, [&](const std::vector<std::string>& vs) {
                        return make_expr(FreeExpr{vs, rename(f.body, env)}, e->pos);
                    });
                },
                [&](const LetExpr& l) -> ExprPtr {
                    auto bound = rename(l.bound, env);
                    return scoped({l.var}, [&](const std::vector<std::string>& vs) {
                        return make_expr(LetExpr{vs[0], bound, rename(l.body, env)}, e->pos);
                    });
                },
                [&](const CaseExpr& c) -> ExprPtr {
                    CaseExpr out{lookup(c.scrutinee), {}};
                    for (const auto& b : c.branches) {
                        out.branches.push_back(scoped(b.pattern.vars, [&](const std::vector<std::string>& vs) {
                            Pattern p = b.pattern;
                            p.vars = vs;
                            return Branch{std::move(p), rename(b.body, env)};
                        }));
                    }
                    return make_expr(std::move(out), e->pos);
                },
                [&](const auto&) -> ExprPtr { return e; },
            },
            e->node);
    }

    void diag(SourcePos pos, std::string msg) { diags_.push_back({pos, std::move(msg)}); }

    const SymbolTable& syms_;
    std::vector<Diagnostic>& diags_;
    NameSupply* supply_ = nullptr;
};

void free_vars_into(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
    auto use = [&](const std::string& v) {
        if (!bound.count(v)) out.insert(v);
    };
    auto with_bound = [&](const std::vector<std::string>& names, const Expr& body) {
        std::vector<std::string> added;
        for (const auto& n : names) {
            if (bound.insert(n).second) added.push_back(n);
        }
        free_vars_into(body, bound, out);
        for (const auto& n : added) bound.erase(n);
    };
    std::visit(overloaded{
                   [&](const VarExpr& v) { use(v.name); },
                   [&](const ConsExpr& c) {
                       for (const auto& a : c.args) free_vars_into(*a, bound, out);
                   },
                   [&](const CallExpr& c) {
                       for (const auto& a : c.args) free_vars_into(*a, bound, out);
                   },
                   [&](const OrExpr& o) {
                       free_vars_into(*o.left, bound, out);
                       free_vars_into(*o.right, bound, out);
                   },
                   [&](const FreeExpr& f) { with_bound(f.vars, *f.body); },
                   [&](const LetExpr& l) {
                       free_vars_into(*l.bound, bound, out);
                       with_bound({l.var}, *l.body);
                   },
                   [&](const CaseExpr& c) {
                       use(c.scrutinee);
                       for (const auto& b : c.branches) with_bound(b.pattern.vars, *b.body);
                   },
                   [](const auto&) {},
               },
               e.node);
}

}  // namespace

std::set<std::string> free_vars(const Expr& e) {
    std::set<std::string> bound, out;
    free_vars_into(e, bound, out);
    return out;
}

bool is_all_values_call(const CallExpr& c, const SymbolTable& symbols) {
    if (c.func.name != "allValues") return false;
    const auto* f = symbols.function(c.func);
    return f != nullptr && f->external;
}

CoreProgram normalize(const CoreProgram& program, const SymbolTable& symbols) {
    CoreProgram out = program;
    std::vector<Diagnostic> diags;
    Normalizer n(symbols, diags);
    for (auto& f : out.functions) {
        if (f.body) f.body = n.function_body(f);
    }
    if (!diags.empty()) throw IrError(std::move(diags));
    return out;
}

std::string normal_form_violation(const CoreProgram& program, const SymbolTable& symbols) {
    std::string problem;
    for (const auto& f : program.functions) {
        if (!f.body || !problem.empty()) continue;
        std::set<std::string> binders(f.params.begin(), f.params.end());
        auto bind = [&](const std::string& v) {
            if (!binders.insert(v).second && problem.empty())
                problem = f.name.str() + ": variable " + v + " bound twice";
        };
        for_each_subexpr(*f.body, [&](const Expr& e) {
            std::visit(overloaded{
                           [&](const ConsExpr& c) {
                               for (const auto& a : c.args)
                                   if (!a->is<VarExpr>() && problem.empty())
                                       problem = f.name.str() + ": non-variable constructor argument";
                           },
                           [&](const CallExpr& c) {
                               if (is_all_values_call(c, symbols)) return;
                               for (const auto& a : c.args)
                                   if (!a->is<VarExpr>() && problem.empty())
                                       problem = f.name.str() + ": non-variable call argument";
                           },
                           [&](const FreeExpr& fr) {
                               for (const auto& v : fr.vars) bind(v);
                           },
                           [&](const LetExpr& l) { bind(l.var); },
                           [&](const CaseExpr& c) {
                               for (const auto& b : c.branches) {
                                   for (const auto& v : b.pattern.vars) bind(v);
                               }
                               const auto& first = c.branches.front().pattern;
                               if (first.kind != Pattern::Kind::Cons) {
                                   if (c.branches.back().pattern.kind != Pattern::Kind::Default && problem.empty())
                                       problem = f.name.str() + ": literal case without default branch";
                                   return;
                               }
                               auto ctors = symbols.constructors_of(symbols.constructor(first.ctor)->type);
                               bool ok = ctors.size() == c.branches.size();
                               for (std::size_t i = 0; ok && i < ctors.size(); ++i)
                                   ok = c.branches[i].pattern.kind == Pattern::Kind::Cons &&
                                        c.branches[i].pattern.ctor == ctors[i]->name;
                               if (!ok && problem.empty())
                                   problem = f.name.str() + ": case branches do not match the constructors of " +
                                             ctors.front()->type.str();
                           },
                           [](const auto&) {},
                       },
                       e.node);
        });
    }
    return problem;
}

}  // namespace nonfail
