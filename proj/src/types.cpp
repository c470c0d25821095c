#include "nonfail/types.hpp"

#include <algorithm>

#include "nonfail/call_graph.hpp"

namespace nonfail {

std::string Type::str() const {
    if (kind == Kind::Var) return "t" + std::to_string(var);
    if (is_arrow()) {
        auto lhs = args[0].is_arrow() ? "(" + args[0].str() + ")" : args[0].str();
        return lhs + " -> " + args[1].str();
    }
    if (args.empty()) return con.name;
    std::string out = "(" + con.name;
    for (const auto& a : args) out += " " + a.str();
    return out + ")";
}

std::strong_ordering operator<=>(const Type& a, const Type& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.var <=> b.var; c != 0) return c;
    if (auto c = a.con <=> b.con; c != 0) return c;
    return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
}

Type ground(const Type& t) {
    if (t.is_var()) return Type::constructor(builtin::Bool);
    Type out = t;
    for (auto& a : out.args) a = ground(a);
    return out;
}

Type curried(const std::vector<Type>& params, const Type& result) {
    Type t = result;
    for (auto it = params.rbegin(); it != params.rend(); ++it) t = Type::arrow(*it, t);
    return t;
}

Type Unifier::walk(const Type& t) const {
    Type cur = t;
    while (cur.is_var()) {
        auto it = subst_.find(cur.var);
        if (it == subst_.end()) break;
        cur = it->second;
    }
    return cur;
}

Type Unifier::resolve(const Type& t) const {
    Type w = walk(t);
    for (auto& a : w.args) a = resolve(a);
    return w;
}

bool Unifier::occurs(int v, const Type& t) const {
    Type w = walk(t);
    if (w.is_var()) return w.var == v;
    for (const auto& a : w.args) {
        if (occurs(v, a)) return true;
    }
    return false;
}

bool Unifier::unify(const Type& a, const Type& b) {
    Type x = walk(a);
    Type y = walk(b);
    if (x.is_var() && y.is_var() && x.var == y.var) return true;
    if (x.is_var()) {
        if (occurs(x.var, y)) return false;
        subst_[x.var] = y;
        return true;
    }
    if (y.is_var()) return unify(y, x);
    if (x.con != y.con || x.args.size() != y.args.size()) return false;
    for (std::size_t i = 0; i < x.args.size(); ++i) {
        if (!unify(x.args[i], y.args[i])) return false;
    }
    return true;
}

Type Unifier::instantiate(const Type& t, std::map<int, Type>& renaming) {
    if (t.is_var()) {
        auto it = renaming.find(t.var);
        if (it != renaming.end()) return it->second;
        auto v = fresh_var();
        renaming.emplace(t.var, v);
        return v;
    }
    Type out = t;
    for (auto& a : out.args) a = instantiate(a, renaming);
    return out;
}

std::optional<FunctionType> external_type(const std::string& name, int arity) {
    const Type a = Type::variable(0), b = Type::variable(1);
    const Type int_t = Type::constructor(builtin::Int);
    const Type bool_t = Type::constructor(builtin::Bool);
    std::optional<FunctionType> t;
    if (name == "failed") t = FunctionType{{}, a};
    else if (name == "error") t = FunctionType{{a}, b};
    else if (name == "div" || name == "mod" || name == "+" || name == "-" || name == "*")
        t = FunctionType{{int_t, int_t}, int_t};
    else if (name == "==" || name == "/=" || name == "<=" || name == "<" || name == ">" || name == ">=")
        t = FunctionType{{a, a}, bool_t};
    else if (name == "allValues") t = FunctionType{{a}, Type::constructor(builtin::List, {a})};
    else if (name == "apply") t = FunctionType{{Type::arrow(a, b), a}, b};
    else if (name == "otherwise") t = FunctionType{{}, bool_t};
    if (t && static_cast<int>(t->params.size()) != arity) return std::nullopt;
    return t;
}

namespace {

Type from_type_expr(const TypeExpr& t, std::map<std::string, Type>& vars, Unifier& u) {
    if (t.is_var) {
        auto it = vars.find(t.var);
        if (it != vars.end()) return it->second;
        auto v = u.fresh_var();
        vars.emplace(t.var, v);
        return v;
    }
    std::vector<Type> args;
    for (const auto& a : t.args) args.push_back(from_type_expr(a, vars, u));
    return Type::constructor(t.con, std::move(args));
}

struct Mono {
    std::vector<Type> params;
    Type result;
};

class Inferencer {
public:
    Inferencer(const ProgramTypes& types, const SymbolTable& symbols, const std::map<QName, FunctionType>& done,
               const std::map<QName, Mono>& current, Unifier& u, const QName& fn)
        : types_(types), symbols_(symbols), done_(done), current_(current), u_(u), fn_(fn) {}

    Type infer(const Expr& e, std::map<std::string, Type>& env) {
        return std::visit(
            overloaded{
                [&](const VarExpr& v) -> Type { return env.at(v.name); },
                [&](const LitExpr& l) -> Type { return Type::constructor(literal_type(l.lit)); },
                [&](const FailedExpr&) -> Type { return u_.fresh_var(); },
                [&](const ConsExpr& c) -> Type {
                    auto [result, fields] = types_.instantiate_constructor(c.ctor, u_);
                    for (std::size_t i = 0; i < c.args.size(); ++i) unify(fields[i], infer(*c.args[i], env), e);
                    return result;
                },
                [&](const CallExpr& c) -> Type {
                    Mono m = callee(c.func);
                    for (std::size_t i = 0; i < c.args.size(); ++i) unify(m.params[i], infer(*c.args[i], env), e);
                    std::vector<Type> rest(m.params.begin() + static_cast<long>(c.args.size()), m.params.end());
                    return curried(rest, m.result);
                },
                [&](const OrExpr& o) -> Type {
                    auto l = infer(*o.left, env);
                    unify(l, infer(*o.right, env), e);
                    return l;
                },
                [&](const FreeExpr& f) -> Type {
                    for (const auto& v : f.vars) bind(env, v, u_.fresh_var());
                    return infer(*f.body, env);
                },
                [&](const LetExpr& l) -> Type {
                    bind(env, l.var, infer(*l.bound, env));
                    return infer(*l.body, env);
                },
                [&](const CaseExpr& c) -> Type {
                    Type scrut = env.at(c.scrutinee);
                    Type result = u_.fresh_var();
                    for (const auto& b : c.branches) {
                        if (b.pattern.kind == Pattern::Kind::Cons) {
                            auto [t, fields] = types_.instantiate_constructor(b.pattern.ctor, u_);
                            unify(scrut, t, e);
                            for (std::size_t i = 0; i < fields.size(); ++i) bind(env, b.pattern.vars[i], fields[i]);
                        } else if (b.pattern.kind == Pattern::Kind::Lit) {
                            unify(scrut, Type::constructor(literal_type(b.pattern.lit)), e);
                        }
                        unify(result, infer(*b.body, env), e);
                    }
                    return result;
                },
            },
            e.node);
    }

    std::map<std::string, Type> locals;

private:
    void bind(std::map<std::string, Type>& env, const std::string& v, Type t) {
        env[v] = t;
        locals[v] = std::move(t);
    }

    Mono callee(const QName& f) {
        if (auto it = current_.find(f); it != current_.end()) return it->second;
        auto it = done_.find(f);
        if (it == done_.end()) throw IrError("no type known for " + f.str());
        std::map<int, Type> renaming;
        Mono m;
        for (const auto& p : it->second.params) m.params.push_back(u_.instantiate(p, renaming));
        m.result = u_.instantiate(it->second.result, renaming);
        return m;
    }

    void unify(const Type& a, const Type& b, const Expr& at) {
        if (!u_.unify(a, b))
            throw IrError("type error in " + fn_.name + ": cannot unify " + u_.resolve(a).str() + " with " +
                              u_.resolve(b).str(),
                          at.pos);
    }

    const ProgramTypes& types_;
    const SymbolTable& symbols_;
    const std::map<QName, FunctionType>& done_;
    const std::map<QName, Mono>& current_;
    Unifier& u_;
    QName fn_;
};

}  // namespace

std::pair<Type, std::vector<Type>> ProgramTypes::instantiate_constructor(const QName& ctor, Unifier& u) const {
    const auto* info = symbols_.constructor(ctor);
    if (info == nullptr) throw IrError("unknown constructor " + ctor.str());
    const auto* data = symbols_.data(info->type);
    std::map<std::string, Type> vars;
    std::vector<Type> params;
    for (const auto& p : data->params) {
        auto v = u.fresh_var();
        vars.emplace(p, v);
        params.push_back(v);
    }
    std::vector<Type> fields;
    if (info->decl->fields) {
        for (const auto& f : *info->decl->fields) fields.push_back(from_type_expr(f, vars, u));
    } else {
        for (int i = 0; i < info->arity; ++i) fields.push_back(u.fresh_var());
    }
    return {Type::constructor(info->type, std::move(params)), std::move(fields)};
}

void ProgramTypes::infer(const CoreProgram& program) {
    Unifier u;
    for (const auto& component : components_bottom_up(program)) {
        std::map<QName, Mono> current;
        for (const auto& name : component) {
            const auto* f = program.find_function(name.name);
            Mono m;
            if (f->external) {
                if (auto ext = external_type(name.name, f->arity)) {
                    std::map<int, Type> renaming;
                    for (const auto& p : ext->params) m.params.push_back(u.instantiate(p, renaming));
                    m.result = u.instantiate(ext->result, renaming);
                    current.emplace(name, std::move(m));
                    continue;
                }
            }
            for (int i = 0; i < f->arity; ++i) m.params.push_back(u.fresh_var());
            m.result = u.fresh_var();
            current.emplace(name, std::move(m));
        }
        std::map<QName, std::map<std::string, Type>> comp_locals;
        for (const auto& name : component) {
            const auto* f = program.find_function(name.name);
            if (!f->body) continue;
            Inferencer inf(*this, symbols_, functions_, current, u, name);
            std::map<std::string, Type> env;
            const auto& m = current.at(name);
            for (std::size_t i = 0; i < f->params.size(); ++i) {
                env[f->params[i]] = m.params[i];
                inf.locals[f->params[i]] = m.params[i];
            }
            auto body = inf.infer(*f->body, env);
            if (!u.unify(m.result, body))
                throw IrError("type error in " + name.name + ": result type mismatch", f->pos);
            comp_locals[name] = std::move(inf.locals);
        }
        for (const auto& [name, m] : current) {
            FunctionType ft;
            for (const auto& p : m.params) ft.params.push_back(u.resolve(p));
            ft.result = u.resolve(m.result);
            functions_[name] = std::move(ft);
        }
        for (auto& [name, vars] : comp_locals) {
            auto& out = locals_[name];
            for (auto& [v, t] : vars) out[v] = u.resolve(t);
        }
    }
}

const FunctionType* ProgramTypes::function(const QName& f) const {
    auto it = functions_.find(f);
    return it == functions_.end() ? nullptr : &it->second;
}

std::optional<Type> ProgramTypes::variable(const QName& f, const std::string& var) const {
    auto it = locals_.find(f);
    if (it == locals_.end()) return std::nullopt;
    auto jt = it->second.find(var);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

}  // namespace nonfail
