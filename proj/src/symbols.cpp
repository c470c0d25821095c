#include "nonfail/symbols.hpp"

#include <stdexcept>

#include "nonfail/parser.hpp"

namespace nonfail {

namespace {

DataDecl make_builtin(const QName& type, std::vector<std::pair<QName, std::vector<TypeExpr>>> ctors,
                      std::vector<std::string> params) {
    DataDecl d;
    d.name = type;
    d.params = std::move(params);
    for (auto& [name, fields] : ctors) {
        ConstructorDecl c;
        c.name = name;
        c.arity = static_cast<int>(fields.size());
        c.fields = std::move(fields);
        d.constructors.push_back(std::move(c));
    }
    return d;
}

TypeExpr tvar(const std::string& v) {
    TypeExpr t;
    t.is_var = true;
    t.var = v;
    return t;
}

TypeExpr tcon(const QName& c, std::vector<TypeExpr> args = {}) {
    TypeExpr t;
    t.con = c;
    t.args = std::move(args);
    return t;
}

}  // namespace

const std::vector<DataDecl>& builtin_data() {
    static const std::vector<DataDecl> data = {
        make_builtin(builtin::Bool, {{builtin::False, {}}, {builtin::True, {}}}, {}),
        make_builtin(builtin::List,
                     {{builtin::Nil, {}}, {builtin::Cons, {tvar("a"), tcon(builtin::List, {tvar("a")})}}},
                     {"a"}),
        make_builtin(builtin::Unit, {{builtin::UnitCtor, {}}}, {}),
    };
    return data;
}

const QName& literal_type(const Literal& l) {
    return l.kind == Literal::Kind::Int ? builtin::Int : builtin::Char;
}

ModuleSignature signature_of(const CoreProgram& program) {
    ModuleSignature sig;
    sig.module = program.module;
    sig.data = program.data;
    for (const auto& f : program.functions) sig.functions.push_back({f.name, f.arity, f.visibility, f.external});
    return sig;
}

SymbolTable::SymbolTable() {
    ModuleSignature sig;
    sig.module = kBuiltinModule;
    sig.data = builtin_data();
    add(sig);
}

void SymbolTable::add(const ModuleSignature& sig) {
    if (modules_.count(sig.module)) throw IrError("module " + sig.module + " loaded twice");
    std::vector<Diagnostic> diags;
    if (sig.module != kBuiltinModule) {
        for (const auto& d : sig.data) {
            if (types_.count({kBuiltinModule, d.name.name}) || d.name.name == "Int" || d.name.name == "Char")
                diags.push_back({d.pos, "type " + d.name.name + " is predefined and cannot be redeclared"});
            for (const auto& c : d.constructors) {
                if (constructors_.count({kBuiltinModule, c.name.name}))
                    diags.push_back({c.pos, "constructor " + c.name.name + " is predefined and cannot be redeclared"});
            }
        }
    }
    if (!diags.empty()) throw IrError(std::move(diags));

    auto& entry = modules_[sig.module];
    entry.data = sig.data;
    entry.functions = sig.functions;
    for (const auto& d : entry.data) {
        types_[d.name] = &d;
        for (std::size_t i = 0; i < d.constructors.size(); ++i) {
            const auto& c = d.constructors[i];
            constructors_[c.name] = {c.name, c.arity, d.name, static_cast<int>(i), &c};
        }
    }
    for (const auto& f : entry.functions) functions_[f.name] = &f;
}

const ConstructorInfo* SymbolTable::constructor(const QName& name) const {
    auto it = constructors_.find(name);
    return it == constructors_.end() ? nullptr : &it->second;
}

const DataDecl* SymbolTable::data(const QName& type) const {
    auto it = types_.find(type);
    return it == types_.end() ? nullptr : it->second;
}

const FuncSig* SymbolTable::function(const QName& name) const {
    auto it = functions_.find(name);
    return it == functions_.end() ? nullptr : it->second;
}

std::vector<const ConstructorInfo*> SymbolTable::constructors_of(const QName& type) const {
    const auto* d = data(type);
    if (d == nullptr) throw std::out_of_range("unknown type " + type.str());
    std::vector<const ConstructorInfo*> out;
    for (const auto& c : d->constructors) out.push_back(constructor(c.name));
    return out;
}

template <class Pred>
std::optional<QName> SymbolTable::lookup(const std::string& module, const std::vector<std::string>& imports,
                                         const std::string& name, SourcePos pos, const char* what,
                                         Pred exists) const {
    if (exists(QName{module, name}, true)) return QName{module, name};
    std::optional<QName> found;
    for (const auto& imp : imports) {
        QName q{imp, name};
        if (!exists(q, false)) continue;
        if (found && *found != q)
            throw IrError(std::string("ambiguous ") + what + " " + name + ": defined in " + found->module +
                              " and " + imp,
                          pos);
        found = q;
    }
    if (found) return found;
    if (exists(QName{kBuiltinModule, name}, false)) return QName{kBuiltinModule, name};
    return std::nullopt;
}

std::optional<QName> SymbolTable::lookup_constructor(const std::string& module,
                                                     const std::vector<std::string>& imports,
                                                     const std::string& name, SourcePos pos) const {
    return lookup(module, imports, name, pos, "constructor",
                  [&](const QName& q, bool) { return constructors_.count(q) != 0; });
}

std::optional<QName> SymbolTable::lookup_function(const std::string& module,
                                                  const std::vector<std::string>& imports,
                                                  const std::string& name, SourcePos pos) const {
    return lookup(module, imports, name, pos, "function", [&](const QName& q, bool local) {
        const auto* f = function(q);
        return f != nullptr && (local || f->visibility == Visibility::Public);
    });
}

std::optional<QName> SymbolTable::lookup_type(const std::string& module, const std::vector<std::string>& imports,
                                              const std::string& name, SourcePos pos) const {
    if (name == "Int") return builtin::Int;
    if (name == "Char") return builtin::Char;
    if (name == "->") return builtin::Arrow;
    return lookup(module, imports, name, pos, "type",
                  [&](const QName& q, bool) { return types_.count(q) != 0; });
}

// ---------------------------------------------------------------------------

namespace {

class Resolver {
public:
    Resolver(const CoreProgram& p, const SymbolTable& s, std::vector<Diagnostic>& diags)
        : prog_(p), syms_(s), diags_(diags) {}

    ExprPtr expr(const ExprPtr& e) {
        return std::visit(
            overloaded{
                [&](const ConsExpr& c) -> ExprPtr {
                    auto args = exprs(c.args);
                    auto q = ctor(c.ctor.name, e->pos);
                    if (q) {
                        int arity = syms_.constructor(*q)->arity;
                        if (static_cast<int>(args.size()) != arity)
                            diag(e->pos, "constructor " + c.ctor.name + " expects " + std::to_string(arity) +
                                             " arguments, got " + std::to_string(args.size()));
                    }
                    return make_expr(ConsExpr{q.value_or(c.ctor), std::move(args)}, e->pos);
                },
                [&](const CallExpr& c) -> ExprPtr {
                    auto args = exprs(c.args);
                    auto q = func(c.func.name, e->pos);
                    if (q) {
                        int arity = syms_.function(*q)->arity;
                        if (static_cast<int>(args.size()) > arity)
                            diag(e->pos, "function " + c.func.name + " expects at most " + std::to_string(arity) +
                                             " arguments, got " + std::to_string(args.size()));
                    }
                    return make_expr(CallExpr{q.value_or(c.func), std::move(args)}, e->pos);
                },
                [&](const OrExpr& o) -> ExprPtr { return make_expr(OrExpr{expr(o.left), expr(o.right)}, e->pos); },
                [&](const FreeExpr& f) -> ExprPtr { return make_expr(FreeExpr{f.vars, expr(f.body)}, e->pos); },
                [&](const LetExpr& l) -> ExprPtr {
                    return make_expr(LetExpr{l.var, expr(l.bound), expr(l.body)}, e->pos);
                },
                [&](const CaseExpr& c) -> ExprPtr {
                    CaseExpr out{c.scrutinee, {}};
                    for (const auto& b : c.branches) {
                        Pattern p = b.pattern;
                        if (p.kind == Pattern::Kind::Cons) {
                            auto q = ctor(p.ctor.name, b.body->pos);
                            if (q) {
                                int arity = syms_.constructor(*q)->arity;
                                if (static_cast<int>(p.vars.size()) != arity)
                                    diag(e->pos, "pattern " + p.ctor.name + " expects " + std::to_string(arity) +
                                                     " variables, got " + std::to_string(p.vars.size()));
                                p.ctor = *q;
                            }
                        }
                        out.branches.push_back({std::move(p), expr(b.body)});
                    }
                    return make_expr(std::move(out), e->pos);
                },
                [&](const auto&) -> ExprPtr { return e; },
            },
            e->node);
    }

    TypeExpr type(const TypeExpr& t, SourcePos pos) {
        TypeExpr out = t;
        if (t.is_var) return out;
        const DataDecl* local = prog_.find_data(t.con.name);
        auto q = local ? std::optional<QName>(local->name)
                       : syms_.lookup_type(prog_.module, prog_.imports, t.con.name, pos);
        if (!q) {
            diag(pos, "unknown type " + t.con.name);
        } else {
            out.con = *q;
            const auto* d = local ? local : syms_.data(*q);
            if (q == builtin::Arrow && t.args.size() != 2) diag(pos, "function type needs two arguments");
            if (d && d->params.size() != t.args.size())
                diag(pos, "type " + t.con.name + " expects " + std::to_string(d->params.size()) + " arguments");
        }
        for (auto& a : out.args) a = type(a, pos);
        return out;
    }

private:
    std::vector<ExprPtr> exprs(const std::vector<ExprPtr>& in) {
        std::vector<ExprPtr> out;
        for (const auto& a : in) out.push_back(expr(a));
        return out;
    }

    std::optional<QName> ctor(const std::string& name, SourcePos pos) {
        auto q = syms_.lookup_constructor(prog_.module, prog_.imports, name, pos);
        if (!q) diag(pos, "unknown constructor " + name);
        return q;
    }

    std::optional<QName> func(const std::string& name, SourcePos pos) {
        auto q = syms_.lookup_function(prog_.module, prog_.imports, name, pos);
        if (!q) diag(pos, "unknown function " + name);
        return q;
    }

    void diag(SourcePos pos, std::string msg) { diags_.push_back({pos, std::move(msg)}); }

    const CoreProgram& prog_;
    const SymbolTable& syms_;
    std::vector<Diagnostic>& diags_;
};

}  // namespace

void resolve_program(CoreProgram& program, SymbolTable& symbols) {
    std::vector<Diagnostic> diags;
    for (const auto& imp : program.imports) {
        if (!symbols.has_module(imp)) diags.push_back({{}, "imported module " + imp + " is not loaded"});
    }
    if (!diags.empty()) throw IrError(std::move(diags));

    Resolver r(program, symbols, diags);
    for (auto& d : program.data) {
        for (auto& c : d.constructors) {
            if (!c.fields) continue;
            for (auto& f : *c.fields) f = r.type(f, c.pos);
        }
    }
    if (!symbols.has_module(program.module)) symbols.add(signature_of(program));
    for (auto& f : program.functions) {
        if (f.body) f.body = r.expr(f.body);
    }
    if (!diags.empty()) throw IrError(std::move(diags));
}

}  // namespace nonfail
