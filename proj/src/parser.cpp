#include "nonfail/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace nonfail {

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        skip_space();
        while (!at_end()) {
            out.push_back(read());
            skip_space();
        }
        return out;
    }

private:
    bool at_end() const { return i_ >= text_.size(); }
    char peek() const { return text_[i_]; }
    SourcePos here() const { return {line_, col_}; }

    void advance() {
        if (text_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    void skip_space() {
        while (!at_end()) {
            char c = peek();
            if (c == ';') {
                while (!at_end() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        SExpr node;
        node.pos = here();
        char c = peek();
        if (c == '(') {
            advance();
            node.kind = SExpr::Kind::List;
            skip_space();
            while (true) {
                if (at_end()) throw IrError("unterminated list", node.pos);
                if (peek() == ')') break;
                node.items.push_back(read());
                skip_space();
            }
            advance();
        } else if (c == ')') {
            throw IrError("unexpected ')'", node.pos);
        } else if (c == '"') {
            advance();
            node.kind = SExpr::Kind::String;
            while (true) {
                if (at_end()) throw IrError("unterminated string", node.pos);
                char d = peek();
                if (d == '"') break;
                if (d == '\\') {
                    advance();
                    if (at_end()) throw IrError("unterminated string", node.pos);
                    char e = peek();
                    switch (e) {
                    case 'n': node.text += '\n'; break;
                    case 't': node.text += '\t'; break;
                    case '"': node.text += '"'; break;
                    case '\\': node.text += '\\'; break;
                    default: throw IrError(std::string("unknown escape \\") + e, here());
                    }
                    advance();
                } else {
                    node.text += d;
                    advance();
                }
            }
            advance();
        } else {
            node.kind = SExpr::Kind::Atom;
            while (!at_end()) {
                char d = peek();
                if (d == '(' || d == ')' || d == '"' || d == ';' ||
                    std::isspace(static_cast<unsigned char>(d)))
                    break;
                node.text += d;
                advance();
            }
        }
        return node;
    }

    std::string_view text_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

[[noreturn]] void fail(const SExpr& at, const std::string& message) { throw IrError(message, at.pos); }

const std::set<std::string, std::less<>> kReservedWords = {
    "failed", "lit", "cons", "call", "or", "free", "let", "case", "default",
};

std::string expect_name(const SExpr& s, const char* what) {
    if (s.kind != SExpr::Kind::Atom || s.text.empty()) fail(s, std::string("expected ") + what);
    return s.text;
}

int expect_int(const SExpr& s, const char* what) {
    if (s.kind != SExpr::Kind::Atom) fail(s, std::string("expected ") + what);
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.text.data(), s.text.data() + s.text.size(), value);
    if (ec != std::errc{} || ptr != s.text.data() + s.text.size() || value < 0)
        fail(s, std::string("expected non-negative integer for ") + what);
    return value;
}

std::int64_t decode_single_codepoint(const SExpr& s) {
    const auto& t = s.text;
    if (t.empty()) fail(s, "character literal must contain exactly one character");
    auto b0 = static_cast<unsigned char>(t[0]);
    std::size_t len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : 4;
    if (len != t.size()) fail(s, "character literal must contain exactly one character");
    if (len == 1) return b0;
    std::int64_t cp = b0 & (0x7F >> len);
    for (std::size_t i = 1; i < len; ++i) cp = (cp << 6) | (static_cast<unsigned char>(t[i]) & 0x3F);
    return cp;
}

Literal parse_literal(const SExpr& s) {
    // (lit int N) | (lit char "c")
    if (s.items.size() != 3) fail(s, "malformed literal");
    const auto& kind = s.items[1];
    const auto& value = s.items[2];
    if (kind.is_atom("int")) {
        if (value.kind != SExpr::Kind::Atom) fail(value, "expected integer");
        std::int64_t v = 0;
        auto [ptr, ec] =
            std::from_chars(value.text.data(), value.text.data() + value.text.size(), v);
        if (ec != std::errc{} || ptr != value.text.data() + value.text.size())
            fail(value, "malformed integer literal '" + value.text + "'");
        return Literal::integer(v);
    }
    if (kind.is_atom("char")) {
        if (value.kind != SExpr::Kind::String) fail(value, "expected string for char literal");
        return Literal::character(decode_single_codepoint(value));
    }
    fail(kind, "unknown literal kind");
}

TypeExpr parse_type_sexpr(const SExpr& s) {
    TypeExpr t;
    if (s.kind == SExpr::Kind::Atom) {
        if (s.text.empty()) fail(s, "expected type");
        if (std::islower(static_cast<unsigned char>(s.text[0]))) {
            t.is_var = true;
            t.var = s.text;
        } else {
            t.con.name = s.text;
        }
        return t;
    }
    if (s.kind != SExpr::Kind::List || s.items.empty()) fail(s, "expected type");
    t.con.name = expect_name(s.items[0], "type constructor");
    if (t.con.name == "->" && s.items.size() != 3) fail(s, "function type needs two arguments");
    for (std::size_t i = 1; i < s.items.size(); ++i) t.args.push_back(parse_type_sexpr(s.items[i]));
    return t;
}

void collect_type_vars(const TypeExpr& t, std::vector<std::string>& out) {
    if (t.is_var) {
        if (std::find(out.begin(), out.end(), t.var) == out.end()) out.push_back(t.var);
        return;
    }
    for (const auto& a : t.args) collect_type_vars(a, out);
}

/// Translates expressions, checking variable scope along the way.
class ExprBuilder {
public:
    explicit ExprBuilder(std::vector<Diagnostic>& diags) : diags_(diags) {}

    ExprPtr build(const SExpr& s, std::vector<std::string>& scope) {
        if (s.kind == SExpr::Kind::Atom) {
            if (s.text == "failed") return make_expr(FailedExpr{}, s.pos);
            check_bound(s, scope);
            return make_expr(VarExpr{s.text}, s.pos);
        }
        if (s.kind != SExpr::Kind::List || s.items.empty()) fail(s, "expected expression");
        const auto& head = s.items[0];
        if (head.is_atom("lit")) return make_expr(LitExpr{parse_literal(s)}, s.pos);
        if (head.is_atom("cons") || head.is_atom("call")) {
            if (s.items.size() < 2) fail(s, "missing name");
            QName name{"", expect_name(s.items[1], "name")};
            std::vector<ExprPtr> args;
            for (std::size_t i = 2; i < s.items.size(); ++i) args.push_back(build(s.items[i], scope));
            if (head.is_atom("cons")) return make_expr(ConsExpr{std::move(name), std::move(args)}, s.pos);
            return make_expr(CallExpr{std::move(name), std::move(args)}, s.pos);
        }
        if (head.is_atom("or")) {
            if (s.items.size() != 3) fail(s, "or takes two expressions");
            auto l = build(s.items[1], scope);
            auto r = build(s.items[2], scope);
            return make_expr(OrExpr{l, r}, s.pos);
        }
        if (head.is_atom("free")) {
            if (s.items.size() != 3 || s.items[1].kind != SExpr::Kind::List || s.items[1].items.empty())
                fail(s, "free takes a nonempty variable list and a body");
            std::vector<std::string> vars;
            for (const auto& v : s.items[1].items) vars.push_back(binder(v));
            auto mark = scope.size();
            scope.insert(scope.end(), vars.begin(), vars.end());
            auto body = build(s.items[2], scope);
            scope.resize(mark);
            return make_expr(FreeExpr{std::move(vars), body}, s.pos);
        }
        if (head.is_atom("let")) {
            if (s.items.size() != 4) fail(s, "let takes a variable, a binding and a body");
            auto x = binder(s.items[1]);
            auto mark = scope.size();
            // The variable is visible in its own binding so that recursive
            // lets reach normalization, which rejects them with a diagnostic.
            scope.push_back(x);
            auto bound = build(s.items[2], scope);
            auto body = build(s.items[3], scope);
            scope.resize(mark);
            return make_expr(LetExpr{x, bound, body}, s.pos);
        }
        if (head.is_atom("case")) {
            if (s.items.size() < 3) fail(s, "case needs a scrutinee and at least one branch");
            const auto& scrut = s.items[1];
            if (scrut.kind != SExpr::Kind::Atom) fail(scrut, "case scrutinee must be a variable");
            check_bound(scrut, scope);
            CaseExpr c{scrut.text, {}};
            for (std::size_t i = 2; i < s.items.size(); ++i) c.branches.push_back(branch(s.items[i], scope));
            return make_expr(std::move(c), s.pos);
        }
        fail(head, "unknown expression form '" + head.text + "'");
    }

private:
    std::string binder(const SExpr& v) {
        auto name = expect_name(v, "variable");
        if (kReservedWords.count(name)) fail(v, "'" + name + "' cannot be used as a variable");
        return name;
    }

    void check_bound(const SExpr& s, const std::vector<std::string>& scope) {
        if (std::find(scope.begin(), scope.end(), s.text) == scope.end())
            diags_.push_back({s.pos, "unbound variable " + s.text});
    }

    Branch branch(const SExpr& s, std::vector<std::string>& scope) {
        if (s.kind != SExpr::Kind::List || s.items.size() != 2) fail(s, "malformed case branch");
        const auto& p = s.items[0];
        auto mark = scope.size();
        Pattern pat;
        if (p.is_atom("default")) {
            pat = Pattern::fallback();
        } else if (p.kind == SExpr::Kind::List && !p.items.empty() && p.items[0].is_atom("lit")) {
            pat = Pattern::literal(parse_literal(p));
        } else if (p.kind == SExpr::Kind::List && !p.items.empty()) {
            std::vector<std::string> vars;
            for (std::size_t i = 1; i < p.items.size(); ++i) vars.push_back(binder(p.items[i]));
            pat = Pattern::cons({"", expect_name(p.items[0], "constructor")}, vars);
            scope.insert(scope.end(), vars.begin(), vars.end());
        } else {
            fail(p, "malformed pattern");
        }
        auto body = build(s.items[1], scope);
        scope.resize(mark);
        return {std::move(pat), body};
    }

    std::vector<Diagnostic>& diags_;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) { return Reader(text).read_all(); }

CoreProgram parse_program(std::string_view text) {
    auto top = read_sexprs(text);
    if (top.size() != 1) throw IrError("expected exactly one (module ...) form");
    const auto& m = top[0];
    if (m.kind != SExpr::Kind::List || m.items.size() < 2 || !m.items[0].is_atom("module"))
        fail(m, "expected (module NAME ...)");

    CoreProgram prog;
    prog.module = expect_name(m.items[1], "module name");
    std::vector<Diagnostic> diags;
    ExprBuilder builder(diags);
    std::set<std::string> type_names, ctor_names, func_names;

    for (std::size_t i = 2; i < m.items.size(); ++i) {
        const auto& d = m.items[i];
        if (d.kind != SExpr::Kind::List || d.items.empty()) fail(d, "expected declaration");
        const auto& kw = d.items[0];
        if (kw.is_atom("import")) {
            if (d.items.size() != 2) fail(d, "import takes one module name");
            prog.imports.push_back(expect_name(d.items[1], "module name"));
        } else if (kw.is_atom("data")) {
            if (d.items.size() < 3) fail(d, "data needs a name and at least one constructor");
            DataDecl decl;
            decl.pos = d.pos;
            decl.name = {prog.module, expect_name(d.items[1], "type name")};
            if (!type_names.insert(decl.name.name).second)
                diags.push_back({d.pos, "duplicate declaration of type " + decl.name.name});
            for (std::size_t j = 2; j < d.items.size(); ++j) {
                const auto& c = d.items[j];
                if (c.kind != SExpr::Kind::List || c.items.size() < 2)
                    fail(c, "expected (CONSTRUCTOR ARITY field-type*)");
                ConstructorDecl cd;
                cd.pos = c.pos;
                cd.name = {prog.module, expect_name(c.items[0], "constructor name")};
                cd.arity = expect_int(c.items[1], "constructor arity");
                if (c.items.size() > 2) {
                    std::vector<TypeExpr> fields;
                    for (std::size_t k = 2; k < c.items.size(); ++k)
                        fields.push_back(parse_type_sexpr(c.items[k]));
                    if (static_cast<int>(fields.size()) != cd.arity)
                        diags.push_back({c.pos, "constructor " + cd.name.name + " declares arity " +
                                                    std::to_string(cd.arity) + " but " +
                                                    std::to_string(fields.size()) + " field types"});
                    for (const auto& f : fields) collect_type_vars(f, decl.params);
                    cd.fields = std::move(fields);
                }
                if (!ctor_names.insert(cd.name.name).second)
                    diags.push_back({c.pos, "duplicate declaration of constructor " + cd.name.name});
                decl.constructors.push_back(std::move(cd));
            }
            prog.data.push_back(std::move(decl));
        } else if (kw.is_atom("func")) {
            // (func NAME ARITY VIS? (rule (VAR*) expr))
            if (d.items.size() != 4 && d.items.size() != 5) fail(d, "malformed func declaration");
            FuncDecl f;
            f.pos = d.pos;
            f.name = {prog.module, expect_name(d.items[1], "function name")};
            f.arity = expect_int(d.items[2], "function arity");
            std::size_t rule_at = 3;
            if (d.items.size() == 5) {
                const auto& vis = d.items[3];
                if (vis.is_atom("public")) {
                    f.visibility = Visibility::Public;
                } else if (vis.is_atom("private")) {
                    f.visibility = Visibility::Private;
                } else {
                    fail(vis, "expected public or private");
                }
                rule_at = 4;
            }
            const auto& rule = d.items[rule_at];
            if (rule.kind != SExpr::Kind::List || rule.items.size() != 3 || !rule.items[0].is_atom("rule") ||
                rule.items[1].kind != SExpr::Kind::List)
                fail(rule, "expected (rule (VAR*) expr)");
            std::set<std::string> seen;
            for (const auto& p : rule.items[1].items) {
                auto name = expect_name(p, "parameter");
                if (kReservedWords.count(name)) fail(p, "'" + name + "' cannot be used as a variable");
                if (!seen.insert(name).second) diags.push_back({p.pos, "duplicate parameter " + name});
                f.params.push_back(name);
            }
            if (static_cast<int>(f.params.size()) != f.arity)
                diags.push_back({d.pos, "arity mismatch: " + f.name.name + " declares arity " +
                                            std::to_string(f.arity) + " but has " +
                                            std::to_string(f.params.size()) + " parameters"});
            std::vector<std::string> scope = f.params;
            f.body = builder.build(rule.items[2], scope);
            if (!func_names.insert(f.name.name).second)
                diags.push_back({d.pos, "duplicate declaration of function " + f.name.name});
            prog.functions.push_back(std::move(f));
        } else if (kw.is_atom("external")) {
            if (d.items.size() != 3) fail(d, "external takes a name and an arity");
            FuncDecl f;
            f.pos = d.pos;
            f.name = {prog.module, expect_name(d.items[1], "function name")};
            f.arity = expect_int(d.items[2], "arity");
            f.external = true;
            for (int k = 0; k < f.arity; ++k) f.params.push_back("_x" + std::to_string(k));
            if (!func_names.insert(f.name.name).second)
                diags.push_back({d.pos, "duplicate declaration of function " + f.name.name});
            prog.functions.push_back(std::move(f));
        } else {
            fail(kw, "unknown declaration '" + kw.text + "'");
        }
    }
    if (!diags.empty()) throw IrError(std::move(diags));
    return prog;
}

TypeExpr parse_type(std::string_view text) {
    auto items = read_sexprs(text);
    if (items.size() != 1) throw IrError("expected exactly one type");
    return parse_type_sexpr(items[0]);
}

ExprPtr parse_expr(std::string_view text, const std::vector<std::string>& scope) {
    auto items = read_sexprs(text);
    if (items.size() != 1) throw IrError("expected exactly one expression");
    std::vector<Diagnostic> diags;
    ExprBuilder builder(diags);
    auto s = scope;
    auto e = builder.build(items[0], s);
    if (!diags.empty()) throw IrError(std::move(diags));
    return e;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string quote_char(std::int64_t cp) {
    std::string s = "\"";
    if (cp == '"') s += "\\\"";
    else if (cp == '\\') s += "\\\\";
    else if (cp == '\n') s += "\\n";
    else if (cp == '\t') s += "\\t";
    else s += encode_utf8(cp);
    return s + "\"";
}

std::string print_literal(const Literal& l) {
    if (l.kind == Literal::Kind::Int) return "(lit int " + std::to_string(l.value) + ")";
    return "(lit char " + quote_char(l.value) + ")";
}

bool is_simple(const Expr& e) {
    return std::visit(overloaded{
                          [](const VarExpr&) { return true; },
                          [](const LitExpr&) { return true; },
                          [](const FailedExpr&) { return true; },
                          [](const ConsExpr& c) {
                              return std::all_of(c.args.begin(), c.args.end(),
                                                 [](const ExprPtr& a) { return is_simple(*a); });
                          },
                          [](const CallExpr& c) {
                              return std::all_of(c.args.begin(), c.args.end(),
                                                 [](const ExprPtr& a) { return is_simple(*a); });
                          },
                          [](const auto&) { return false; },
                      },
                      e.node);
}

void print(std::ostream& out, const Expr& e, int indent);

void newline(std::ostream& out, int indent) { out << "\n" << std::string(indent, ' '); }

void print_app(std::ostream& out, const char* kw, const QName& name,
               const std::vector<ExprPtr>& args, int indent) {
    out << "(" << kw << " " << name.name;
    for (const auto& a : args) {
        if (is_simple(*a)) {
            out << " ";
            print(out, *a, indent);
        } else {
            newline(out, indent + 2);
            print(out, *a, indent + 2);
        }
    }
    out << ")";
}

void print(std::ostream& out, const Expr& e, int indent) {
    std::visit(overloaded{
                   [&](const VarExpr& v) { out << v.name; },
                   [&](const LitExpr& l) { out << print_literal(l.lit); },
                   [&](const FailedExpr&) { out << "failed"; },
                   [&](const ConsExpr& c) { print_app(out, "cons", c.ctor, c.args, indent); },
                   [&](const CallExpr& c) { print_app(out, "call", c.func, c.args, indent); },
                   [&](const OrExpr& o) {
                       out << "(or";
                       newline(out, indent + 2);
                       print(out, *o.left, indent + 2);
                       newline(out, indent + 2);
                       print(out, *o.right, indent + 2);
                       out << ")";
                   },
                   [&](const FreeExpr& f) {
                       out << "(free (";
                       for (std::size_t i = 0; i < f.vars.size(); ++i) out << (i ? " " : "") << f.vars[i];
                       out << ")";
                       newline(out, indent + 2);
                       print(out, *f.body, indent + 2);
                       out << ")";
                   },
                   [&](const LetExpr& l) {
                       out << "(let " << l.var << " ";
                       print(out, *l.bound, indent + 2);
                       newline(out, indent + 2);
                       print(out, *l.body, indent + 2);
                       out << ")";
                   },
                   [&](const CaseExpr& c) {
                       out << "(case " << c.scrutinee;
                       for (const auto& b : c.branches) {
                           newline(out, indent + 2);
                           out << "(";
                           switch (b.pattern.kind) {
                           case Pattern::Kind::Default: out << "default"; break;
                           case Pattern::Kind::Lit: out << print_literal(b.pattern.lit); break;
                           case Pattern::Kind::Cons:
                               out << "(" << b.pattern.ctor.name;
                               for (const auto& v : b.pattern.vars) out << " " << v;
                               out << ")";
                               break;
                           }
                           if (is_simple(*b.body)) {
                               out << " ";
                               print(out, *b.body, indent + 4);
                           } else {
                               newline(out, indent + 4);
                               print(out, *b.body, indent + 4);
                           }
                           out << ")";
                       }
                       out << ")";
                   },
               },
               e.node);
}

}  // namespace

std::string print_type(const TypeExpr& t) {
    if (t.is_var) return t.var;
    if (t.args.empty()) return t.con.name;
    std::string s = "(" + t.con.name;
    for (const auto& a : t.args) s += " " + print_type(a);
    return s + ")";
}

std::string print_expr(const Expr& e) {
    std::ostringstream out;
    print(out, e, 0);
    return out.str();
}

std::string print_program(const CoreProgram& p) {
    std::ostringstream out;
    out << "(module " << p.module;
    for (const auto& i : p.imports) out << "\n  (import " << i << ")";
    for (const auto& d : p.data) {
        out << "\n  (data " << d.name.name;
        for (const auto& c : d.constructors) {
            out << " (" << c.name.name << " " << c.arity;
            if (c.fields) {
                for (const auto& f : *c.fields) out << " " << print_type(f);
            }
            out << ")";
        }
        out << ")";
    }
    for (const auto& f : p.functions) {
        if (f.external) {
            out << "\n  (external " << f.name.name << " " << f.arity << ")";
            continue;
        }
        out << "\n  (func " << f.name.name << " " << f.arity;
        if (f.visibility == Visibility::Private) out << " private";
        out << "\n    (rule (";
        for (std::size_t i = 0; i < f.params.size(); ++i) out << (i ? " " : "") << f.params[i];
        out << ")";
        newline(out, 6);
        print(out, *f.body, 6);
        out << "))";
    }
    out << ")\n";
    return out.str();
}

}  // namespace nonfail
