#include "nonfail/core_ir.hpp"

#include <sstream>

namespace nonfail {

std::string Diagnostic::str() const {
    std::ostringstream out;
    if (pos.line > 0) out << pos.line << ":" << pos.column << ": ";
    out << message;
    return out.str();
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
    std::string text;
    for (const auto& d : diags) {
        if (!text.empty()) text += "\n";
        text += d.str();
    }
    return text;
}

}  // namespace

IrError::IrError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

IrError::IrError(const std::string& message, SourcePos pos)
    : IrError(std::vector<Diagnostic>{{pos, message}}) {}

std::string encode_utf8(std::int64_t cp) {
    std::string out;
    auto c = static_cast<std::uint32_t>(cp);
    if (c < 0x80) {
        out += static_cast<char>(c);
    } else if (c < 0x800) {
        out += static_cast<char>(0xC0 | (c >> 6));
        out += static_cast<char>(0x80 | (c & 0x3F));
    } else if (c < 0x10000) {
        out += static_cast<char>(0xE0 | (c >> 12));
        out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (c & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (c >> 18));
        out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (c & 0x3F));
    }
    return out;
}

std::string Literal::label() const {
    if (kind == Kind::Int) return std::to_string(value);
    if (value == '\'') return "'\\''";
    if (value == '\\') return "'\\\\'";
    return "'" + encode_utf8(value) + "'";
}

ExprPtr make_expr(Expr::Node node, SourcePos pos) {
    return std::make_shared<const Expr>(Expr{std::move(node), pos});
}
ExprPtr var(std::string name) { return make_expr(VarExpr{std::move(name)}); }
ExprPtr lit(Literal l) { return make_expr(LitExpr{l}); }
ExprPtr cons(QName c, std::vector<ExprPtr> args) {
    return make_expr(ConsExpr{std::move(c), std::move(args)});
}
ExprPtr call(QName f, std::vector<ExprPtr> args) {
    return make_expr(CallExpr{std::move(f), std::move(args)});
}
ExprPtr failed() { return make_expr(FailedExpr{}); }

const std::string& arg_var(const ExprPtr& arg) {
    const auto* v = arg->as<VarExpr>();
    if (v == nullptr) throw std::logic_error("argument is not a variable (program not normalized)");
    return v->name;
}

namespace {

bool equal_args(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!structurally_equal(*a[i], *b[i])) return false;
    }
    return true;
}

bool equal_pattern(const Pattern& a, const Pattern& b) {
    return a.kind == b.kind && a.ctor == b.ctor && a.vars == b.vars &&
           (a.kind != Pattern::Kind::Lit || a.lit == b.lit);
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const VarExpr& x) { return x.name == std::get<VarExpr>(b.node).name; },
            [&](const LitExpr& x) { return x.lit == std::get<LitExpr>(b.node).lit; },
            [&](const ConsExpr& x) {
                const auto& y = std::get<ConsExpr>(b.node);
                return x.ctor == y.ctor && equal_args(x.args, y.args);
            },
            [&](const CallExpr& x) {
                const auto& y = std::get<CallExpr>(b.node);
                return x.func == y.func && equal_args(x.args, y.args);
            },
            [&](const OrExpr& x) {
                const auto& y = std::get<OrExpr>(b.node);
                return structurally_equal(*x.left, *y.left) &&
                       structurally_equal(*x.right, *y.right);
            },
            [&](const FreeExpr& x) {
                const auto& y = std::get<FreeExpr>(b.node);
                return x.vars == y.vars && structurally_equal(*x.body, *y.body);
            },
            [&](const LetExpr& x) {
                const auto& y = std::get<LetExpr>(b.node);
                return x.var == y.var && structurally_equal(*x.bound, *y.bound) &&
                       structurally_equal(*x.body, *y.body);
            },
            [&](const CaseExpr& x) {
                const auto& y = std::get<CaseExpr>(b.node);
                if (x.scrutinee != y.scrutinee || x.branches.size() != y.branches.size())
                    return false;
                for (std::size_t i = 0; i < x.branches.size(); ++i) {
                    if (!equal_pattern(x.branches[i].pattern, y.branches[i].pattern)) return false;
                    if (!structurally_equal(*x.branches[i].body, *y.branches[i].body))
                        return false;
                }
                return true;
            },
            [](const FailedExpr&) { return true; },
        },
        a.node);
}

const FuncDecl* CoreProgram::find_function(const std::string& name) const {
    for (const auto& f : functions) {
        if (f.name.name == name) return &f;
    }
    return nullptr;
}

const DataDecl* CoreProgram::find_data(const std::string& name) const {
    for (const auto& d : data) {
        if (d.name.name == name) return &d;
    }
    return nullptr;
}

bool structurally_equal(const CoreProgram& a, const CoreProgram& b) {
    if (a.module != b.module || a.imports != b.imports) return false;
    if (a.data.size() != b.data.size() || a.functions.size() != b.functions.size()) return false;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const auto& x = a.data[i];
        const auto& y = b.data[i];
        if (x.name != y.name || x.params != y.params ||
            x.constructors.size() != y.constructors.size())
            return false;
        for (std::size_t j = 0; j < x.constructors.size(); ++j) {
            const auto& c = x.constructors[j];
            const auto& d = y.constructors[j];
            if (c.name != d.name || c.arity != d.arity || c.fields != d.fields) return false;
        }
    }
    for (std::size_t i = 0; i < a.functions.size(); ++i) {
        const auto& f = a.functions[i];
        const auto& g = b.functions[i];
        if (f.name != g.name || f.arity != g.arity || f.params != g.params ||
            f.visibility != g.visibility || f.external != g.external)
            return false;
        if ((f.body == nullptr) != (g.body == nullptr)) return false;
        if (f.body && !structurally_equal(*f.body, *g.body)) return false;
    }
    return true;
}

}  // namespace nonfail
