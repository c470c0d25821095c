#include "nonfail/report.hpp"

#include <cctype>
#include <iomanip>
#include <sstream>

namespace nonfail {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Abstract values

namespace {

class ValueReader {
public:
    ValueReader(std::string_view text, const SymbolResolver& resolve) : text_(text), resolve_(resolve) {}

    AbstractValue read() {
        auto v = value();
        skip_ws();
        if (pos_ != text_.size()) error("trailing input");
        return v;
    }

private:
    [[noreturn]] void error(const std::string& what) const {
        throw InterfaceError("bad abstract value '" + std::string(text_) + "': " + what + " at offset " +
                             std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) error(std::string("expected '") + c + "'");
    }

    AbstractValue value() {
        if (eat('_')) return AbstractValue::any();
        expect('{');
        std::vector<Shape> shapes;
        if (eat('}')) return AbstractValue::bottom();
        do {
            shapes.push_back(shape());
        } while (eat(','));
        expect('}');
        if (shapes.empty()) return AbstractValue::bottom();
        return AbstractValue::of(std::move(shapes));
    }

    Shape shape() {
        skip_ws();
        if (pos_ >= text_.size()) error("unexpected end");
        char c = text_[pos_];
        if (c == '\'') return {Symbol::literal(char_literal()), {}};
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_++;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            try {
                return {Symbol::literal(Literal::integer(std::stoll(std::string(text_.substr(start, pos_ - start))))), {}};
            } catch (const std::exception&) {
                error("bad integer");
            }
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ',' && text_[pos_] != '}' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        std::string label(text_.substr(start, pos_ - start));
        if (label.empty()) error("expected constructor");
        auto sym = resolve_(label);
        if (!sym) error("unknown constructor " + label);
        Shape s{*sym, {}};
        if (eat('(')) {
            do {
                s.children.push_back(value());
            } while (eat(','));
            expect(')');
        }
        if (static_cast<int>(s.children.size()) != sym->arity) error("wrong number of children for " + label);
        return s;
    }

    Literal char_literal() {
        ++pos_;  // opening quote
        std::size_t end = text_.find('\'', pos_ + 1);
        if (pos_ < text_.size() && text_[pos_] == '\\') end = text_.find('\'', pos_ + 2);
        if (end == std::string_view::npos) error("unterminated character");
        std::string body(text_.substr(pos_, end - pos_));
        pos_ = end + 1;
        if (body == "\\'") return Literal::character('\'');
        if (body == "\\\\") return Literal::character('\\');
        // Decode one UTF-8 sequence.
        auto u = [&](std::size_t i) { return static_cast<unsigned char>(body[i]); };
        if (body.empty()) error("empty character");
        std::int64_t cp;
        std::size_t len;
        if (u(0) < 0x80) cp = u(0), len = 1;
        else if ((u(0) & 0xE0) == 0xC0) cp = u(0) & 0x1F, len = 2;
        else if ((u(0) & 0xF0) == 0xE0) cp = u(0) & 0x0F, len = 3;
        else cp = u(0) & 0x07, len = 4;
        if (body.size() != len) error("bad character");
        for (std::size_t i = 1; i < len; ++i) cp = (cp << 6) | (u(i) & 0x3F);
        return Literal::character(cp);
    }

    std::string_view text_;
    const SymbolResolver& resolve_;
    std::size_t pos_ = 0;
};

}  // namespace

AbstractValue parse_abstract_value(std::string_view text, const SymbolResolver& resolve) {
    return ValueReader(text, resolve).read();
}

SymbolResolver module_resolver(const SymbolTable& symbols, const std::string& module,
                               const std::vector<std::string>& imports) {
    return [&symbols, module, imports](const std::string& label) -> std::optional<Symbol> {
        auto q = symbols.lookup_constructor(module, imports, label);
        if (!q) return std::nullopt;
        return symbol_of(symbols, *q);
    };
}

// ---------------------------------------------------------------------------
// Writing

namespace {

json type_json(const TypeExpr& t) {
    if (t.is_var) return {{"var", t.var}};
    json args = json::array();
    for (const auto& a : t.args) args.push_back(type_json(a));
    return {{"con", t.con.str()}, {"args", args}};
}

TypeExpr type_from_json(const json& j) {
    TypeExpr t;
    if (j.contains("var")) {
        t.is_var = true;
        t.var = j.at("var").get<std::string>();
        return t;
    }
    auto con = j.at("con").get<std::string>();
    auto dot = con.find('.');
    t.con = dot == std::string::npos ? QName{"", con} : QName{con.substr(0, dot), con.substr(dot + 1)};
    for (const auto& a : j.at("args")) t.args.push_back(type_from_json(a));
    return t;
}

json values_json(const std::vector<AbstractValue>& vs) {
    json out = json::array();
    for (const auto& v : vs) out.push_back(v.str());
    return out;
}

json calltype_json(const CallType& ct) {
    if (ct.failing) return "failing";
    return values_json(ct.args);
}

json inout_json(const InOutType& io) {
    json out = json::array();
    for (const auto& e : io) out.push_back({{"args", values_json(e.args)}, {"result", e.result.str()}});
    return out;
}

std::string visibility_name(Visibility v) { return v == Visibility::Public ? "public" : "private"; }

json requirement_json(const Requirement& q) {
    return {{"variable", q.variable},
            {"required", q.required.str()},
            {"site",
             {{"function", q.site.function.name},
              {"callee", q.site.callee.str()},
              {"line", q.site.pos.line},
              {"column", q.site.pos.column}}}};
}

}  // namespace

json interface_json(const CoreProgram& program, const AnalysisResult& result) {
    json j;
    j["module"] = program.module;
    j["domain"] = {{"kind", "depthk"}, {"k", result.domain.k}};
    j["imports"] = program.imports;
    json data = json::array();
    for (const auto& d : program.data) {
        json ctors = json::array();
        for (const auto& c : d.constructors) {
            json cj = {{"name", c.name.name}, {"arity", c.arity}};
            if (c.fields) {
                json fields = json::array();
                for (const auto& f : *c.fields) fields.push_back(type_json(f));
                cj["fields"] = fields;
            }
            ctors.push_back(cj);
        }
        data.push_back({{"name", d.name.name}, {"params", d.params}, {"constructors", ctors}});
    }
    j["data"] = data;
    json functions = json::object();
    for (const auto& f : result.functions) {
        functions[f.name.name] = {
            {"arity", f.arity},
            {"visibility", visibility_name(f.visibility)},
            {"external", f.external},
            {"calltype", calltype_json(f.calltype)},
            {"inout", inout_json(f.inout)},
            {"resultvalue", f.result.str()},
        };
    }
    j["functions"] = functions;
    return j;
}

json summary_json(const Summary& s) {
    auto pa = [](const PublicAll& p) { return json{{"public", p.public_count}, {"all", p.all}}; };
    return {
        {"operations", pa(s.operations)},
        {"nontrivial_inout", pa(s.nontrivial_inout)},
        {"initial_nontrivial_calltypes", pa(s.initial_nontrivial)},
        {"final_nontrivial_calltypes", pa(s.final_nontrivial)},
        {"final_failing", pa(s.final_failing)},
        {"iterations", s.iterations},
        {"time_ms", s.time_ms},
    };
}

json report_json(const CoreProgram& program, const AnalysisResult& result) {
    json j = interface_json(program, result);
    for (const auto& f : result.functions) {
        auto& fj = j["functions"][f.name.name];
        fj["status"] = status_name(f.status);
        fj["initial_calltype"] = calltype_json(f.initial);
        if (f.status == Status::Failing) {
            json reqs = json::array();
            for (const auto& q : f.requirements) reqs.push_back(requirement_json(q));
            fj["requirements"] = reqs;
            fj["reason"] = f.reason;
        }
    }
    json results = json::object(), inouts = json::object();
    for (const auto& f : result.functions) {
        results[f.name.name] = f.result.str();
        inouts[f.name.name] = inout_json(f.inout);
    }
    j["result_values"] = results;
    j["inout_types"] = inouts;
    j["iterations"] = result.iterations;
    j["summary"] = summary_json(result.summary);
    j["diagnostics"] = result.diagnostics;
    return j;
}

// ---------------------------------------------------------------------------
// Reading

InterfaceHeader interface_header(const json& j) {
    try {
        InterfaceHeader h;
        h.module = j.at("module").get<std::string>();
        h.imports = j.value("imports", std::vector<std::string>{});
        h.signature.module = h.module;
        for (const auto& dj : j.value("data", json::array())) {
            DataDecl d;
            d.name = {h.module, dj.at("name").get<std::string>()};
            d.params = dj.value("params", std::vector<std::string>{});
            for (const auto& cj : dj.at("constructors")) {
                ConstructorDecl c;
                c.name = {h.module, cj.at("name").get<std::string>()};
                c.arity = cj.at("arity").get<int>();
                if (cj.contains("fields")) {
                    std::vector<TypeExpr> fields;
                    for (const auto& f : cj.at("fields")) fields.push_back(type_from_json(f));
                    c.fields = std::move(fields);
                }
                d.constructors.push_back(std::move(c));
            }
            h.signature.data.push_back(std::move(d));
        }
        for (const auto& [name, fj] : j.at("functions").items()) {
            FuncSig s;
            s.name = {h.module, name};
            s.arity = fj.at("arity").get<int>();
            s.visibility = fj.value("visibility", "public") == "private" ? Visibility::Private : Visibility::Public;
            s.external = fj.value("external", false);
            h.signature.functions.push_back(s);
        }
        return h;
    } catch (const json::exception& e) {
        throw InterfaceError(std::string("malformed interface file: ") + e.what());
    }
}

Tables interface_tables(const json& j, const SymbolTable& symbols, const DomainConfig& domain) {
    try {
        auto module = j.at("module").get<std::string>();
        const auto& dj = j.at("domain");
        auto kind = dj.at("kind").get<std::string>();
        int k = dj.at("k").get<int>();
        if (kind != "depthk" || k != domain.k)
            throw InterfaceError("interface of " + module + " was written for domain " + kind + " k=" +
                                 std::to_string(k) + ", current domain is depthk k=" + std::to_string(domain.k));
        auto resolve = module_resolver(symbols, module, j.value("imports", std::vector<std::string>{}));
        auto value = [&](const json& v) { return parse_abstract_value(v.get<std::string>(), resolve); };
        Tables t;
        for (const auto& [name, fj] : j.at("functions").items()) {
            QName q{module, name};
            int arity = fj.at("arity").get<int>();
            const auto& ctj = fj.at("calltype");
            CallType ct;
            if (ctj.is_string()) {
                if (ctj.get<std::string>() != "failing") throw InterfaceError("bad call type of " + name);
                ct = CallType::fail();
            } else {
                for (const auto& a : ctj) ct.args.push_back(value(a));
                if (static_cast<int>(ct.args.size()) != arity) throw InterfaceError("call type arity of " + name);
            }
            InOutType io;
            for (const auto& ej : fj.at("inout")) {
                IOEntry e;
                for (const auto& a : ej.at("args")) e.args.push_back(value(a));
                if (static_cast<int>(e.args.size()) != arity) throw InterfaceError("in/out arity of " + name);
                e.result = value(ej.at("result"));
                io.push_back(std::move(e));
            }
            t.calltype[q] = std::move(ct);
            t.inout[q] = normalize_io(std::move(io));
            t.result[q] = value(fj.at("resultvalue"));
        }
        return t;
    } catch (const json::exception& e) {
        throw InterfaceError(std::string("malformed interface file: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Text

std::string summary_row(const Summary& s) {
    auto pa = [](const PublicAll& p) { return std::to_string(p.public_count) + "/" + std::to_string(p.all); };
    std::ostringstream out;
    out << "operations: " << pa(s.operations) << "  non-trivial in/out: " << pa(s.nontrivial_inout)
        << "  initial non-trivial: " << pa(s.initial_nontrivial) << "  final non-trivial: " << pa(s.final_nontrivial)
        << "  final failing: " << pa(s.final_failing) << "  time: " << std::fixed << std::setprecision(1) << s.time_ms
        << " ms  iterations: " << s.iterations;
    return out.str();
}

std::string render_text(const AnalysisResult& result) {
    std::ostringstream out;
    out << "module " << result.module << " (depth " << result.domain.k << ")\n";
    std::size_t width = 0;
    for (const auto& f : result.functions) {
        width = std::max(width, f.name.name.size() + 1 + std::to_string(f.arity).size());
    }
    for (const auto& f : result.functions) {
        auto head = f.name.name + "/" + std::to_string(f.arity);
        out << "  " << std::left << std::setw(static_cast<int>(width)) << head << "  " << std::setw(8)
            << status_name(f.status) << "  " << f.calltype.str();
        if (f.status == Status::Refined) out << "  (initially " << f.initial.str() << ")";
        out << "\n";
    }
    for (const auto& f : result.functions) {
        if (f.status != Status::Failing) continue;
        out << "failing " << f.name.name << ": " << f.reason << "\n";
        for (const auto& q : f.requirements) {
            out << "  requires " << q.variable << " in " << q.required.str() << " for " << q.site.callee.name << " at "
                << q.site.pos.line << ":" << q.site.pos.column << "\n";
        }
    }
    for (const auto& d : result.diagnostics) out << "warning: " << d << "\n";
    out << summary_row(result.summary) << "\n";
    return out.str();
}

}  // namespace nonfail
