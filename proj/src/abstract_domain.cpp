#include "nonfail/abstract_domain.hpp"

#include <algorithm>
#include <stdexcept>

#include "nonfail/symbols.hpp"

namespace nonfail {

Symbol Symbol::constructor(QName name, QName type, int arity) {
    return {Kind::Constructor, std::move(name), {}, std::move(type), arity};
}

Symbol Symbol::literal(Literal l) { return {Kind::Literal, {}, l, literal_type(l), 0}; }

std::string Symbol::label() const { return kind == Kind::Literal ? lit.label() : name.name; }

std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
    if (auto c = a.label() <=> b.label(); c != 0) return c;
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.name <=> b.name; c != 0) return c;
    return a.lit <=> b.lit;
}

bool operator==(const Symbol& a, const Symbol& b) {
    return a.kind == b.kind && a.name == b.name && (a.kind != Symbol::Kind::Literal || a.lit == b.lit);
}

Symbol symbol_of(const SymbolTable& symbols, const QName& ctor) {
    const auto* info = symbols.constructor(ctor);
    if (info == nullptr) throw std::out_of_range("unknown constructor " + ctor.str());
    return Symbol::constructor(info->name, info->type, info->arity);
}

// ---------------------------------------------------------------------------

namespace {
const std::vector<Shape> kNoShapes;
}

AbstractValue AbstractValue::any() {
    AbstractValue v;
    v.kind_ = Kind::Any;
    return v;
}

const std::vector<Shape>& AbstractValue::shapes() const { return shapes_ ? *shapes_ : kNoShapes; }

AbstractValue AbstractValue::of(std::vector<Shape> shapes) {
    std::vector<Shape> kept;
    for (auto& s : shapes) {
        if (std::any_of(s.children.begin(), s.children.end(), [](const AbstractValue& c) { return c.is_bottom(); }))
            continue;
        if (!kept.empty() && kept.front().head.type != s.head.type) return any();
        kept.push_back(std::move(s));
    }
    if (kept.empty()) return bottom();
    std::sort(kept.begin(), kept.end(), [](const Shape& a, const Shape& b) { return a.head < b.head; });
    std::vector<Shape> merged;
    for (auto& s : kept) {
        if (!merged.empty() && merged.back().head == s.head) {
            auto& m = merged.back();
            for (std::size_t i = 0; i < m.children.size(); ++i) m.children[i] = lub(m.children[i], s.children[i]);
        } else {
            merged.push_back(std::move(s));
        }
    }
    AbstractValue v;
    v.kind_ = Kind::Shapes;
    v.shapes_ = std::make_shared<const std::vector<Shape>>(std::move(merged));
    return v;
}

std::string AbstractValue::str() const {
    switch (kind_) {
    case Kind::Bottom: return "{}";
    case Kind::Any: return "_";
    case Kind::Shapes: break;
    }
    std::string out = "{";
    bool first = true;
    for (const auto& s : *shapes_) {
        if (!first) out += ",";
        first = false;
        out += s.head.label();
        if (!s.children.empty()) {
            out += "(";
            for (std::size_t i = 0; i < s.children.size(); ++i) {
                if (i) out += ",";
                out += s.children[i].str();
            }
            out += ")";
        }
    }
    return out + "}";
}

bool operator==(const AbstractValue& a, const AbstractValue& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ != AbstractValue::Kind::Shapes) return true;
    return a.shapes_ == b.shapes_ || *a.shapes_ == *b.shapes_;
}

std::strong_ordering operator<=>(const AbstractValue& a, const AbstractValue& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (a.kind_ != AbstractValue::Kind::Shapes) return std::strong_ordering::equal;
    return std::lexicographical_compare_three_way(a.shapes_->begin(), a.shapes_->end(), b.shapes_->begin(),
                                                  b.shapes_->end());
}

std::strong_ordering operator<=>(const Shape& a, const Shape& b) {
    if (auto c = a.head <=> b.head; c != 0) return c;
    return std::lexicographical_compare_three_way(a.children.begin(), a.children.end(), b.children.begin(),
                                                  b.children.end());
}

namespace {

const Shape* find_shape(const AbstractValue& a, const Symbol& head) {
    for (const auto& s : a.shapes()) {
        if (s.head == head) return &s;
    }
    return nullptr;
}

}  // namespace

bool leq(const AbstractValue& a, const AbstractValue& b) {
    if (a.is_bottom() || b.is_any()) return true;
    if (a.is_any() || b.is_bottom()) return false;
    for (const auto& s : a.shapes()) {
        const auto* t = find_shape(b, s.head);
        if (t == nullptr) return false;
        for (std::size_t i = 0; i < s.children.size(); ++i) {
            if (!leq(s.children[i], t->children[i])) return false;
        }
    }
    return true;
}

AbstractValue lub(const AbstractValue& a, const AbstractValue& b) {
    if (a.is_bottom() || b.is_any()) return b;
    if (b.is_bottom() || a.is_any()) return a;
    std::vector<Shape> all = a.shapes();
    all.insert(all.end(), b.shapes().begin(), b.shapes().end());
    return AbstractValue::of(std::move(all));
}

AbstractValue glb(const AbstractValue& a, const AbstractValue& b) {
    if (a.is_bottom() || b.is_any()) return a;
    if (b.is_bottom() || a.is_any()) return b;
    std::vector<Shape> out;
    for (const auto& s : a.shapes()) {
        const auto* t = find_shape(b, s.head);
        if (t == nullptr) continue;
        Shape m{s.head, {}};
        for (std::size_t i = 0; i < s.children.size(); ++i) m.children.push_back(glb(s.children[i], t->children[i]));
        out.push_back(std::move(m));
    }
    return AbstractValue::of(std::move(out));
}

int depth(const AbstractValue& a) {
    int d = 0;
    for (const auto& s : a.shapes()) {
        int c = 0;
        for (const auto& ch : s.children) c = std::max(c, depth(ch));
        d = std::max(d, 1 + c);
    }
    return d;
}

// ---------------------------------------------------------------------------

DataTerm DataTerm::constructor(QName c, std::vector<DataTerm> args) {
    return {Kind::Constructor, std::move(c), {}, std::move(args)};
}
DataTerm DataTerm::literal(Literal l) { return {Kind::Literal, {}, l, {}}; }
DataTerm DataTerm::function(QName f, std::vector<DataTerm> captured) {
    return {Kind::Function, std::move(f), {}, std::move(captured)};
}

std::strong_ordering operator<=>(const DataTerm& a, const DataTerm& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.name <=> b.name; c != 0) return c;
    if (auto c = a.lit <=> b.lit; c != 0) return c;
    return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
}

int DataTerm::size() const {
    int n = 1;
    for (const auto& a : args) n += a.size();
    return n;
}

std::string DataTerm::ir() const {
    switch (kind) {
    case Kind::Literal:
        if (lit.kind == Literal::Kind::Int) return "(lit int " + std::to_string(lit.value) + ")";
        return "(lit char \"" + encode_utf8(lit.value) + "\")";
    case Kind::Constructor:
    case Kind::Function: {
        std::string out = kind == Kind::Constructor ? "(cons " : "(call ";
        out += name.name;
        for (const auto& a : args) out += " " + a.ir();
        return out + ")";
    }
    }
    return {};
}

std::string DataTerm::str() const {
    if (kind == Kind::Literal) return lit.label();
    std::string out = name.name;
    if (kind == Kind::Function) out = "<" + out + ">";
    if (args.empty()) return out;
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i].str();
    return out + ")";
}

bool member(const DataTerm& t, const AbstractValue& a) {
    if (a.is_any()) return true;
    if (a.is_bottom() || t.kind == DataTerm::Kind::Function) return false;
    for (const auto& s : a.shapes()) {
        if (t.kind == DataTerm::Kind::Literal) {
            if (s.head.kind == Symbol::Kind::Literal && s.head.lit == t.lit) return true;
            continue;
        }
        if (s.head.kind != Symbol::Kind::Constructor || s.head.name != t.name) continue;
        if (s.children.size() != t.args.size()) return false;
        for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (!member(t.args[i], s.children[i])) return false;
        }
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------

DepthKDomain::DepthKDomain(DomainConfig cfg) : cfg_(cfg) {
    if (cfg_.k < 1) throw std::invalid_argument("depth k must be at least 1");
    if (cfg_.literal_widen_cap < 1) throw std::invalid_argument("literal widening cap must be positive");
}

AbstractValue DepthKDomain::cut(const AbstractValue& a, int d) const {
    if (a.kind() != AbstractValue::Kind::Shapes) return a;
    if (d <= 0) return AbstractValue::any();
    std::vector<Shape> out;
    for (const auto& s : a.shapes()) {
        Shape c{s.head, {}};
        for (const auto& ch : s.children) c.children.push_back(cut(ch, d - 1));
        out.push_back(std::move(c));
    }
    return AbstractValue::of(std::move(out));
}

AbstractValue DepthKDomain::cons(const Symbol& c, const std::vector<AbstractValue>& args) const {
    if (static_cast<int>(args.size()) != c.arity)
        throw std::invalid_argument("constructor " + c.label() + " applied to " + std::to_string(args.size()) +
                                    " arguments, arity " + std::to_string(c.arity));
    Shape s{c, {}};
    for (const auto& a : args) {
        if (a.is_bottom()) return AbstractValue::bottom();
        s.children.push_back(cut(a, cfg_.k - 1));
    }
    return AbstractValue::of({std::move(s)});
}

AbstractValue DepthKDomain::cons_top(const Symbol& c) const {
    return cons(c, std::vector<AbstractValue>(c.arity, AbstractValue::any()));
}

AbstractValue DepthKDomain::literal(const Literal& l) const { return cons(Symbol::literal(l), {}); }

AbstractValue DepthKDomain::widen_literals(const AbstractValue& a) const {
    if (a.kind() != AbstractValue::Kind::Shapes) return a;
    const auto& shapes = a.shapes();
    if (shapes.front().head.kind == Symbol::Kind::Literal) {
        return static_cast<int>(shapes.size()) > cfg_.literal_widen_cap ? AbstractValue::any() : a;
    }
    std::vector<Shape> out;
    for (const auto& s : shapes) {
        Shape w{s.head, {}};
        for (const auto& ch : s.children) w.children.push_back(widen_literals(ch));
        out.push_back(std::move(w));
    }
    return AbstractValue::of(std::move(out));
}

}  // namespace nonfail
