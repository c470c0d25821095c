#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nftest {

std::string corpus_path(const std::string& file) { return std::string(NONFAIL_CORPUS_DIR) + "/" + file; }

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::vector<std::string>& corpus_modules() {
    static const std::vector<std::string> names = {"Mini", "Split", "Errors", "MiniPrelude", "ListUser"};
    return names;
}

const AnalyzedModule& CorpusRun::module(const std::string& name) const {
    const auto* m = ws.find(name);
    if (!m) throw std::runtime_error("module not loaded: " + name);
    return *m;
}

const FunctionResult& CorpusRun::fn(const std::string& module_name, const std::string& name) const {
    const auto* f = module(module_name).result.find(name);
    if (!f) throw std::runtime_error("no function " + module_name + "." + name);
    return *f;
}

CorpusRun analyze_corpus(int k, bool error_as_failure, bool reverse_order) {
    DriverOptions o;
    o.domain.k = k;
    o.builtins.error_as_failure = error_as_failure;
    o.analysis.reverse_order = reverse_order;
    std::vector<SourceFile> files;
    for (const auto& m : corpus_modules()) {
        auto path = corpus_path(m + ".fcir");
        files.push_back({path, read_text(path)});
    }
    return CorpusRun{analyze_workspace(files, o)};
}

Workspace analyze_texts(const std::vector<std::string>& texts, const DriverOptions& options) {
    std::vector<SourceFile> files;
    for (std::size_t i = 0; i < texts.size(); ++i) files.push_back({"mem" + std::to_string(i) + ".fcir", texts[i]});
    return analyze_workspace(files, options);
}

OracleSetup make_oracle(const Workspace& ws, long step_budget, int free_term_size, bool error_as_failure) {
    OracleSetup s;
    s.types = std::make_unique<ProgramTypes>(*ws.symbols);
    std::vector<Literal> extra;
    for (const auto* p : ws.programs()) {
        s.types->infer(*p);
        auto l = literals_of(*p);
        extra.insert(extra.end(), l.begin(), l.end());
    }
    EvalConfig cfg;
    cfg.step_budget = step_budget;
    cfg.free_term_size = free_term_size;
    cfg.literal_pool = literal_pool(extra);
    cfg.error_as_failure = error_as_failure;
    s.oracle = std::make_unique<Oracle>(*ws.symbols, ws.programs(), *s.types, cfg,
                                        make_function_pool(*s.types, ws.programs(), ws.facts.calltype));
    return s;
}

Universe::Universe() {
    program = load_program(
        "(module U (data Maybe (Nothing 0) (Just 1 a)) (data Pair (Pair 2 a b)))", symbols);
}

Symbol Universe::ctor(const std::string& name) const {
    for (const std::string& m : {std::string("U"), kBuiltinModule}) {
        if (symbols.constructor({m, name})) return symbol_of(symbols, {m, name});
    }
    throw std::runtime_error("unknown constructor " + name);
}

AbstractValue Universe::value(std::string_view text) const {
    return parse_abstract_value(text, module_resolver(symbols, "U", {}));
}

std::vector<Type> Universe::types() const {
    auto b = Type::constructor(builtin::Bool);
    auto i = Type::constructor(builtin::Int);
    auto list = [](Type t) { return Type::constructor(builtin::List, {std::move(t)}); };
    auto maybe = [](Type t) { return Type::constructor({"U", "Maybe"}, {std::move(t)}); };
    auto pair = [](Type a, Type c) { return Type::constructor({"U", "Pair"}, {std::move(a), std::move(c)}); };
    return {b, list(b), maybe(list(b)), pair(b, maybe(b)), i, list(i), list(list(b))};
}

ValueGen::ValueGen(const Universe& u, int k, std::uint64_t seed) : u_(u), domain_(DomainConfig{k, 16}), rng_(seed) {}

Type ValueGen::random_type() {
    auto ts = u_.types();
    return ts[std::uniform_int_distribution<std::size_t>(0, ts.size() - 1)(rng_)];
}

AbstractValue ValueGen::shapes(const Type& t, int depth) {
    std::uniform_int_distribution<int> pct(0, 99);
    int roll = pct(rng_);
    if (depth <= 0 || roll < 15) return AbstractValue::any();
    // Bottom is rare below the top: one Bottom child empties the shape.
    if (roll < (depth == domain_.config().k ? 22 : 17)) return AbstractValue::bottom();
    std::vector<Shape> out;
    if (t.con == builtin::Int) {
        for (int v = -1; v <= 2; ++v) {
            if (pct(rng_) < 40) out.push_back({Symbol::literal(Literal::integer(v)), {}});
        }
        if (out.empty()) out.push_back({Symbol::literal(Literal::integer(0)), {}});
        return AbstractValue::of(std::move(out));
    }
    TermEnumerator te(u_.symbols, literal_pool());
    auto ctors = u_.symbols.constructors_of(t.con);
    std::size_t forced = std::uniform_int_distribution<std::size_t>(0, ctors.size() - 1)(rng_);
    for (std::size_t i = 0; i < ctors.size(); ++i) {
        const auto* c = ctors[i];
        if (i != forced && pct(rng_) < 50) continue;
        Shape s{symbol_of(u_.symbols, c->name), {}};
        for (const auto& ft : te.field_types(*c, t)) s.children.push_back(shapes(ft, depth - 1));
        out.push_back(std::move(s));
    }
    return AbstractValue::of(std::move(out));
}

AbstractValue ValueGen::value(const Type& t) { return domain_.cut(shapes(t, domain_.config().k), domain_.config().k); }

AbstractValue ValueGen::any_type_value() { return value(random_type()); }

std::pair<AbstractValue, AbstractValue> ValueGen::pair() {
    auto t = random_type();
    auto a = value(t);
    // One pair in ten mixes types.
    auto b = std::uniform_int_distribution<int>(0, 9)(rng_) == 0 ? any_type_value() : value(t);
    return {a, b};
}

namespace {

class LawTable {
public:
    explicit LawTable(int cases) : cases_(cases) {}

    template <class Fn>
    void run(const std::string& law, Fn&& holds) {
        LawResult r{law, cases_, 0, {}};
        for (int i = 0; i < cases_; ++i) {
            std::string why;
            if (!holds(why)) {
                if (r.violations++ == 0) r.example = why;
            }
        }
        out_.push_back(std::move(r));
    }

    std::vector<LawResult> take() { return std::move(out_); }

private:
    int cases_;
    std::vector<LawResult> out_;
};

std::string show(std::initializer_list<AbstractValue> vs) {
    std::string s;
    for (const auto& v : vs) s += (s.empty() ? "" : "  ") + v.str();
    return s;
}

}  // namespace

std::vector<LawResult> lattice_laws(int cases_per_law, int k, std::uint64_t seed) {
    Universe u;
    ValueGen g(u, k, seed);
    DepthKDomain d({k, 16});
    TermEnumerator te(u.symbols, literal_pool());
    LawTable table(cases_per_law);

    table.run("reflexive", [&](std::string& why) {
        auto a = g.any_type_value();
        why = show({a});
        return leq(a, a);
    });
    table.run("antisymmetric", [&](std::string& why) {
        auto [a, b] = g.pair();
        why = show({a, b});
        return !(leq(a, b) && leq(b, a)) || a == b;
    });
    table.run("transitive", [&](std::string& why) {
        auto t = g.random_type();
        auto b = g.value(t);
        auto a = glb(b, g.value(t));
        auto c = lub(b, g.value(t));
        why = show({a, b, c});
        return leq(a, c);
    });
    table.run("lub is an upper bound", [&](std::string& why) {
        auto [a, b] = g.pair();
        auto j = lub(a, b);
        why = show({a, b, j});
        return leq(a, j) && leq(b, j);
    });
    table.run("lub is least", [&](std::string& why) {
        auto t = g.random_type();
        auto a = g.value(t), b = g.value(t), c = g.value(t);
        why = show({a, b, c});
        return !(leq(a, c) && leq(b, c)) || leq(lub(a, b), c);
    });
    table.run("glb is a lower bound", [&](std::string& why) {
        auto [a, b] = g.pair();
        auto m = glb(a, b);
        why = show({a, b, m});
        return leq(m, a) && leq(m, b);
    });
    table.run("glb is greatest", [&](std::string& why) {
        auto t = g.random_type();
        auto a = g.value(t), b = g.value(t), c = g.value(t);
        why = show({a, b, c});
        return !(leq(c, a) && leq(c, b)) || leq(c, glb(a, b));
    });
    table.run("commutative", [&](std::string& why) {
        auto [a, b] = g.pair();
        why = show({a, b});
        return lub(a, b) == lub(b, a) && glb(a, b) == glb(b, a);
    });
    table.run("associative", [&](std::string& why) {
        auto t = g.random_type();
        auto a = g.value(t), b = g.value(t), c = g.value(t);
        why = show({a, b, c});
        return lub(lub(a, b), c) == lub(a, lub(b, c)) && glb(glb(a, b), c) == glb(a, glb(b, c));
    });
    table.run("idempotent", [&](std::string& why) {
        auto a = g.any_type_value();
        why = show({a});
        return lub(a, a) == a && glb(a, a) == a;
    });
    table.run("absorption", [&](std::string& why) {
        auto [a, b] = g.pair();
        why = show({a, b});
        return lub(a, glb(a, b)) == a && glb(a, lub(a, b)) == a;
    });
    table.run("bottom and top", [&](std::string& why) {
        auto a = g.any_type_value();
        why = show({a});
        return leq(AbstractValue::bottom(), a) && leq(a, AbstractValue::any()) &&
               lub(a, AbstractValue::bottom()) == a && glb(a, AbstractValue::any()) == a;
    });
    table.run("order agrees with membership", [&](std::string& why) {
        auto t = g.random_type();
        auto a = g.value(t), b = g.value(t);
        why = show({a, b});
        if (!leq(a, b)) return true;
        for (const auto& x : te.up_to(t, 3))
            if (member(x, a) && !member(x, b)) return why += "  term " + x.str(), false;
        return true;
    });
    table.run("lub and glb agree with membership", [&](std::string& why) {
        auto t = g.random_type();
        auto a = g.value(t), b = g.value(t);
        auto j = lub(a, b), m = glb(a, b);
        why = show({a, b});
        for (const auto& x : te.up_to(t, 3)) {
            bool in_a = member(x, a), in_b = member(x, b);
            if ((in_a || in_b) && !member(x, j)) return why += "  lub misses " + x.str(), false;
            if ((in_a && in_b) != member(x, m)) return why += "  glb differs on " + x.str(), false;
        }
        return true;
    });
    table.run("cut keeps members", [&](std::string& why) {
        auto t = g.random_type();
        auto a = g.value(t);
        int depth = std::uniform_int_distribution<int>(0, k)(g.rng());
        auto c = d.cut(a, depth);
        why = show({a, c});
        if (!leq(a, c)) return false;
        for (const auto& x : te.up_to(t, 3))
            if (member(x, a) && !member(x, c)) return why += "  term " + x.str(), false;
        return true;
    });
    table.run("constructor application is sound", [&](std::string& why) {
        auto t = g.random_type();
        if (t.con == builtin::Int) {
            // Int: literals are nullary constructors.
            auto l = Literal::integer(std::uniform_int_distribution<int>(-2, 3)(g.rng()));
            why = l.label();
            return member(DataTerm::literal(l), d.literal(l));
        }
        auto ctors = u.symbols.constructors_of(t.con);
        const auto* c = ctors[std::uniform_int_distribution<std::size_t>(0, ctors.size() - 1)(g.rng())];
        auto fields = te.field_types(*c, t);
        std::vector<AbstractValue> args;
        std::vector<std::vector<DataTerm>> members;
        for (const auto& ft : fields) {
            args.push_back(g.value(ft));
            members.push_back(te.members(args.back(), ft, 3));
        }
        auto v = d.cons(symbol_of(u.symbols, c->name), args);
        why = c->name.name + " " + v.str();
        // Every combination of member arguments, odometer style.
        std::vector<std::size_t> idx(fields.size(), 0);
        for (const auto& m : members)
            if (m.empty()) return true;
        while (true) {
            std::vector<DataTerm> xs;
            for (std::size_t i = 0; i < idx.size(); ++i) xs.push_back(members[i][idx[i]]);
            auto term = DataTerm::constructor(c->name, xs);
            if (!member(term, v)) return why += "  term " + term.str(), false;
            std::size_t i = 0;
            while (i < idx.size() && ++idx[i] == members[i].size()) idx[i++] = 0;
            if (i == idx.size()) return true;
        }
    });
    return table.take();
}

}  // namespace nftest
