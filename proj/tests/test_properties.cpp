#include <doctest.h>

#include "support.hpp"

using namespace nftest;

TEST_CASE("lattice laws hold at several depths") {
    for (int k : {1, 2, 3}) {
        for (const auto& r : lattice_laws(1000, k, 0x5eed + k)) {
            CAPTURE(k);
            CAPTURE(r.law);
            CAPTURE(r.example);
            CHECK(r.violations == 0);
        }
    }
}

TEST_CASE("collapse_complete only widens") {
    Universe u;
    for (int k : {1, 2}) {
        ValueGen g(u, k, 77 + k);
        for (int i = 0; i < 2000; ++i) {
            auto a = g.any_type_value();
            auto c = collapse_complete(a, u.symbols);
            CAPTURE(a.str());
            CHECK(leq(a, c));
            if (!c.is_any()) CHECK(c == a);
        }
    }
}

TEST_CASE("result values cover every computed value") {
    auto run = analyze_corpus();
    auto s = make_oracle(run.ws, 2000);
    int observed = 0;
    run_with_large_stack([&] {
        for (const auto& m : run.ws.modules) {
            for (const auto& f : m->result.functions) {
                if (f.external) continue;
                auto types = s.oracle->param_types(f.name);
                std::vector<std::vector<DataTerm>> domains;
                bool empty = false;
                for (const auto& t : types) {
                    domains.push_back(s.oracle->terms().up_to(t, 2));
                    empty = empty || domains.back().empty();
                }
                if (empty) continue;
                std::vector<std::size_t> idx(types.size(), 0);
                while (true) {
                    std::vector<DataTerm> args;
                    for (std::size_t i = 0; i < idx.size(); ++i) args.push_back(domains[i][idx[i]]);
                    for (const auto& o : s.oracle->call(f.name, args)) {
                        if (o.kind != Outcome::Kind::Value) continue;
                        ++observed;
                        if (!member(o.value, f.result)) {
                            FAIL_CHECK(f.name.str() << " computed " << o.value.str() << " outside " << f.result.str());
                        }
                    }
                    std::size_t i = 0;
                    while (i < idx.size() && ++idx[i] == domains[i].size()) idx[i++] = 0;
                    if (i == idx.size()) break;
                }
            }
        }
    });
    CHECK(observed > 100);
}
