#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace nftest;

namespace {

DataTerm c(const QName& name, std::vector<DataTerm> args = {}) { return DataTerm::constructor(name, std::move(args)); }
DataTerm nil() { return c(builtin::Nil); }
DataTerm tt() { return c(builtin::True); }
DataTerm ff() { return c(builtin::False); }
DataTerm one(DataTerm x) { return c(builtin::Cons, {std::move(x), nil()}); }

std::vector<Outcome::Kind> kinds(const std::vector<Outcome>& os) {
    std::vector<Outcome::Kind> out;
    for (const auto& o : os) out.push_back(o.kind);
    return out;
}

std::vector<DataTerm> values(const std::vector<Outcome>& os) {
    std::vector<DataTerm> out;
    for (const auto& o : os)
        if (o.kind == Outcome::Kind::Value) out.push_back(o.value);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

TEST_CASE("concrete evaluation of the small examples") {
    auto run = analyze_corpus();
    auto s = make_oracle(run.ws, 200);
    auto& o = *s.oracle;

    CHECK(kinds(o.call({"Mini", "head"}, {nil()})) == std::vector{Outcome::Kind::Failure});
    auto h = o.call({"Mini", "head"}, {one(tt())});
    REQUIRE(h.size() == 1);
    CHECK(h[0].value == tt());
    CHECK(values(o.call({"MiniPrelude", "||"}, {tt(), ff()})) == std::vector{tt()});
    CHECK(values(o.call({"Mini", "last"}, {one(tt())})) == std::vector{tt()});
    CHECK(values(o.call({"Mini", "last"}, {c(builtin::Cons, {ff(), one(tt())})})) == std::vector{tt()});
    CHECK(kinds(o.call({"Mini", "loop"}, {})) == std::vector{Outcome::Kind::Cutoff});
    CHECK(values(o.call({"Mini", "k"}, {DataTerm::literal(Literal::integer(1))})) ==
          std::vector{DataTerm::literal(Literal::character('b'))});
    CHECK(kinds(o.call({"Mini", "k"}, {DataTerm::literal(Literal::integer(2))})) ==
          std::vector{Outcome::Kind::Failure});
}

TEST_CASE("free variables and choices give every value") {
    auto ws = analyze_texts({"(module M (func c 0 (rule () (or (cons True) (cons False))))"
                             " (func g 0 (rule () (free (b) (case b ((True) (cons Nil)) ((False) failed))))))"});
    auto s = make_oracle(ws, 50);
    CHECK(values(s.oracle->call({"M", "c"}, {})) == std::vector{ff(), tt()});
    auto g = s.oracle->call({"M", "g"}, {});
    CHECK(values(g) == std::vector{nil()});
    CHECK(std::count_if(g.begin(), g.end(), [](const Outcome& x) { return x.kind == Outcome::Kind::Failure; }) == 1);
}

TEST_CASE("integer builtins") {
    auto run = analyze_corpus();
    auto s = make_oracle(run.ws, 50);
    auto i = [](int v) { return DataTerm::literal(Literal::integer(v)); };
    CHECK(values(s.oracle->call({"MiniPrelude", "div"}, {i(-7), i(2)})) == std::vector{i(-4)});
    CHECK(kinds(s.oracle->call({"MiniPrelude", "div"}, {i(1), i(0)})) == std::vector{Outcome::Kind::Failure});
    CHECK(values(s.oracle->call({"MiniPrelude", "<="}, {i(2), i(2)})) == std::vector{tt()});
    CHECK(values(s.oracle->call({"MiniPrelude", "=="}, {nil(), one(tt())})) == std::vector{ff()});
}

TEST_CASE("error is reported separately unless it counts as failure") {
    auto run = analyze_corpus();
    auto lenient = make_oracle(run.ws, 50, 3, false);
    CHECK(kinds(lenient.oracle->call({"Errors", "headE"}, {nil()})) == std::vector{Outcome::Kind::Error});
    auto strict = make_oracle(run.ws, 50, 3, true);
    CHECK(kinds(strict.oracle->call({"Errors", "headE"}, {nil()})) == std::vector{Outcome::Kind::Failure});
}

TEST_CASE("higher-order arguments come from the function pool") {
    auto run = analyze_corpus();
    auto s = make_oracle(run.ws, 500);
    auto types = s.oracle->param_types({"Split", "split"});
    REQUIRE(types.size() == 2);
    CHECK(types[0].is_arrow());
    auto args = s.oracle->terms().up_to(types[0], 1);
    REQUIRE(!args.empty());
    for (const auto& f : args) CHECK(f.kind == DataTerm::Kind::Function);
}

TEST_CASE("a larger budget only adds values") {
    auto run = analyze_corpus();
    std::vector<DataTerm> bs = {nil(), one(tt()), c(builtin::Cons, {ff(), one(tt())}),
                                c(builtin::Cons, {tt(), c(builtin::Cons, {ff(), one(tt())})})};
    for (long budget : {1L, 2L, 4L, 8L}) {
        auto small = make_oracle(run.ws, budget);
        auto large = make_oracle(run.ws, budget * 2);
        for (const auto& xs : bs) {
            for (const char* f : {"reverse", "length", "last", "init"}) {
                CAPTURE(f);
                auto a = values(small.oracle->call({"MiniPrelude", f}, {xs}));
                auto b = values(large.oracle->call({"MiniPrelude", f}, {xs}));
                CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
            }
        }
    }
}

TEST_CASE("evaluation is deterministic") {
    auto run = analyze_corpus();
    auto a = make_oracle(run.ws, 300);
    auto b = make_oracle(run.ws, 300);
    auto xs = c(builtin::Cons, {ff(), one(tt())});
    std::vector<std::pair<std::string, DataTerm>> calls = {
        {"reverse", xs}, {"maximumBool", xs}, {"concat", one(xs)}, {"heads", one(xs)}};
    for (const auto& [f, arg] : calls) {
        CAPTURE(f);
        auto x = a.oracle->call({"MiniPrelude", f}, {arg});
        auto y = b.oracle->call({"MiniPrelude", f}, {arg});
        CHECK(x == y);
    }
}

TEST_CASE("oracle sweeps find planted errors") {
    auto run = analyze_corpus();
    auto s = make_oracle(run.ws, 1000);
    Universe u;
    OracleVerdict bad, good, io;
    run_with_large_stack([&] {
        bad = check_calltype_oracle(*s.oracle, {"Mini", "head"}, CallType::trivial(1), 3);
        good = check_calltype_oracle(*s.oracle, {"Mini", "head"}, run.fn("Mini", "head").calltype, 3);
        // null claimed to return only True.
        InOutType wrong{{{AbstractValue::any()}, u.value("{True}")}};
        io = check_inout_oracle(*s.oracle, {"Mini", "null"}, wrong, 3);
    });
    REQUIRE(bad.counterexamples.size() == 1);
    CHECK(bad.counterexamples[0].args == std::vector{nil()});
    CHECK(good.pass());
    CHECK(good.tuples == 2);
    CHECK(!io.pass());
    REQUIRE(io.counterexamples[0].value);
    CHECK(*io.counterexamples[0].value == ff());
    CHECK_THROWS(check_calltype_oracle(*s.oracle, {"Mini", "hdfree"}, CallType::fail(), 3));
}
