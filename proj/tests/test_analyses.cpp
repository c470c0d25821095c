#include <doctest.h>

#include <set>

#include "nonfail/inout_analysis.hpp"
#include "nonfail/parser.hpp"
#include "nonfail/value_analysis.hpp"
#include "support.hpp"

using namespace nftest;

namespace {

std::set<std::string> entries(const InOutType& io) {
    std::set<std::string> out;
    for (const auto& e : io) out.insert(e.str());
    return out;
}

const FunctionResult& only(const Workspace& ws, const std::string& name) {
    const auto* f = ws.modules.back()->result.find(name);
    REQUIRE(f);
    return *f;
}

}  // namespace

TEST_CASE("result values of the small examples") {
    auto run = analyze_corpus();
    CHECK(run.fn("Mini", "loop").result.is_bottom());
    CHECK(run.fn("Mini", "null").result.str() == "{False,True}");
    CHECK(run.fn("Mini", "head").result.is_any());
    CHECK(run.fn("Mini", "k").result.str() == "{'a','b'}");
    CHECK(run.fn("Mini", "hdfree").result.is_any());
    CHECK(run.fn("MiniPrelude", "not").result.str() == "{False,True}");
    CHECK(run.fn("MiniPrelude", "singleton").result.str() == "{Cons(_,_)}");
    // The accumulator of reverse is a parameter, so nothing is known.
    CHECK(run.fn("MiniPrelude", "reverse").result.is_any());
    CHECK(run.fn("Split", "otherwise").result.str() == "{True}");
}

TEST_CASE("result values deepen with k") {
    auto ws = analyze_texts({"(module M (func two 0 (rule () (cons Cons (cons True) (cons Cons (cons False) (cons Nil))))))"},
                            [] {
                                DriverOptions o;
                                o.domain.k = 3;
                                return o;
                            }());
    CHECK(only(ws, "two").result.str() == "{Cons({True},{Cons({False},{Nil})})}");
}

TEST_CASE("in/out types of the small examples") {
    auto run = analyze_corpus();
    CHECK(entries(run.fn("Mini", "null").inout) ==
          std::set<std::string>{"({Nil}) -> {True}", "({Cons(_,_)}) -> {False}"});
    CHECK(entries(run.fn("Mini", "head").inout) == std::set<std::string>{"({Cons(_,_)}) -> _"});
    CHECK(entries(run.fn("Mini", "loop").inout) == std::set<std::string>{"() -> {}"});
    CHECK(entries(run.fn("Mini", "k").inout) == std::set<std::string>{"({0}) -> {'a'}", "({1}) -> {'b'}"});
    CHECK(entries(run.fn("Split", "split").inout) ==
          std::set<std::string>{"(_, {Nil}) -> {Cons(_,_)}", "(_, {Cons(_,_)}) -> {Cons(_,_)}"});
}

TEST_CASE("failed branches contribute no in/out entries") {
    auto ws = analyze_texts({"(module M (func g 1 (rule (x) (case x ((True) failed) ((False) (cons Nil))))))"});
    CHECK(entries(only(ws, "g").inout) == std::set<std::string>{"({False}) -> {Nil}"});
}

TEST_CASE("choice keeps both alternatives") {
    auto ws = analyze_texts({"(module M (func c 0 (rule () (or (cons True) (cons False)))))"});
    CHECK(only(ws, "c").result.str() == "{False,True}");
    CHECK(entries(only(ws, "c").inout) == std::set<std::string>{"() -> {False,True}"});
}

TEST_CASE("in/out results are bounded by the result value") {
    auto run = analyze_corpus();
    for (const auto& m : run.ws.modules) {
        for (const auto& f : m->result.functions) {
            CAPTURE(f.name.str());
            for (const auto& e : f.inout) CHECK(leq(e.result, f.result));
        }
    }
}

TEST_CASE("infer_expr splits on case branches") {
    auto run = analyze_corpus();
    const auto& mini = run.module("Mini");
    AnalysisEnv env{*run.ws.symbols, DepthKDomain{}, {}, run.ws.facts};
    ResultMap r = run.ws.facts.result;
    const auto* f = mini.program.find_function("null");
    TypeEnv gamma{{f->params[0], AbstractValue::any()}};
    auto pairs = infer_expr(gamma, *f->body, r, env);
    REQUIRE(pairs.size() == 2);
    std::set<std::string> seen;
    for (const auto& p : pairs) seen.insert(p.env.at(f->params[0]).str() + " " + p.result.str());
    CHECK(seen == std::set<std::string>{"{Nil} {True}", "{Cons(_,_)} {False}"});
}
