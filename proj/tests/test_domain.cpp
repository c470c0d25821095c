#include <doctest.h>

#include "support.hpp"

using namespace nftest;

namespace {

DataTerm c(const QName& name, std::vector<DataTerm> args = {}) { return DataTerm::constructor(name, std::move(args)); }

DataTerm list_of(const std::vector<DataTerm>& xs) {
    DataTerm t = c(builtin::Nil);
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) t = c(builtin::Cons, {*it, t});
    return t;
}

}  // namespace

TEST_CASE("printed values parse back") {
    Universe u;
    for (const char* text : {"{}", "_", "{Nil}", "{Cons(_,_),Nil}", "{Cons({True},{Cons(_,_)})}", "{0,1}",
                             "{'a','b'}", "{Just({Nil})}", "{Pair(_,{Nothing})}"}) {
        CAPTURE(text);
        CHECK(u.value(text).str() == text);
    }
    CHECK_THROWS_AS(u.value("{Cons(_)}"), InterfaceError);
    CHECK_THROWS_AS(u.value("{Nope}"), InterfaceError);
}

TEST_CASE("order, lub and glb on small values") {
    Universe u;
    auto v = [&](const char* t) { return u.value(t); };
    CHECK(leq(v("{}"), v("{Nil}")));
    CHECK(leq(v("{Nil}"), v("{Cons(_,_),Nil}")));
    CHECK(leq(v("{Cons({True},_)}"), v("{Cons(_,_)}")));
    CHECK_FALSE(leq(v("{Cons(_,_)}"), v("{Cons({True},_)}")));
    CHECK(leq(v("{Cons(_,_),Nil}"), v("_")));
    CHECK_FALSE(leq(v("_"), v("{Cons(_,_),Nil}")));

    CHECK(lub(v("{Nil}"), v("{Cons(_,_)}")) == v("{Cons(_,_),Nil}"));
    CHECK(lub(v("{Cons({True},_)}"), v("{Cons({False},_)}")) == v("{Cons({False,True},_)}"));
    CHECK(lub(v("{True}"), v("{0}")) == v("_"));
    CHECK(glb(v("{Cons(_,_),Nil}"), v("{Nil}")) == v("{Nil}"));
    CHECK(glb(v("{True}"), v("{False}")) == v("{}"));
    CHECK(glb(v("{Cons({True},_)}"), v("{Cons({False},_)}")) == v("{}"));
    CHECK(glb(v("_"), v("{0,1}")) == v("{0,1}"));
    CHECK(glb(v("{True}"), v("{0}")) == v("{}"));
}

TEST_CASE("abstract constructor application cuts at depth k") {
    Universe u;
    auto v = [&](const char* t) { return u.value(t); };
    DepthKDomain d1({1, 16});
    DepthKDomain d2({2, 16});
    auto cons = u.ctor("Cons");
    CHECK(d1.cons(cons, {v("{True}"), v("{Nil}")}) == v("{Cons(_,_)}"));
    CHECK(d2.cons(cons, {v("{True}"), v("{Nil}")}) == v("{Cons({True},{Nil})}"));
    CHECK(d2.cons(cons, {v("{True}"), v("{Cons({True},_)}")}) == v("{Cons({True},{Cons(_,_)})}"));
    CHECK(d1.cons(cons, {v("{}"), v("_")}) == v("{}"));
    CHECK(d1.cons_top(u.ctor("Nil")) == v("{Nil}"));
    CHECK(d1.literal(Literal::integer(3)) == v("{3}"));
    CHECK_THROWS_AS(d1.cons(cons, {v("_")}), std::invalid_argument);
    CHECK(depth(d2.cons(cons, {v("{True}"), v("{Nil}")})) == 2);
    CHECK(d1.cut(v("{Cons({True},{Nil})}"), 1) == v("{Cons(_,_)}"));
    CHECK(d1.cut(v("{}"), 0) == v("{}"));
}

TEST_CASE("membership") {
    Universe u;
    auto v = [&](const char* t) { return u.value(t); };
    auto tt = c(builtin::True);
    CHECK(member(list_of({tt}), v("{Cons(_,_)}")));
    CHECK_FALSE(member(list_of({}), v("{Cons(_,_)}")));
    CHECK(member(list_of({tt, tt}), v("{Cons({True},{Cons(_,_)})}")));
    CHECK_FALSE(member(list_of({tt}), v("{Cons({True},{Cons(_,_)})}")));
    CHECK(member(DataTerm::literal(Literal::integer(1)), v("{0,1}")));
    CHECK_FALSE(member(DataTerm::literal(Literal::integer(2)), v("{0,1}")));
    CHECK(member(DataTerm::function({"M", "f"}), v("_")));
    CHECK_FALSE(member(DataTerm::function({"M", "f"}), v("{Nil}")));
    CHECK_FALSE(member(tt, v("{}")));
}

TEST_CASE("enumeration yields exactly the small members") {
    Universe u;
    auto v = [&](const char* t) { return u.value(t); };
    auto cons_terms = enumerate_terms(v("{Cons(_,_)}"), u.symbols, 3);
    CHECK(cons_terms.size() == 2);  // [False], [True]
    for (const auto& t : cons_terms) CHECK(member(t, v("{Cons(_,_)}")));

    auto five = enumerate_terms(v("{Cons(_,_),Nil}"), u.symbols, 5);
    // Nil, two of length one, four of length two.
    CHECK(five.size() == 7);
    CHECK(enumerate_terms(v("{}"), u.symbols, 5).empty());
    CHECK_THROWS_AS(enumerate_terms(v("_"), u.symbols, 3), std::invalid_argument);

    auto lits = enumerate_terms(v("{0,7}"), u.symbols, 1, {Literal::integer(7)});
    CHECK(lits.size() == 2);
}

TEST_CASE("literal sets widen past the cap") {
    Universe u;
    auto v = [&](const char* t) { return u.value(t); };
    DepthKDomain d({2, 2});
    CHECK(d.widen_literals(v("{0,1}")) == v("{0,1}"));
    CHECK(d.widen_literals(v("{0,1,2}")) == v("_"));
    CHECK(d.widen_literals(v("{Just({0,1,2}),Nothing}")) == v("{Just(_),Nothing}"));
    CHECK_THROWS_AS(DepthKDomain({0, 16}), std::invalid_argument);
}
