#include "catch_amalgamated.hpp"

#include <cmath>

#include "metjet/expr.hpp"

using namespace metjet;
using Catch::Approx;

TEST_CASE("arithmetic and precedence") {
    CHECK(ExprFunction::parse("1+2*3").eval({0}) == 7.0);
    CHECK(ExprFunction::parse("(1+2)*3").eval({0}) == 9.0);
    CHECK(ExprFunction::parse("2^3^1").eval({0}) == 8.0);
    CHECK(ExprFunction::parse("-x1^2").eval({3}) == -9.0);
    CHECK(ExprFunction::parse("2*pi").eval({0}) == Approx(6.283185307179586));
    CHECK(ExprFunction::parse("x1/x2").eval({1, 4}) == 0.25);
}

TEST_CASE("functions") {
    CHECK(ExprFunction::parse("sin(pi/2)").eval({0}) == Approx(1.0));
    CHECK(ExprFunction::parse("abs(-3)").eval({0}) == 3.0);
    CHECK(ExprFunction::parse("sign(-0.5)").eval({0}) == -1.0);
    CHECK(ExprFunction::parse("max(2, 3)").eval({0}) == 3.0);
    CHECK(ExprFunction::parse("min(x1, x2)").eval({2, -1}) == -1.0);
    CHECK(ExprFunction::parse("pow(2, 10)").eval({0}) == 1024.0);
    CHECK(ExprFunction::parse("log(exp(2))").eval({0}) == Approx(2.0));
}

TEST_CASE("guards and comparisons") {
    auto f = ExprFunction::parse("if x1 != 0 then x1*sin(1/x1) else 0");
    CHECK(f.eval({0.0}) == 0.0);
    CHECK(f.eval({2.0 / 3.14159265358979}) != 0.0);
    auto g = ExprFunction::parse("if x1 >= 0 and x1 <= 1 then 1 else 0");
    CHECK(g.eval({0.5}) == 1.0);
    CHECK(g.eval({2.0}) == 0.0);
    CHECK(ExprFunction::parse("if x1 < 0 or x1 > 1 then 5 else 6").eval({-1}) == 5.0);
}

TEST_CASE("dimension inference and overrides") {
    auto f = ExprFunction::parse("x1 + x3");
    CHECK(f.dim() == 3);
    auto g = ExprFunction::parse("1/x1");
    g.add_override({0.0}, 42.0);
    CHECK(g.eval({0.0}) == 42.0);
    CHECK(g.eval({2.0}) == 0.5);
}

TEST_CASE("handles carry the domain predicate") {
    auto f = ExprFunction::parse("x1*sin(1/x1)");
    f.add_override({0.0}, 0.0);
    auto h = f.to_handle();
    CHECK(h.contains({0.0}));
    CHECK(h.contains({1.0}));
    CHECK(h(vec1(0.0))[0] == 0.0);

    auto lg = ExprFunction::parse("log(x1)").to_handle();
    CHECK(lg.contains({1.0}));
    CHECK_FALSE(lg.contains({-1.0}));  // log of a negative is NaN: out of domain
}

TEST_CASE("deterministic parse-evaluate round trip") {
    auto a = ExprFunction::parse("x1^2*sin(1/x1^2)");
    auto b = ExprFunction::parse("x1^2*sin(1/x1^2)");
    for (double x : {0.1, 0.2, 1.7, -2.0})
        CHECK(a.eval({x}) == b.eval({x}));
}

TEST_CASE("parse errors carry position information") {
    CHECK_THROWS_AS(ExprFunction::parse("1 +"), ExprError);
    CHECK_THROWS_AS(ExprFunction::parse("foo(3)"), ExprError);
    CHECK_THROWS_AS(ExprFunction::parse("min(1)"), ExprError);
    CHECK_THROWS_AS(ExprFunction::parse("(1"), ExprError);
    CHECK_THROWS_AS(ExprFunction::parse("if x1 then 1 else 0 extra"), ExprError);
    CHECK_THROWS_AS(ExprFunction::parse("x0"), ExprError);
}
