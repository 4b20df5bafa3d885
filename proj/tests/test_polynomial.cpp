#include <vector>

#include "doctest.h"
#include "percolab/polynomial.hpp"

using percolab::Rat;
using percolab::RatPoly;

namespace {

RatPoly poly(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return RatPoly(std::move(v));
}

}  // namespace

TEST_CASE("zero polynomial basics") {
    RatPoly z;
    CHECK(z.is_zero());
    CHECK(z.degree() == -1);
    CHECK(z.lowest_order() == -1);
    CHECK(z.coeff(0) == Rat(0));
    CHECK(z.coeff(7) == Rat(0));
    CHECK(z.pretty() == "0/1");
    CHECK(z.eval(Rat(1, 3)) == Rat(0));
    CHECK(RatPoly(std::vector<Rat>{Rat(0), Rat(0)}) == z);
}

TEST_CASE("trim drops leading zero coefficients") {
    RatPoly a(std::vector<Rat>{Rat(1), Rat(2), Rat(0), Rat(0)});
    CHECK(a.degree() == 1);
    CHECK(a.coeffs().size() == 2);
    a.set_coeff(5, Rat(3));
    CHECK(a.degree() == 5);
    a.set_coeff(5, Rat(0));
    CHECK(a.degree() == 1);
}

TEST_CASE("monomial and constant") {
    RatPoly m = RatPoly::monomial(Rat(-3, 2), 4);
    CHECK(m.degree() == 4);
    CHECK(m.coeff(4) == Rat(-3, 2));
    CHECK(m.lowest_order() == 4);
    CHECK(RatPoly::monomial(Rat(0), 4).is_zero());
    CHECK(RatPoly::constant(Rat(5)).degree() == 0);
}

TEST_CASE("arithmetic against hand products") {
    RatPoly a = poly({1, 2});       // 1 + 2p
    RatPoly b = poly({3, 0, -1});   // 3 - p^2
    CHECK(a + b == poly({4, 2, -1}));
    CHECK(a - b == poly({-2, 2, 1}));
    CHECK(a * b == poly({3, 6, -1, -2}));
    CHECK(a * Rat(1, 2) == RatPoly(std::vector<Rat>{Rat(1, 2), Rat(1)}));
    CHECK(-a == poly({-1, -2}));
    CHECK((a - a).is_zero());
    CHECK((a * RatPoly()).is_zero());
}

TEST_CASE("binomial expansion of (1-p)^4") {
    RatPoly q = poly({1, -1});
    RatPoly q4 = q * q * q * q;
    CHECK(q4 == poly({1, -4, 6, -4, 1}));
    CHECK(q4.eval(Rat(1)) == Rat(0));
    CHECK(q4.eval(Rat(1, 2)) == Rat(1, 16));
}

TEST_CASE("truncation and order queries") {
    RatPoly a = poly({0, 0, 5, 0, -7});
    CHECK(a.lowest_order() == 2);
    CHECK(a.truncated(3) == poly({0, 0, 5}));
    CHECK(a.truncated(4) == a);
    CHECK(a.truncated(1).is_zero());
    CHECK(a.zero_through(1));
    CHECK(!a.zero_through(2));
    CHECK(RatPoly().zero_through(100));
}

TEST_CASE("evaluation, exact and double") {
    RatPoly a = poly({1, 0, 3});  // 1 + 3p^2
    CHECK(a.eval(Rat(1, 2)) == Rat(7, 4));
    CHECK(a.eval_double(0.5) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(a.eval(Rat(-1)) == Rat(4));
}

TEST_CASE("printing forms") {
    RatPoly a;
    a.set_coeff(4, Rat(3));
    a.set_coeff(6, Rat(-1, 2));
    CHECK(a.pretty() == "3/1 p^4 + -1/2 p^6");
    auto cs = a.coeff_strings();
    REQUIRE(cs.size() == 7);
    CHECK(cs[0] == "0/1");
    CHECK(cs[4] == "3/1");
    CHECK(cs[6] == "-1/2");
}
