#include <string>
#include <vector>

#include "doctest.h"
#include "percolab/graph.hpp"
#include "percolab/oracle.hpp"
#include "percolab/polynomial.hpp"

using namespace percolab;
using namespace percolab::graphs;
using namespace percolab::oracle;

namespace {

RatPoly poly(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return RatPoly(std::move(v));
}

}  // namespace

TEST_CASE("susceptibility of the single edge") {
    GraphModel g = build_graph(GraphKind::hypercube, 1);
    CHECK(chi_exact(g) == poly({1, 1}));
}

TEST_CASE("susceptibility and two-point function on the triangle") {
    GraphModel g = build_graph(GraphKind::torus, 1, 3);
    // tau(0,1) = p + (1-p) p^2 by conditioning on the direct bond
    RatPoly tau01 = poly({0, 1, 1, -1});
    CHECK(tau_exact(g, 1) == tau01);
    CHECK(tau_exact(g, 2) == tau01);
    CHECK(chi_exact(g) == poly({1}) + tau01 * Rat(2));
}

TEST_CASE("two-point function on the 5-cycle is p^k + p^(m-k) - p^m") {
    GraphModel g = build_graph(GraphKind::torus, 1, 5);
    auto arc = [](int k) {
        RatPoly r;
        r.set_coeff(static_cast<std::size_t>(k), Rat(1));
        r.set_coeff(5 - static_cast<std::size_t>(k), r.coeff(5 - static_cast<std::size_t>(k)) + Rat(1));
        r.set_coeff(5, r.coeff(5) - Rat(1));
        return r;
    };
    CHECK(tau_exact(g, 1) == arc(1));
    CHECK(tau_exact(g, 2) == arc(2));
    auto table = tau_table_exact(g);
    REQUIRE(table.size() == 5);
    CHECK(table[0] == poly({1}));
    RatPoly sum;
    for (const auto& t : table) sum = sum + t;
    CHECK(sum == chi_exact(g));
}

TEST_CASE("series enumeration matches full enumeration truncations") {
    for (const GraphModel& g : {build_graph(GraphKind::hypercube, 2),
                                build_graph(GraphKind::hypercube, 3),
                                build_graph(GraphKind::torus, 1, 4)}) {
        RatPoly chi = chi_exact(g);
        for (int k : {0, 2, 4, 5}) {
            CHECK(chi_series(g, k) == chi.truncated(static_cast<std::size_t>(k)));
        }
        CHECK(tau_series(g, 1, 4) == tau_exact(g, 1).truncated(4));
    }
}

TEST_CASE("minimum length two-point values on the triangle") {
    GraphModel g = build_graph(GraphKind::torus, 1, 3);
    // the only length >= 2 route from 0 to 1 is the far arc
    CHECK(tau_min_length_exact(g, 1, 2) == poly({0, 0, 1}));
    CHECK(tau_min_length_exact(g, 1, 1) == tau_exact(g, 1));
    CHECK(tau_min_length_exact(g, 1, 3).is_zero());
}

TEST_CASE("double connection sum on the square and cube") {
    GraphModel q2 = build_graph(GraphKind::hypercube, 2);
    RatPoly p0 = pi0_exact(q2);
    CHECK(p0 == RatPoly::monomial(Rat(3), 4));
    GraphModel q3 = build_graph(GraphKind::hypercube, 3);
    RatPoly p0c = pi0_exact(q3);
    CHECK(p0c.coeff(4) == Rat(9));
    CHECK(p0c.lowest_order() == 4);
    auto split = pi0_cycle_split(q3);
    CHECK(split.four_cycle_part + split.longer_part == p0c);
    CHECK(split.longer_part.zero_through(5));
    CHECK(split.four_cycle_part.lowest_order() == 4);
}

TEST_CASE("expansion coefficients on the single edge") {
    GraphModel g = build_graph(GraphKind::hypercube, 1);
    // chi = 1 + p forces Pi-hat = -p^2 / (1 + p + p^2); alternating
    // levels read off the expansion of that rational function
    CHECK(pi_n_exact(g, 0).is_zero());
    CHECK(pi_n_exact(g, 1) == RatPoly::monomial(Rat(1), 2));
    CHECK(pi_n_exact(g, 2) == RatPoly::monomial(Rat(1), 3));
    CHECK(pi_n_exact(g, 3) == RatPoly::monomial(Rat(1), 5));
    CHECK(pi_n_exact(g, 4) == RatPoly::monomial(Rat(1), 6));
    CHECK(pi_n_exact(g, 5) == RatPoly::monomial(Rat(1), 8));
    CHECK(pi_n_exact(g, 6) == RatPoly::monomial(Rat(1), 9));
}

TEST_CASE("budgeted level series equals full-enumeration truncations") {
    GraphModel q1 = build_graph(GraphKind::hypercube, 1);
    for (int N = 0; N <= 4; ++N) {
        RatPoly full = pi_n_exact(q1, N);
        for (int k : {2, 4, 7}) {
            CAPTURE(N);
            CHECK(pi_n_series(q1, N, k) == full.truncated(static_cast<std::size_t>(k)));
        }
    }
    GraphModel q2 = build_graph(GraphKind::hypercube, 2);
    CHECK(pi_n_series(q2, 1, 6) == pi_n_exact(q2, 1).truncated(6));
    CHECK(pi_n_series(q2, 2, 7) == pi_n_exact(q2, 2).truncated(7));
    CHECK(pi_n_series(q2, 0, 5) == pi0_exact(q2).truncated(5));
    CHECK(pi_n_series(q2, 4, 3).is_zero());  // p^N prefactor outruns the order
}

TEST_CASE("leading level coefficients on the 3-cube") {
    GraphModel q3 = build_graph(GraphKind::hypercube, 3);
    RatPoly one = pi_n_series(q3, 1, 2);
    CHECK(one == RatPoly::monomial(Rat(3), 2));
    RatPoly two = pi_n_series(q3, 2, 3);
    CHECK(two == RatPoly::monomial(Rat(3), 3));
}

TEST_CASE("susceptibility identity holds as exact polynomials") {
    for (auto [name, order, nmax] : {std::tuple{"q1", 8, 8}, std::tuple{"q2", 6, 6},
                                     std::tuple{"torus:1,3", 5, 5}}) {
        GraphModel g = build_graph_named(name);
        auto chk = identity_residual_series(g, order, nmax);
        CAPTURE(name);
        CHECK(chk.guard_ok);
        CHECK(chk.residual.is_zero());
        CHECK(chk.max_order == order);
    }
}

TEST_CASE("identity guard certifies omitted levels or refuses") {
    GraphModel q1 = build_graph_named("q1");
    // levels 3 and 4 both start above p^4, so the guard can certify
    auto ok = identity_residual_series(q1, 4, 2);
    CHECK(ok.guard_ok);
    CHECK(ok.residual.is_zero());
    // level 2 contributes p^3, inside the requested order: must refuse
    GraphModel q2 = build_graph_named("q2");
    auto bad = identity_residual_series(q2, 6, 1);
    CHECK(!bad.guard_ok);
    CHECK(!bad.guard_report.empty());
}

TEST_CASE("recursion residual shrinks as levels are added") {
    GraphModel q1 = build_graph_named("q1");
    Rat p(1, 10);
    double r1 = recursion_residual(q1, p, 1);
    double r3 = recursion_residual(q1, p, 3);
    double r5 = recursion_residual(q1, p, 5);
    // Pi-hat(Q_1) = -p^2/(1+p+p^2): truncating at level 1 leaves a p^3 gap
    CHECK(r1 == doctest::Approx(1.0101010101e-3).epsilon(1e-6));
    CHECK(r3 < r1);
    CHECK(r5 < r3);
    CHECK(r5 < 1e-5);
}

TEST_CASE("resource guards refuse oversized enumerations") {
    CHECK_THROWS_AS(chi_exact(build_graph(GraphKind::hypercube, 5)), ResourceGuardError);
    CHECK_THROWS_AS(chi_exact(build_graph(GraphKind::torus, 2, 4)), ResourceGuardError);
    CHECK_THROWS_AS(pi_n_exact(build_graph(GraphKind::hypercube, 3), 2), ResourceGuardError);
    CHECK_THROWS_AS(pi_n_exact(build_graph(GraphKind::hypercube, 2), -1), std::invalid_argument);
    CHECK_NOTHROW(pi_n_series(build_graph(GraphKind::hypercube, 3), 2, 4));
}
