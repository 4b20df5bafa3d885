#include "doctest.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "percolab/diagrams.hpp"
#include "percolab/graph.hpp"
#include "percolab/oracle.hpp"

using namespace percolab;
using graphs::GraphModel;

namespace {

Rat rat(long num, unsigned long den) {
    Rat out(num, den);
    out.canonicalize();
    return out;
}

// Independent group difference: XOR on the cube, digitwise mod-m on the torus.
std::uint64_t diff_mirror(const GraphModel& g, std::uint64_t a, std::uint64_t b) {
    if (g.kind == graphs::GraphKind::hypercube) return a ^ b;
    std::uint64_t out = 0;
    std::uint64_t place = 1;
    for (std::uint32_t axis = 0; axis < g.n; ++axis) {
        std::uint64_t da = a % g.m;
        std::uint64_t db = b % g.m;
        a /= g.m;
        b /= g.m;
        out += ((da + g.m - db) % g.m) * place;
        place *= g.m;
    }
    return out;
}

std::vector<Rat> conv_mirror(const GraphModel& g, const std::vector<Rat>& f,
                             const std::vector<Rat>& h) {
    std::vector<Rat> out(g.vertex_count, Rat(0));
    for (std::uint64_t x = 0; x < g.vertex_count; ++x)
        for (std::uint64_t y = 0; y < g.vertex_count; ++y)
            out[x] += f[y] * h[diff_mirror(g, x, y)];
    return out;
}

std::vector<Rat> tau_values(const GraphModel& g, const Rat& p) {
    std::vector<Rat> tau;
    for (const auto& poly : oracle::tau_table_exact(g)) tau.push_back(poly.eval(p));
    return tau;
}

}  // namespace

TEST_CASE("mode weights enumerate binomial multiplicities and gaps") {
    auto ws = diagrams::mode_weights(6);
    REQUIRE(ws.size() == 7);
    Int nonzero_total(0);
    for (std::uint32_t m = 0; m <= 6; ++m) {
        CHECK(ws[m].m == m);
        CHECK(ws[m].multiplicity == binom(6, m));
        CHECK(ws[m].gap == rat(2 * static_cast<long>(m), 6ul));
        if (m > 0) nonzero_total += ws[m].multiplicity;
    }
    CHECK(nonzero_total == Int((1 << 6) - 1));
    CHECK(ws[0].gap == Rat(0));
    CHECK(ws[3].gap == Rat(1));
    CHECK_THROWS_AS(diagrams::mode_weights(0), std::invalid_argument);
}

TEST_CASE("transformed step distribution on cube modes") {
    CHECK(diagrams::hat_D_hypercube_mode(3, 0) == Rat(1));
    CHECK(diagrams::hat_D_hypercube_mode(3, 1) == Rat(1, 3));
    CHECK(diagrams::hat_D_hypercube_mode(3, 2) == Rat(-1, 3));
    CHECK(diagrams::hat_D_hypercube_mode(3, 3) == Rat(-1));
    CHECK(diagrams::hat_D_hypercube_mode(10, 5) == Rat(0));
    CHECK_THROWS_AS(diagrams::hat_D_hypercube_mode(3, 4), std::invalid_argument);

    auto q3 = graphs::build_graph_named("q3");
    CHECK(diagrams::hat_D(q3, {0, 0, 0}) == doctest::Approx(1.0));
    CHECK(diagrams::hat_D(q3, {1, 0, 1}) == doctest::Approx(-1.0 / 3.0));
    CHECK(diagrams::hat_D(q3, {1, 1, 1}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(diagrams::hat_D(q3, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(diagrams::hat_D(q3, {2, 0, 0}), std::invalid_argument);

    auto t24 = graphs::build_graph_named("torus:2,4");
    CHECK(diagrams::hat_D(t24, {0, 0}) == doctest::Approx(1.0));
    CHECK(diagrams::hat_D(t24, {1, 0}) == doctest::Approx(0.5));
    CHECK(diagrams::hat_D(t24, {2, 0}) == doctest::Approx(0.0));
    CHECK(diagrams::hat_D(t24, {2, 2}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(diagrams::hat_D(t24, {4, 0}), std::invalid_argument);

    auto t23 = graphs::build_graph_named("torus:2,3");
    CHECK(diagrams::hat_D(t23, {1, 1}) == doctest::Approx(-0.5));
}

TEST_CASE("mode sum and walk count give the same return probability") {
    for (const char* name : {"q2", "q3", "q4", "torus:2,3", "torus:2,4"}) {
        auto g = graphs::build_graph_named(name);
        std::string nm = g.name();
        CAPTURE(nm);
        for (int steps = 0; steps <= 8; ++steps) {
            CHECK(diagrams::return_probability_exact(g, steps) ==
                  diagrams::return_probability_walks(g, steps));
        }
    }

    auto q2 = graphs::build_graph_named("q2");
    auto q4 = graphs::build_graph_named("q4");
    CHECK(diagrams::return_probability_exact(q2, 0) == Rat(1));
    CHECK(diagrams::return_probability_exact(q2, 2) == Rat(1, 2));
    CHECK(diagrams::return_probability_exact(q2, 3) == Rat(0));
    CHECK(diagrams::return_probability_exact(q4, 4) == Rat(5, 32));

    CHECK_THROWS_AS(diagrams::return_probability_exact(q2, -1), std::invalid_argument);
    CHECK_THROWS_AS(diagrams::return_probability_exact(q2, 17), ResourceGuardError);
    CHECK_THROWS_AS(diagrams::return_probability_walks(q2, 18), ResourceGuardError);
}

TEST_CASE("return probability bounds hold on cubes and tori") {
    auto q10 = graphs::build_graph_named("q10");
    const double e = std::exp(1.0);

    auto rb = diagrams::return_bound_check(q10, 1);
    CHECK(rb.value == Rat(1, 10));
    CHECK(rb.bound == doctest::Approx(e / 10.0));
    CHECK(rb.holds);

    rb = diagrams::return_bound_check(q10, 2);
    CHECK(rb.value == rat(280, 10000));
    CHECK(rb.bound == doctest::Approx(e * 16.0 / 100.0));
    CHECK(rb.holds);

    for (const char* name : {"q10", "q12", "torus:5,6", "torus:7,6"}) {
        auto g = graphs::build_graph_named(name);
        std::string nm = g.name();
        CAPTURE(nm);
        for (int i = 1; i <= 4; ++i) {
            auto check = diagrams::return_bound_check(g, i);
            CHECK(check.value == diagrams::return_probability_exact(g, 2 * i));
            CHECK(check.holds);
        }
    }

    auto t56 = graphs::build_graph_named("torus:5,6");
    auto tb = diagrams::return_bound_check(t56, 3);
    CHECK(tb.bound == doctest::Approx(e * std::pow(6.0, 6.0) / 8.0 / std::pow(10.0, 3.0)));

    CHECK_THROWS_AS(diagrams::return_bound_check(q10, 0), std::invalid_argument);
}

TEST_CASE("inverse gap sums match direct summation and stay bounded") {
    CHECK(diagrams::inverse_gap_sum(1, 2.0) == doctest::Approx(0.125));
    CHECK(diagrams::inverse_gap_sum(2, 2.0) == doctest::Approx(0.5625));

    for (std::uint32_t n : {5u, 10u, 20u, 40u}) {
        double direct = 0;
        for (std::uint32_t m = 1; m <= n; ++m) {
            direct += binom(n, m).get_d() * std::pow(2.0 * m / n, -2.0);
        }
        direct *= std::ldexp(1.0, -static_cast<int>(n));
        CHECK(diagrams::inverse_gap_sum(n, 2.0) == doctest::Approx(direct));
        CHECK(diagrams::inverse_gap_sum(n, 2.0) <= 10.0);
    }
    CHECK(std::abs(diagrams::inverse_gap_sum(40, 2.0) - diagrams::inverse_gap_sum(39, 2.0)) <
          1e-2);

    CHECK_THROWS_AS(diagrams::inverse_gap_sum(0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(diagrams::inverse_gap_sum(8, 0.0), std::invalid_argument);
}

TEST_CASE("binomial tail probabilities") {
    CHECK(diagrams::binomial_tail(16, 0.25) == doctest::Approx(2517.0 / 65536.0));
    CHECK(diagrams::binomial_tail(4, 0.5) == doctest::Approx(11.0 / 16.0));
    CHECK(diagrams::binomial_tail(30, 0.1) < diagrams::binomial_tail(30, 0.4));
    CHECK_THROWS_AS(diagrams::binomial_tail(0, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(diagrams::binomial_tail(8, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(diagrams::binomial_tail(8, 1.0), std::invalid_argument);
}

TEST_CASE("triangle proxy sums") {
    auto r = diagrams::tpij_proxy(4, 2, 0, std::nullopt);
    CHECK(r.value == doctest::Approx(0.25));
    CHECK(r.scaled_value == doctest::Approx(1.0));

    auto s = diagrams::tpij_proxy(4, 0, 1, 7.0);
    CHECK(s.value == doctest::Approx(124.0 / 48.0));
    CHECK(s.scaled_value == doctest::Approx(s.value));

    auto t = diagrams::tpij_proxy(12, 3, 2, 2.0, 2.0);
    double mirror = std::pow(2.0, 2.0);
    for (std::uint32_t m = 1; m <= 12; ++m) {
        mirror += binom(12, m).get_d() * std::pow(std::abs(1.0 - m / 6.0), 3.0) *
                  std::pow(12.0 / m, 2.0);
    }
    mirror = std::ldexp(mirror, -12);
    CHECK(t.value == doctest::Approx(mirror));
    CHECK(t.scaled_value == doctest::Approx(std::pow(12.0, 1.5) * mirror));

    CHECK_THROWS_AS(diagrams::tpij_proxy(4, 0, 1, std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(diagrams::tpij_proxy(4, 1, 0, std::nullopt, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(diagrams::tpij_proxy(0, 1, 0, std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(diagrams::tpij_proxy(65, 1, 0, std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(diagrams::tpij_proxy(4, -1, 0, std::nullopt), std::invalid_argument);
}

TEST_CASE("triple convolution from exact two point values") {
    for (const char* name : {"q2", "q3", "torus:1,3", "torus:2,3"}) {
        auto g = graphs::build_graph_named(name);
        std::string nm = g.name();
        CAPTURE(nm);
        Rat p(3, 10);
        auto tau = tau_values(g, p);
        std::vector<Rat> step(g.vertex_count, Rat(0));
        for (std::uint32_t j = 0; j < g.omega; ++j)
            step[g.neighbor(0, j)] += Rat(1, static_cast<unsigned long>(g.omega));
        auto acc = conv_mirror(g, conv_mirror(g, conv_mirror(g, tau, tau), tau), step);
        Rat best(0);
        for (const Rat& v : acc) best = std::max(best, v);
        Rat expected = Rat(static_cast<long>(g.omega)) * p * best;
        CHECK(diagrams::tp_from_exact_tau(g, p) == expected);
    }

    auto q2 = graphs::build_graph_named("q2");
    CHECK(diagrams::tp_from_exact_tau(q2, Rat(3, 10)) ==
          Rat("9118727798241/10000000000000"));
    CHECK(diagrams::tp_from_exact_tau(q2, Rat(1, 10)) <
          diagrams::tp_from_exact_tau(q2, Rat(3, 10)));
}

TEST_CASE("two point transform is nonnegative and matches direct sums") {
    auto q1 = graphs::build_graph_named("q1");
    auto th1 = diagrams::tau_hat_exact(q1, Rat(1, 4));
    REQUIRE(th1.size() == 2);
    CHECK(th1[0] == Rat(5, 4));
    CHECK(th1[1] == Rat(3, 4));

    for (const char* name : {"q2", "q3"}) {
        auto g = graphs::build_graph_named(name);
        std::string nm = g.name();
        CAPTURE(nm);
        Rat p(1, 4);
        auto tau = tau_values(g, p);
        auto th = diagrams::tau_hat_exact(g, p);
        REQUIRE(th.size() == g.vertex_count);
        CHECK(th[0] == oracle::chi_exact(g).eval(p));
        for (std::uint64_t k = 0; k < g.vertex_count; ++k) {
            Rat acc(0);
            for (std::uint64_t x = 0; x < g.vertex_count; ++x) {
                if (std::popcount(k & x) % 2 == 0)
                    acc += tau[x];
                else
                    acc -= tau[x];
            }
            CHECK(th[k] == acc);
        }
    }

    auto q3 = graphs::build_graph_named("q3");
    auto th = diagrams::tau_hat_exact(q3, Rat(9, 10));
    for (const Rat& v : th) CHECK(v >= Rat(0));

    CHECK_THROWS_AS(diagrams::tau_hat_exact(graphs::build_graph_named("torus:2,3"), Rat(1, 4)),
                    std::invalid_argument);
}

TEST_CASE("convolution gap certifies the neighbor sum bound") {
    auto q3 = graphs::build_graph_named("q3");
    CHECK(diagrams::convolution_gap(q3, Rat(1, 2)) == Rat(-1341, 4096));

    auto tri = graphs::build_graph_named("torus:1,3");
    CHECK(diagrams::convolution_gap(tri, Rat(1, 2)) == Rat(-3, 16));

    for (const char* name : {"q2", "q3", "torus:1,3", "torus:2,3"}) {
        auto g = graphs::build_graph_named(name);
        std::string nm = g.name();
        CAPTURE(nm);
        for (int tenths : {1, 3, 5, 7, 9}) {
            Rat p(tenths, 10);
            p.canonicalize();
            auto tau = tau_values(g, p);
            Rat best;
            bool first = true;
            for (std::uint64_t x = 1; x < g.vertex_count; ++x) {
                Rat nbr(0);
                for (std::uint32_t j = 0; j < g.omega; ++j) nbr += tau[g.neighbor(x, j)];
                Rat gap = tau[x] - p * nbr;
                if (first || gap > best) {
                    best = gap;
                    first = false;
                }
            }
            CHECK(diagrams::convolution_gap(g, p) == best);
            CHECK(diagrams::convolution_gap(g, p) <= Rat(0));
        }
    }
}
