#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "percolab/expansion.hpp"

using namespace percolab;
using expansion::FitPoint;

TEST_CASE("reference coefficients and rigorous order") {
    const auto& ref = expansion::reference_series();
    REQUIRE(ref.size() == 5);
    CHECK(ref[0] == Rat(1));
    CHECK(ref[1] == Rat(1));
    CHECK(ref[2] == Rat(7, 2));
    CHECK(ref[3] == Rat(16));
    CHECK(ref[4] == Rat(103));
    CHECK(expansion::kRigorousOrder == 3);
}

TEST_CASE("threshold prediction from the reference coefficients") {
    CHECK(expansion::predict_pc_exact(2, 3) == Rat(19, 16));
    CHECK(expansion::predict_pc_exact(2, 1) == Rat(1, 2));
    CHECK(expansion::predict_pc_exact(10, 2) == Rat(11, 100));
    CHECK(expansion::predict_pc(10, graphs::GraphKind::hypercube, 5) ==
          doctest::Approx(0.11613).epsilon(1e-12));
    CHECK(expansion::predict_pc(12, graphs::GraphKind::torus, 3) ==
          doctest::Approx(expansion::predict_pc_exact(12, 3).get_d()));

    CHECK_THROWS_AS(expansion::predict_pc_exact(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(expansion::predict_pc_exact(8, 0), std::invalid_argument);
    CHECK_THROWS_AS(expansion::predict_pc_exact(8, 6), std::invalid_argument);
}

TEST_CASE("fixed point bootstrap reproduces the expansion coefficients") {
    auto d = expansion::derive_pc_series(graphs::GraphKind::hypercube, 2);
    CHECK(d.omega_pc.coeff_strings() == std::vector<std::string>{"1/1", "1/1", "7/2"});
    CHECK(d.pi_series.coeff_strings() == std::vector<std::string>{"0/1", "-1/1", "-5/2"});
    CHECK(d.passes == 3);

    const auto& ref = expansion::reference_series();
    for (std::size_t k = 0; k <= 2; ++k) CHECK(d.omega_pc.coeff(k) == ref[k]);

    auto one = series::InvOmegaSeries::constant(Rat(1), 2);
    CHECK(d.omega_pc * (one + d.pi_series) == one);

    CHECK(d.omega_pc.eval_double(12.0) / 12.0 ==
          doctest::Approx(expansion::predict_pc(12, graphs::GraphKind::hypercube, 3)));

    auto t = expansion::derive_pc_series(graphs::GraphKind::torus, 2);
    CHECK(t.omega_pc == d.omega_pc);
    CHECK(t.pi_series == d.pi_series);

    auto d1 = expansion::derive_pc_series(graphs::GraphKind::hypercube, 1);
    CHECK(d1.omega_pc.coeff_strings() == std::vector<std::string>{"1/1", "1/1"});
    CHECK(d1.passes == 2);
    auto d0 = expansion::derive_pc_series(graphs::GraphKind::hypercube, 0);
    CHECK(d0.omega_pc.coeff_strings() == std::vector<std::string>{"1/1"});
    CHECK(d0.passes == 1);

    CHECK_THROWS_AS(expansion::derive_pc_series(graphs::GraphKind::hypercube, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(expansion::derive_pc_series(graphs::GraphKind::hypercube, -1),
                    std::invalid_argument);
}

TEST_CASE("inverse polynomial fit recovers planted coefficients") {
    const double b0 = 0.01, b1 = 1.0, b2 = 1.0, b3 = 3.5;
    auto model = [&](double w) { return b0 + b1 / w + b2 / (w * w) + b3 / (w * w * w); };

    std::vector<FitPoint> data;
    for (double w : {4.0, 6.0, 8.0, 10.0, 12.0, 16.0}) {
        data.push_back({w, model(w), 0.0});
    }
    auto fit = expansion::fit_inverse_poly(data);
    REQUIRE(fit.coefficients.size() == 4);
    CHECK(fit.coefficients[0] == doctest::Approx(b0).epsilon(1e-9));
    CHECK(fit.coefficients[1] == doctest::Approx(b1).epsilon(1e-9));
    CHECK(fit.coefficients[2] == doctest::Approx(b2).epsilon(1e-9));
    CHECK(fit.coefficients[3] == doctest::Approx(b3).epsilon(1e-9));
    REQUIRE(fit.fitted.size() == data.size());
    REQUIRE(fit.residuals.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(fit.fitted[i] == doctest::Approx(data[i].estimate).epsilon(1e-12));
        CHECK(std::abs(fit.residuals[i]) < 1e-10);
    }

    SUBCASE("weights suppress a noisy point") {
        for (auto& pt : data) pt.stderr_ = 0.01;
        data.push_back({20.0, model(20.0) + 5.0, 1e6});
        auto weighted = expansion::fit_inverse_poly(data);
        CHECK(weighted.coefficients[3] == doctest::Approx(b3).epsilon(1e-4));
        CHECK(std::abs(weighted.residuals.back() - 5.0) < 1e-3);
    }

    SUBCASE("exactly four distinct omegas suffice") {
        std::vector<FitPoint> four;
        for (double w : {4.0, 6.0, 8.0, 10.0}) four.push_back({w, model(w), 0.0});
        auto tight = expansion::fit_inverse_poly(four);
        CHECK(tight.coefficients[3] == doctest::Approx(b3).epsilon(1e-9));
    }

    SUBCASE("degenerate inputs are rejected") {
        std::vector<FitPoint> dup = {{4.0, 1.0, 0.0},
                                     {4.0, 1.0, 0.0},
                                     {6.0, 1.0, 0.0},
                                     {8.0, 1.0, 0.0}};
        CHECK_THROWS_AS(expansion::fit_inverse_poly(dup), std::invalid_argument);
        std::vector<FitPoint> bad = {{0.0, 1.0, 0.0}, {6.0, 1.0, 0.0},
                                     {8.0, 1.0, 0.0}, {10.0, 1.0, 0.0}};
        CHECK_THROWS_AS(expansion::fit_inverse_poly(bad), std::invalid_argument);
    }
}
