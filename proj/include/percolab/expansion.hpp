#pragma once

#include <cstdint>
#include <vector>

#include "percolab/graph.hpp"
#include "percolab/invomega.hpp"
#include "percolab/rational.hpp"

namespace percolab::expansion {

struct DerivedSeries {
    series::InvOmegaSeries omega_pc;   // coefficients of Omega p_c in powers of 1/Omega
    series::InvOmegaSeries pi_series;  // alternating coefficient sum at the fixed point
    int passes = 0;
};

// Fixed-point bootstrap: start from Omega p = 1, evaluate the three level
// polynomials in the series variable, invert 1 + Pi, and repeat until the
// series stops changing. Exact rational coefficients. Only order <= 2 is
// supported; the level data determines nothing beyond that.
DerivedSeries derive_pc_series(graphs::GraphKind kind, int order);

// [1, 1, 7/2, 16, 103]: the two coefficient sets in one list. The first
// three terms are rigorous; the last two are numerical reference values
// with no error control.
const std::vector<Rat>& reference_series();
constexpr int kRigorousOrder = 3;

// Sum of reference coefficients c_k / Omega^k for k = 1..order.
// order <= 5; beyond kRigorousOrder the value is a diagnostic overlay only.
double predict_pc(std::uint32_t omega, graphs::GraphKind kind, int order);
Rat predict_pc_exact(std::uint32_t omega, int order);

struct FitResult {
    std::vector<double> coefficients;  // b0..b3 of b0 + b1/W + b2/W^2 + b3/W^3
    std::vector<double> fitted;
    std::vector<double> residuals;     // estimate - fitted
};

struct FitPoint {
    double omega = 0;
    double estimate = 0;
    double stderr_ = 0;  // <= 0 means unit weight
};

// Weighted least squares in the basis {1, 1/W, 1/W^2, 1/W^3}; weights are
// 1/stderr. Needs at least 4 distinct omegas; throws on rank deficiency.
FitResult fit_inverse_poly(const std::vector<FitPoint>& data);

}  // namespace percolab::expansion
