#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "percolab/graph.hpp"
#include "percolab/rational.hpp"

namespace percolab::diagrams {

using graphs::GraphModel;
using graphs::VertexId;

// Hypercube Fourier modes grouped by the number of pi-components.
struct ModeWeight {
    std::uint32_t m = 0;
    Int multiplicity;
    Rat gap;  // 1 - hat_D = 2m/n
};
std::vector<ModeWeight> mode_weights(std::uint32_t n);

// Transform of the single-step distribution. Hypercube modes are vectors
// over {0, 1} (1 meaning a pi component); torus modes are integer vectors
// with k_a = 2 pi j_a / m. Normalized so hat_D(0) = 1.
double hat_D(const GraphModel& g, const std::vector<std::uint32_t>& k);
Rat hat_D_hypercube_mode(std::uint32_t n, std::uint32_t m);

// Probability that the simple random walk returns to its start after
// `steps` steps. Hypercube: binomial mode reduction. Torus: closed-walk
// count over Omega^steps. Exact rationals; steps <= 16.
Rat return_probability_exact(const GraphModel& g, int steps);
// The closed-walk route, available for both kinds (cross-check).
Rat return_probability_walks(const GraphModel& g, int steps);

struct ReturnBound {
    Rat value;
    double bound = 0;
    bool holds = false;
};
// Walk-count bound a_i / Omega^i with a_i from the subspace-counting
// argument: steps use at most i distinct axes (factor sum_l n^l / l!
// <= e n^i) and at most (s i)^{2i} step sequences with s directions per
// axis, giving a_i = e i^{2i} on Q_n and e (2i)^{2i} / 2^i on the torus.
ReturnBound return_bound_check(const GraphModel& g, int i);

// 2^{-n} sum_{m>=1} binom(n,m) (2m/n)^{-jt}: the nonzero-mode sum with
// the inverse gap raised to jt.
double inverse_gap_sum(std::uint32_t n, double jt);
// P(X <= eps n) for X ~ Binomial(n, 1/2), exact big-integer summation.
double binomial_tail(std::uint32_t n, double eps);

struct ProxyResult {
    double value = 0;
    double scaled_value = 0;  // n^{i/2} * value
};
// Hypercube triangle proxy: the k = 0 term contributes chi^j / 2^n
// exactly; nonzero modes replace tau-hat by c / (1 - hat_D).
// chi_value is required when j > 0.
ProxyResult tpij_proxy(std::uint32_t n, int i, int j, std::optional<double> chi_value,
                       double c = 2.0);

// sup_x p Omega (D * tau * tau * tau)(x) from exact two-point polynomials.
Rat tp_from_exact_tau(const GraphModel& g, const Rat& p);

// Transform of the exact two-point function at rational p, one value per
// mode mask (hypercube only; characters are +-1 so values stay rational).
std::vector<Rat> tau_hat_exact(const GraphModel& g, const Rat& p);

// max over x != 0 of tau(x) - p Omega (D * tau)(x); <= 0 certifies the
// pointwise convolution bound.
Rat convolution_gap(const GraphModel& g, const Rat& p);

}  // namespace percolab::diagrams
