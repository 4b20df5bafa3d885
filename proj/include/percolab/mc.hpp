#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "percolab/graph.hpp"
#include "percolab/rng.hpp"

namespace percolab::mc {

using graphs::GraphModel;
using graphs::VertexId;

// Sample statistics with exact integer accumulators. Merging partial
// results is integer addition, so estimates are independent of the worker
// partition down to the last bit.
struct Estimate {
    std::uint64_t samples = 0;
    std::uint64_t truncated_samples = 0;
    unsigned long long sum = 0;
    unsigned __int128 sum_sq = 0;
    double scale = 1.0;  // multiplies the raw per-sample statistic

    double mean() const;
    double stderr_of_mean() const;
    bool operator==(const Estimate& o) const = default;
};

struct McOptions {
    std::uint64_t samples = std::uint64_t{1} << 16;
    std::uint64_t seed = 1;
    int workers = 1;
    std::uint64_t cluster_cap = 10'000'000;
};

// Mean cluster size of the origin.
Estimate chi_estimate(const GraphModel& g, double p, const McOptions& opt);
// Indicator of x in the origin cluster.
Estimate two_point_estimate(const GraphModel& g, VertexId x, double p, const McOptions& opt);
// Indicator of an occupied self-avoiding path 0 -> x of length >= min_len.
// Exact event evaluation per sample; needs bond_count <= 64.
Estimate min_length_estimate(const GraphModel& g, VertexId x, int min_len, double p,
                             const McOptions& opt);
// Nested-expectation estimator for the N-th expansion coefficient: N+1
// independent configurations per sample, integer tuple count, scale p^N.
// Needs bond_count <= 64 and vertex_count <= 32; N <= 2.
Estimate pi_n_mc(const GraphModel& g, int N, double p, const McOptions& opt);

// One chi estimate per grid point, all points sharing the same per-sample
// uniforms (the coupling is pathwise monotone in p).
std::vector<Estimate> sweep_chi(const GraphModel& g, const std::vector<double>& p_grid,
                                const McOptions& opt);

struct SolveOptions {
    double tol = 0.05;
    std::uint64_t initial_samples = std::uint64_t{1} << 14;
    std::uint64_t min_final_samples = std::uint64_t{1} << 20;
    std::uint64_t max_samples_per_estimate = std::uint64_t{1} << 24;
    int max_steps = 64;
    std::uint64_t seed = 1;
    int workers = 1;
    std::uint64_t cluster_cap = 10'000'000;
};

struct PseudoCriticalResult {
    double p_hat = 0;
    double omega_p_hat = 0;
    double corrected_omega_p = 0;   // omega * p_hat + 1 / target
    double predicted_3term = 0;     // 1 + 1/Omega + (7/2)/Omega^2
    double abs_deviation = 0;       // |corrected - predicted|
    Estimate final_estimate;
    int bisection_steps = 0;
    bool converged = false;
    std::string message;
};

// Stochastic bisection for chi(p) = target. Classifies each midpoint by a
// 99% confidence interval; straddling intervals trigger sample doubling,
// and acceptance requires the interval inside the relative tolerance band
// with at least min_final_samples samples.
PseudoCriticalResult solve_chi_target(const GraphModel& g, double target,
                                      const SolveOptions& opt);

double corrected_omega_pc(const GraphModel& g, double p_hat, double target);

}  // namespace percolab::mc
