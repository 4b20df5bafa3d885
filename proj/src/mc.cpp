#include "percolab/mc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "percolab/events.hpp"
#include "percolab/oracle.hpp"
#include "percolab/rational.hpp"

namespace percolab::mc {
namespace {

struct Scratch {
    std::vector<std::uint64_t> stamp;
    std::uint64_t gen = 0;
    std::vector<VertexId> queue;
    std::vector<std::uint64_t> ids;
    std::vector<std::uint64_t> hashes;
};

struct WalkResult {
    std::uint64_t size = 0;
    bool truncated = false;
    bool watch_hit = false;
};

WalkResult origin_cluster_walk(const GraphModel& g, rng::PThreshold thr, std::uint64_t key,
                               VertexId watch, std::uint64_t cap, Scratch& s) {
    if (s.stamp.size() < g.vertex_count) s.stamp.assign(g.vertex_count, 0);
    ++s.gen;
    s.queue.clear();
    s.queue.push_back(0);
    s.stamp[0] = s.gen;
    const std::uint32_t omega = g.omega;
    s.ids.resize(omega);
    s.hashes.resize(omega);
    WalkResult r;
    r.size = 1;
    std::size_t head = 0;
    while (head < s.queue.size()) {
        VertexId v = s.queue[head++];
        for (std::uint32_t j = 0; j < omega; ++j) s.ids[j] = g.bond_id(v, j);
        rng::hash_batch(key, s.ids.data(), omega, s.hashes.data());
        for (std::uint32_t j = 0; j < omega; ++j) {
            if (!thr.occupied(s.hashes[j])) continue;
            VertexId w = g.neighbor(v, j);
            if (s.stamp[w] == s.gen) continue;
            s.stamp[w] = s.gen;
            s.queue.push_back(w);
            if (++r.size >= cap) {
                r.truncated = true;
                r.watch_hit = s.stamp[watch] == s.gen;
                return r;
            }
        }
    }
    r.watch_hit = s.stamp[watch] == s.gen;
    return r;
}

void merge_into(Estimate& total, const Estimate& part) {
    total.samples += part.samples;
    total.truncated_samples += part.truncated_samples;
    total.sum += part.sum;
    total.sum_sq += part.sum_sq;
}

int clamp_workers(int workers) {
    if (workers < 1) return 1;
    return std::min(workers, 64);
}

// Runs per(sample_key, scratch) over global sample indices [from, to),
// split into contiguous per-worker ranges. The merged integer accumulators
// are independent of the worker count.
template <class PerSample>
Estimate run_range(std::uint64_t seed, std::uint64_t from, std::uint64_t to, int workers,
                   double scale, PerSample&& per) {
    Estimate total;
    total.scale = scale;
    if (to <= from) return total;
    const int w_count = clamp_workers(workers);
    const std::uint64_t span = to - from;
    std::vector<Estimate> parts(static_cast<std::size_t>(w_count));
    auto body = [&](int w) {
        Scratch scratch;
        Estimate& e = parts[static_cast<std::size_t>(w)];
        e.scale = scale;
        const std::uint64_t begin = from + span * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(w_count);
        const std::uint64_t end = from + span * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(w_count);
        for (std::uint64_t i = begin; i < end; ++i) {
            std::uint64_t key = rng::sample_key(seed, i);
            auto [value, truncated] = per(key, scratch);
            ++e.samples;
            e.sum += value;
            e.sum_sq += static_cast<unsigned __int128>(value) * value;
            if (truncated) ++e.truncated_samples;
        }
    };
    if (w_count == 1) {
        body(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(w_count));
        for (int w = 0; w < w_count; ++w) threads.emplace_back(body, w);
        for (auto& t : threads) t.join();
    }
    for (const auto& part : parts) merge_into(total, part);
    return total;
}

void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
}

Estimate chi_range(const GraphModel& g, double p, const McOptions& opt, std::uint64_t from,
                   std::uint64_t to) {
    require_probability(p);
    rng::PThreshold thr(p);
    return run_range(opt.seed, from, to, opt.workers, 1.0,
                     [&](std::uint64_t key, Scratch& s) -> std::pair<std::uint64_t, bool> {
                         WalkResult r = origin_cluster_walk(g, thr, key, 0, opt.cluster_cap, s);
                         return {r.size, r.truncated};
                     });
}

std::uint64_t config_mask(const GraphModel& g, rng::PThreshold thr, std::uint64_t key, Scratch& s) {
    const std::uint64_t b = g.bond_count();
    s.ids.resize(b);
    s.hashes.resize(b);
    for (std::uint64_t i = 0; i < b; ++i) s.ids[i] = i;
    rng::hash_batch(key, s.ids.data(), b, s.hashes.data());
    std::uint64_t mask = 0;
    for (std::uint64_t i = 0; i < b; ++i) {
        if (thr.occupied(s.hashes[i])) mask |= std::uint64_t{1} << i;
    }
    return mask;
}

}  // namespace

double Estimate::mean() const {
    if (samples == 0) return 0.0;
    return scale * static_cast<double>(static_cast<long double>(sum) / static_cast<long double>(samples));
}

double Estimate::stderr_of_mean() const {
    if (samples < 2) return 0.0;
    const long double n = static_cast<long double>(samples);
    const long double mean_stat = static_cast<long double>(sum) / n;
    const long double mean_sq = static_cast<long double>(sum_sq) / n;
    long double var = (mean_sq - mean_stat * mean_stat) * n / (n - 1);
    if (var < 0) var = 0;
    return scale * static_cast<double>(std::sqrt(var / n));
}

Estimate chi_estimate(const GraphModel& g, double p, const McOptions& opt) {
    return chi_range(g, p, opt, 0, opt.samples);
}

Estimate two_point_estimate(const GraphModel& g, VertexId x, double p, const McOptions& opt) {
    require_probability(p);
    if (x >= g.vertex_count) throw std::invalid_argument("vertex out of range");
    rng::PThreshold thr(p);
    return run_range(opt.seed, 0, opt.samples, opt.workers, 1.0,
                     [&](std::uint64_t key, Scratch& s) -> std::pair<std::uint64_t, bool> {
                         WalkResult r = origin_cluster_walk(g, thr, key, x, opt.cluster_cap, s);
                         return {r.watch_hit ? 1u : 0u, r.truncated};
                     });
}

Estimate min_length_estimate(const GraphModel& g, VertexId x, int min_len, double p,
                             const McOptions& opt) {
    require_probability(p);
    if (x >= g.vertex_count) throw std::invalid_argument("vertex out of range");
    if (min_len < 0) throw std::invalid_argument("min_len must be >= 0");
    if (g.bond_count() > 64 || g.vertex_count > 64) {
        throw ResourceGuardError("minimum-length estimation needs bond and vertex counts <= 64");
    }
    rng::PThreshold thr(p);
    return run_range(opt.seed, 0, opt.samples, opt.workers, 1.0,
                     [&](std::uint64_t key, Scratch& s) -> std::pair<std::uint64_t, bool> {
                         std::uint64_t mask = config_mask(g, thr, key, s);
                         events::ConfigView view(g, mask);
                         bool hit = view.exists_saw_at_least(0, static_cast<int>(x), min_len);
                         return {hit ? 1u : 0u, false};
                     });
}

Estimate pi_n_mc(const GraphModel& g, int N, double p, const McOptions& opt) {
    require_probability(p);
    if (N < 0 || N > 2) throw std::invalid_argument("nested estimator supports N in {0, 1, 2}");
    if (g.bond_count() > 64 || g.vertex_count > 32) {
        throw ResourceGuardError("nested estimation needs bond count <= 64 and vertex count <= 32");
    }
    rng::PThreshold thr(p);
    const double scale = std::pow(p, N);
    return run_range(opt.seed, 0, opt.samples, opt.workers, scale,
                     [&](std::uint64_t key, Scratch& s) -> std::pair<std::uint64_t, bool> {
                         events::ConfigView levels[3];
                         for (int j = 0; j <= N; ++j) {
                             std::uint64_t lk = rng::level_key(key, static_cast<std::uint64_t>(j));
                             levels[j] = events::ConfigView(g, config_mask(g, thr, lk, s));
                         }
                         return {oracle::pi_n_tuple_count(levels, N), false};
                     });
}

std::vector<Estimate> sweep_chi(const GraphModel& g, const std::vector<double>& p_grid,
                                const McOptions& opt) {
    std::vector<Estimate> out;
    out.reserve(p_grid.size());
    for (double p : p_grid) out.push_back(chi_estimate(g, p, opt));
    return out;
}

PseudoCriticalResult solve_chi_target(const GraphModel& g, double target, const SolveOptions& opt) {
    if (!(target > 1.0)) throw std::invalid_argument("target must exceed 1 (chi(0) = 1)");
    if (!(target < static_cast<double>(g.vertex_count))) {
        throw std::invalid_argument("target must stay below the vertex count");
    }
    if (!(opt.tol > 0)) throw std::invalid_argument("tol must be positive");

    constexpr double kZ = 2.5758;  // two-sided 99%
    const double omega = static_cast<double>(g.omega);
    PseudoCriticalResult result;
    result.predicted_3term = 1.0 + 1.0 / omega + 3.5 / (omega * omega);

    McOptions mcopt;
    mcopt.seed = opt.seed;
    mcopt.workers = opt.workers;
    mcopt.cluster_cap = opt.cluster_cap;

    auto estimate_at = [&](double p, std::uint64_t step, std::uint64_t samples) {
        McOptions local = mcopt;
        local.seed = rng::sample_key(opt.seed ^ 0xb5ad4eceda1ce2a9ULL, step);
        Estimate e = chi_range(g, p, local, 0, samples);
        return std::pair<Estimate, std::uint64_t>(e, local.seed);
    };
    auto extend = [&](Estimate& e, double p, std::uint64_t stream_seed, std::uint64_t upto) {
        McOptions local = mcopt;
        local.seed = stream_seed;
        Estimate more = chi_range(g, p, local, e.samples, upto);
        e.samples += more.samples;
        e.truncated_samples += more.truncated_samples;
        e.sum += more.sum;
        e.sum_sq += more.sum_sq;
    };

    double lo = 0.0;
    double hi = std::min(0.999, (result.predicted_3term / omega) * (1.0 + 2.0 / omega));
    std::uint64_t step = 0;
    for (int tries = 0; tries < 64; ++tries) {
        auto [probe, probe_seed] = estimate_at(hi, step++, opt.initial_samples);
        if (probe.mean() > target || hi >= 0.999) break;
        hi = std::min(0.999, hi * 1.05);
    }

    std::uint64_t samples = opt.initial_samples;
    const double band_lo = target * (1.0 - opt.tol);
    const double band_hi = target * (1.0 + opt.tol);
    double mid = 0.5 * (lo + hi);
    Estimate best;
    double best_mid = mid;
    bool have_best = false;

    for (int iter = 0; iter < opt.max_steps; ++iter) {
        ++result.bisection_steps;
        mid = 0.5 * (lo + hi);
        auto [est, stream_seed] = estimate_at(mid, step++, samples);
        for (;;) {
            const double mean = est.mean();
            const double ci = kZ * est.stderr_of_mean();
            if (mean - ci > target) {
                hi = mid;
                break;
            }
            if (mean + ci < target) {
                lo = mid;
                break;
            }
            best = est;
            best_mid = mid;
            have_best = true;
            const bool in_band = mean - ci >= band_lo && mean + ci <= band_hi;
            if (in_band && est.samples >= opt.min_final_samples) {
                result.p_hat = mid;
                result.omega_p_hat = omega * mid;
                result.corrected_omega_p = omega * mid + 1.0 / target;
                result.abs_deviation = std::abs(result.corrected_omega_p - result.predicted_3term);
                result.final_estimate = est;
                result.converged = true;
                result.message = "confidence interval inside the tolerance band";
                return result;
            }
            if (est.samples >= opt.max_samples_per_estimate) {
                result.p_hat = mid;
                result.omega_p_hat = omega * mid;
                result.corrected_omega_p = omega * mid + 1.0 / target;
                result.abs_deviation = std::abs(result.corrected_omega_p - result.predicted_3term);
                result.final_estimate = est;
                result.converged = false;
                result.message = "per-estimate sample cap reached while straddling the target";
                return result;
            }
            std::uint64_t next = est.samples * 2;
            if (in_band && next < opt.min_final_samples) next = opt.min_final_samples;
            next = std::min(next, opt.max_samples_per_estimate);
            extend(est, mid, stream_seed, next);
            if (samples < est.samples) samples = est.samples;
        }
    }

    const Estimate fallback = have_best ? best : Estimate{};
    result.p_hat = have_best ? best_mid : mid;
    result.omega_p_hat = omega * result.p_hat;
    result.corrected_omega_p = result.omega_p_hat + 1.0 / target;
    result.abs_deviation = std::abs(result.corrected_omega_p - result.predicted_3term);
    result.final_estimate = fallback;
    result.converged = false;
    result.message = "bisection step budget exhausted";
    return result;
}

double corrected_omega_pc(const GraphModel& g, double p_hat, double target) {
    return static_cast<double>(g.omega) * p_hat + 1.0 / target;
}

}  // namespace percolab::mc
