#include "percolab/diagrams.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "percolab/oracle.hpp"

namespace percolab::diagrams {
namespace {

Rat rat_pow(Rat base, int e) {
    Rat out(1);
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

VertexId group_sub(const GraphModel& g, VertexId a, VertexId b) {
    if (g.kind == graphs::GraphKind::hypercube) return a ^ b;
    VertexId out = 0;
    VertexId place = 1;
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

std::vector<Rat> convolve(const GraphModel& g, const std::vector<Rat>& f,
                          const std::vector<Rat>& h) {
    const std::uint64_t v = g.vertex_count;
    std::vector<Rat> out(v, Rat(0));
    for (std::uint64_t x = 0; x < v; ++x) {
        Rat acc(0);
        for (std::uint64_t y = 0; y < v; ++y) {
            acc += f[y] * h[group_sub(g, x, y)];
        }
        out[x] = acc;
    }
    return out;
}

void require_steps(int steps) {
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    if (steps > 16) throw ResourceGuardError("walk computations capped at 16 steps");
}

}  // namespace

std::vector<ModeWeight> mode_weights(std::uint32_t n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::vector<ModeWeight> out;
    out.reserve(n + 1);
    for (std::uint32_t m = 0; m <= n; ++m) {
        ModeWeight w;
        w.m = m;
        w.multiplicity = binom(n, m);
        w.gap = Rat(Int(2 * static_cast<long>(m))) / Rat(Int(static_cast<long>(n)));
        out.push_back(std::move(w));
    }
    return out;
}

double hat_D(const GraphModel& g, const std::vector<std::uint32_t>& k) {
    if (k.size() != g.n) throw std::invalid_argument("mode vector length must equal n");
    if (g.kind == graphs::GraphKind::hypercube) {
        std::uint32_t m = 0;
        for (std::uint32_t c : k) {
            if (c > 1) throw std::invalid_argument("hypercube mode entries are 0 or 1");
            m += c;
        }
        return hat_D_hypercube_mode(g.n, m).get_d();
    }
    double acc = 0;
    for (std::uint32_t c : k) {
        if (c >= g.m) throw std::invalid_argument("torus mode entry out of range");
        acc += std::cos(2.0 * M_PI * static_cast<double>(c) / static_cast<double>(g.m));
    }
    return acc / static_cast<double>(g.n);
}

Rat hat_D_hypercube_mode(std::uint32_t n, std::uint32_t m) {
    if (n < 1 || m > n) throw std::invalid_argument("mode count out of range");
    return Rat(Int(static_cast<long>(n) - 2 * static_cast<long>(m))) /
           Rat(Int(static_cast<long>(n)));
}

Rat return_probability_exact(const GraphModel& g, int steps) {
    require_steps(steps);
    if (g.kind != graphs::GraphKind::hypercube) return return_probability_walks(g, steps);
    if (steps % 2 != 0) return Rat(0);
    Rat total(0);
    for (const auto& w : mode_weights(g.n)) {
        Rat dhat = hat_D_hypercube_mode(g.n, w.m);
        total += Rat(w.multiplicity) * rat_pow(dhat, steps);
    }
    Int denom = Int(1) << g.n;
    return total / Rat(denom);
}

Rat return_probability_walks(const GraphModel& g, int steps) {
    require_steps(steps);
    Int walks = graphs::count_closed_walks(g, steps);
    Int denom(1);
    for (int s = 0; s < steps; ++s) denom *= static_cast<unsigned long>(g.omega);
    return Rat(walks) / Rat(denom);
}

ReturnBound return_bound_check(const GraphModel& g, int i) {
    if (i < 1) throw std::invalid_argument("i must be >= 1");
    ReturnBound out;
    out.value = return_probability_exact(g, 2 * i);
    const double e = std::exp(1.0);
    double a;
    if (g.kind == graphs::GraphKind::hypercube) {
        a = e * std::pow(static_cast<double>(i), 2.0 * i);
    } else {
        a = e * std::pow(2.0 * i, 2.0 * i) / std::pow(2.0, i);
    }
    out.bound = a / std::pow(static_cast<double>(g.omega), i);
    out.holds = out.value.get_d() <= out.bound;
    return out;
}

double inverse_gap_sum(std::uint32_t n, double jt) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(jt > 0)) throw std::invalid_argument("exponent must be positive");
    double total = 0;
    for (std::uint32_t m = 1; m <= n; ++m) {
        double mult = binom(n, m).get_d();
        double gap = 2.0 * static_cast<double>(m) / static_cast<double>(n);
        total += mult * std::pow(gap, -jt);
    }
    return total * std::ldexp(1.0, -static_cast<int>(n));
}

double binomial_tail(std::uint32_t n, double eps) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps must lie in (0, 1)");
    const auto kmax = static_cast<std::uint32_t>(std::floor(eps * static_cast<double>(n)));
    Int total(0);
    for (std::uint32_t m = 0; m <= kmax && m <= n; ++m) total += binom(n, m);
    return Rat(Rat(total) / Rat(Int(Int(1) << n))).get_d();
}

ProxyResult tpij_proxy(std::uint32_t n, int i, int j, std::optional<double> chi_value, double c) {
    if (n < 1 || n > 64) throw std::invalid_argument("n must lie in [1, 64]");
    if (i < 0 || j < 0) throw std::invalid_argument("i and j must be >= 0");
    if (j > 0 && !chi_value) throw std::invalid_argument("j > 0 needs a chi value");
    if (c < 1.0) throw std::invalid_argument("proxy constant must be >= 1");
    const double zero_mode = j > 0 ? std::pow(*chi_value, j) : 1.0;
    double total = zero_mode;
    for (std::uint32_t m = 1; m <= n; ++m) {
        double mult = binom(n, m).get_d();
        double dhat = std::abs(1.0 - 2.0 * static_cast<double>(m) / static_cast<double>(n));
        double tau_proxy = c * static_cast<double>(n) / (2.0 * static_cast<double>(m));
        total += mult * std::pow(dhat, i) * std::pow(tau_proxy, j);
    }
    ProxyResult out;
    out.value = total * std::ldexp(1.0, -static_cast<int>(n));
    out.scaled_value = std::pow(static_cast<double>(n), 0.5 * i) * out.value;
    return out;
}

Rat tp_from_exact_tau(const GraphModel& g, const Rat& p) {
    auto table = oracle::tau_table_exact(g);
    std::vector<Rat> tau;
    tau.reserve(table.size());
    for (const auto& poly : table) tau.push_back(poly.eval(p));
    std::vector<Rat> d(g.vertex_count, Rat(0));
    Rat inv_omega(1, static_cast<unsigned long>(g.omega));
    for (std::uint32_t jdir = 0; jdir < g.omega; ++jdir) {
        d[g.neighbor(0, jdir)] += inv_omega;
    }
    std::vector<Rat> acc = convolve(g, tau, tau);
    acc = convolve(g, acc, tau);
    acc = convolve(g, acc, d);
    Rat best(0);
    for (const Rat& v : acc) best = std::max(best, v);
    return Rat(static_cast<long>(g.omega)) * p * best;
}

std::vector<Rat> tau_hat_exact(const GraphModel& g, const Rat& p) {
    if (g.kind != graphs::GraphKind::hypercube) {
        throw std::invalid_argument("mode transform implemented for hypercubes only");
    }
    auto table = oracle::tau_table_exact(g);
    std::vector<Rat> tau;
    tau.reserve(table.size());
    for (const auto& poly : table) tau.push_back(poly.eval(p));
    const std::uint64_t v = g.vertex_count;
    std::vector<Rat> out(v, Rat(0));
    for (std::uint64_t k = 0; k < v; ++k) {
        Rat acc(0);
        for (std::uint64_t x = 0; x < v; ++x) {
            if (std::popcount(k & x) % 2 == 0) {
                acc += tau[x];
            } else {
                acc -= tau[x];
            }
        }
        out[k] = acc;
    }
    return out;
}

Rat convolution_gap(const GraphModel& g, const Rat& p) {
    auto table = oracle::tau_table_exact(g);
    std::vector<Rat> tau;
    tau.reserve(table.size());
    for (const auto& poly : table) tau.push_back(poly.eval(p));
    bool first = true;
    Rat best(0);
    for (std::uint64_t x = 1; x < g.vertex_count; ++x) {
        Rat nbr_sum(0);
        for (std::uint32_t jdir = 0; jdir < g.omega; ++jdir) {
            nbr_sum += tau[g.neighbor(x, jdir)];
        }
        Rat gap = tau[x] - p * nbr_sum;
        if (first || gap > best) {
            best = gap;
            first = false;
        }
    }
    return best;
}

}  // namespace percolab::diagrams
