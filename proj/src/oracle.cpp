#include "percolab/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_map>

#include "percolab/rational.hpp"

namespace percolab::oracle {
namespace {

using events::ConfigView;

void require_exact_bounds(const GraphModel& g) {
    if (g.bond_count() > 24) {
        std::ostringstream os;
        os << "full enumeration needs bond_count <= 24, got " << g.bond_count()
           << " on " << g.name();
        throw ResourceGuardError(os.str());
    }
    if (g.vertex_count > 64) {
        throw ResourceGuardError("full enumeration needs vertex_count <= 64");
    }
}

// Expands counts A_k of configurations with exactly k occupied bonds out of
// total_bonds into the polynomial sum_k A_k p^k (1-p)^(total_bonds - k),
// optionally truncated. cap < 0 means no truncation.
RatPoly poly_from_counts(const std::vector<Int>& counts, std::uint64_t total_bonds, int cap) {
    int top = cap >= 0 ? cap : static_cast<int>(total_bonds);
    std::vector<Rat> coeffs(static_cast<std::size_t>(top) + 1, Rat(0));
    for (int r = 0; r <= top; ++r) {
        Rat acc(0);
        int kmax = std::min<int>(r, static_cast<int>(counts.size()) - 1);
        for (int k = 0; k <= kmax; ++k) {
            if (counts[static_cast<std::size_t>(k)] == 0) continue;
            Int term = counts[static_cast<std::size_t>(k)] * binom(total_bonds - static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r - k));
            if ((r - k) % 2 != 0) term = -term;
            acc += Rat(term);
        }
        coeffs[static_cast<std::size_t>(r)] = acc;
    }
    return RatPoly(std::move(coeffs));
}

// Streams every configuration as a mask over all B bonds.
template <class F>
void for_each_full_config(const GraphModel& g, F&& f) {
    require_exact_bounds(g);
    const std::uint64_t total = std::uint64_t{1} << g.bond_count();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        ConfigView view(g, mask);
        f(view, std::popcount(mask));
    }
}

Int predicted_subset_count(std::uint64_t b, int max_k) {
    Int total(0);
    for (int k = 0; k <= max_k; ++k) total += binom(b, static_cast<std::uint64_t>(k));
    return total;
}

// Streams every configuration with at most max_k occupied bonds, as sorted
// bond-id lists. Works for any bond count.
template <class F>
void for_each_sparse_config(const GraphModel& g, int max_k, F&& f) {
    if (g.vertex_count > 64) {
        throw ResourceGuardError("sparse enumeration needs vertex_count <= 64");
    }
    const std::uint64_t b = g.bond_count();
    Int predicted = predicted_subset_count(b, max_k);
    if (predicted > 5'000'000) {
        std::ostringstream os;
        os << "sparse enumeration on " << g.name() << " with budget " << max_k
           << " would visit " << predicted.get_str() << " configurations (cap 5000000)";
        throw ResourceGuardError(os.str());
    }
    std::vector<graphs::BondId> ids;
    {
        ConfigView view(g, ids);
        f(view, 0);
    }
    for (int k = 1; k <= max_k && static_cast<std::uint64_t>(k) <= b; ++k) {
        std::vector<std::uint64_t> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i);
        while (true) {
            ids.assign(idx.begin(), idx.end());
            ConfigView view(g, ids);
            f(view, k);
            int pos = k - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == b - static_cast<std::uint64_t>(k - pos)) --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < k; ++i) {
                idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
            }
        }
    }
}

template <class Eval>
RatPoly exact_poly(const GraphModel& g, Eval&& eval) {
    std::vector<Int> counts(g.bond_count() + 1, Int(0));
    for_each_full_config(g, [&](const ConfigView& v, int k) {
        long long value = eval(v);
        if (value != 0) counts[static_cast<std::size_t>(k)] += static_cast<long>(value);
    });
    return poly_from_counts(counts, g.bond_count(), -1);
}

template <class Eval>
RatPoly series_poly(const GraphModel& g, int max_order, Eval&& eval) {
    if (max_order < 0) throw std::invalid_argument("max_order must be >= 0");
    std::vector<Int> counts(static_cast<std::size_t>(max_order) + 1, Int(0));
    for_each_sparse_config(g, max_order, [&](const ConfigView& v, int k) {
        long long value = eval(v);
        if (value != 0) counts[static_cast<std::size_t>(k)] += static_cast<long>(value);
    });
    return poly_from_counts(counts, g.bond_count(), max_order);
}

long long pi0_value(const ConfigView& v) {
    std::uint64_t dd = v.double_connected_mask(0);
    return std::popcount(dd & ~std::uint64_t{1});
}

struct CyclePattern {
    std::vector<graphs::BondId> bonds;  // sorted
    std::uint64_t vertex_mask = 0;
};

std::vector<CyclePattern> cycle_patterns(const GraphModel& g) {
    std::vector<CyclePattern> out;
    for (const auto& c : graphs::four_cycles_through_origin(g)) {
        CyclePattern pat;
        pat.bonds = c.bonds;
        for (VertexId v : c.vertices) pat.vertex_mask |= std::uint64_t{1} << v;
        out.push_back(std::move(pat));
    }
    return out;
}

bool cycle_occupied(const ConfigView& v, const CyclePattern& pat) {
    for (graphs::BondId b : pat.bonds) {
        bool found = false;
        for (int e = 0; e < v.ne; ++e) {
            if (v.edge_id[e] == b) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

// ------------------------------------------------------------------
// Nested expansion coefficients.
//
// Level 0 carries the double connection 0 <=> u_0; each later level j
// carries the no-pivot connection event from v_{j-1} to u_j through the
// previous level's restricted cluster. The N designated bonds contribute
// an explicit p^N prefactor; the level configurations carry the usual
// occupation weights, independently per level.
// ------------------------------------------------------------------

void require_pi_bounds(const GraphModel& g, int N) {
    if (N < 0) throw std::invalid_argument("level count must be >= 0");
    if (g.vertex_count > 32) {
        throw ResourceGuardError("nested enumeration needs vertex_count <= 32");
    }
}

constexpr std::uint64_t kInterfaceVertexBits = 6;

// Accumulator per interface (restricted cluster, source vertex); values are
// counts indexed by total occupied bonds so far.
using InterfaceMap = std::unordered_map<std::uint64_t, std::vector<Int>>;

void add_counts(std::vector<Int>& dst, const std::vector<Int>& src, int shift, long long mult, int budget) {
    for (int k = 0; k + shift <= budget; ++k) {
        const Int& s = src[static_cast<std::size_t>(k)];
        if (s == 0) continue;
        dst[static_cast<std::size_t>(k + shift)] += s * static_cast<long>(mult);
    }
}

struct LevelConfigs {
    std::vector<ConfigView> views;
    std::vector<int> sizes;
};

LevelConfigs materialize_configs(const GraphModel& g, int max_k, std::size_t view_cap) {
    LevelConfigs out;
    Int predicted = predicted_subset_count(g.bond_count(), max_k);
    if (predicted > static_cast<long>(view_cap)) {
        std::ostringstream os;
        os << "level enumeration on " << g.name() << " with budget " << max_k
           << " would materialize " << predicted.get_str() << " configurations (cap "
           << view_cap << ")";
        throw ResourceGuardError(os.str());
    }
    for_each_sparse_config(g, max_k, [&](const ConfigView& v, int k) {
        out.views.push_back(v);
        out.sizes.push_back(k);
    });
    return out;
}

// Shared nested walk over materialized level configurations. budget bounds
// the total occupied-bond count across all levels.
std::vector<Int> pi_n_counts(const GraphModel& g, int N, const LevelConfigs& cfgs, int budget) {
    std::vector<Int> out(static_cast<std::size_t>(budget) + 1, Int(0));
    const std::size_t nc = cfgs.views.size();
    if (N == 0) {
        for (std::size_t i = 0; i < nc; ++i) {
            if (cfgs.sizes[i] > budget) continue;
            long long v = pi0_value(cfgs.views[i]);
            if (v != 0) out[static_cast<std::size_t>(cfgs.sizes[i])] += static_cast<long>(v);
        }
        return out;
    }

    InterfaceMap acc;
    for (std::size_t i = 0; i < nc; ++i) {
        const int k0 = cfgs.sizes[i];
        if (k0 > budget) continue;
        const ConfigView& view = cfgs.views[i];
        std::uint64_t dd = view.double_connected_mask(0);
        std::uint64_t rest = dd;
        while (rest != 0) {
            VertexId u0 = static_cast<VertexId>(std::countr_zero(rest));
            rest &= rest - 1;
            for (std::uint32_t j = 0; j < g.omega; ++j) {
                VertexId v0 = g.neighbor(u0, j);
                graphs::BondId b = g.bond_id(u0, j);
                std::uint64_t ctil = events::cluster_without_bond(view, b, 0);
                std::uint64_t key = (ctil << kInterfaceVertexBits) | v0;
                auto& vec = acc[key];
                if (vec.empty()) vec.assign(static_cast<std::size_t>(budget) + 1, Int(0));
                vec[static_cast<std::size_t>(k0)] += 1;
            }
        }
    }

    for (int level = 1; level < N; ++level) {
        InterfaceMap next;
        for (const auto& [key, kvec] : acc) {
            const std::uint64_t a_mask = key >> kInterfaceVertexBits;
            const VertexId src = static_cast<VertexId>(key & ((std::uint64_t{1} << kInterfaceVertexBits) - 1));
            for (std::size_t i = 0; i < nc; ++i) {
                const int kc = cfgs.sizes[i];
                const ConfigView& view = cfgs.views[i];
                std::uint64_t em = view.e_prime_mask(src, a_mask);
                if (em == 0) continue;
                std::uint64_t rest = em;
                while (rest != 0) {
                    VertexId uj = static_cast<VertexId>(std::countr_zero(rest));
                    rest &= rest - 1;
                    for (std::uint32_t j = 0; j < g.omega; ++j) {
                        VertexId vj = g.neighbor(uj, j);
                        graphs::BondId b = g.bond_id(uj, j);
                        std::uint64_t ctil = events::cluster_without_bond(view, b, static_cast<int>(src));
                        std::uint64_t nkey = (ctil << kInterfaceVertexBits) | vj;
                        auto& vec = next[nkey];
                        if (vec.empty()) vec.assign(static_cast<std::size_t>(budget) + 1, Int(0));
                        add_counts(vec, kvec, kc, 1, budget);
                    }
                }
            }
        }
        acc = std::move(next);
    }

    for (const auto& [key, kvec] : acc) {
        const std::uint64_t a_mask = key >> kInterfaceVertexBits;
        const VertexId src = static_cast<VertexId>(key & ((std::uint64_t{1} << kInterfaceVertexBits) - 1));
        for (std::size_t i = 0; i < nc; ++i) {
            const ConfigView& view = cfgs.views[i];
            long long cnt = std::popcount(view.e_prime_mask(src, a_mask));
            if (cnt == 0) continue;
            add_counts(out, kvec, cfgs.sizes[i], cnt, budget);
        }
    }
    return out;
}

RatPoly pi_n_poly(const GraphModel& g, int N, int budget, std::size_t view_cap, int cap) {
    require_pi_bounds(g, N);
    LevelConfigs cfgs = materialize_configs(g, budget, view_cap);
    std::vector<Int> counts = pi_n_counts(g, N, cfgs, budget);
    std::uint64_t total = g.bond_count() * static_cast<std::uint64_t>(N + 1);
    RatPoly inner = poly_from_counts(counts, total, cap);
    if (N == 0) return inner;
    RatPoly shifted = inner * RatPoly::monomial(Rat(1), N);
    return cap >= 0 ? shifted.truncated(cap + N) : shifted;
}

}  // namespace

RatPoly chi_exact(const GraphModel& g) {
    return exact_poly(g, [&](const ConfigView& v) {
        return static_cast<long long>(std::popcount(v.cluster(0)));
    });
}

RatPoly tau_exact(const GraphModel& g, VertexId x) {
    if (x >= g.vertex_count) throw std::invalid_argument("vertex out of range");
    return exact_poly(g, [&](const ConfigView& v) {
        return static_cast<long long>((v.cluster(0) >> x) & 1);
    });
}

std::vector<RatPoly> tau_table_exact(const GraphModel& g) {
    require_exact_bounds(g);
    const std::uint64_t nv = g.vertex_count;
    std::vector<std::vector<Int>> counts(nv, std::vector<Int>(g.bond_count() + 1, Int(0)));
    for_each_full_config(g, [&](const ConfigView& v, int k) {
        std::uint64_t c = v.cluster(0);
        while (c != 0) {
            VertexId x = static_cast<VertexId>(std::countr_zero(c));
            c &= c - 1;
            counts[x][static_cast<std::size_t>(k)] += 1;
        }
    });
    std::vector<RatPoly> out;
    out.reserve(nv);
    for (std::uint64_t x = 0; x < nv; ++x) {
        out.push_back(poly_from_counts(counts[x], g.bond_count(), -1));
    }
    return out;
}

RatPoly tau_min_length_exact(const GraphModel& g, VertexId x, int min_len) {
    if (x >= g.vertex_count) throw std::invalid_argument("vertex out of range");
    return exact_poly(g, [&](const ConfigView& v) {
        return static_cast<long long>(v.exists_saw_at_least(0, x, min_len) ? 1 : 0);
    });
}

RatPoly chi_series(const GraphModel& g, int max_order) {
    return series_poly(g, max_order, [&](const ConfigView& v) {
        return static_cast<long long>(std::popcount(v.cluster(0)));
    });
}

RatPoly tau_series(const GraphModel& g, VertexId x, int max_order) {
    if (x >= g.vertex_count) throw std::invalid_argument("vertex out of range");
    return series_poly(g, max_order, [&](const ConfigView& v) {
        return static_cast<long long>((v.cluster(0) >> x) & 1);
    });
}

RatPoly pi0_exact(const GraphModel& g) {
    return exact_poly(g, pi0_value);
}

CycleSplit pi0_cycle_split(const GraphModel& g) {
    const auto cycles = cycle_patterns(g);
    RatPoly cycle_part = exact_poly(g, [&](const ConfigView& v) {
        std::uint64_t covered = 0;
        for (const auto& pat : cycles) {
            if (cycle_occupied(v, pat)) covered |= pat.vertex_mask;
        }
        return static_cast<long long>(std::popcount(covered & ~std::uint64_t{1}));
    });
    CycleSplit out;
    out.longer_part = pi0_exact(g) - cycle_part;
    out.four_cycle_part = std::move(cycle_part);
    return out;
}

RatPoly pi_n_exact(const GraphModel& g, int N) {
    require_pi_bounds(g, N);
    if (N == 0) return pi0_exact(g);
    std::uint64_t total = g.bond_count() * static_cast<std::uint64_t>(N + 1);
    if (total > 24) {
        std::ostringstream os;
        os << "full nested enumeration needs bond_count * (levels + 1) <= 24, got "
           << total << " on " << g.name();
        throw ResourceGuardError(os.str());
    }
    return pi_n_poly(g, N, static_cast<int>(total), std::size_t{1} << 20, -1);
}

RatPoly pi_n_series(const GraphModel& g, int N, int max_order) {
    require_pi_bounds(g, N);
    if (max_order < 0) throw std::invalid_argument("max_order must be >= 0");
    if (N > max_order) return RatPoly();
    if (N == 0) return series_poly(g, max_order, pi0_value);
    int budget = max_order - N;
    std::uint64_t stack_bonds = g.bond_count() * static_cast<std::uint64_t>(N + 1);
    if (static_cast<std::uint64_t>(budget) > stack_bonds) budget = static_cast<int>(stack_bonds);
    return pi_n_poly(g, N, budget, 300'000, max_order - N);
}

unsigned long long pi_n_tuple_count(const ConfigView* levels, int N) {
    const GraphModel& g = *levels[0].g;
    if (g.vertex_count > 32) {
        throw ResourceGuardError("nested tuple count needs vertex_count <= 32");
    }
    if (N == 0) {
        return static_cast<unsigned long long>(pi0_value(levels[0]));
    }
    std::vector<std::pair<std::uint64_t, VertexId>> frontier;
    {
        std::uint64_t dd = levels[0].double_connected_mask(0);
        std::uint64_t rest = dd;
        while (rest != 0) {
            VertexId u0 = static_cast<VertexId>(std::countr_zero(rest));
            rest &= rest - 1;
            for (std::uint32_t j = 0; j < g.omega; ++j) {
                frontier.emplace_back(events::cluster_without_bond(levels[0], g.bond_id(u0, j), 0),
                                      g.neighbor(u0, j));
            }
        }
    }
    for (int level = 1; level < N; ++level) {
        std::vector<std::pair<std::uint64_t, VertexId>> next;
        for (const auto& [a_mask, src] : frontier) {
            std::uint64_t em = levels[level].e_prime_mask(src, a_mask);
            std::uint64_t rest = em;
            while (rest != 0) {
                VertexId uj = static_cast<VertexId>(std::countr_zero(rest));
                rest &= rest - 1;
                for (std::uint32_t j = 0; j < g.omega; ++j) {
                    next.emplace_back(
                        events::cluster_without_bond(levels[level], g.bond_id(uj, j), static_cast<int>(src)),
                        g.neighbor(uj, j));
                }
            }
        }
        frontier = std::move(next);
    }
    unsigned long long total = 0;
    for (const auto& [a_mask, src] : frontier) {
        total += static_cast<unsigned long long>(std::popcount(levels[N].e_prime_mask(src, a_mask)));
    }
    return total;
}

IdentityCheck identity_residual_series(const GraphModel& g, int max_order, int n_max) {
    if (n_max < 0 || max_order < 0) throw std::invalid_argument("orders must be >= 0");
    IdentityCheck out;
    out.max_order = max_order;
    out.n_max = n_max;

    RatPoly pi;
    for (int N = 0; N <= n_max; ++N) {
        RatPoly term = pi_n_series(g, N, max_order);
        pi = (N % 2 == 0) ? pi + term : pi - term;
    }
    out.pi_series = pi.truncated(max_order);

    out.guard_ok = true;
    std::ostringstream report;
    for (int N = n_max + 1; N <= max_order; ++N) {
        RatPoly term = pi_n_series(g, N, max_order);
        if (!term.is_zero()) {
            out.guard_ok = false;
            report << "omitted level " << N << " contributes " << term.pretty() << "; ";
        }
    }
    if (out.guard_ok) {
        report << "levels " << (n_max + 1) << ".." << max_order
               << " vanish through order " << max_order
               << "; higher levels carry at least that many designated bonds";
    }
    out.guard_report = report.str();

    RatPoly one = RatPoly::constant(Rat(1));
    RatPoly chi = chi_series(g, max_order);
    RatPoly one_plus_pi = one + out.pi_series;
    RatPoly omega_p = RatPoly::monomial(Rat(static_cast<long>(g.omega)), 1);
    RatPoly residual = chi * (one - omega_p * one_plus_pi) - one_plus_pi;
    out.residual = residual.truncated(max_order);
    return out;
}

double recursion_residual(const GraphModel& g, const Rat& p, int n_max) {
    RatPoly chi = chi_exact(g);
    RatPoly pi;
    for (int N = 0; N <= n_max; ++N) {
        RatPoly term = pi_n_exact(g, N);
        pi = (N % 2 == 0) ? pi + term : pi - term;
    }
    Rat chi_val = chi.eval(p);
    Rat pi_val = pi.eval(p);
    if (chi_val == 0) throw std::domain_error("susceptibility vanished");
    Rat one_plus = Rat(1) + pi_val;
    if (one_plus == 0) throw std::domain_error("1 + Pi vanished");
    Rat lhs = Rat(static_cast<long>(g.omega)) * p + Rat(1) / chi_val - Rat(1) / one_plus;
    return std::abs(lhs.get_d());
}

}  // namespace percolab::oracle
