#pragma once

#include <string>
#include <vector>

#include "percolab/events.hpp"
#include "percolab/graph.hpp"
#include "percolab/polynomial.hpp"

namespace percolab::oracle {

using graphs::GraphModel;
using graphs::VertexId;

// Exact polynomials by full enumeration of all 2^B configurations.
// Guarded: bond count <= 24 and vertex count <= 64.
RatPoly chi_exact(const GraphModel& g);
RatPoly tau_exact(const GraphModel& g, VertexId x);
std::vector<RatPoly> tau_table_exact(const GraphModel& g);
RatPoly tau_min_length_exact(const GraphModel& g, VertexId x, int min_len);

// Exact low-order coefficients (through p^max_order) by enumerating only
// configurations with at most max_order occupied bonds.
RatPoly chi_series(const GraphModel& g, int max_order);
RatPoly tau_series(const GraphModel& g, VertexId x, int max_order);

// Double-connection sum over x != 0 and its decomposition into the
// occupied-4-cycle part and the remainder (which on bipartite graphs has
// no coefficient below p^6).
RatPoly pi0_exact(const GraphModel& g);
struct CycleSplit {
    RatPoly four_cycle_part;
    RatPoly longer_part;
};
CycleSplit pi0_cycle_split(const GraphModel& g);

// N-th expansion coefficient as an exact polynomial. Full nested
// enumeration; guarded by bond_count * (N+1) <= 24 and vertex count <= 32.
RatPoly pi_n_exact(const GraphModel& g, int N);
// Exact through p^max_order via occupied-bond-budget enumeration across the
// whole level stack (budget = max_order - N, since the N designated bonds
// carry an explicit p^N prefactor).
RatPoly pi_n_series(const GraphModel& g, int N, int max_order);

// Tuple count for one fixed stack of N+1 level configurations: the number
// of (directed bond tuple, x) combinations whose event product holds.
// Multiplied by p^N this is the unbiased per-sample value of the nested
// Monte Carlo estimator.
unsigned long long pi_n_tuple_count(const events::ConfigView* levels, int N);

struct IdentityCheck {
    RatPoly residual;   // chi * (1 - Omega p (1 + Pi)) - (1 + Pi), truncated
    RatPoly pi_series;  // alternating sum through N_max, truncated
    int max_order = 0;
    int n_max = 0;
    bool guard_ok = false;
    std::string guard_report;
};
// The truncation guard recomputes the series of every omitted N in
// (n_max, max_order] and certifies it vanishes; terms with N > max_order
// cannot reach the truncation order because of the p^N prefactor.
IdentityCheck identity_residual_series(const GraphModel& g, int max_order, int n_max);

// |Omega p + chi(p)^-1 - 1/(1 + Pi^{<=n_max}(p))| from exact polynomials.
double recursion_residual(const GraphModel& g, const Rat& p, int n_max);

}  // namespace percolab::oracle
