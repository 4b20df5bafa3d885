#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "percolab/rational.hpp"

namespace percolab::graphs {

enum class GraphKind { hypercube, torus };

using VertexId = std::uint64_t;
using BondId = std::uint64_t;

struct DirectedBond {
    VertexId u, v;
};

// Immutable descriptor of a finite transitive graph. Hypercube vertices are
// bit-packed coordinates in {0,1}^n; torus vertices are mixed-radix base-m.
// Bonds carry dense canonical ids:
//   hypercube: the endpoint with coordinate bit j clear owns the j-direction
//              bond, id = j * 2^(n-1) + (owner with bit j squeezed out);
//   torus:     vertex v owns the +e_a bond {v, v + e_a}, id = a * V + v
//              (ownership of wrap bonds goes with the +1 step, not the
//              lexicographically smaller endpoint).
class GraphModel {
  public:
    GraphKind kind;
    int n = 0;        // dimension
    int m = 0;        // torus side length, 0 for hypercube
    int omega = 0;    // degree
    int omega_prime = 0;
    VertexId vertex_count = 0;
    bool short_wrap_warning = false;  // torus m == 4: wrap 4-cycles present

    // neighbor j of v; j in [0, omega). Hypercube: flip bit j. Torus:
    // j = 2a is +e_a, j = 2a+1 is -e_a (coordinate index, then direction).
    VertexId neighbor(VertexId v, int j) const;
    std::vector<VertexId> neighbors(VertexId v) const;
    bool valid_vertex(VertexId v) const { return v < vertex_count; }

    BondId bond_count() const;
    // Canonical id of the bond between v and its neighbor j.
    BondId bond_id(VertexId v, int j) const;
    // Endpoints of a canonical bond id (owner first).
    std::pair<VertexId, VertexId> bond_endpoints(BondId b) const;

    std::string name() const;
};

// kind = hypercube: Q_n, omega = n, 2^n vertices (m ignored).
// kind = torus: (Z_m)^n, omega = 2n, m^n vertices; rejects m < 3.
GraphModel build_graph(GraphKind kind, int n, int m = 0);
// Accepts "q3", "hypercube:3", "torus:2,6".
GraphModel build_graph_named(const std::string& name);

// Exact count of 4-cycles through the origin by direct enumeration of
// closed 4-step self-avoiding walks (divided by the 2 orientations).
// Equals omega * omega_prime / 2 except on m = 4 tori, where single-axis
// wrap cycles add n more.
std::uint64_t count_4cycles_through_origin(const GraphModel& g);

// All 4-cycles containing the origin, each as a list of 4 canonical bond
// ids plus the mask-free vertex list. Used by the cycle split of the
// double-connection sum.
struct FourCycle {
    std::vector<BondId> bonds;
    std::vector<VertexId> vertices;
};
std::vector<FourCycle> four_cycles_through_origin(const GraphModel& g);

// Exact number of closed nearest-neighbor walks of the given length from
// the origin (zero for odd lengths on bipartite graphs). Hypercube: DP over
// coordinate weight. Torus: DP over per-axis step counts convolved with
// single-cycle walk counts.
Int count_closed_walks(const GraphModel& g, int length);

}  // namespace percolab::graphs
