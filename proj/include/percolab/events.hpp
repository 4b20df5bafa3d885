#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "percolab/graph.hpp"

namespace percolab::events {

using graphs::BondId;
using graphs::GraphModel;

// One bond configuration on a small graph (<= 64 vertices, <= 64 occupied
// bonds), with a CSR adjacency over the occupied subgraph. Vertex sets are
// uint64 masks throughout. Immutable during event queries.
struct ConfigView {
    const GraphModel* g = nullptr;
    int nv = 0;
    int ne = 0;
    std::array<BondId, 64> edge_id;
    std::array<std::uint8_t, 64> eu, ev;
    std::array<std::uint8_t, 65> adj_start;
    std::array<std::uint8_t, 128> adj_nbr;
    std::array<std::uint8_t, 128> adj_edge;

    ConfigView() = default;
    // Occupied bonds given by canonical ids; order does not matter.
    ConfigView(const GraphModel& graph, const std::vector<BondId>& occupied);
    // Occupied bonds given by a bitmask over canonical ids (bond count <= 64).
    ConfigView(const GraphModel& graph, std::uint64_t occupied_mask);

    bool occupied(BondId b, int* edge_idx = nullptr) const;

    // Occupied cluster of src as a vertex mask, optionally with one edge
    // (by local index) treated as vacant.
    std::uint64_t cluster(int src, int skip_edge = -1) const;
    // Cluster of src after removing every occupied edge with an endpoint
    // in the vertex set A.
    std::uint64_t cluster_avoiding(int src, std::uint64_t A) const;
    // Cluster of src with the (possibly vacant) bond {u,v} added.
    std::uint64_t cluster_with_extra(int src, int u, int v) const;

    // Vertex mask of x doubly connected to src (two bond-disjoint occupied
    // paths, or x == src). Absence of a separating occupied bridge.
    std::uint64_t double_connected_mask(int src) const;

    // Per-target mask of the through-A connection from v, with the
    // convention that v is through-A connected to itself iff v is in A.
    std::uint64_t through_mask(int v, std::uint64_t A) const;

    // Per-target mask of E'(v, x; A): through-A connection and no pivotal
    // directed bond (u',v') for the v<->x connection with v through-A
    // connected to u'. Only occupied bridges can be pivotal once v<->x
    // holds, so the scan runs over occupied edges.
    std::uint64_t e_prime_mask(int v, std::uint64_t A) const;

    // Existence of an occupied self-avoiding path from x to y of length at
    // least min_len (closed paths for x == y need length >= 3). Shortest
    // path distance >= min_len short-circuits; otherwise a DFS over simple
    // paths decides.
    bool exists_saw_at_least(int x, int y, int min_len) const;

  private:
    void finish(const GraphModel& graph);
};

// Single-pair convenience wrappers.
bool is_connected(const ConfigView& c, int x, int y);
std::uint64_t cluster_without_bond(const ConfigView& c, BondId b, int x);
bool double_connected(const ConfigView& c, int x, int y);
bool connected_through(const ConfigView& c, int x, int y, std::uint64_t A);
bool is_pivotal(const ConfigView& c, int u, int v, int x, int y);
bool e_prime_holds(const ConfigView& c, int v, int x, std::uint64_t A);

}  // namespace percolab::events
