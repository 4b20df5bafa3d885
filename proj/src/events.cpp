#include "percolab/events.hpp"

#include <algorithm>
#include <bit>

#include "percolab/rational.hpp"

namespace percolab::events {

namespace {
inline std::uint64_t bit(int v) { return std::uint64_t(1) << v; }
}

ConfigView::ConfigView(const GraphModel& graph, const std::vector<BondId>& occupied) {
    if (occupied.size() > 64) throw ResourceGuardError("config limited to 64 occupied bonds");
    ne = static_cast<int>(occupied.size());
    for (int e = 0; e < ne; ++e) {
        edge_id[e] = occupied[e];
        auto [a, b] = graph.bond_endpoints(occupied[e]);
        eu[e] = static_cast<std::uint8_t>(a);
        ev[e] = static_cast<std::uint8_t>(b);
    }
    finish(graph);
}

ConfigView::ConfigView(const GraphModel& graph, std::uint64_t occupied_mask) {
    ne = 0;
    while (occupied_mask) {
        const int b = std::countr_zero(occupied_mask);
        occupied_mask &= occupied_mask - 1;
        edge_id[ne] = b;
        auto [s, t] = graph.bond_endpoints(b);
        eu[ne] = static_cast<std::uint8_t>(s);
        ev[ne] = static_cast<std::uint8_t>(t);
        ++ne;
    }
    finish(graph);
}

void ConfigView::finish(const GraphModel& graph) {
    if (graph.vertex_count > 64) throw ResourceGuardError("event algebra limited to 64 vertices");
    g = &graph;
    nv = static_cast<int>(graph.vertex_count);
    std::array<std::uint8_t, 64> deg{};
    for (int e = 0; e < ne; ++e) {
        ++deg[eu[e]];
        ++deg[ev[e]];
    }
    adj_start[0] = 0;
    for (int v = 0; v < nv; ++v)
        adj_start[v + 1] = static_cast<std::uint8_t>(adj_start[v] + deg[v]);
    std::array<std::uint8_t, 64> fill{};
    for (int e = 0; e < ne; ++e) {
        const int a = eu[e], b = ev[e];
        adj_nbr[adj_start[a] + fill[a]] = static_cast<std::uint8_t>(b);
        adj_edge[adj_start[a] + fill[a]] = static_cast<std::uint8_t>(e);
        ++fill[a];
        adj_nbr[adj_start[b] + fill[b]] = static_cast<std::uint8_t>(a);
        adj_edge[adj_start[b] + fill[b]] = static_cast<std::uint8_t>(e);
        ++fill[b];
    }
}

bool ConfigView::occupied(BondId b, int* edge_idx) const {
    for (int e = 0; e < ne; ++e)
        if (edge_id[e] == b) {
            if (edge_idx) *edge_idx = e;
            return true;
        }
    return false;
}

std::uint64_t ConfigView::cluster(int src, int skip_edge) const {
    std::uint64_t vis = bit(src), frontier = vis;
    while (frontier) {
        const int v = std::countr_zero(frontier);
        frontier &= frontier - 1;
        for (int k = adj_start[v]; k < adj_start[v + 1]; ++k) {
            if (adj_edge[k] == skip_edge) continue;
            const std::uint64_t w = bit(adj_nbr[k]);
            if (!(vis & w)) {
                vis |= w;
                frontier |= w;
            }
        }
    }
    return vis;
}

std::uint64_t ConfigView::cluster_avoiding(int src, std::uint64_t A) const {
    std::uint64_t vis = bit(src), frontier = vis;
    while (frontier) {
        const int v = std::countr_zero(frontier);
        frontier &= frontier - 1;
        if (A & bit(v)) continue;
        for (int k = adj_start[v]; k < adj_start[v + 1]; ++k) {
            if (A & bit(adj_nbr[k])) continue;
            const std::uint64_t w = bit(adj_nbr[k]);
            if (!(vis & w)) {
                vis |= w;
                frontier |= w;
            }
        }
    }
    return vis;
}

std::uint64_t ConfigView::cluster_with_extra(int src, int u, int v) const {
    std::uint64_t c = cluster(src);
    const bool hu = c & bit(u), hv = c & bit(v);
    if (hu && !hv) c |= cluster(v);
    if (hv && !hu) c |= cluster(u);
    return c;
}

std::uint64_t ConfigView::double_connected_mask(int src) const {
    const std::uint64_t c = cluster(src);
    std::uint64_t dd = c;
    for (int e = 0; e < ne; ++e) {
        if (!(c & bit(eu[e]))) continue;
        const std::uint64_t cb = cluster(src, e);
        if (cb != c) dd &= cb;
    }
    return dd;
}

std::uint64_t ConfigView::through_mask(int v, std::uint64_t A) const {
    const std::uint64_t c = cluster(v);
    const std::uint64_t reduced = cluster_avoiding(v, A);
    std::uint64_t mask = (c & ~reduced) & ~bit(v);
    if (A & bit(v)) mask |= bit(v);
    return mask;
}

std::uint64_t ConfigView::e_prime_mask(int v, std::uint64_t A) const {
    const std::uint64_t through = through_mask(v, A);
    if (!through) return 0;
    const std::uint64_t c = cluster(v);
    std::uint64_t violated = 0;
    for (int e = 0; e < ne; ++e) {
        if (!(c & bit(eu[e]))) continue;
        const std::uint64_t cb = cluster(v, e);
        const std::uint64_t affected = c & ~cb;
        if (!affected) continue;
        const int uprime = (cb & bit(eu[e])) ? eu[e] : ev[e];
        if (through & bit(uprime)) violated |= affected;
    }
    return through & ~violated;
}

bool ConfigView::exists_saw_at_least(int x, int y, int min_len) const {
    if (x == y && min_len <= 0) return true;
    const std::uint64_t cx = cluster(x);
    if (!(cx & bit(y))) return false;
    if (x != y) {
        // breadth-first distance; a shortest occupied path is self-avoiding
        std::uint64_t vis = bit(x), level = vis;
        int dist = 0;
        while (!(vis & bit(y))) {
            std::uint64_t next = 0;
            while (level) {
                const int v = std::countr_zero(level);
                level &= level - 1;
                for (int k = adj_start[v]; k < adj_start[v + 1]; ++k) next |= bit(adj_nbr[k]);
            }
            next &= ~vis;
            vis |= next;
            level = next;
            ++dist;
        }
        if (dist >= min_len) return true;
    }
    // depth-first search over simple paths from x, accepting on arrival at y
    // with enough length (closed paths need length >= 3)
    const int need = (x == y) ? std::max(min_len, 3) : min_len;
    std::array<std::uint8_t, 64> stack_v{};
    std::array<std::uint8_t, 64> stack_k{};
    std::uint64_t on_path = bit(x);
    int depth = 0;
    stack_v[0] = static_cast<std::uint8_t>(x);
    stack_k[0] = adj_start[x];
    while (depth >= 0) {
        const int v = stack_v[depth];
        if (stack_k[depth] >= adj_start[v + 1]) {
            on_path &= ~bit(v);
            --depth;
            continue;
        }
        const int w = adj_nbr[stack_k[depth]++];
        if (w == y) {
            if (depth + 1 >= need) return true;
            continue;  // a simple path cannot extend past its terminus
        }
        if (on_path & bit(w)) continue;
        ++depth;
        stack_v[depth] = static_cast<std::uint8_t>(w);
        stack_k[depth] = adj_start[w];
        on_path |= bit(w);
    }
    return false;
}

bool is_connected(const ConfigView& c, int x, int y) { return (c.cluster(x) >> y) & 1; }

std::uint64_t cluster_without_bond(const ConfigView& c, BondId b, int x) {
    int e = -1;
    c.occupied(b, &e);
    return c.cluster(x, e);
}

bool double_connected(const ConfigView& c, int x, int y) {
    return (c.double_connected_mask(x) >> y) & 1;
}

bool connected_through(const ConfigView& c, int x, int y, std::uint64_t A) {
    return (c.through_mask(x, A) >> y) & 1;
}

bool is_pivotal(const ConfigView& c, int u, int v, int x, int y) {
    int e = -1;
    for (int i = 0; i < c.ne; ++i)
        if ((c.eu[i] == u && c.ev[i] == v) || (c.eu[i] == v && c.ev[i] == u)) {
            e = i;
            break;
        }
    // clause (a): x <-> y with {u,v} occupied
    const bool a_holds = e >= 0 ? ((c.cluster(x) >> y) & 1)
                                : ((c.cluster_with_extra(x, u, v) >> y) & 1);
    if (!a_holds) return false;
    // clause (b): with {u,v} vacant, x <-> y fails but x <-> u and v <-> y hold
    const std::uint64_t cx = c.cluster(x, e);
    if ((cx >> y) & 1) return false;
    if (!((cx >> u) & 1)) return false;
    return (c.cluster(v, e) >> y) & 1;
}

bool e_prime_holds(const ConfigView& c, int v, int x, std::uint64_t A) {
    return (c.e_prime_mask(v, A) >> x) & 1;
}

}  // namespace percolab::events
