#include "percolab/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace percolab::graphs {

namespace {

// Remove bit j from v, shifting higher bits down.
inline std::uint64_t squeeze_bit(std::uint64_t v, int j) {
    const std::uint64_t low = v & ((std::uint64_t(1) << j) - 1);
    return low | ((v >> (j + 1)) << j);
}

inline std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

VertexId GraphModel::neighbor(VertexId v, int j) const {
    if (kind == GraphKind::hypercube) return v ^ (VertexId(1) << j);
    const int axis = j / 2;
    const std::uint64_t stride = ipow(m, axis);
    const std::uint64_t digit = (v / stride) % m;
    const std::uint64_t next = (j % 2 == 0) ? (digit + 1) % m : (digit + m - 1) % m;
    return v + (next - digit) * stride;
}

std::vector<VertexId> GraphModel::neighbors(VertexId v) const {
    if (!valid_vertex(v)) throw std::invalid_argument("invalid vertex id");
    std::vector<VertexId> out(omega);
    for (int j = 0; j < omega; ++j) out[j] = neighbor(v, j);
    return out;
}

BondId GraphModel::bond_count() const {
    return vertex_count * omega / 2;
}

BondId GraphModel::bond_id(VertexId v, int j) const {
    if (kind == GraphKind::hypercube) {
        const VertexId owner = v & ~(VertexId(1) << j);
        return BondId(j) * (vertex_count / 2) + squeeze_bit(owner, j);
    }
    const int axis = j / 2;
    const VertexId owner = (j % 2 == 0) ? v : neighbor(v, j);
    return BondId(axis) * vertex_count + owner;
}

std::pair<VertexId, VertexId> GraphModel::bond_endpoints(BondId b) const {
    if (kind == GraphKind::hypercube) {
        const int j = static_cast<int>(b / (vertex_count / 2));
        const std::uint64_t packed = b % (vertex_count / 2);
        const std::uint64_t low = packed & ((std::uint64_t(1) << j) - 1);
        const VertexId owner = low | ((packed >> j) << (j + 1));
        return {owner, owner | (VertexId(1) << j)};
    }
    const int axis = static_cast<int>(b / vertex_count);
    const VertexId owner = b % vertex_count;
    return {owner, neighbor(owner, 2 * axis)};
}

std::string GraphModel::name() const {
    if (kind == GraphKind::hypercube) return "q" + std::to_string(n);
    return "torus:" + std::to_string(n) + "," + std::to_string(m);
}

GraphModel build_graph(GraphKind kind, int n, int m) {
    if (n < 1) throw std::invalid_argument("dimension must be at least 1");
    GraphModel g;
    g.kind = kind;
    g.n = n;
    if (kind == GraphKind::hypercube) {
        if (n > 62) throw std::invalid_argument("hypercube dimension too large");
        g.m = 0;
        g.omega = n;
        g.omega_prime = n - 1;
        g.vertex_count = VertexId(1) << n;
    } else {
        if (m < 3)
            throw std::invalid_argument(
                "torus side length must be at least 3 (m = 2 makes parallel bonds ambiguous)");
        double size = 1;
        for (int i = 0; i < n; ++i) size *= m;
        if (size > 1e18) throw std::invalid_argument("torus too large");
        g.m = m;
        g.omega = 2 * n;
        g.omega_prime = 2 * n - 2;
        g.vertex_count = ipow(m, n);
        g.short_wrap_warning = (m == 4);
    }
    return g;
}

GraphModel build_graph_named(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    if (s.size() >= 2 && s[0] == 'q') return build_graph(GraphKind::hypercube, std::stoi(s.substr(1)));
    if (s.rfind("hypercube:", 0) == 0)
        return build_graph(GraphKind::hypercube, std::stoi(s.substr(10)));
    if (s.rfind("torus:", 0) == 0) {
        const auto comma = s.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("torus name needs n,m: " + name);
        return build_graph(GraphKind::torus, std::stoi(s.substr(6, comma - 6)),
                           std::stoi(s.substr(comma + 1)));
    }
    throw std::invalid_argument("unknown graph: " + name);
}

std::vector<FourCycle> four_cycles_through_origin(const GraphModel& g) {
    std::vector<FourCycle> out;
    // Closed 4-step self-avoiding walks 0 -> a -> b -> c -> 0; dedupe the two
    // orientations by requiring the first step's neighbor index below the last's.
    for (int j0 = 0; j0 < g.omega; ++j0) {
        const VertexId a = g.neighbor(0, j0);
        for (int j1 = 0; j1 < g.omega; ++j1) {
            const VertexId b = g.neighbor(a, j1);
            if (b == 0) continue;
            for (int j2 = 0; j2 < g.omega; ++j2) {
                const VertexId c = g.neighbor(b, j2);
                if (c == a || c == 0) continue;
                for (int j3 = 0; j3 < g.omega; ++j3) {
                    if (g.neighbor(c, j3) != 0) continue;
                    // orientation dedupe: keep the walk whose first neighbor
                    // index is smaller than the reversed walk's first index
                    int rev_first = -1;
                    for (int jj = 0; jj < g.omega; ++jj)
                        if (g.neighbor(0, jj) == c) { rev_first = jj; break; }
                    if (j0 > rev_first) continue;
                    FourCycle cyc;
                    cyc.vertices = {0, a, b, c};
                    cyc.bonds = {g.bond_id(0, j0), g.bond_id(a, j1), g.bond_id(b, j2),
                                 g.bond_id(c, j3)};
                    std::sort(cyc.bonds.begin(), cyc.bonds.end());
                    out.push_back(std::move(cyc));
                }
            }
        }
    }
    return out;
}

std::uint64_t count_4cycles_through_origin(const GraphModel& g) {
    return four_cycles_through_origin(g).size();
}

namespace {

// Closed walks of `steps` steps on the m-cycle starting anywhere fixed:
// sum over wind counts of binom(steps, rights) with rights - lefts = k*m.
Int cycle_closed_walks(int m, int steps) {
    Int total(0);
    for (int rights = 0; rights <= steps; ++rights) {
        const int drift = 2 * rights - steps;
        if (((drift % m) + m) % m == 0) total += binom(steps, rights);
    }
    return total;
}

}  // namespace

Int count_closed_walks(const GraphModel& g, int length) {
    if (length < 0) throw std::invalid_argument("length must be >= 0");
    if (length == 0) return Int(1);
    if (length > 16 || g.n > 64)
        throw ResourceGuardError("closed-walk count limited to length <= 16, n <= 64");
    if (g.kind == GraphKind::hypercube) {
        if (length % 2 != 0) return Int(0);
        // Walks tracked by coordinate weight w: w neighbors sit at weight
        // w-1 and n-w at weight w+1.
        std::vector<Int> cur(g.n + 1, Int(0)), next(g.n + 1);
        cur[0] = 1;
        for (int t = 0; t < length; ++t) {
            for (int w = 0; w <= g.n; ++w) next[w] = 0;
            for (int w = 0; w <= g.n; ++w) {
                if (cur[w] == 0) continue;
                if (w > 0) next[w - 1] += cur[w] * w;
                if (w < g.n) next[w + 1] += cur[w] * (g.n - w);
            }
            std::swap(cur, next);
        }
        return cur[0];
    }
    // Torus: distribute the steps among axes; each axis walks its own
    // m-cycle and the interleavings contribute a multinomial factor.
    std::vector<Int> per_axis(length + 1);
    for (int s = 0; s <= length; ++s) per_axis[s] = cycle_closed_walks(g.m, s);
    std::vector<Int> acc(length + 1, Int(0));
    acc[0] = 1;
    for (int axis = 0; axis < g.n; ++axis) {
        std::vector<Int> nxt(length + 1, Int(0));
        for (int t = 0; t <= length; ++t) {
            if (acc[t] == 0) continue;
            for (int s = 0; t + s <= length; ++s) {
                if (per_axis[s] == 0) continue;
                nxt[t + s] += acc[t] * per_axis[s] * binom(t + s, s);
            }
        }
        acc = std::move(nxt);
    }
    return acc[length];
}

}  // namespace percolab::graphs
