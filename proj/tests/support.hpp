#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// library's search code except WeightedGraph construction.

#include "disland/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace disland::testing {

using Matrix = std::vector<std::vector<Distance>>;

inline Matrix floyd_warshall(const WeightedGraph& g) {
    const std::size_t n = g.node_count();
    Matrix d(n, std::vector<Distance>(n, kUnreachable));
    for (NodeId u = 0; u < n; ++u) {
        d[u][u] = 0;
        for (const Arc& a : g.neighbors(u)) d[u][a.head] = std::min(d[u][a.head], a.w);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i][k] == kUnreachable) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (d[k][j] != kUnreachable && d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
        }
    return d;
}

// Components counted by plain DFS over the nodes admitted by `alive`.
template <class Alive>
std::size_t count_components(const WeightedGraph& g, Alive&& alive) {
    std::vector<std::uint8_t> seen(g.node_count(), 0);
    std::size_t k = 0;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (!alive(s) || seen[s]) continue;
        ++k;
        std::vector<NodeId> st{s};
        seen[s] = 1;
        while (!st.empty()) {
            NodeId u = st.back();
            st.pop_back();
            for (const Arc& a : g.neighbors(u))
                if (alive(a.head) && !seen[a.head]) {
                    seen[a.head] = 1;
                    st.push_back(a.head);
                }
        }
    }
    return k;
}

inline std::vector<NodeId> brute_cut_nodes(const WeightedGraph& g) {
    const std::size_t base = count_components(g, [](NodeId) { return true; });
    std::vector<NodeId> cuts;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        // removing an isolated node lowers the count; that is not a cut
        std::size_t k = count_components(g, [v](NodeId x) { return x != v; });
        if (k > base - (g.degree(v) == 0 ? 1 : 0)) cuts.push_back(v);
    }
    return cuts;
}

inline WeightedGraph random_connected(std::size_t n, std::size_t extra, Weight max_w, std::mt19937_64& rng) {
    std::vector<Edge> edges;
    std::uniform_int_distribution<Weight> wd(1, max_w);
    for (NodeId v = 1; v < n; ++v) {
        std::uniform_int_distribution<NodeId> pick(0, v - 1);
        edges.push_back({pick(rng), v, wd(rng)});
    }
    if (n >= 2) {
        std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(n - 1));
        for (std::size_t i = 0; i < extra; ++i) {
            NodeId a = any(rng), b = any(rng);
            if (a != b) edges.push_back({a, b, wd(rng)});
        }
    }
    return WeightedGraph::from_edges(n, edges);
}

inline WeightedGraph random_graph(std::size_t n, std::size_t m, Weight max_w, std::mt19937_64& rng) {
    std::vector<Edge> edges;
    std::uniform_int_distribution<Weight> wd(1, max_w);
    if (n >= 2) {
        std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(n - 1));
        for (std::size_t i = 0; i < m; ++i) {
            NodeId a = any(rng), b = any(rng);
            if (a != b) edges.push_back({a, b, wd(rng)});
        }
    }
    return WeightedGraph::from_edges(n, edges);
}

// Grid-like network with dropped links, dead-end chains and small loops hung
// off it, weights close to the coordinate distance. Always connected.
inline WeightedGraph road_like(std::size_t n, std::mt19937_64& rng) {
    const std::size_t core = std::max<std::size_t>(4, n * 6 / 10);
    const auto side = static_cast<std::size_t>(std::max(2.0, std::sqrt(static_cast<double>(core))));
    std::vector<Coord> coords;
    std::vector<Edge> edges;
    std::uniform_int_distribution<int> jitter(-30, 30);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto weight = [&](NodeId a, NodeId b) {
        double dx = double(coords[a].x - coords[b].x), dy = double(coords[a].y - coords[b].y);
        return static_cast<Weight>(std::max(1.0, std::round(std::sqrt(dx * dx + dy * dy))));
    };
    const std::size_t grid_n = std::min(n, side * side);
    for (std::size_t i = 0; i < grid_n; ++i)
        coords.push_back({static_cast<std::int64_t>((i % side) * 100 + jitter(rng)),
                          static_cast<std::int64_t>((i / side) * 100 + jitter(rng))});
    // spanning tree first (snake order keeps it connected), then most grid links
    for (std::size_t i = 1; i < grid_n; ++i) {
        NodeId a = static_cast<NodeId>(i), b = static_cast<NodeId>(i % side ? i - 1 : i - side);
        edges.push_back({a, b, weight(a, b)});
    }
    for (std::size_t i = 0; i < grid_n; ++i) {
        if (i % side + 1 < side && i + 1 < grid_n && coin(rng) < 0.35)
            edges.push_back({NodeId(i), NodeId(i + 1), weight(NodeId(i), NodeId(i + 1))});
        if (i + side < grid_n && coin(rng) < 0.55)
            edges.push_back({NodeId(i), NodeId(i + side), weight(NodeId(i), NodeId(i + side))});
    }
    // hang chains, forks and tiny loops off random nodes
    while (coords.size() < n) {
        std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(coords.size() - 1));
        NodeId at = any(rng);
        const std::size_t len = 1 + rng() % 4;
        NodeId prev = at;
        for (std::size_t k = 0; k < len && coords.size() < n; ++k) {
            NodeId v = static_cast<NodeId>(coords.size());
            coords.push_back({coords[prev].x + jitter(rng), coords[prev].y + jitter(rng)});
            edges.push_back({prev, v, weight(prev, v)});
            if (k == 2 && coin(rng) < 0.3) edges.push_back({at, v, weight(at, v) + 5});
            prev = v;
        }
    }
    return WeightedGraph::from_edges(n, edges, std::move(coords));
}

inline WeightedGraph path_graph(std::vector<Weight> ws) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < ws.size(); ++i) e.push_back({i, i + 1, ws[i]});
    return WeightedGraph::from_edges(ws.size() + 1, e);
}

// Every reachable pair has a member of s on one of its shortest paths.
inline bool is_landmark_cover(const Matrix& d, const std::vector<NodeId>& s) {
    const std::size_t n = d.size();
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) {
            if (d[u][v] == kUnreachable) continue;
            bool ok = false;
            for (NodeId x : s) ok = ok || (d[u][x] != kUnreachable && d[u][x] + d[x][v] == d[u][v]);
            if (!ok) return false;
        }
    return true;
}

inline bool is_vertex_cover(const WeightedGraph& g, const std::vector<NodeId>& s) {
    std::set<NodeId> in(s.begin(), s.end());
    for (const Edge& e : g.edges())
        if (!in.count(e.u) && !in.count(e.v)) return false;
    return true;
}

inline std::vector<NodeId> subset(std::uint32_t mask, std::size_t n) {
    std::vector<NodeId> s;
    for (NodeId i = 0; i < n; ++i)
        if (mask >> i & 1) s.push_back(i);
    return s;
}

inline std::size_t min_vertex_cover(const WeightedGraph& g) {
    const std::size_t n = g.node_count();
    std::size_t best = n;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (static_cast<std::size_t>(__builtin_popcount(m)) < best && is_vertex_cover(g, subset(m, n)))
            best = __builtin_popcount(m);
    return best;
}

inline void write_dimacs(const WeightedGraph& g, std::ostream& gr, std::ostream* co = nullptr) {
    gr << "c test graph\np sp " << g.node_count() << " " << g.arc_count() << "\n";
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (const Arc& a : g.neighbors(u)) gr << "a " << u + 1 << " " << a.head + 1 << " " << a.w << "\n";
    if (co && g.has_coords()) {
        *co << "p aux sp co " << g.node_count() << "\n";
        for (NodeId u = 0; u < g.node_count(); ++u)
            *co << "v " << u + 1 << " " << g.coords()[u].x << " " << g.coords()[u].y << "\n";
    }
}

}  // namespace disland::testing
