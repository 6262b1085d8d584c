#include "disland/landmarks.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

namespace disland {

namespace {

using AdjList = std::vector<std::vector<Arc>>;

// dist(u, v) avoiding the direct edge (u,v), abandoned once every tentative
// distance exceeds `bound`. Returns kUnreachable when abandoned.
template <class Neighbors>
Distance detour_distance(std::size_t n, Neighbors&& nb, NodeId u, NodeId v, Distance bound) {
    std::vector<Distance> dist(n, kUnreachable);
    using Item = std::pair<Distance, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[u] = 0;
    pq.push({0, u});
    while (!pq.empty()) {
        auto [d, x] = pq.top();
        pq.pop();
        if (d != dist[x]) continue;
        if (d > bound) return kUnreachable;
        if (x == v) return d;
        for (const Arc& a : nb(x)) {
            if ((x == u && a.head == v) || (x == v && a.head == u)) continue;
            if (d + a.w < dist[a.head]) {
                dist[a.head] = d + a.w;
                pq.push({d + a.w, a.head});
            }
        }
    }
    return kUnreachable;
}

// Shortest-path data for a pair set: one full Dijkstra per distinct endpoint,
// plus for each pair the nodes lying on at least one of its shortest paths.
struct PairCoverage {
    std::vector<NodePair> pairs;
    std::vector<Distance> pair_dist;
    std::vector<std::vector<NodeId>> candidates;  // per pair
    std::map<NodeId, std::vector<Distance>> rows;

    PairCoverage(const WeightedGraph& g, std::span<const NodePair> input) {
        for (auto [u, v] : input) {
            if (u >= g.node_count() || v >= g.node_count())
                throw ValidationError("pair references a node outside the graph");
            if (u == v) continue;
            pairs.push_back({std::min(u, v), std::max(u, v)});
        }
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

        Dijkstra search(g);
        auto row_of = [&](NodeId s) -> const std::vector<Distance>& {
            auto it = rows.find(s);
            if (it != rows.end()) return it->second;
            search.run(s);
            std::vector<Distance> r(g.node_count());
            for (NodeId x = 0; x < g.node_count(); ++x) r[x] = search.dist(x);
            return rows.emplace(s, std::move(r)).first->second;
        };
        for (auto [u, v] : pairs) {
            row_of(u);
            row_of(v);
        }
        candidates.resize(pairs.size());
        pair_dist.resize(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& du = rows.at(pairs[i].first);
            const auto& dv = rows.at(pairs[i].second);
            const Distance d = du[pairs[i].second];
            if (d == kUnreachable)
                throw ValidationError("pair (" + std::to_string(pairs[i].first) + "," +
                                      std::to_string(pairs[i].second) + ") is unreachable");
            pair_dist[i] = d;
            for (NodeId x = 0; x < g.node_count(); ++x)
                if (du[x] != kUnreachable && dv[x] != kUnreachable && du[x] + dv[x] == d)
                    candidates[i].push_back(x);
        }
    }

    Distance dist(NodeId endpoint, NodeId x) const { return rows.at(endpoint)[x]; }
};

struct Group {
    NodeId node;
    std::vector<std::size_t> pairs;  // indices into PairCoverage::pairs
};

// Greedy set cover restricted to the pair indices flagged in `live`.
std::vector<Group> greedy_groups(const PairCoverage& pc, std::size_t n, std::vector<std::uint8_t> live) {
    std::vector<std::vector<std::size_t>> by_node(n);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i = 0; i < pc.pairs.size(); ++i) {
        if (!live[i]) continue;
        for (NodeId x : pc.candidates[i]) {
            by_node[x].push_back(i);
            ++count[x];
        }
    }
    // max count first, then smallest id
    using Item = std::pair<std::size_t, NodeId>;
    auto cmp = [](const Item& a, const Item& b) {
        return a.first != b.first ? a.first < b.first : a.second > b.second;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
    for (NodeId x = 0; x < n; ++x)
        if (count[x] > 0) pq.push({count[x], x});

    std::vector<Group> groups;
    while (!pq.empty()) {
        auto [c, x] = pq.top();
        pq.pop();
        if (c != count[x]) {
            if (count[x] > 0) pq.push({count[x], x});
            continue;
        }
        Group grp{x, {}};
        for (std::size_t i : by_node[x]) {
            if (!live[i]) continue;
            live[i] = 0;
            grp.pairs.push_back(i);
            for (NodeId y : pc.candidates[i]) --count[y];
        }
        groups.push_back(std::move(grp));
    }
    return groups;
}

std::vector<NodeId> distinct_endpoints(const PairCoverage& pc, const std::vector<std::size_t>& idx) {
    std::vector<NodeId> nodes;
    nodes.reserve(idx.size() * 2);
    for (std::size_t i : idx) {
        nodes.push_back(pc.pairs[i].first);
        nodes.push_back(pc.pairs[i].second);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

HybridLandmark make_landmark(const PairCoverage& pc, const Group& grp) {
    HybridLandmark lm;
    lm.node = grp.node;
    for (NodeId y : distinct_endpoints(pc, grp.pairs)) lm.covered.emplace_back(y, pc.dist(y, grp.node));
    for (std::size_t i : grp.pairs) lm.pairs.push_back(pc.pairs[i]);
    return lm;
}

struct ClimbMarks {
    std::vector<std::uint32_t> from_u, from_v;
    std::uint32_t stamp = 0;
    explicit ClimbMarks(std::size_t n) : from_u(n, 0), from_v(n, 0) {}
};

// Nodes reachable from `start` along shortest-path DAG arcs (w.r.t. `dist_from`)
// that stay on a shortest u-v path and strictly rise in rank.
template <class OnPath>
std::vector<NodeId> climb(const WeightedGraph& g, NodeId start, const std::vector<Distance>& dist_from,
                          const NodeOrder& rank, OnPath&& on_path, std::vector<std::uint32_t>& mark,
                          std::uint32_t stamp) {
    std::vector<NodeId> reached{start}, stack{start};
    mark[start] = stamp;
    while (!stack.empty()) {
        const NodeId a = stack.back();
        stack.pop_back();
        for (const Arc& arc : g.neighbors(a)) {
            const NodeId b = arc.head;
            if (mark[b] == stamp || rank[b] <= rank[a] || !on_path(b) || dist_from[a] + arc.w != dist_from[b])
                continue;
            mark[b] = stamp;
            reached.push_back(b);
            stack.push_back(b);
        }
    }
    return reached;
}

// Highest-ranked interior peak over the order-turning shortest paths of pair i.
std::optional<NodeId> turning_peak(const WeightedGraph& g, const PairCoverage& pc, std::size_t i,
                                   const NodeOrder& rank, ClimbMarks& marks) {
    const auto [u, v] = pc.pairs[i];
    const auto& du = pc.rows.at(u);
    const auto& dv = pc.rows.at(v);
    const Distance d = pc.pair_dist[i];
    auto on_path = [&](NodeId x) {
        return du[x] != kUnreachable && dv[x] != kUnreachable && du[x] + dv[x] == d;
    };
    const std::uint32_t stamp = ++marks.stamp;
    climb(g, u, du, rank, on_path, marks.from_u, stamp);
    std::optional<NodeId> best;
    for (NodeId b : climb(g, v, dv, rank, on_path, marks.from_v, stamp)) {
        if (b == u || b == v || marks.from_u[b] != stamp) continue;
        if (!best || rank[b] > rank[*best]) best = b;
    }
    return best;
}

}  // namespace

std::vector<Edge> HybridLandmarkCover::enforced_edges() const {
    std::vector<Edge> out;
    for (const auto& lm : landmarks)
        for (auto [y, d] : lm.covered)
            if (y != lm.node) out.push_back({std::min(lm.node, y), std::max(lm.node, y), d});
    out.insert(out.end(), direct_edges.begin(), direct_edges.end());
    return out;
}

std::size_t HybridLandmarkCover::enforced_edge_count() const {
    std::size_t k = direct_edges.size();
    for (const auto& lm : landmarks)
        for (auto [y, d] : lm.covered) k += y != lm.node;
    return k;
}

bool is_redundant_edge(const WeightedGraph& g, NodeId u, NodeId v) {
    if (u >= g.node_count() || v >= g.node_count())
        throw std::invalid_argument("is_redundant_edge: node out of range");
    auto w = g.edge_weight(u, v);
    if (!w) throw std::invalid_argument("is_redundant_edge: (u,v) is not an edge");
    Distance d = detour_distance(g.node_count(), [&g](NodeId x) { return g.neighbors(x); }, u, v, *w);
    return d != kUnreachable && d <= *w;
}

WeightedGraph refree_reduce(const WeightedGraph& g) {
    AdjList adj(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u)
        adj[u].assign(g.neighbors(u).begin(), g.neighbors(u).end());
    auto drop = [&adj](NodeId a, NodeId b) {
        std::erase_if(adj[a], [b](const Arc& x) { return x.head == b; });
    };

    std::vector<Edge> kept;
    for (const Edge& e : g.edges()) {
        Distance d = detour_distance(
            g.node_count(), [&adj](NodeId x) -> const std::vector<Arc>& { return adj[x]; }, e.u, e.v, e.w);
        if (d != kUnreachable && d <= e.w) {
            drop(e.u, e.v);
            drop(e.v, e.u);
        } else {
            kept.push_back(e);
        }
    }
    return WeightedGraph::from_edges(g.node_count(), kept, g.coords());
}

LandmarkCover vc_landmark_cover(const WeightedGraph& g) {
    const WeightedGraph re = refree_reduce(g);
    std::vector<std::uint8_t> matched(g.node_count(), 0);
    LandmarkCover cover;
    for (const Edge& e : re.edges()) {
        if (matched[e.u] || matched[e.v]) continue;
        matched[e.u] = matched[e.v] = 1;
        cover.landmarks.push_back(e.u);
        cover.landmarks.push_back(e.v);
    }
    Dijkstra search(g);
    for (NodeId x : cover.landmarks) {
        search.run(x);
        std::vector<std::pair<NodeId, Distance>> row;
        for (NodeId y = 0; y < g.node_count(); ++y)
            if (search.dist(y) != kUnreachable) row.emplace_back(y, search.dist(y));
        cover.dist_vectors.push_back(std::move(row));
    }
    return cover;
}

LandmarkCover greedy_setcover_landmarks(const WeightedGraph& g, std::span<const NodePair> pairs) {
    PairCoverage pc(g, pairs);
    LandmarkCover cover;
    for (const Group& grp : greedy_groups(pc, g.node_count(), std::vector<std::uint8_t>(pc.pairs.size(), 1))) {
        cover.landmarks.push_back(grp.node);
        cover.dist_vectors.push_back(make_landmark(pc, grp).covered);
    }
    return cover;
}

HybridLandmarkCover hybrid_cover(const WeightedGraph& g, std::span<const NodePair> pairs,
                                 const NodeOrder* order, HybridOptions opts) {
    PairCoverage pc(g, pairs);
    const std::size_t n = g.node_count();
    if (order && order->size() != n) throw std::invalid_argument("hybrid_cover: order size mismatch");

    HybridLandmarkCover out;
    std::vector<std::uint8_t> pending(pc.pairs.size(), 1);
    std::vector<std::uint8_t> direct(pc.pairs.size(), 0);

    auto settle = [&](const Group& grp) {
        const std::size_t nx = distinct_endpoints(pc, grp.pairs).size();
        if (!opts.cost_model || nx <= grp.pairs.size()) {
            out.landmarks.push_back(make_landmark(pc, grp));
        } else {
            for (std::size_t i : grp.pairs) direct[i] = 1;
        }
    };

    if (order) {
        std::map<NodeId, Group> peaks;
        ClimbMarks marks(n);
        for (std::size_t i = 0; i < pc.pairs.size(); ++i) {
            auto p = turning_peak(g, pc, i, *order, marks);
            if (!p) continue;
            auto& grp = peaks.try_emplace(*p, Group{*p, {}}).first->second;
            grp.pairs.push_back(i);
            pending[i] = 0;
        }
        for (auto& [x, grp] : peaks) settle(grp);
    }

    for (const Group& grp : greedy_groups(pc, n, pending)) settle(grp);

    if (opts.cost_model) {
        // Keep promoting nodes that pay for themselves over the remaining
        // direct pairs until none does.
        while (true) {
            std::vector<std::vector<std::size_t>> by_node(n);
            for (std::size_t i = 0; i < pc.pairs.size(); ++i)
                if (direct[i])
                    for (NodeId x : pc.candidates[i]) by_node[x].push_back(i);
            std::optional<NodeId> pick;
            for (NodeId x = 0; x < n; ++x) {
                if (by_node[x].empty()) continue;
                if (distinct_endpoints(pc, by_node[x]).size() > by_node[x].size()) continue;
                if (!pick || by_node[x].size() > by_node[*pick].size()) pick = x;
            }
            if (!pick) break;
            Group grp{*pick, by_node[*pick]};
            for (std::size_t i : grp.pairs) direct[i] = 0;
            out.landmarks.push_back(make_landmark(pc, grp));
        }
    }

    for (std::size_t i = 0; i < pc.pairs.size(); ++i)
        if (direct[i]) out.direct_edges.push_back({pc.pairs[i].first, pc.pairs[i].second, pc.pair_dist[i]});
    return out;
}

}  // namespace disland
