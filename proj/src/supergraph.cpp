#include "disland/supergraph.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace disland {

std::size_t SuperGraph::enforced_edge_count() const {
    std::size_t k = 0;
    for (const auto& c : covers) k += c.enforced;
    return k;
}

std::size_t SuperGraph::cross_edge_count() const {
    std::size_t k = 0;
    for (const auto& e : edges) k += e.origin == kCrossOrigin;
    return k;
}

namespace {

// Local-equals-global pairs in the fragment's own ids (positions in members).
std::vector<NodePair> filter_local(const Partition& p,
                                   std::uint32_t i, Dijkstra& global, Dijkstra& local) {
    const auto& members = p.members[i];
    const auto& bnd = p.boundary[i];
    std::vector<NodeId> local_bnd;
    for (NodeId b : bnd)
        local_bnd.push_back(static_cast<NodeId>(std::lower_bound(members.begin(), members.end(), b) - members.begin()));
    std::vector<NodePair> out;
    for (std::size_t a = 0; a + 1 < bnd.size(); ++a) {
        const auto later = std::span(bnd).subspan(a + 1);
        const auto later_local = std::span(local_bnd).subspan(a + 1);
        local.run(local_bnd[a], later_local);
        global.run(bnd[a], later);
        for (std::size_t b = 0; b < later.size(); ++b) {
            const Distance dl = local.dist(later_local[b]);
            if (dl != kUnreachable && dl == global.dist(later[b])) out.push_back({local_bnd[a], later_local[b]});
        }
    }
    return out;
}

}  // namespace

std::vector<NodePair> local_global_filter(const WeightedGraph& g, const Partition& p, std::uint32_t i) {
    if (i >= p.k) throw ValidationError("fragment index out of range");
    const auto sub = g.induced(p.members[i]);
    Dijkstra global(g), local(sub);
    auto pairs = filter_local(p, i, global, local);
    for (auto& [a, b] : pairs) {
        a = p.members[i][a];
        b = p.members[i][b];
    }
    return pairs;
}

SuperGraph assemble_supergraph(std::size_t node_count, std::vector<NodeId> nodes, std::vector<SuperEdge> edges,
                               std::vector<FragmentCover> covers) {
    SuperGraph sg;
    sg.nodes = std::move(nodes);
    sg.is_node.assign(node_count, 0);
    for (NodeId v : sg.nodes) {
        if (v >= node_count) throw ValidationError("super graph node out of range");
        sg.is_node[v] = 1;
    }
    sg.edges = std::move(edges);
    sg.covers = std::move(covers);
    std::vector<Edge> plain;
    plain.reserve(sg.edges.size());
    for (const auto& e : sg.edges) {
        if (e.u >= node_count || e.v >= node_count || !sg.is_node[e.u] || !sg.is_node[e.v])
            throw ValidationError("super graph edge references a non-super node");
        plain.push_back({e.u, e.v, e.w});
    }
    sg.graph = WeightedGraph::from_edges(node_count, plain);
    return sg;
}

SuperGraph build_supergraph(const WeightedGraph& g, const Partition& p, const NodeOrder* order,
                            const SuperGraphOptions& opts) {
    const std::size_t n = g.node_count();
    if (p.fragment_of.size() != n) throw ValidationError("partition does not match the graph");
    if (order && order->size() != n) throw ValidationError("order does not match the graph");

    struct Result {
        std::vector<SuperEdge> edges;
        std::vector<NodeId> landmarks;
        FragmentCover cover;
    };
    std::vector<Result> results(p.k);
    std::atomic<std::uint32_t> next{0};
    auto worker = [&] {
        Dijkstra global(g);
        for (std::uint32_t i; (i = next.fetch_add(1)) < p.k;) {
            const auto& members = p.members[i];
            Result& r = results[i];
            if (p.boundary[i].size() < 2) continue;
            const auto sub = g.induced(members);
            Dijkstra local(sub);
            const auto pairs = filter_local(p, i, global, local);
            r.cover.pairs = pairs.size();
            NodeOrder local_order;
            if (order)
                for (NodeId v : members) local_order.push_back((*order)[v]);
            const auto h = hybrid_cover(sub, pairs, order ? &local_order : nullptr, HybridOptions{opts.cost_model});
            r.cover.landmarks = h.landmarks.size();
            r.cover.enforced = h.enforced_edge_count();
            r.cover.direct = h.direct_edges.size();
            for (const Edge& e : h.enforced_edges()) {
                const NodeId a = members[e.u], b = members[e.v];
                r.edges.push_back({std::min(a, b), std::max(a, b), e.w, i});
            }
            for (const auto& lm : h.landmarks) r.landmarks.push_back(members[lm.node]);
        }
    };
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::max(1u, std::min<unsigned>(threads, std::max<std::uint32_t>(p.k, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<std::uint8_t> is_node(n, 0);
    for (NodeId v = 0; v < n; ++v) is_node[v] = p.is_boundary[v];
    std::vector<SuperEdge> edges;
    for (const Edge& e : p.cross_edges) edges.push_back({e.u, e.v, e.w, kCrossOrigin});
    std::vector<FragmentCover> covers;
    for (auto& r : results) {
        for (NodeId x : r.landmarks) is_node[x] = 1;
        edges.insert(edges.end(), r.edges.begin(), r.edges.end());
        covers.push_back(r.cover);
    }
    // one edge per pair: minimum weight, fragment origins before cross edges on ties
    std::sort(edges.begin(), edges.end(), [](const SuperEdge& a, const SuperEdge& b) {
        return std::tie(a.u, a.v, a.w, a.origin) < std::tie(b.u, b.v, b.w, b.origin);
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const SuperEdge& a, const SuperEdge& b) { return a.u == b.u && a.v == b.v; }),
                edges.end());
    std::vector<NodeId> nodes;
    for (NodeId v = 0; v < n; ++v)
        if (is_node[v]) nodes.push_back(v);
    return assemble_supergraph(n, std::move(nodes), std::move(edges), std::move(covers));
}

}  // namespace disland
