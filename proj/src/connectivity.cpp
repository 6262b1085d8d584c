#include "disland/connectivity.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace disland {

namespace {
constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();

struct Frame {
    NodeId node;
    NodeId parent;
    std::size_t next;  // next arc offset within neighbors(node)
};

Bcc make_bcc(std::vector<Edge> edges) {
    Bcc b;
    b.nodes.reserve(edges.size() + 1);
    for (const Edge& e : edges) {
        b.nodes.push_back(e.u);
        b.nodes.push_back(e.v);
    }
    std::sort(b.nodes.begin(), b.nodes.end());
    b.nodes.erase(std::unique(b.nodes.begin(), b.nodes.end()), b.nodes.end());
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& c) { return std::tie(a.u, a.v) < std::tie(c.u, c.v); });
    b.edges = std::move(edges);
    return b;
}
}  // namespace

BccDecomposition find_bccs(const WeightedGraph& g) {
    const std::size_t n = g.node_count();
    BccDecomposition out;
    out.is_cut.assign(n, 0);

    std::vector<std::uint32_t> disc(n, kUnvisited), low(n, 0);
    std::vector<Frame> stack;
    std::vector<Edge> edge_stack;
    std::uint32_t timer = 0;

    for (NodeId root = 0; root < n; ++root) {
        if (disc[root] != kUnvisited) continue;
        if (g.degree(root) == 0) {
            disc[root] = timer++;
            out.bccs.push_back(Bcc{{}, {root}});
            continue;
        }
        std::size_t root_children = 0;
        disc[root] = low[root] = timer++;
        stack.push_back({root, kNoNode, 0});

        while (!stack.empty()) {
            Frame& f = stack.back();
            const NodeId u = f.node;
            auto nb = g.neighbors(u);
            if (f.next < nb.size()) {
                const Arc& a = nb[f.next++];
                const NodeId w = a.head;
                if (w == f.parent) continue;  // simple graph: the tree edge back to the parent
                if (disc[w] == kUnvisited) {
                    edge_stack.push_back({std::min(u, w), std::max(u, w), a.w});
                    disc[w] = low[w] = timer++;
                    if (u == root) ++root_children;
                    stack.push_back({w, u, 0});
                } else if (disc[w] < disc[u]) {
                    edge_stack.push_back({std::min(u, w), std::max(u, w), a.w});
                    low[u] = std::min(low[u], disc[w]);
                }
                continue;
            }
            // u finished
            const NodeId parent = f.parent;
            stack.pop_back();
            if (parent == kNoNode) continue;
            low[parent] = std::min(low[parent], low[u]);
            if (low[u] >= disc[parent]) {
                if (parent != root) out.is_cut[parent] = 1;
                const Edge tree{std::min(parent, u), std::max(parent, u), 0};
                std::vector<Edge> comp;
                while (true) {
                    Edge e = edge_stack.back();
                    edge_stack.pop_back();
                    comp.push_back(e);
                    if (e.u == tree.u && e.v == tree.v) break;
                }
                out.bccs.push_back(make_bcc(std::move(comp)));
            }
        }
        if (root_children >= 2) out.is_cut[root] = 1;
    }

    for (NodeId v = 0; v < n; ++v)
        if (out.is_cut[v]) out.cut_nodes.push_back(v);
    return out;
}

BcSketch build_sketch(const WeightedGraph& g, const BccDecomposition& d) {
    BcSketch s;
    std::vector<std::uint32_t> cut_index(g.node_count(), kUnvisited);
    for (NodeId v : d.cut_nodes) {
        cut_index[v] = static_cast<std::uint32_t>(s.cut_node.size());
        s.cut_node.push_back(v);
    }
    s.cut_adj.resize(s.cut_node.size());
    s.bcc_adj.resize(d.bccs.size());
    s.omega.reserve(d.bccs.size());
    for (std::uint32_t j = 0; j < d.bccs.size(); ++j) {
        s.omega.push_back(static_cast<std::uint32_t>(d.bccs[j].nodes.size()));
        for (NodeId v : d.bccs[j].nodes) {
            if (cut_index[v] == kUnvisited) continue;
            s.edges.emplace_back(cut_index[v], j);
            s.cut_adj[cut_index[v]].push_back(j);
            s.bcc_adj[j].push_back(cut_index[v]);
        }
    }
    return s;
}

}  // namespace disland
