#include "disland/agents.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>

namespace disland {

std::size_t AgentConfig::threshold(std::size_t node_count) const {
    auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(node_count)));
    while (r * r > node_count) --r;
    while ((r + 1) * (r + 1) <= node_count) ++r;
    return static_cast<std::size_t>(c) * r;
}

std::size_t DraAssignment::represented_count() const {
    std::size_t k = 0;
    for (NodeId v = 0; v < owner.size(); ++v) k += owner[v] != v;
    return k;
}

namespace {

// Mutable view of the sketch while merging. BCC vertices are grouped with a
// union-find; each group keeps a linked list of the original BCCs it absorbed.
class SketchReducer {
public:
    SketchReducer(const BcSketch& s, std::size_t threshold)
        : s_(s), limit_(threshold) {
        const std::size_t b = s.omega.size();
        parent_.resize(b);
        for (std::uint32_t j = 0; j < b; ++j) parent_[j] = j;
        omega_.assign(s.omega.begin(), s.omega.end());
        bdeg_.resize(b);
        for (std::uint32_t j = 0; j < b; ++j) bdeg_[j] = static_cast<std::uint32_t>(s.bcc_adj[j].size());
        head_.resize(b);
        tail_.resize(b);
        next_.assign(b, kNone);
        for (std::uint32_t j = 0; j < b; ++j) head_[j] = tail_[j] = j;
        alive_.assign(s.cut_node.size(), 1);
        processed_.assign(s.cut_node.size(), 0);
    }

    void run() {
        std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> frontier;
        for (std::uint32_t i = 0; i < s_.cut_node.size(); ++i)
            if (eligible(i)) frontier.push(i);

        while (!frontier.empty()) {
            const std::uint32_t v = frontier.top();
            frontier.pop();
            if (processed_[v]) continue;
            processed_[v] = 1;

            auto xs = neighbors(v);
            std::uint64_t alpha = 1;
            for (auto y : xs) alpha += omega_[y] - 1;
            if (alpha > limit_) continue;

            std::uint32_t keep = xs.front();
            for (auto y : xs)
                if (bdeg_[y] > 1) keep = y;
            alive_[v] = 0;
            if (bdeg_[keep] > 1) {
                MergeEvent ev{v, keep, {}};
                for (auto y : xs)
                    if (y != keep) ev.leaves.emplace_back(head_[y], tail_[y]);
                events_.push_back(std::move(ev));
            }
            for (auto y : xs)
                if (y != keep) unite(keep, y);
            omega_[keep] = static_cast<std::uint32_t>(alpha);
            --bdeg_[keep];
            if (bdeg_[keep] == 1) {
                const std::uint32_t w = last_cut_neighbor(keep);
                if (!processed_[w] && eligible(w)) frontier.push(w);
            }
        }
    }

    std::uint32_t find(std::uint32_t j) {
        while (parent_[j] != j) {
            parent_[j] = parent_[parent_[j]];
            j = parent_[j];
        }
        return j;
    }

    // Resolved BCC groups adjacent to cut vertex i.
    std::vector<std::uint32_t> neighbors(std::uint32_t i) {
        std::vector<std::uint32_t> xs;
        xs.reserve(s_.cut_adj[i].size());
        for (auto j : s_.cut_adj[i]) xs.push_back(find(j));
        return xs;
    }

    // A merge into a non-leaf group that never turns into a leaf itself would
    // strand the absorbed leaves; such merges are reported so the caller can
    // restore the cut vertex as their agent.
    struct MergeEvent {
        std::uint32_t cut;
        std::uint32_t keep;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> leaves;  // member list segments
    };
    const std::vector<MergeEvent>& events() const { return events_; }

    template <class F>
    void for_each_segment_bcc(std::pair<std::uint32_t, std::uint32_t> seg, F&& f) const {
        for (std::uint32_t j = seg.first;; j = next_[j]) {
            f(j);
            if (j == seg.second) break;
        }
    }

    bool alive(std::uint32_t i) const { return alive_[i]; }
    std::uint32_t omega(std::uint32_t root) const { return omega_[root]; }
    std::uint32_t degree(std::uint32_t root) const { return bdeg_[root]; }

    template <class F>
    void for_each_member_bcc(std::uint32_t root, F&& f) const {
        for (std::uint32_t j = head_[root]; j != kNone; j = next_[j]) f(j);
    }

private:
    static constexpr std::uint32_t kNone = 0xffffffffu;

    bool eligible(std::uint32_t i) {
        if (!alive_[i]) return false;
        std::size_t inner = 0;
        for (auto j : s_.cut_adj[i])
            if (bdeg_[find(j)] > 1 && ++inner > 1) return false;
        return true;
    }

    void unite(std::uint32_t keep, std::uint32_t other) {
        parent_[other] = keep;
        next_[tail_[keep]] = head_[other];
        tail_[keep] = tail_[other];
    }

    std::uint32_t last_cut_neighbor(std::uint32_t root) {
        // Only the surviving group's own original adjacency can still hold live
        // cut vertices; absorbed leaves were attached to the merged cut vertex only.
        for (std::uint32_t j = head_[root]; j != kNone; j = next_[j])
            for (auto i : s_.bcc_adj[j])
                if (alive_[i]) return i;
        return kNone;
    }

    const BcSketch& s_;
    std::size_t limit_;
    std::vector<std::uint32_t> parent_, omega_, bdeg_, head_, tail_, next_;
    std::vector<std::uint8_t> alive_, processed_;
    std::vector<MergeEvent> events_;
};

// For every cut vertex: size of the largest component left in its connected
// component when the cut node is deleted. Sketch trees are rooted at a BCC vertex.
std::vector<std::size_t> largest_split(const BcSketch& s) {
    const std::size_t nc = s.cut_node.size(), nb = s.omega.size();
    std::vector<std::size_t> sub(nb, 0), comp_size(nb, 0), best(nc, 0);
    std::vector<std::uint32_t> parent_cut(nb, kNoDra), parent_bcc(nc, kNoDra);
    std::vector<std::uint8_t> seen(nb, 0);
    std::vector<std::uint32_t> order;
    for (std::uint32_t r = 0; r < nb; ++r) {
        if (seen[r]) continue;
        const std::size_t first = order.size();
        std::vector<std::uint32_t> stack{r};
        seen[r] = 1;
        while (!stack.empty()) {
            const std::uint32_t y = stack.back();
            stack.pop_back();
            order.push_back(y);
            for (auto c : s.bcc_adj[y]) {
                if (c == parent_cut[y]) continue;
                parent_bcc[c] = y;
                for (auto z : s.cut_adj[c])
                    if (z != y) {
                        parent_cut[z] = c;
                        seen[z] = 1;
                        stack.push_back(z);
                    }
            }
        }
        for (std::size_t k = order.size(); k-- > first;) {
            const std::uint32_t y = order[k];
            sub[y] += s.omega[y] - (parent_cut[y] == kNoDra ? 0 : 1);
            if (parent_cut[y] != kNoDra) sub[parent_bcc[parent_cut[y]]] += sub[y];
        }
        for (std::size_t k = first; k < order.size(); ++k) comp_size[order[k]] = sub[r];
    }
    for (std::uint32_t c = 0; c < nc; ++c) {
        std::size_t below = 0;
        for (auto y : s.cut_adj[c])
            if (y != parent_bcc[c]) {
                below += sub[y];
                best[c] = std::max(best[c], sub[y]);
            }
        best[c] = std::max(best[c], comp_size[parent_bcc[c]] - 1 - below);
    }
    return best;
}

// A DRA spanning its whole connected component may have several agents with
// the same area. Hand it to the smallest one and rebuild the branches.
void canonicalize_whole_components(const WeightedGraph& g, const BcSketch& sketch, std::size_t threshold,
                                   DraAssignment& a) {
    if (a.dras.empty()) return;
    const auto label = connected_components(g);
    std::vector<std::size_t> comp_size;
    for (auto l : label) {
        if (l >= comp_size.size()) comp_size.resize(l + 1, 0);
        ++comp_size[l];
    }
    std::vector<std::size_t> split;
    std::vector<NodeId> best_agent;
    for (Dra& d : a.dras) {
        if (d.members.size() != comp_size[label[d.agent]]) continue;
        if (split.empty()) {
            split = largest_split(sketch);
            best_agent.assign(comp_size.size(), kNoNode);
            for (std::uint32_t i = 0; i < sketch.cut_node.size(); ++i) {
                const NodeId v = sketch.cut_node[i];
                if (split[i] + 1 <= threshold) best_agent[label[v]] = std::min(best_agent[label[v]], v);
            }
        }
        const NodeId agent = best_agent[label[d.agent]];
        if (agent == kNoNode || agent >= d.agent) continue;
        // branches are the components of the area minus the new agent
        std::vector<std::vector<NodeId>> branches;
        std::vector<std::uint8_t> seen(g.node_count(), 0);
        seen[agent] = 1;
        for (const Arc& e : g.neighbors(agent)) {
            if (seen[e.head]) continue;
            std::vector<NodeId> nodes{e.head}, stack{e.head};
            seen[e.head] = 1;
            while (!stack.empty()) {
                const NodeId x = stack.back();
                stack.pop_back();
                for (const Arc& f : g.neighbors(x))
                    if (!seen[f.head]) {
                        seen[f.head] = 1;
                        nodes.push_back(f.head);
                        stack.push_back(f.head);
                    }
            }
            std::sort(nodes.begin(), nodes.end());
            branches.push_back(std::move(nodes));
        }
        std::sort(branches.begin(), branches.end());
        d.agent = agent;
        d.branch_count = static_cast<std::uint32_t>(branches.size());
        a.owner[agent] = agent;
        a.branch[agent] = kNoBranch;
        for (std::uint32_t b = 0; b < branches.size(); ++b)
            for (NodeId v : branches[b]) {
                a.owner[v] = agent;
                a.branch[v] = b;
            }
    }
}

}  // namespace

DraAssignment compute_dras(const WeightedGraph& g, const AgentConfig& cfg) {
    if (cfg.c < 1) throw std::invalid_argument("agent constant c must be >= 1");
    auto bccs = find_bccs(g);
    auto sketch = build_sketch(g, bccs);
    return compute_dras(g, sketch, bccs, cfg.threshold(g.node_count()));
}

DraAssignment compute_dras(const WeightedGraph& g, const BcSketch& sketch,
                           const BccDecomposition& bccs, std::size_t threshold) {
    const std::size_t n = g.node_count();
    DraAssignment a;
    a.threshold = threshold;
    a.owner.resize(n);
    for (NodeId v = 0; v < n; ++v) a.owner[v] = v;
    a.branch.assign(n, kNoBranch);
    a.owner_dist.assign(n, 0);
    a.dra_of.assign(n, kNoDra);

    SketchReducer red(sketch, threshold);
    red.run();

    std::vector<std::uint32_t> mark(n, 0);
    std::uint32_t stamp = 0;
    auto collect = [&](std::uint32_t root, std::vector<NodeId>& out) {
        ++stamp;
        red.for_each_member_bcc(root, [&](std::uint32_t j) {
            for (NodeId v : bccs.bccs[j].nodes)
                if (mark[v] != stamp) {
                    mark[v] = stamp;
                    out.push_back(v);
                }
        });
    };

    auto add_dra = [&](NodeId agent, std::vector<std::vector<NodeId>> branches) {
        std::sort(branches.begin(), branches.end());
        Dra d;
        d.agent = agent;
        d.branch_count = static_cast<std::uint32_t>(branches.size());
        d.members.push_back(agent);
        for (std::uint32_t b = 0; b < branches.size(); ++b)
            for (NodeId v : branches[b]) {
                a.owner[v] = agent;
                a.branch[v] = b;
                d.members.push_back(v);
            }
        std::sort(d.members.begin(), d.members.end());
        a.dras.push_back(std::move(d));
    };

    // Surviving cut vertices with small leaf groups are the maximal agents.
    for (std::uint32_t i = 0; i < sketch.cut_node.size(); ++i) {
        if (!red.alive(i)) continue;
        const NodeId agent = sketch.cut_node[i];
        std::vector<std::vector<NodeId>> branches;
        for (auto root : red.neighbors(i)) {
            if (red.degree(root) != 1 || red.omega(root) > threshold) continue;
            std::vector<NodeId> nodes;
            collect(root, nodes);
            std::erase(nodes, agent);
            std::sort(nodes.begin(), nodes.end());
            branches.push_back(std::move(nodes));
        }
        if (!branches.empty()) add_dra(agent, std::move(branches));
    }

    for (const auto& ev : red.events()) {
        if (red.find(ev.keep) != ev.keep || red.degree(ev.keep) < 2) continue;
        const NodeId agent = sketch.cut_node[ev.cut];
        std::vector<std::vector<NodeId>> branches;
        for (auto seg : ev.leaves) {
            std::vector<NodeId> nodes;
            ++stamp;
            red.for_each_segment_bcc(seg, [&](std::uint32_t j) {
                for (NodeId v : bccs.bccs[j].nodes)
                    if (mark[v] != stamp && v != agent) {
                        mark[v] = stamp;
                        nodes.push_back(v);
                    }
            });
            std::sort(nodes.begin(), nodes.end());
            branches.push_back(std::move(nodes));
        }
        add_dra(agent, std::move(branches));
    }

    // Components whose whole sketch collapsed into one small group: every node is
    // an equivalent agent; the smallest id represents the rest.
    std::vector<std::uint8_t> seen_root(sketch.omega.size(), 0);
    for (std::uint32_t j = 0; j < sketch.omega.size(); ++j) {
        const std::uint32_t root = red.find(j);
        if (seen_root[root]) continue;
        seen_root[root] = 1;
        if (red.degree(root) != 0 || red.omega(root) < 2 || red.omega(root) > threshold) continue;
        std::vector<NodeId> nodes;
        collect(root, nodes);
        std::sort(nodes.begin(), nodes.end());
        Dra d;
        d.agent = nodes.front();
        d.branch_count = 1;
        for (std::size_t k = 1; k < nodes.size(); ++k) {
            a.owner[nodes[k]] = d.agent;
            a.branch[nodes[k]] = 0;
        }
        d.members = std::move(nodes);
        a.dras.push_back(std::move(d));
    }

    canonicalize_whole_components(g, sketch, threshold, a);
    std::sort(a.dras.begin(), a.dras.end(), [](const Dra& x, const Dra& y) { return x.agent < y.agent; });
    for (std::uint32_t k = 0; k < a.dras.size(); ++k)
        for (NodeId v : a.dras[k].members) a.dra_of[v] = k;

    Dijkstra search(g);
    for (std::uint32_t k = 0; k < a.dras.size(); ++k) {
        const Dra& d = a.dras[k];
        search.run(d.agent, d.members, [&a, k](NodeId v) { return a.dra_of[v] == k; });
        for (NodeId v : d.members) a.owner_dist[v] = search.dist(v);
    }
    return a;
}

ShrinkGraph build_shrink_graph(const WeightedGraph& g, const DraAssignment& a) {
    ShrinkGraph s;
    s.to_shrink.assign(g.node_count(), kNoNode);
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (a.owner[v] == v) {
            s.to_shrink[v] = static_cast<NodeId>(s.to_original.size());
            s.to_original.push_back(v);
        }
    s.graph = g.induced(s.to_original);
    return s;
}

Distance dra_distance(const DraAssignment& a, const WeightedGraph& g, NodeId s, NodeId t) {
    Dijkstra search(g);
    return dra_distance(a, search, s, t);
}

Distance dra_distance(const DraAssignment& a, Dijkstra& search, NodeId s, NodeId t) {
    if (s >= a.owner.size() || t >= a.owner.size() || a.owner[s] != a.owner[t])
        throw std::invalid_argument("dra_distance: nodes do not share an owning agent");
    if (s == t) return 0;
    const NodeId u = a.owner[s];
    if (s == u) return a.owner_dist[t];
    if (t == u) return a.owner_dist[s];
    const std::uint32_t b = a.branch[s];
    if (b != a.branch[t]) return a.owner_dist[s] + a.owner_dist[t];
    const NodeId target[] = {t};
    search.run(s, target, [&a, u, b](NodeId v) { return v == u || (a.owner[v] == u && a.branch[v] == b); });
    return search.dist(t);
}

}  // namespace disland
