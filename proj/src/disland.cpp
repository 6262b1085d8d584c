#include "disland/disland.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace disland {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

using HeapItem = std::pair<Distance, NodeId>;
using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>>;

}  // namespace

void PreprocessedIndex::check_graph(const WeightedGraph& g) const {
    if (g.node_count() != node_count || g.edge_count() != edge_count || g.checksum() != graph_checksum)
        throw ValidationError("graph does not match the one the index was built from");
}

void PreprocessedIndex::rebuild_compact() {
    const std::size_t n = shrink.graph.node_count();
    super_index.assign(n, kNoNode);
    for (std::size_t i = 0; i < super.nodes.size(); ++i) super_index[super.nodes[i]] = static_cast<NodeId>(i);
    std::vector<Edge> edges;
    edges.reserve(super.edges.size());
    for (const auto& e : super.edges) edges.push_back({super_index[e.u], super_index[e.v], e.w});
    super_compact = WeightedGraph::from_edges(super.nodes.size(), edges);
}

std::uint32_t second_level_regions(std::size_t m) {
    std::size_t k = m > 1000 ? m / 1000 * 100 : m / 100 * 10;
    k = std::min(std::max<std::size_t>(k, 1), std::max<std::size_t>(m, 1));
    return static_cast<std::uint32_t>(k);
}

PreprocessedIndex preprocess(const WeightedGraph& g, const PreprocessConfig& cfg) {
    const auto start = Clock::now();
    PreprocessedIndex idx;
    idx.config = cfg;
    idx.node_count = g.node_count();
    idx.edge_count = g.edge_count();
    idx.graph_checksum = g.checksum();

    auto t0 = Clock::now();
    idx.dra = compute_dras(g, cfg.agents);
    idx.timings.dras = seconds_since(t0);

    t0 = Clock::now();
    idx.shrink = build_shrink_graph(g, idx.dra);
    idx.timings.shrink = seconds_since(t0);
    const WeightedGraph& sg = idx.shrink.graph;

    if (cfg.ch) {
        t0 = Clock::now();
        idx.ch = ch_build(sg);
        idx.timings.ch = seconds_since(t0);
    }

    t0 = Clock::now();
    const std::size_t gamma = std::max<std::size_t>(cfg.agents.threshold(g.node_count()), 1);
    idx.partition = partition_bounded(sg, gamma);
    idx.timings.partition = seconds_since(t0);

    t0 = Clock::now();
    idx.super = build_supergraph(sg, idx.partition, idx.ch ? &idx.ch->rank : nullptr,
                                 SuperGraphOptions{cfg.cost_model, cfg.threads});
    idx.rebuild_compact();
    idx.timings.supergraph = seconds_since(t0);

    if (cfg.ch) {
        t0 = Clock::now();
        idx.super_ch = ch_build(idx.super_compact);
        idx.timings.super_ch = seconds_since(t0);
    }

    if (cfg.arcflags) {
        t0 = Clock::now();
        const Partition& p = idx.partition;
        const std::uint32_t m = p.k;
        std::uint32_t k = cfg.arcflag_regions ? *cfg.arcflag_regions : second_level_regions(m);
        k = std::min(std::max(k, 1u), std::max(m, 1u));
        if (k <= 1) {
            idx.fragment_region.assign(m, 0);
            k = 1;
        } else {
            std::vector<Edge> q;
            for (const Edge& e : p.cross_edges) {
                const auto a = p.fragment_of[e.u], b = p.fragment_of[e.v];
                q.push_back({std::min(a, b), std::max(a, b), 1});
            }
            const auto quotient = WeightedGraph::from_edges(m, q);
            const auto cap = static_cast<std::size_t>(std::ceil(1.25 * m / k));
            PartitionOptions po;
            po.k_hint = k;
            const auto groups = partition_bounded(quotient, std::max<std::size_t>(cap, 1), po);
            idx.fragment_region = groups.fragment_of;
            k = groups.k;
        }
        std::vector<std::uint32_t> region_of(idx.super.nodes.size());
        for (std::size_t i = 0; i < region_of.size(); ++i)
            region_of[i] = idx.fragment_region[p.fragment_of[idx.super.nodes[i]]];
        idx.arcflags = arcflags_build(idx.super_compact, std::move(region_of), k);
        idx.timings.arcflags = seconds_since(t0);
    }
    idx.timings.total = seconds_since(start);
    return idx;
}

const char* to_string(QueryMode m) {
    switch (m) {
        case QueryMode::plain: return "plain";
        case QueryMode::ch: return "ch";
        case QueryMode::arcflags: return "arcflags";
        case QueryMode::both: return "both";
    }
    return "?";
}

QueryEngine::QueryEngine(const PreprocessedIndex& idx, const WeightedGraph& g)
    : idx_(idx), g_(g), dra_search_(g) {
    idx.check_graph(g);
    const std::size_t n = idx.shrink.graph.node_count();
    for (int side = 0; side < 2; ++side) {
        dist_[side].assign(n, kUnreachable);
        stamp_[side].assign(n, 0);
    }
    if (idx.super_ch) super_query_.emplace(*idx.super_ch);
}

Distance QueryEngine::run(NodeId s, NodeId t, QueryMode mode) {
    const std::size_t n = g_.node_count();
    if (s >= n || t >= n) throw ValidationError("query node id out of range");
    const bool want_ch = mode == QueryMode::ch || mode == QueryMode::both;
    if (want_ch && !idx_.super_ch) throw ValidationError("index was built without contraction hierarchies");
    if (mode == QueryMode::arcflags && !idx_.arcflags) throw ValidationError("index was built without arc flags");
    settled_ = 0;
    if (s == t) return 0;
    const DraAssignment& a = idx_.dra;
    const NodeId us = a.owner[s], ut = a.owner[t];
    if (us == ut) {
        const Distance d = dra_distance(a, dra_search_, s, t);
        settled_ = dra_search_.settled_count();
        return d;
    }
    const NodeId x = idx_.shrink.to_shrink[us], y = idx_.shrink.to_shrink[ut];
    Distance mid;
    if (want_ch)
        mid = ch_search(x, y);
    else
        mid = union_search(x, y, mode == QueryMode::arcflags);
    return dist_add(dist_add(a.owner_dist[s], mid), a.owner_dist[t]);
}

Distance QueryEngine::union_search(NodeId us, NodeId ut, bool prune) {
    const Partition& p = idx_.partition;
    const WeightedGraph& sg = idx_.shrink.graph;
    const std::uint32_t fs = p.fragment_of[us], ft = p.fragment_of[ut];
    const std::uint32_t region = prune ? idx_.fragment_region[ft] : 0;
    const ArcFlagIndex* flags = prune ? &*idx_.arcflags : nullptr;
    const auto& nodes = idx_.super.nodes;
    auto& dist = dist_[0];
    auto& stamp = stamp_[0];
    ++round_;
    MinHeap heap;
    auto relax = [&](NodeId v, Distance d) {
        if (stamp[v] != round_ || d < dist[v]) {
            stamp[v] = round_;
            dist[v] = d;
            heap.push({d, v});
        }
    };
    relax(us, 0);
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (d != dist[v]) continue;
        ++settled_;
        if (v == ut) return d;
        const std::uint32_t fv = p.fragment_of[v];
        if (fv == fs || fv == ft) {
            for (const Arc& arc : sg.neighbors(v)) {
                const std::uint32_t fw = p.fragment_of[arc.head];
                if (fw == fs || fw == ft) relax(arc.head, d + arc.w);
            }
        }
        const NodeId c = idx_.super_index[v];
        if (c == kNoNode) continue;
        const std::size_t first = idx_.super_compact.arc_begin(c);
        const auto arcs = idx_.super_compact.neighbors(c);
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            if (flags && !flags->flag(first + i, region)) continue;
            relax(nodes[arcs[i].head], d + arcs[i].w);
        }
    }
    return kUnreachable;
}

void QueryEngine::local_search(int side, NodeId source, std::uint32_t fragment) {
    const Partition& p = idx_.partition;
    const WeightedGraph& sg = idx_.shrink.graph;
    auto& dist = dist_[side];
    auto& stamp = stamp_[side];
    MinHeap heap;
    stamp[source] = round_;
    dist[source] = 0;
    heap.push({0, source});
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (d != dist[v]) continue;
        ++settled_;
        for (const Arc& arc : sg.neighbors(v)) {
            const NodeId w = arc.head;
            if (p.fragment_of[w] != fragment) continue;
            const Distance nd = d + arc.w;
            if (stamp[w] != round_ || nd < dist[w]) {
                stamp[w] = round_;
                dist[w] = nd;
                heap.push({nd, w});
            }
        }
    }
}

Distance QueryEngine::ch_search(NodeId us, NodeId ut) {
    const Partition& p = idx_.partition;
    const std::uint32_t fs = p.fragment_of[us], ft = p.fragment_of[ut];
    ++round_;
    local_search(0, us, fs);
    local_search(1, ut, ft);
    auto seeds = [&](int side, std::uint32_t f) {
        std::vector<Seed> out;
        for (NodeId v : p.members[f]) {
            const NodeId c = idx_.super_index[v];
            if (c != kNoNode && stamp_[side][v] == round_) out.push_back({c, dist_[side][v]});
        }
        return out;
    };
    Distance best = kUnreachable;
    if (fs == ft && stamp_[0][ut] == round_) best = dist_[0][ut];
    const auto sources = seeds(0, fs);
    const auto targets = seeds(1, ft);
    if (!sources.empty() && !targets.empty()) {
        best = std::min(best, super_query_->run(sources, targets));
        settled_ += super_query_->settled_count();
    }
    return best;
}

Distance query(const PreprocessedIndex& idx, const WeightedGraph& g, NodeId s, NodeId t, QueryMode mode) {
    QueryEngine e(idx, g);
    return e.run(s, t, mode);
}

ExtraSpaceReport extra_space(const PreprocessedIndex& idx) {
    ExtraSpaceReport r;
    for (const Dra& d : idx.dra.dras) r.dra_edges += d.members.size() - 1;
    r.supergraph_enforced = idx.super.enforced_edge_count();
    if (idx.ch) r.ch_shortcuts = idx.ch->shortcuts.size();
    if (idx.super_ch) r.super_ch_shortcuts = idx.super_ch->shortcuts.size();
    if (idx.arcflags) r.arcflag_bits = static_cast<std::size_t>(idx.arcflags->k) * idx.super_compact.arc_count();
    if (idx.node_count == 0) return r;
    r.graph_bytes = 4 * (idx.node_count + 1) + 8 * 2 * idx.edge_count;
    r.extra_bytes = 8 * r.dra_edges + 16 * r.supergraph_enforced +
                    kShortcutRecordBytes * (r.ch_shortcuts + r.super_ch_shortcuts) + (r.arcflag_bits + 7) / 8;
    r.ratio = static_cast<double>(r.extra_bytes) / static_cast<double>(r.graph_bytes);
    return r;
}

}  // namespace disland
