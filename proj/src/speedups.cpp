#include "disland/speedups.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <queue>
#include <thread>

namespace disland {

namespace {

using Item = std::pair<Distance, NodeId>;
using MinHeap = std::priority_queue<Item, std::vector<Item>, std::greater<>>;

// Starts a new search round over stamped arrays, clearing them on wraparound.
void next_round(std::uint32_t& round, std::vector<std::uint32_t>* stamps, std::size_t count) {
    if (++round == 0) {
        for (std::size_t i = 0; i < count; ++i) std::fill(stamps[i].begin(), stamps[i].end(), 0);
        round = 1;
    }
}

}  // namespace

BidirectionalDijkstra::BidirectionalDijkstra(const WeightedGraph& g) : g_(g) {
    for (int side = 0; side < 2; ++side) {
        dist_[side].assign(g.node_count(), kUnreachable);
        stamp_[side].assign(g.node_count(), 0);
    }
}

Distance BidirectionalDijkstra::run(NodeId s, NodeId t) {
    settled_ = 0;
    if (s == t) return 0;
    next_round(round_, stamp_, 2);
    auto get = [&](int side, NodeId v) { return stamp_[side][v] == round_ ? dist_[side][v] : kUnreachable; };
    MinHeap pq[2];
    for (int side = 0; side < 2; ++side) {
        const NodeId src = side ? t : s;
        dist_[side][src] = 0;
        stamp_[side][src] = round_;
        pq[side].push({0, src});
    }
    Distance best = kUnreachable;
    while (!pq[0].empty() && !pq[1].empty()) {
        if (dist_add(pq[0].top().first, pq[1].top().first) >= best) break;
        const int side = pq[0].top().first <= pq[1].top().first ? 0 : 1;
        auto [d, x] = pq[side].top();
        pq[side].pop();
        if (d != get(side, x)) continue;
        ++settled_;
        for (const Arc& a : g_.neighbors(x)) {
            const Distance nd = d + a.w;
            if (nd < get(side, a.head)) {
                dist_[side][a.head] = nd;
                stamp_[side][a.head] = round_;
                pq[side].push({nd, a.head});
            }
            const Distance other = get(1 - side, a.head);
            if (other != kUnreachable) best = std::min(best, nd + other);
        }
    }
    return best;
}

Distance bidirectional_dijkstra(const WeightedGraph& g, NodeId s, NodeId t) {
    if (s >= g.node_count() || t >= g.node_count()) throw ValidationError("node id out of range");
    BidirectionalDijkstra search(g);
    return search.run(s, t);
}

namespace {

// Uncontracted remainder of the graph plus shortcuts added so far.
// Cap on witness search size; larger values trade build time for fewer shortcuts.
constexpr std::size_t kWitnessSettleLimit = 500;

class Contractor {
public:
    explicit Contractor(const WeightedGraph& g)
        : adj_(g.node_count()), dist_(g.node_count(), kUnreachable), stamp_(g.node_count(), 0),
          target_(g.node_count(), 0), contracted_(g.node_count(), 0), contracted_nbrs_(g.node_count(), 0) {
        for (NodeId v = 0; v < g.node_count(); ++v) adj_[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
    }

    // Shortcuts that contracting v would need right now. A pair (a, b) needs one
    // unless some path avoiding v is no longer than a/v/b.
    std::vector<Shortcut> needed(NodeId v) {
        std::vector<Shortcut> out;
        const auto& nb = adj_[v];
        for (std::size_t i = 0; i + 1 < nb.size(); ++i) {
            Weight far = 0;
            for (std::size_t j = i + 1; j < nb.size(); ++j) far = std::max(far, nb[j].w);
            const Distance bound = nb[i].w + far;
            witness(nb[i].head, v, bound, std::span(nb).subspan(i + 1));
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                const Distance via = nb[i].w + nb[j].w;
                if (dist(nb[j].head) > via) out.push_back({nb[i].head, nb[j].head, via, v});
            }
        }
        return out;
    }

    std::int64_t priority(NodeId v, std::size_t shortcut_count) const {
        return static_cast<std::int64_t>(shortcut_count) - static_cast<std::int64_t>(adj_[v].size()) +
               static_cast<std::int64_t>(contracted_nbrs_[v]);
    }

    void contract(NodeId v, const std::vector<Shortcut>& shortcuts) {
        contracted_[v] = 1;
        for (const Arc& a : adj_[v]) {
            std::erase_if(adj_[a.head], [v](const Arc& x) { return x.head == v; });
            ++contracted_nbrs_[a.head];
        }
        adj_[v].clear();
        adj_[v].shrink_to_fit();
        for (const Shortcut& s : shortcuts) {
            link(s.u, s.w, s.weight);
            link(s.w, s.u, s.weight);
        }
    }

    bool contracted(NodeId v) const { return contracted_[v]; }

private:
    void link(NodeId a, NodeId b, Weight w) {
        for (Arc& x : adj_[a])
            if (x.head == b) {
                x.w = std::min(x.w, w);
                return;
            }
        adj_[a].push_back({b, w});
    }

    Distance dist(NodeId v) const { return stamp_[v] == round_ ? dist_[v] : kUnreachable; }

    // Exact Dijkstra from `src` avoiding `skip`, up to `bound`, stopping early
    // once all `targets` are settled.
    void witness(NodeId src, NodeId skip, Distance bound, std::span<const Arc> targets) {
        next_round(round_, &stamp_, 1);
        if (round_ == 1) std::fill(target_.begin(), target_.end(), 0);
        std::size_t remaining = 0;
        for (const Arc& t : targets)
            if (target_[t.head] != round_) {
                target_[t.head] = round_;
                ++remaining;
            }
        MinHeap pq;
        dist_[src] = 0;
        stamp_[src] = round_;
        pq.push({0, src});
        std::size_t settled = 0;
        while (!pq.empty() && remaining > 0) {
            auto [d, x] = pq.top();
            pq.pop();
            if (d != dist(x)) continue;
            if (d > bound || ++settled > kWitnessSettleLimit) break;
            if (target_[x] == round_) {
                --remaining;
                target_[x] = 0;
            }
            for (const Arc& a : adj_[x]) {
                if (a.head == skip) continue;
                const Distance nd = d + a.w;
                if (nd <= bound && nd < dist(a.head)) {
                    dist_[a.head] = nd;
                    stamp_[a.head] = round_;
                    pq.push({nd, a.head});
                }
            }
        }
        // A tentative distance is an upper bound on a real path avoiding `skip`,
        // so stopping early can only add redundant shortcuts.
    }

    std::vector<std::vector<Arc>> adj_;
    std::vector<Distance> dist_;
    std::vector<std::uint32_t> stamp_, target_;
    std::uint32_t round_ = 0;
    std::vector<std::uint8_t> contracted_;
    std::vector<std::uint32_t> contracted_nbrs_;
};

}  // namespace

void ChIndex::build_upward(const WeightedGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<Arc>> up(n);
    auto add = [&](NodeId a, NodeId b, Weight w) {
        if (rank[a] < rank[b]) up[a].push_back({b, w});
        else up[b].push_back({a, w});
    };
    for (const Edge& e : g.edges()) add(e.u, e.v, e.w);
    for (const Shortcut& s : shortcuts) add(s.u, s.w, s.weight);
    up_begin.assign(n + 1, 0);
    up_arcs.clear();
    for (NodeId v = 0; v < n; ++v) {
        auto& list = up[v];
        std::sort(list.begin(), list.end(), [](const Arc& x, const Arc& y) {
            return x.head != y.head ? x.head < y.head : x.w < y.w;
        });
        up_begin[v] = up_arcs.size();
        for (std::size_t i = 0; i < list.size(); ++i)
            if (i == 0 || list[i].head != list[i - 1].head) up_arcs.push_back(list[i]);
    }
    up_begin[n] = up_arcs.size();
}

ChIndex ch_build(const WeightedGraph& g, std::span<const NodeId> sequence) {
    const std::size_t n = g.node_count();
    ChIndex idx;
    idx.rank.assign(n, 0);
    Contractor c(g);
    if (!sequence.empty()) {
        if (sequence.size() != n) throw ValidationError("contraction sequence must list every node once");
        std::uint32_t next_rank = 0;
        for (NodeId v : sequence) {
            if (v >= n || c.contracted(v)) throw ValidationError("contraction sequence must list every node once");
            auto shortcuts = c.needed(v);
            c.contract(v, shortcuts);
            idx.rank[v] = next_rank++;
            idx.shortcuts.insert(idx.shortcuts.end(), shortcuts.begin(), shortcuts.end());
        }
        idx.build_upward(g);
        return idx;
    }
    using Entry = std::pair<std::int64_t, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    for (NodeId v = 0; v < n; ++v) pq.push({c.priority(v, c.needed(v).size()), v});
    std::uint32_t next_rank = 0;
    while (!pq.empty()) {
        auto [p, v] = pq.top();
        pq.pop();
        if (c.contracted(v)) continue;
        auto shortcuts = c.needed(v);
        const Entry now{c.priority(v, shortcuts.size()), v};
        if (!pq.empty() && pq.top() < now) {
            pq.push(now);
            continue;
        }
        c.contract(v, shortcuts);
        idx.rank[v] = next_rank++;
        idx.shortcuts.insert(idx.shortcuts.end(), shortcuts.begin(), shortcuts.end());
    }
    idx.build_upward(g);
    return idx;
}

ChQuery::ChQuery(const ChIndex& idx) : idx_(idx) {
    for (int side = 0; side < 2; ++side) {
        dist_[side].assign(idx.node_count(), kUnreachable);
        stamp_[side].assign(idx.node_count(), 0);
    }
}

Distance ChQuery::run(NodeId s, NodeId t) {
    const Seed a[] = {{s, 0}}, b[] = {{t, 0}};
    return run(a, b);
}

Distance ChQuery::run(std::span<const Seed> sources, std::span<const Seed> targets) {
    settled_ = 0;
    next_round(round_, stamp_, 2);
    auto get = [&](int side, NodeId v) { return stamp_[side][v] == round_ ? dist_[side][v] : kUnreachable; };
    MinHeap pq[2];
    Distance best = kUnreachable;
    for (int side = 0; side < 2; ++side)
        for (auto [v, d] : side ? targets : sources) {
            if (d == kUnreachable || d >= get(side, v)) continue;
            dist_[side][v] = d;
            stamp_[side][v] = round_;
            pq[side].push({d, v});
        }
    for (auto [v, d] : sources) {
        const Distance other = get(1, v);
        if (d != kUnreachable && other != kUnreachable) best = std::min(best, d + other);
    }
    while (true) {
        const bool f = !pq[0].empty() && pq[0].top().first < best;
        const bool b = !pq[1].empty() && pq[1].top().first < best;
        if (!f && !b) break;
        const int side = f && (!b || pq[0].top().first <= pq[1].top().first) ? 0 : 1;
        auto [d, x] = pq[side].top();
        pq[side].pop();
        if (d != get(side, x)) continue;
        ++settled_;
        for (const Arc& a : idx_.up(x)) {
            const Distance nd = d + a.w;
            if (nd < get(side, a.head)) {
                dist_[side][a.head] = nd;
                stamp_[side][a.head] = round_;
                pq[side].push({nd, a.head});
                const Distance other = get(1 - side, a.head);
                if (other != kUnreachable) best = std::min(best, nd + other);
            }
        }
    }
    return best;
}

Distance ch_query(const ChIndex& idx, const WeightedGraph& g, NodeId s, NodeId t) {
    if (s >= g.node_count() || t >= g.node_count()) throw ValidationError("node id out of range");
    ChQuery q(idx);
    return q.run(s, t);
}

ArcFlagIndex arcflags_build(const WeightedGraph& g, std::vector<std::uint32_t> region_of, std::uint32_t k) {
    const std::size_t n = g.node_count();
    if (region_of.size() != n) throw ValidationError("region assignment does not cover the graph");
    ArcFlagIndex idx;
    idx.k = k;
    idx.words = (std::size_t{k} + 63) / 64;
    idx.flags.assign(g.arc_count() * idx.words, 0);
    idx.region_of = std::move(region_of);
    const auto& region = idx.region_of;

    std::vector<std::vector<NodeId>> boundary(k);
    for (NodeId v = 0; v < n; ++v) {
        if (region[v] >= k) throw ValidationError("region id out of range");
        for (const Arc& a : g.neighbors(v))
            if (region[a.head] != region[v]) {
                boundary[region[v]].push_back(v);
                break;
            }
    }
    auto set = [&idx](std::size_t arc, std::uint32_t r) {
        std::atomic_ref<std::uint64_t> word(idx.flags[arc * idx.words + r / 64]);
        word.fetch_or(std::uint64_t{1} << (r % 64), std::memory_order_relaxed);
    };
    for (NodeId v = 0; v < n; ++v)
        for (std::size_t i = 0; i < g.degree(v); ++i)
            if (region[g.arc(g.arc_begin(v) + i).head] == region[v]) set(g.arc_begin(v) + i, region[v]);

    // every arc on a shortest path into a boundary node of region r gets bit r
    std::atomic<std::uint32_t> next{0};
    auto worker = [&] {
        Dijkstra search(g);
        for (std::uint32_t r; (r = next.fetch_add(1)) < k;)
            for (NodeId b : boundary[r]) {
                search.run(b);
                for (NodeId x = 0; x < n; ++x) {
                    const Distance dx = search.dist(x);
                    if (dx == kUnreachable || x == b) continue;
                    const std::size_t base = g.arc_begin(x);
                    const auto arcs = g.neighbors(x);
                    for (std::size_t i = 0; i < arcs.size(); ++i)
                        if (search.dist(arcs[i].head) != kUnreachable && search.dist(arcs[i].head) + arcs[i].w == dx)
                            set(base + i, r);
                }
            }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), k));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return idx;
}

ArcFlagIndex arcflags_build(const WeightedGraph& g, const Partition& regions) {
    return arcflags_build(g, regions.fragment_of, regions.k);
}

ArcFlagQuery::ArcFlagQuery(const ArcFlagIndex& idx, const WeightedGraph& g)
    : idx_(idx), g_(g), dist_(g.node_count(), kUnreachable), stamp_(g.node_count(), 0) {}

Distance ArcFlagQuery::run(NodeId s, NodeId t) {
    settled_ = 0;
    next_round(round_, &stamp_, 1);
    auto get = [&](NodeId v) { return stamp_[v] == round_ ? dist_[v] : kUnreachable; };
    const std::uint32_t r = idx_.region_of[t];
    MinHeap pq;
    dist_[s] = 0;
    stamp_[s] = round_;
    pq.push({0, s});
    while (!pq.empty()) {
        auto [d, x] = pq.top();
        pq.pop();
        if (d != get(x)) continue;
        ++settled_;
        if (x == t) return d;
        const std::size_t base = g_.arc_begin(x);
        const auto arcs = g_.neighbors(x);
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            if (!idx_.flag(base + i, r)) continue;
            const Distance nd = d + arcs[i].w;
            if (nd < get(arcs[i].head)) {
                dist_[arcs[i].head] = nd;
                stamp_[arcs[i].head] = round_;
                pq.push({nd, arcs[i].head});
            }
        }
    }
    return kUnreachable;
}

Distance arcflags_query(const ArcFlagIndex& idx, const WeightedGraph& g, NodeId s, NodeId t) {
    if (s >= g.node_count() || t >= g.node_count()) throw ValidationError("node id out of range");
    ArcFlagQuery q(idx, g);
    return q.run(s, t);
}

PathShape classify_path(std::span<const std::uint32_t> rank, std::span<const NodeId> path) {
    std::size_t i = 1;
    while (i < path.size() && rank[path[i - 1]] < rank[path[i]]) ++i;
    if (i == path.size()) return PathShape::rising;
    const std::size_t peak = i - 1;
    if (peak == 0) return PathShape::neither;
    while (i < path.size() && rank[path[i - 1]] > rank[path[i]]) ++i;
    return i == path.size() ? PathShape::turning : PathShape::neither;
}

}  // namespace disland
