#include "disland/partition.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace disland {

std::size_t Partition::boundary_count() const {
    std::size_t k = 0;
    for (auto b : is_boundary) k += b;
    return k;
}

std::size_t Partition::max_fragment_size() const {
    std::size_t m = 0;
    for (const auto& f : members) m = std::max(m, f.size());
    return m;
}

Partition make_partition(const WeightedGraph& g, std::vector<std::uint32_t> fragment_of, std::size_t gamma) {
    const std::size_t n = g.node_count();
    if (fragment_of.size() != n) throw ValidationError("fragment assignment does not cover the graph");
    std::vector<std::uint32_t> relabel;
    for (auto f : fragment_of)
        if (f >= relabel.size()) relabel.resize(std::size_t{f} + 1, kNoFragment);
    Partition p;
    p.gamma = gamma;
    for (NodeId v = 0; v < n; ++v) {
        auto& r = relabel[fragment_of[v]];
        if (r == kNoFragment) r = p.k++;
        fragment_of[v] = r;
    }
    p.members.resize(p.k);
    p.boundary.resize(p.k);
    p.is_boundary.assign(n, 0);
    for (NodeId v = 0; v < n; ++v) p.members[fragment_of[v]].push_back(v);
    for (const Edge& e : g.edges())
        if (fragment_of[e.u] != fragment_of[e.v]) {
            p.cross_edges.push_back(e);
            p.is_boundary[e.u] = p.is_boundary[e.v] = 1;
        }
    for (NodeId v = 0; v < n; ++v)
        if (p.is_boundary[v]) p.boundary[fragment_of[v]].push_back(v);
    p.fragment_of = std::move(fragment_of);
    return p;
}

std::uint32_t default_fragment_count(std::size_t n, std::size_t gamma) {
    if (n == 0) return 0;
    std::size_t k = (n + gamma - 1) / gamma;
    k = (k + 9) / 10 * 10;
    return static_cast<std::uint32_t>(std::min(k, n));
}

double boundary_fraction(const Partition& p) {
    if (p.fragment_of.empty()) return 0.0;
    return static_cast<double>(p.boundary_count()) / static_cast<double>(p.fragment_of.size());
}

namespace {

// Coarse level: node weights count original nodes, edge weights count original edges.
struct Level {
    std::vector<std::uint32_t> node_w;
    std::vector<std::size_t> begin;  // CSR
    std::vector<std::uint32_t> head;
    std::vector<std::uint64_t> edge_w;
    std::vector<std::uint32_t> up;   // node -> coarse node of the next level

    std::size_t size() const { return node_w.size(); }
};

Level base_level(const WeightedGraph& g) {
    Level l;
    const std::size_t n = g.node_count();
    l.node_w.assign(n, 1);
    l.begin.resize(n + 1);
    for (NodeId v = 0; v < n; ++v) {
        l.begin[v] = l.head.size();
        for (const Arc& a : g.neighbors(v)) {
            l.head.push_back(a.head);
            l.edge_w.push_back(1);
        }
    }
    l.begin[n] = l.head.size();
    return l;
}

// Heavy-edge matching in ascending id order; returns the coarser level or
// nothing when matching no longer shrinks the graph noticeably.
std::optional<Level> coarsen(Level& fine, std::size_t cap) {
    const std::size_t n = fine.size();
    std::vector<std::uint32_t> mate(n, kNoFragment);
    std::size_t pairs = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (mate[v] != kNoFragment) continue;
        std::uint32_t best = kNoFragment;
        std::uint64_t best_w = 0;
        for (std::size_t e = fine.begin[v]; e < fine.begin[v + 1]; ++e) {
            const std::uint32_t u = fine.head[e];
            if (u == v || mate[u] != kNoFragment || fine.node_w[u] + fine.node_w[v] > cap) continue;
            if (fine.edge_w[e] > best_w || (fine.edge_w[e] == best_w && u < best)) {
                best = u;
                best_w = fine.edge_w[e];
            }
        }
        if (best == kNoFragment) {
            mate[v] = v;
        } else {
            mate[v] = best;
            mate[best] = v;
            ++pairs;
        }
    }
    if (pairs * 20 < n) return std::nullopt;

    Level c;
    fine.up.assign(n, kNoFragment);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (fine.up[v] != kNoFragment) continue;
        const auto id = static_cast<std::uint32_t>(c.node_w.size());
        fine.up[v] = fine.up[mate[v]] = id;
        c.node_w.push_back(fine.node_w[v] + (mate[v] != v ? fine.node_w[mate[v]] : 0));
    }
    // collect coarse arcs, merging parallels
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> adj(c.size());
    for (std::uint32_t v = 0; v < n; ++v)
        for (std::size_t e = fine.begin[v]; e < fine.begin[v + 1]; ++e) {
            const std::uint32_t a = fine.up[v], b = fine.up[fine.head[e]];
            if (a != b) adj[a].emplace_back(b, fine.edge_w[e]);
        }
    c.begin.resize(c.size() + 1);
    for (std::uint32_t v = 0; v < c.size(); ++v) {
        auto& list = adj[v];
        std::sort(list.begin(), list.end());
        c.begin[v] = c.head.size();
        for (std::size_t i = 0; i < list.size();) {
            std::uint64_t w = 0;
            std::size_t j = i;
            for (; j < list.size() && list[j].first == list[i].first; ++j) w += list[j].second;
            c.head.push_back(list[i].first);
            c.edge_w.push_back(w);
            i = j;
        }
        std::vector<std::pair<std::uint32_t, std::uint64_t>>().swap(list);
    }
    c.begin[c.size()] = c.head.size();
    return c;
}

// Grows buckets breadth-first from the smallest unassigned node, preferring
// the neighbour with the strongest connection to the current bucket. A seed
// enclosed by existing buckets joins the best connected one that has room
// instead of opening a bucket of its own.
std::vector<std::uint32_t> initial_assignment(const Level& l, std::size_t target, std::size_t room,
                                              std::vector<std::size_t>& load) {
    const std::size_t n = l.size();
    std::vector<std::uint32_t> part(n, kNoFragment);
    std::vector<std::uint64_t> conn(n, 0);
    load.clear();
    auto join_neighbor = [&](std::uint32_t v) {
        std::uint32_t best = kNoFragment;
        std::uint64_t best_w = 0;
        for (std::size_t e = l.begin[v]; e < l.begin[v + 1]; ++e) {
            const std::uint32_t f = part[l.head[e]];
            if (f == kNoFragment || load[f] + l.node_w[v] > room) continue;
            if (l.edge_w[e] > best_w || (l.edge_w[e] == best_w && f < best)) {
                best = f;
                best_w = l.edge_w[e];
            }
        }
        return best;
    };
    for (std::uint32_t seed = 0; seed < n; ++seed) {
        if (part[seed] != kNoFragment) continue;
        if (auto f = join_neighbor(seed); f != kNoFragment) {
            part[seed] = f;
            load[f] += l.node_w[seed];
            continue;
        }
        const auto bucket = static_cast<std::uint32_t>(load.size());
        load.push_back(0);
        using Item = std::pair<std::uint64_t, std::uint32_t>;
        auto cmp = [](const Item& a, const Item& b) { return a.first != b.first ? a.first < b.first : a.second > b.second; };
        std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
        std::vector<std::uint32_t> touched;
        pq.push({0, seed});
        while (!pq.empty() && load[bucket] < target) {
            auto [c, v] = pq.top();
            pq.pop();
            if (part[v] != kNoFragment || c != conn[v]) continue;
            if (load[bucket] + l.node_w[v] > target && load[bucket] > 0) continue;
            part[v] = bucket;
            load[bucket] += l.node_w[v];
            for (std::size_t e = l.begin[v]; e < l.begin[v + 1]; ++e) {
                const std::uint32_t u = l.head[e];
                if (part[u] != kNoFragment) continue;
                if (conn[u] == 0) touched.push_back(u);
                conn[u] += l.edge_w[e];
                pq.push({conn[u], u});
            }
        }
        for (auto u : touched) conn[u] = 0;
    }
    return part;
}

std::uint64_t cut_of(const Level& l, const std::vector<std::uint32_t>& part) {
    std::uint64_t c = 0;
    for (std::uint32_t v = 0; v < l.size(); ++v)
        for (std::size_t e = l.begin[v]; e < l.begin[v + 1]; ++e)
            if (l.head[e] > v && part[v] != part[l.head[e]]) c += l.edge_w[e];
    return c;
}

// Moves single nodes to the neighbouring bucket with the largest positive gain
// that keeps the cap. Every move strictly lowers the cut.
void refine(const Level& l, std::vector<std::uint32_t>& part, std::vector<std::size_t>& load, std::size_t cap,
            const PartitionOptions& opts) {
    std::uint64_t cut = opts.on_move ? cut_of(l, part) : 0;
    std::vector<std::uint64_t> conn(load.size(), 0);
    std::vector<std::uint32_t> seen;
    for (std::size_t pass = 0; pass < opts.refine_passes; ++pass) {
        std::size_t moves = 0;
        for (std::uint32_t v = 0; v < l.size(); ++v) {
            const std::uint32_t own = part[v];
            bool border = false;
            for (std::size_t e = l.begin[v]; e < l.begin[v + 1]; ++e) {
                const std::uint32_t f = part[l.head[e]];
                if (conn[f] == 0) seen.push_back(f);
                conn[f] += l.edge_w[e];
                border = border || f != own;
            }
            if (border) {
                std::uint32_t best = own;
                std::uint64_t best_conn = conn[own];
                for (auto f : seen) {
                    if (f == own || load[f] + l.node_w[v] > cap) continue;
                    if (conn[f] > best_conn || (conn[f] == best_conn && best != own && f < best)) {
                        best = f;
                        best_conn = conn[f];
                    }
                }
                if (best != own && best_conn > conn[own]) {
                    const std::uint64_t after = cut - (best_conn - conn[own]);
                    part[v] = best;
                    load[own] -= l.node_w[v];
                    load[best] += l.node_w[v];
                    ++moves;
                    if (opts.on_move) {
                        opts.on_move(static_cast<std::size_t>(cut), static_cast<std::size_t>(after));
                        cut = after;
                    }
                }
            }
            for (auto f : seen) conn[f] = 0;
            conn[own] = 0;
            seen.clear();
        }
        if (moves == 0) break;
    }
}

// Folds each bucket lighter than `small` into the neighbouring bucket it
// shares the most edges with, when the cap allows. Smallest buckets go first.
void merge_small_buckets(const Level& l, std::vector<std::uint32_t>& part, std::vector<std::size_t>& load,
                         std::size_t small, std::size_t cap, const PartitionOptions& opts) {
    const std::size_t b = load.size();
    std::vector<std::uint32_t> alias(b);
    std::iota(alias.begin(), alias.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (alias[x] != x) x = alias[x] = alias[alias[x]];
        return x;
    };
    std::vector<std::vector<std::uint32_t>> nodes_of(b);
    for (std::uint32_t v = 0; v < l.size(); ++v) nodes_of[part[v]].push_back(v);
    std::vector<std::uint32_t> order(b);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return load[x] < load[y]; });
    std::uint64_t cut = opts.on_move ? cut_of(l, part) : 0;
    std::vector<std::uint64_t> conn(b, 0);
    std::vector<std::uint32_t> seen;
    for (std::uint32_t x : order) {
        if (find(x) != x || load[x] == 0 || load[x] >= small) continue;
        for (auto v : nodes_of[x])
            for (std::size_t e = l.begin[v]; e < l.begin[v + 1]; ++e) {
                const std::uint32_t f = find(part[l.head[e]]);
                if (f == x) continue;
                if (conn[f] == 0) seen.push_back(f);
                conn[f] += l.edge_w[e];
            }
        std::uint32_t best = x;
        for (auto f : seen)
            if (load[f] + load[x] <= cap && (best == x || conn[f] > conn[best] || (conn[f] == conn[best] && f < best)))
                best = f;
        if (best != x) {
            alias[x] = best;
            load[best] += load[x];
            load[x] = 0;
            for (auto v : nodes_of[x]) part[v] = best;
            nodes_of[best].insert(nodes_of[best].end(), nodes_of[x].begin(), nodes_of[x].end());
            nodes_of[x].clear();
            if (opts.on_move) {
                opts.on_move(static_cast<std::size_t>(cut), static_cast<std::size_t>(cut - conn[best]));
                cut -= conn[best];
            }
        }
        for (auto f : seen) conn[f] = 0;
        seen.clear();
    }
}

// Empties small fragments that could not be merged whole by handing their
// nodes one at a time to neighbouring fragments with room. A dissolution that
// would raise the cut is rolled back.
void dissolve_small(const WeightedGraph& g, std::vector<std::uint32_t>& part, std::vector<std::size_t>& load,
                    std::size_t small, std::size_t cap, const PartitionOptions& opts) {
    std::vector<std::vector<NodeId>> nodes_of(load.size());
    for (NodeId v = 0; v < part.size(); ++v) nodes_of[part[v]].push_back(v);
    std::uint64_t cut = 0;
    for (const Edge& e : g.edges()) cut += part[e.u] != part[e.v];
    for (std::uint32_t x = 0; x < load.size(); ++x) {
        if (load[x] == 0 || load[x] >= small) continue;
        std::vector<std::pair<NodeId, std::uint32_t>> moved;
        std::int64_t delta = 0;
        bool progress = true;
        while (progress && load[x] > 0) {
            progress = false;
            for (NodeId v : nodes_of[x]) {
                if (part[v] != x) continue;
                std::uint32_t best = x;
                std::int64_t best_conn = 0, own = 0;
                for (const Arc& a : g.neighbors(v)) own += part[a.head] == x;
                for (const Arc& a : g.neighbors(v)) {
                    const std::uint32_t f = part[a.head];
                    if (f == x || load[f] + 1 > cap) continue;
                    std::int64_t c = 0;
                    for (const Arc& b : g.neighbors(v)) c += part[b.head] == f;
                    if (c > best_conn || (c == best_conn && f < best)) {
                        best = f;
                        best_conn = c;
                    }
                }
                if (best == x) continue;
                delta += own - best_conn;
                part[v] = best;
                --load[x];
                ++load[best];
                moved.emplace_back(v, x);
                progress = true;
            }
        }
        if (load[x] > 0 || delta > 0) {
            for (auto [v, from] : moved) {
                --load[part[v]];
                ++load[from];
                part[v] = from;
            }
            continue;
        }
        for (auto [v, from] : moved) nodes_of[part[v]].push_back(v);
        nodes_of[x].clear();
        if (opts.on_move) opts.on_move(static_cast<std::size_t>(cut), static_cast<std::size_t>(cut + delta));
        cut += delta;
    }
}

}  // namespace

Partition partition_bounded(const WeightedGraph& g, std::size_t gamma, const PartitionOptions& opts) {
    if (gamma < 1) throw ValidationError("partition size bound must be at least 1");
    const std::size_t n = g.node_count();
    if (n == 0) return make_partition(g, {}, gamma);
    if (gamma >= n) return make_partition(g, std::vector<std::uint32_t>(n, 0), gamma);

    const std::uint32_t k = std::max<std::uint32_t>(1, opts.k_hint.value_or(default_fragment_count(n, gamma)));
    const std::size_t target = std::min(gamma, (n + k - 1) / k);

    std::vector<Level> levels;
    levels.push_back(base_level(g));
    const std::size_t stop = std::max<std::size_t>(2 * std::size_t{k}, 64);
    while (levels.back().size() > stop) {
        auto next = coarsen(levels.back(), std::max<std::size_t>(1, target / 4));
        if (!next) break;
        levels.push_back(std::move(*next));
    }

    // refinement keeps fragments near the target so leftover pieces can still
    // be folded in under the hard cap afterwards
    const std::size_t soft_cap = std::min(gamma, target + target / 20 + 1);
    std::vector<std::size_t> load;
    std::vector<std::uint32_t> part = initial_assignment(levels.back(), std::max<std::size_t>(1, target * 9 / 10), soft_cap, load);
    merge_small_buckets(levels.back(), part, load, (target + 1) / 2, soft_cap, opts);

    for (std::size_t i = levels.size(); i-- > 0;) {
        if (i + 1 < levels.size()) {
            const Level& fine = levels[i];
            std::vector<std::uint32_t> finer(fine.size());
            for (std::uint32_t v = 0; v < fine.size(); ++v) finer[v] = part[fine.up[v]];
            part = std::move(finer);
        }
        refine(levels[i], part, load, soft_cap, opts);
    }
    merge_small_buckets(levels.front(), part, load, (target + 1) / 2, gamma, opts);
    dissolve_small(g, part, load, (target + 1) / 2, gamma, opts);
    return make_partition(g, std::move(part), gamma);
}

}  // namespace disland
