#include "disland/bench.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace disland {

namespace {

struct NamedAlgo {
    Algo algo;
    const char* name;
};

constexpr NamedAlgo kNames[] = {
    {Algo::dijkstra, "dijkstra"},
    {Algo::bidi, "bidi"},
    {Algo::agent_dijkstra, "agent-dijkstra"},
    {Algo::ch, "ch"},
    {Algo::agents_ch, "agents-ch"},
    {Algo::arcflag, "arcflag"},
    {Algo::agents_arcflag, "agents-arcflag"},
    {Algo::disland, "disland"},
    {Algo::disland_ch, "disland-ch"},
    {Algo::disland_arcflag, "disland-arcflag"},
    {Algo::disland_both, "disland-both"},
};

using Clock = std::chrono::steady_clock;

std::size_t graph_bytes(std::size_t n, std::size_t m) { return 4 * (n + 1) + 16 * m; }

// A query function plus the settled count of its last call.
struct Runner {
    std::function<Distance(NodeId, NodeId)> run;
    std::function<std::size_t()> settled;
    double preprocess_seconds = 0;
    std::size_t extra_bytes = 0;
};

Partition region_partition(const WeightedGraph& g, std::uint32_t k) {
    k = std::max<std::uint32_t>(k, 1);
    const auto n = std::max<std::size_t>(g.node_count(), 1);
    PartitionOptions po;
    po.k_hint = k;
    const auto gamma = static_cast<std::size_t>(std::ceil(1.1 * static_cast<double>(n) / k)) + 1;
    return partition_bounded(g, gamma, po);
}

// Keeps the per-algorithm structures alive while its runner is used.
struct Holder {
    std::unique_ptr<Dijkstra> dijkstra, dra;
    std::unique_ptr<BidirectionalDijkstra> bidi;
    std::unique_ptr<ChIndex> ch;
    std::unique_ptr<ChQuery> ch_query;
    std::unique_ptr<ArcFlagIndex> flags;
    std::unique_ptr<ArcFlagQuery> flag_query;
    std::unique_ptr<QueryEngine> engine;
};

// Wraps a shrink-graph search into an original-graph query through the agents.
Runner through_agents(const PreprocessedIndex& idx, Dijkstra& dra, std::function<Distance(NodeId, NodeId)> mid,
                      std::function<std::size_t()> mid_settled) {
    auto last_dra = std::make_shared<bool>(false);
    Runner r;
    r.run = [&idx, &dra, mid, last_dra](NodeId s, NodeId t) -> Distance {
        const DraAssignment& a = idx.dra;
        *last_dra = false;
        if (s == t) return 0;
        if (a.owner[s] == a.owner[t]) {
            *last_dra = true;
            return dra_distance(a, dra, s, t);
        }
        const Distance m = mid(idx.shrink.to_shrink[a.owner[s]], idx.shrink.to_shrink[a.owner[t]]);
        return dist_add(dist_add(a.owner_dist[s], m), a.owner_dist[t]);
    };
    r.settled = [&dra, mid_settled, last_dra] { return *last_dra ? dra.settled_count() : mid_settled(); };
    return r;
}

std::uint64_t fnv(std::uint64_t h, Distance d) {
    for (int i = 0; i < 8; ++i) {
        h ^= (d >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

const char* to_string(Algo a) {
    for (const auto& n : kNames)
        if (n.algo == a) return n.name;
    return "?";
}

Algo parse_algo(const std::string& s) {
    for (const auto& n : kNames)
        if (s == n.name) return n.algo;
    throw ValidationError("unknown algorithm '" + s + "'");
}

std::vector<Algo> all_algos() {
    std::vector<Algo> out;
    for (const auto& n : kNames) out.push_back(n.algo);
    return out;
}

bool needs_index(Algo a) {
    switch (a) {
        case Algo::dijkstra:
        case Algo::bidi:
        case Algo::ch:
        case Algo::arcflag: return false;
        default: return true;
    }
}

BenchReport bench(const WeightedGraph& g, const PreprocessedIndex* idx, const QueryWorkload& w,
                  const BenchOptions& opts) {
    for (Algo a : opts.algos)
        if (needs_index(a) && !idx) throw ValidationError(std::string("algorithm ") + to_string(a) + " needs an index");
    if (idx) idx->check_graph(g);
    for (const auto& set : w.sets)
        for (const auto& [s, t] : set)
            if (s >= g.node_count() || t >= g.node_count())
                throw ValidationError("workload node id out of range for this graph");

    const std::size_t gbytes = graph_bytes(g.node_count(), g.edge_count());
    const std::size_t dra_bytes = idx ? 8 * extra_space(*idx).dra_edges : 0;
    BenchReport report;
    std::array<std::optional<std::uint64_t>, kQuerySets> reference;

    for (Algo algo : opts.algos) {
        Holder h;
        Runner r;
        const auto t0 = Clock::now();
        switch (algo) {
            case Algo::dijkstra:
                h.dijkstra = std::make_unique<Dijkstra>(g);
                r.run = [&h](NodeId s, NodeId t) {
                    h.dijkstra->run(s, std::span(&t, 1));
                    return h.dijkstra->dist(t);
                };
                r.settled = [&h] { return h.dijkstra->settled_count(); };
                break;
            case Algo::bidi:
                h.bidi = std::make_unique<BidirectionalDijkstra>(g);
                r.run = [&h](NodeId s, NodeId t) { return h.bidi->run(s, t); };
                r.settled = [&h] { return h.bidi->settled_count(); };
                break;
            case Algo::ch:
                h.ch = std::make_unique<ChIndex>(ch_build(g));
                h.ch_query = std::make_unique<ChQuery>(*h.ch);
                r.run = [&h](NodeId s, NodeId t) { return h.ch_query->run(s, t); };
                r.settled = [&h] { return h.ch_query->settled_count(); };
                r.extra_bytes = kShortcutRecordBytes * h.ch->shortcuts.size();
                break;
            case Algo::arcflag:
                h.flags = std::make_unique<ArcFlagIndex>(arcflags_build(g, region_partition(g, opts.arcflag_regions)));
                h.flag_query = std::make_unique<ArcFlagQuery>(*h.flags, g);
                r.run = [&h](NodeId s, NodeId t) { return h.flag_query->run(s, t); };
                r.settled = [&h] { return h.flag_query->settled_count(); };
                r.extra_bytes = (std::size_t{h.flags->k} * g.arc_count() + 7) / 8;
                break;
            case Algo::agent_dijkstra: {
                h.dra = std::make_unique<Dijkstra>(g);
                h.dijkstra = std::make_unique<Dijkstra>(idx->shrink.graph);
                r = through_agents(
                    *idx, *h.dra,
                    [&h](NodeId s, NodeId t) {
                        h.dijkstra->run(s, std::span(&t, 1));
                        return h.dijkstra->dist(t);
                    },
                    [&h] { return h.dijkstra->settled_count(); });
                r.extra_bytes = dra_bytes;
                break;
            }
            case Algo::agents_ch: {
                if (!idx->ch) throw ValidationError("agents-ch needs an index built with contraction hierarchies");
                h.dra = std::make_unique<Dijkstra>(g);
                h.ch_query = std::make_unique<ChQuery>(*idx->ch);
                r = through_agents(
                    *idx, *h.dra, [&h](NodeId s, NodeId t) { return h.ch_query->run(s, t); },
                    [&h] { return h.ch_query->settled_count(); });
                r.extra_bytes = dra_bytes + kShortcutRecordBytes * idx->ch->shortcuts.size();
                r.preprocess_seconds = idx->timings.dras + idx->timings.shrink + idx->timings.ch;
                break;
            }
            case Algo::agents_arcflag: {
                const WeightedGraph& sg = idx->shrink.graph;
                h.dra = std::make_unique<Dijkstra>(g);
                h.flags = std::make_unique<ArcFlagIndex>(arcflags_build(sg, region_partition(sg, opts.arcflag_regions)));
                h.flag_query = std::make_unique<ArcFlagQuery>(*h.flags, sg);
                r = through_agents(
                    *idx, *h.dra, [&h](NodeId s, NodeId t) { return h.flag_query->run(s, t); },
                    [&h] { return h.flag_query->settled_count(); });
                r.extra_bytes = dra_bytes + (std::size_t{h.flags->k} * sg.arc_count() + 7) / 8;
                break;
            }
            case Algo::disland:
            case Algo::disland_ch:
            case Algo::disland_arcflag:
            case Algo::disland_both: {
                const QueryMode mode = algo == Algo::disland       ? QueryMode::plain
                                       : algo == Algo::disland_ch  ? QueryMode::ch
                                       : algo == Algo::disland_arcflag ? QueryMode::arcflags
                                                                   : QueryMode::both;
                if ((mode == QueryMode::ch || mode == QueryMode::both) && !idx->super_ch)
                    throw ValidationError(std::string(to_string(algo)) + " needs an index built with contraction hierarchies");
                if (mode == QueryMode::arcflags && !idx->arcflags)
                    throw ValidationError("disland-arcflag needs an index built with arc flags");
                h.engine = std::make_unique<QueryEngine>(*idx, g);
                r.run = [&h, mode](NodeId s, NodeId t) { return h.engine->run(s, t, mode); };
                r.settled = [&h] { return h.engine->settled_count(); };
                r.extra_bytes = extra_space(*idx).extra_bytes;
                r.preprocess_seconds = idx->timings.total;
                break;
            }
        }
        const double built = std::chrono::duration<double>(Clock::now() - t0).count();
        if (r.preprocess_seconds == 0) r.preprocess_seconds = built;
        report.algos.push_back({algo, r.preprocess_seconds,
                                gbytes ? static_cast<double>(r.extra_bytes) / static_cast<double>(gbytes) : 0.0});

        for (std::size_t i = 0; i < kQuerySets; ++i) {
            const auto& set = w.sets[i];
            BenchRow row{algo, i + 1, set.size(), 0, 0, 1469598103934665603ull};
            double total_us = 0, settled = 0;
            for (const auto& [s, t] : set) {
                const auto a = Clock::now();
                const Distance d = r.run(s, t);
                total_us += std::chrono::duration<double, std::micro>(Clock::now() - a).count();
                settled += static_cast<double>(r.settled());
                row.checksum = fnv(row.checksum, d);
            }
            if (!set.empty()) {
                row.mean_us = total_us / static_cast<double>(set.size());
                row.mean_settled = settled / static_cast<double>(set.size());
            }
            if (!reference[i])
                reference[i] = row.checksum;
            else if (*reference[i] != row.checksum)
                report.mismatches.push_back({algo, i + 1});
            report.rows.push_back(row);
        }
    }
    return report;
}

void write_bench_csv(const BenchReport& r, std::ostream& out) {
    out << "algorithm,set,queries,mean_us,mean_settled,checksum,preprocess_s,extra_ratio\n";
    for (const auto& row : r.rows) {
        const AlgoSummary* sum = nullptr;
        for (const auto& a : r.algos)
            if (a.algo == row.algo) sum = &a;
        out << to_string(row.algo) << ",Q" << row.set << "," << row.queries << "," << std::fixed << std::setprecision(3)
            << row.mean_us << "," << std::setprecision(1) << row.mean_settled << "," << std::hex << row.checksum
            << std::dec << "," << std::setprecision(3) << sum->preprocess_seconds << "," << std::setprecision(4)
            << sum->extra_ratio << "\n";
    }
    out << std::defaultfloat;
}

void write_bench_table(const BenchReport& r, std::ostream& out) {
    out << "mean query time in microseconds (settled nodes)\n";
    out << std::left << std::setw(18) << "algorithm";
    for (std::size_t i = 1; i <= kQuerySets; ++i) out << std::right << std::setw(20) << ("Q" + std::to_string(i));
    out << std::right << std::setw(14) << "prep s" << std::setw(10) << "extra" << "\n";
    for (const auto& a : r.algos) {
        out << std::left << std::setw(18) << to_string(a.algo) << std::right;
        for (const auto& row : r.rows) {
            if (row.algo != a.algo) continue;
            std::ostringstream cell;
            if (row.queries == 0)
                cell << "-";
            else
                cell << std::fixed << std::setprecision(1) << row.mean_us << " (" << std::setprecision(0)
                     << row.mean_settled << ")";
            out << std::setw(20) << cell.str();
        }
        out << std::fixed << std::setprecision(2) << std::setw(14) << a.preprocess_seconds << std::setw(10)
            << a.extra_ratio << std::defaultfloat << "\n";
    }
    if (r.exact())
        out << "all algorithms agree on every set\n";
    else
        for (const auto& [algo, set] : r.mismatches)
            out << "MISMATCH: " << to_string(algo) << " disagrees on Q" << set << "\n";
}

}  // namespace disland
