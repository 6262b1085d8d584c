// Acceptance suite: prints one PASS / FAIL / SKIPPED line per criterion and
// exits non-zero when any criterion fails.
#include "disland/bench.hpp"
#include "disland/connectivity.hpp"
#include "disland/disland.hpp"
#include "disland/landmarks.hpp"
#include "disland/partition.hpp"
#include "disland/workload.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

using namespace disland;
using namespace disland::testing;

namespace {

enum class Status { pass, fail, skipped };

struct Outcome {
    Status status = Status::pass;
    std::string detail;
};

struct Checker {
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string first;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures++ == 0) first = what;
    }
    Outcome outcome(const std::string& summary) const {
        if (failures) return {Status::fail, std::to_string(failures) + " of " + std::to_string(checks) + " checks failed; first: " + first};
        return {Status::pass, summary + " (" + std::to_string(checks) + " checks)"};
    }
};

std::string fmt(double x, int digits = 2) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << x;
    return s.str();
}

constexpr std::size_t kSizes[] = {50, 200, 1000};
constexpr std::size_t kSuiteGraphs = 50;
constexpr std::size_t kPairsPerGraph = 200;  // 10,000 in total

WeightedGraph suite_graph(std::size_t i, std::mt19937_64& rng) {
    const std::size_t n = kSizes[i % 3];
    return random_connected(n, n / 4 + rng() % n, 1000, rng);
}

// Criterion 1
Outcome end_to_end() {
    Checker c;
    std::mt19937_64 rng(1001);
    std::size_t split_regions = 0;
    for (std::size_t i = 0; i < kSuiteGraphs; ++i) {
        const auto g = suite_graph(i, rng);
        PreprocessConfig cfg;
        if (i % 2) cfg.arcflag_regions = 4;
        const auto idx = preprocess(g, cfg);
        split_regions += idx.arcflags && idx.arcflags->k > 1;
        QueryEngine e(idx, g);
        Dijkstra oracle(g);
        std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.node_count() - 1));
        for (std::size_t k = 0; k < kPairsPerGraph; ++k) {
            const NodeId s = pick(rng), t = pick(rng);
            oracle.run(s, std::span(&t, 1));
            const Distance want = oracle.dist(t);
            for (QueryMode m : {QueryMode::plain, QueryMode::ch, QueryMode::arcflags, QueryMode::both})
                c.expect(e.run(s, t, m) == want, std::string("graph ") + std::to_string(i) + " mode " + to_string(m) +
                                                     " pair " + std::to_string(s) + "," + std::to_string(t));
        }
    }
    return c.outcome(std::to_string(kSuiteGraphs) + " graphs, " + std::to_string(kSuiteGraphs * kPairsPerGraph) +
                     " pairs x 4 modes equal Dijkstra; " + std::to_string(split_regions) +
                     " graphs with more than one arc-flag region");
}

// Criterion 2
Outcome accelerators() {
    Checker c;
    std::mt19937_64 rng(1001);
    for (std::size_t i = 0; i < kSuiteGraphs; ++i) {
        const auto g = suite_graph(i, rng);
        BidirectionalDijkstra bidi(g);
        const auto ch = ch_build(g);
        ChQuery chq(ch);
        const auto regions = partition_bounded(g, std::max<std::size_t>(2, g.node_count() / 6));
        const auto flags = arcflags_build(g, regions);
        ArcFlagQuery afq(flags, g);
        Dijkstra oracle(g);
        std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.node_count() - 1));
        for (std::size_t k = 0; k < kPairsPerGraph; ++k) {
            const NodeId s = pick(rng), t = pick(rng);
            oracle.run(s, std::span(&t, 1));
            const Distance want = oracle.dist(t);
            const std::string at = "graph " + std::to_string(i) + " pair " + std::to_string(s) + "," + std::to_string(t);
            c.expect(bidi.run(s, t) == want, "bidirectional " + at);
            c.expect(chq.run(s, t) == want, "ch " + at);
            c.expect(afq.run(s, t) == want, "arc flags " + at);
        }
    }
    return c.outcome("bidirectional, CH and arc-flag queries equal Dijkstra on the same suite");
}

// Criterion 3
Outcome theorem_one() {
    Checker c;
    std::size_t graphs = 0;
    auto check = [&](const WeightedGraph& g) {
        const auto r = refree_reduce(g);
        const auto d = floyd_warshall(r);
        const std::size_t n = g.node_count();
        for (std::uint32_t m = 0; m < (1u << n); ++m) {
            const auto s = subset(m, n);
            c.expect(is_landmark_cover(d, s) == is_vertex_cover(r, s), "graph " + std::to_string(graphs) + " set mask " + std::to_string(m));
        }
        ++graphs;
    };
    // every connected labelled graph on up to five nodes, unit and mixed weights
    std::mt19937_64 rng(3003);
    for (std::size_t n = 1; n <= 5; ++n) {
        std::vector<NodePair> slots;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v) slots.push_back({u, v});
        for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
            for (int weighting = 0; weighting < 2; ++weighting) {
                std::vector<Edge> e;
                for (std::size_t k = 0; k < slots.size(); ++k)
                    if (mask >> k & 1) e.push_back({slots[k].first, slots[k].second, weighting ? 1 + rng() % 4 : 1});
                const auto g = WeightedGraph::from_edges(n, e);
                if (count_components(g, [](NodeId) { return true; }) != 1) break;
                check(g);
            }
        }
    }
    const std::size_t exhaustive = graphs;
    for (int k = 0; k < 600; ++k) {
        const std::size_t n = 6 + k % 2;
        check(random_connected(n, rng() % (2 * n), 1 + rng() % 6, rng));
    }
    return c.outcome(std::to_string(exhaustive) + " exhaustive graphs (n <= 5) and " +
                     std::to_string(graphs - exhaustive) + " sampled graphs (n = 6, 7): covers == vertex covers");
}

// Criterion 4
Outcome two_approx() {
    Checker c;
    std::mt19937_64 rng(4004);
    std::size_t worst_num = 0, worst_den = 1;
    for (int k = 0; k < 250; ++k) {
        const std::size_t n = 2 + k % 11;
        const auto g = random_connected(n, rng() % (2 * n), 1 + rng() % 9, rng);
        const auto cover = vc_landmark_cover(g);
        const std::size_t mvc = min_vertex_cover(refree_reduce(g));
        c.expect(cover.landmarks.size() <= 2 * mvc, "graph " + std::to_string(k));
        if (mvc && cover.landmarks.size() * worst_den > worst_num * mvc) {
            worst_num = cover.landmarks.size();
            worst_den = mvc;
        }
    }
    return c.outcome("250 graphs with n <= 12; worst ratio " + std::to_string(worst_num) + "/" + std::to_string(worst_den));
}

// Criterion 5
Outcome agent_properties() {
    Checker c;
    std::mt19937_64 rng(5005);
    std::size_t dras = 0;
    for (int k = 0; k < 240; ++k) {
        const std::size_t n = 20 + rng() % 280;
        WeightedGraph g;
        switch (k % 3) {
            case 0: g = random_connected(n, rng() % (n / 2 + 1), 50, rng); break;
            case 1: g = random_graph(n, n - 1 + rng() % n, 50, rng); break;
            default: g = road_like(n, rng); break;
        }
        AgentConfig cfg;
        cfg.c = 1 + static_cast<std::uint32_t>(k % 3);
        const auto a = compute_dras(g, cfg);
        const std::string at = "graph " + std::to_string(k);
        const auto comp = connected_components(g);
        std::vector<std::size_t> comp_size(n + 1, 0);
        for (auto x : comp) ++comp_size[x];
        const auto cuts = brute_cut_nodes(g);
        std::vector<std::uint8_t> is_cut(n, 0);
        for (NodeId v : cuts) is_cut[v] = 1;

        std::vector<int> member_of(n, -1);
        Dijkstra global(g), local(g);
        for (std::size_t i = 0; i < a.dras.size(); ++i) {
            const Dra& d = a.dras[i];
            ++dras;
            // Prop 3
            std::vector<std::uint8_t> in(n, 0);
            for (NodeId v : d.members) in[v] = 1;
            for (NodeId u : d.members) {
                global.run(u, d.members);
                local.run(u, d.members, [&](NodeId x) { return in[x] != 0; });
                for (NodeId v : d.members) c.expect(local.dist(v) == global.dist(v), at + " prop 3");
            }
            // Prop 5
            if (comp_size[comp[d.agent]] > a.threshold) c.expect(is_cut[d.agent] != 0, at + " prop 5 agent " + std::to_string(d.agent));
            // Corollary 1
            for (NodeId v : d.members) {
                if (v == d.agent) continue;
                c.expect(member_of[v] == -1, at + " overlapping DRAs at " + std::to_string(v));
                member_of[v] = static_cast<int>(i);
            }
        }
        for (const Dra& d : a.dras) c.expect(member_of[d.agent] == -1, at + " agent inside another DRA");

        // sketch is a forest
        const auto bccs = find_bccs(g);
        const auto sk = build_sketch(g, bccs);
        const std::size_t verts = sk.vertex_count();
        std::vector<std::uint32_t> parent(verts);
        std::iota(parent.begin(), parent.end(), 0u);
        auto find = [&](std::uint32_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        bool acyclic = true;
        std::size_t unions = 0;
        for (auto [cv, bv] : sk.edges) {
            const auto x = find(cv), y = find(static_cast<std::uint32_t>(sk.cut_node.size()) + bv);
            if (x == y) acyclic = false;
            else {
                parent[x] = y;
                ++unions;
            }
        }
        c.expect(acyclic && unions == sk.edges.size(), at + " sketch has a cycle");
    }
    return c.outcome("240 graphs, " + std::to_string(dras) + " DRAs: Prop 3, Prop 5, disjointness, sketch forest");
}

// Criterion 6
Outcome partition_contract() {
    Checker c;
    std::mt19937_64 rng(6006);
    std::size_t moves = 0;
    for (int k = 0; k < 90; ++k) {
        const std::size_t n = 50 + rng() % 2000;
        WeightedGraph g;
        switch (k % 3) {
            case 0: g = random_connected(n, rng() % n, 30, rng); break;
            case 1: g = random_graph(n, n + rng() % n, 30, rng); break;
            default: g = road_like(n, rng); break;
        }
        const std::size_t gamma = 2 + rng() % (n / 3 + 1);
        PartitionOptions opts;
        const std::string at = "graph " + std::to_string(k);
        opts.on_move = [&](std::size_t before, std::size_t after) {
            ++moves;
            c.expect(after <= before, at + " move raised the cut");
        };
        const auto p = partition_bounded(g, gamma, opts);
        c.expect(p.max_fragment_size() <= gamma, at + " fragment above the bound");
        c.expect(p.boundary_count() <= 2 * p.cross_edges.size(), at + " |B| > 2|E_B|");
        bool assigned = true;
        for (auto f : p.fragment_of) assigned = assigned && f < p.k;
        c.expect(assigned, at + " unassigned node");
    }
    return c.outcome("90 partitions, " + std::to_string(moves) + " refinement moves never raised the cut");
}

// Criterion 8
Outcome determinism() {
    Checker c;
    const auto dir = std::filesystem::temp_directory_path();
    std::mt19937_64 rng(8008);
    for (int k = 0; k < 3; ++k) {
        const auto g = k == 0 ? road_like(8000, rng) : random_connected(3000, 2000, 500, rng);
        PreprocessConfig cfg;
        if (k == 2) cfg.arcflag_regions = 6;
        const auto a = (dir / "disland_accept_a.idx").string(), b = (dir / "disland_accept_b.idx").string();
        save_index(preprocess(g, cfg), a);
        save_index(preprocess(g, cfg), b);
        std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        c.expect(sa.str() == sb.str() && !sa.str().empty(), "graph " + std::to_string(k) + " index bytes differ");
        std::filesystem::remove(a);
        std::filesystem::remove(b);
    }
    return c.outcome("three graphs preprocessed twice give byte-identical index files");
}

struct Dataset {
    WeightedGraph g;
    PreprocessedIndex idx;
};

std::optional<Dataset> load_dataset(std::string& why) {
    const char* gr = std::getenv("DISLAND_CO_GR");
    const char* co = std::getenv("DISLAND_CO_CO");
    if (!gr || !*gr) {
        why = "DIMACS CO dataset not available (set DISLAND_CO_GR and DISLAND_CO_CO)";
        return std::nullopt;
    }
    Dataset d;
    d.g = load_dimacs_files(gr, co ? co : "");
    PreprocessConfig cfg;
    cfg.agents.c = 2;
    d.idx = preprocess(d.g, cfg);
    return d;
}

// Criterion 7
Outcome reproduction(const Dataset& d) {
    const auto tables = stats_tables(d.g, d.idx);
    const double n = static_cast<double>(d.g.node_count());
    const double dra_pct = 100.0 * static_cast<double>(d.idx.dra.represented_count()) / n;
    const Partition& p = d.idx.partition;
    double frag_pct = 0;
    for (std::uint32_t i = 0; i < p.k; ++i)
        frag_pct += 100.0 * static_cast<double>(p.boundary[i].size()) / static_cast<double>(p.members[i].size());
    frag_pct /= std::max<std::uint32_t>(p.k, 1);
    const double node_pct = 100.0 * static_cast<double>(d.idx.super.nodes.size()) / n;
    const double edge_pct = 100.0 * static_cast<double>(d.idx.super.edges.size()) / static_cast<double>(d.g.edge_count());
    const auto space = extra_space(d.idx);
    Checker c;
    c.expect(dra_pct >= 25.9 && dra_pct <= 45.9, "DRA share " + fmt(dra_pct) + "% outside 35.9 +- 10");
    c.expect(frag_pct <= 10.0, "boundary share per fragment " + fmt(frag_pct) + "%");
    c.expect(node_pct <= 10.0, "super-graph node share " + fmt(node_pct) + "%");
    c.expect(edge_pct <= 30.0, "super-graph edge share " + fmt(edge_pct) + "%");
    auto o = c.outcome("DRA share " + fmt(dra_pct) + "% (paper 35.9%), boundary per fragment " + fmt(frag_pct) +
                       "% (paper 5.99%), super nodes " + fmt(node_pct) + "% / edges " + fmt(edge_pct) +
                       "% (paper 3.9% / 14.8%), extra space ratio " + fmt(space.ratio, 3) +
                       " (paper: about 0.5), preprocessing " + fmt(d.idx.timings.total, 1) + " s");
    if (o.status == Status::fail)
        o.detail += "; measured DRA " + fmt(dra_pct) + "%, boundary " + fmt(frag_pct) + "%, super nodes " +
                    fmt(node_pct) + "%, super edges " + fmt(edge_pct) + "%";
    return o;
}

// Criterion 9
Outcome performance(const Dataset& d) {
    if (!d.g.has_coords()) return {Status::skipped, "coordinates missing (DISLAND_CO_CO not set)"};
    const auto w = gen_queries(d.g, 1000, 9009);
    const auto& q4 = w.sets[3];
    if (q4.empty()) return {Status::fail, "Q4 is empty"};
    QueryEngine e(d.idx, d.g);
    Dijkstra dj(d.g);
    using Clock = std::chrono::steady_clock;
    double t_disland = 0, t_dijkstra = 0;
    Checker c;
    for (const auto& [s, t] : q4) {
        auto a = Clock::now();
        const Distance x = e.run(s, t);
        auto b = Clock::now();
        dj.run(s, std::span(&t, 1));
        auto z = Clock::now();
        c.expect(x == dj.dist(t), "pair " + std::to_string(s) + "," + std::to_string(t) + " inexact");
        t_disland += std::chrono::duration<double, std::micro>(b - a).count();
        t_dijkstra += std::chrono::duration<double, std::micro>(z - b).count();
    }
    const double k = static_cast<double>(q4.size());
    c.expect(t_disland < t_dijkstra, "DisLand mean " + fmt(t_disland / k) + " us not below Dijkstra " + fmt(t_dijkstra / k) + " us");
    return c.outcome("Q4 (" + std::to_string(q4.size()) + " pairs): DisLand " + fmt(t_disland / k) + " us vs Dijkstra " +
                     fmt(t_dijkstra / k) + " us mean");
}

}  // namespace

int main() {
    const char* names[] = {"",
                           "end-to-end exactness",
                           "accelerator exactness",
                           "landmark covers are vertex covers",
                           "2-approximation bound",
                           "agent and DRA properties",
                           "partition contract",
                           "CO dataset reproduction",
                           "determinism",
                           "CO performance sanity"};
    bool failed = false;
    auto report = [&](int id, const Outcome& o, double seconds) {
        const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIPPED";
        failed = failed || o.status == Status::fail;
        std::cout << "criterion " << id << " [" << tag << "] " << names[id] << ": " << o.detail << " (" << fmt(seconds, 1)
                  << " s)" << std::endl;
    };
    auto timed = [&](int id, auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {Status::fail, std::string("exception: ") + e.what()};
        }
        report(id, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    };

    timed(1, end_to_end);
    timed(2, accelerators);
    timed(3, theorem_one);
    timed(4, two_approx);
    timed(5, agent_properties);
    timed(6, partition_contract);

    std::string why;
    std::optional<Dataset> data;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        data = load_dataset(why);
    } catch (const std::exception& e) {
        why = std::string("dataset failed to load or preprocess: ") + e.what();
        report(7, {Status::fail, why}, 0);
    }
    const double load_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (data) {
        timed(7, [&] {
            auto o = reproduction(*data);
            o.detail += ", load and preprocess " + fmt(load_s, 1) + " s";
            return o;
        });
    } else if (why.rfind("dataset failed", 0) != 0) {
        report(7, {Status::skipped, why}, 0);
    }
    timed(8, determinism);
    if (data)
        timed(9, [&] { return performance(*data); });
    else
        report(9, {Status::skipped, why}, 0);
    return failed ? 1 : 0;
}
