#include "disland/bench.hpp"
#include "disland/disland.hpp"
#include "disland/workload.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace disland;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kInexact = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

NodeId user_node(long long id, const WeightedGraph& g) {
    if (id < 1 || static_cast<unsigned long long>(id) > g.node_count())
        throw ValidationError("node id " + std::to_string(id) + " outside 1.." + std::to_string(g.node_count()));
    return static_cast<NodeId>(id - 1);
}

std::string show(Distance d) { return d == kUnreachable ? "UNREACHABLE" : std::to_string(d); }

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

int run_preprocess(const std::string& gr, const std::string& co, const std::string& out, std::uint32_t c, bool no_ch,
                   bool no_flags, bool no_cost, std::uint32_t regions, unsigned threads) {
    const auto g = load_dimacs_files(gr, co);
    PreprocessConfig cfg;
    cfg.agents.c = c;
    cfg.ch = !no_ch;
    cfg.arcflags = !no_flags;
    cfg.cost_model = !no_cost;
    if (regions) cfg.arcflag_regions = regions;
    cfg.threads = threads;
    const auto idx = preprocess(g, cfg);
    save_index(idx, out);
    const auto& t = idx.timings;
    std::cout << "nodes " << g.node_count() << " edges " << g.edge_count() << "\n"
              << "dra nodes " << idx.dra.represented_count() << " agents " << idx.dra.dras.size() << "\n"
              << "shrink nodes " << idx.shrink.graph.node_count() << " fragments " << idx.partition.k
              << " boundary " << idx.partition.boundary_count() << "\n"
              << "super nodes " << idx.super.nodes.size() << " super edges " << idx.super.edges.size() << "\n"
              << "seconds: agents " << t.dras << " shrink " << t.shrink << " ch " << t.ch << " partition "
              << t.partition << " supergraph " << t.supergraph << " super-ch " << t.super_ch << " arcflags "
              << t.arcflags << " total " << t.total << "\n"
              << "extra space ratio " << extra_space(idx).ratio << "\n"
              << "wrote " << out << "\n";
    return kOk;
}

int run_query(const std::string& index, const std::string& gr, long long s_id, long long t_id, const std::string& algo) {
    const auto g = load_dimacs_files(gr);
    const NodeId s = user_node(s_id, g), t = user_node(t_id, g);
    Distance d;
    std::size_t settled = 0;
    if (algo == "dijkstra") {
        Dijkstra dj(g);
        dj.run(s, std::span(&t, 1));
        d = dj.dist(t);
        settled = dj.settled_count();
    } else if (algo == "bidi") {
        BidirectionalDijkstra b(g);
        d = b.run(s, t);
        settled = b.settled_count();
    } else {
        const auto idx = load_index(index);
        QueryEngine e(idx, g);
        if (algo == "ch") {
            // agents plus the hierarchy stored over the shrink graph
            if (!idx.ch) throw ValidationError("index was built without contraction hierarchies");
            const DraAssignment& a = idx.dra;
            if (s == t) {
                d = 0;
            } else if (a.owner[s] == a.owner[t]) {
                d = e.run(s, t);
                settled = e.settled_count();
            } else {
                ChQuery q(*idx.ch);
                const Distance mid = q.run(idx.shrink.to_shrink[a.owner[s]], idx.shrink.to_shrink[a.owner[t]]);
                d = dist_add(dist_add(a.owner_dist[s], mid), a.owner_dist[t]);
                settled = q.settled_count();
            }
        } else {
            QueryMode mode;
            if (algo == "disland")
                mode = QueryMode::plain;
            else if (algo == "arcflag" || algo == "disland-arcflag")
                mode = QueryMode::arcflags;
            else if (algo == "disland-ch")
                mode = QueryMode::ch;
            else if (algo == "disland-both")
                mode = QueryMode::both;
            else
                throw UsageError("unknown --algo '" + algo + "'");
            d = e.run(s, t, mode);
            settled = e.settled_count();
        }
    }
    std::cout << show(d) << "\n";
    std::cerr << "settled " << settled << "\n";
    return kOk;
}

int run_gen(const std::string& gr, const std::string& co, const std::string& out, std::size_t per_set,
            std::uint64_t seed, const std::string& metric) {
    const auto g = load_dimacs_files(gr, co);
    const auto w = gen_queries(g, per_set, seed, parse_metric(metric));
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open " + out + " for writing");
    write_workload(w, f);
    for (std::size_t i = 0; i < kQuerySets; ++i)
        std::cout << "Q" << i + 1 << " " << w.sets[i].size() << (w.short_set[i] ? " (short: budget exhausted)" : "")
                  << "\n";
    std::cout << "metric " << to_string(w.metric) << ", cell " << w.ell_x << " x " << w.ell_y << "\n";
    return kOk;
}

int run_bench(const std::vector<std::string>& files, const std::string& algos, const std::string& csv,
              std::uint32_t regions) {
    if (files.size() != 2 && files.size() != 3) throw UsageError("bench takes <gr> [index] <workload>");
    const auto g = load_dimacs_files(files[0]);
    std::optional<PreprocessedIndex> idx;
    if (files.size() == 3) idx = load_index(files[1]);
    std::ifstream wf(files.back());
    if (!wf) throw std::runtime_error("cannot open " + files.back());
    const auto w = read_workload(wf);

    BenchOptions opts;
    opts.arcflag_regions = regions;
    if (algos.empty()) {
        for (Algo a : all_algos())
            if (idx || !needs_index(a)) opts.algos.push_back(a);
    } else {
        for (const auto& name : split_list(algos)) opts.algos.push_back(parse_algo(name));
    }
    const auto report = bench(g, idx ? &*idx : nullptr, w, opts);
    write_bench_table(report, std::cout);
    if (csv.empty()) {
        std::cout << "\n";
        write_bench_csv(report, std::cout);
    } else {
        std::ofstream f(csv);
        if (!f) throw std::runtime_error("cannot open " + csv + " for writing");
        write_bench_csv(report, f);
    }
    return report.exact() ? kOk : kInexact;
}

int run_stats(const std::string& gr, const std::string& index, const std::string& dir) {
    const auto g = load_dimacs_files(gr);
    const auto idx = load_index(index);
    const auto tables = stats_tables(g, idx);
    for (const auto& t : tables) {
        if (dir.empty()) {
            std::cout << "## " << t.name << "\n" << t.csv << "\n";
        } else {
            std::filesystem::create_directories(dir);
            const auto path = std::filesystem::path(dir) / (t.name + ".csv");
            std::ofstream f(path);
            if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
            f << t.csv;
            std::cout << "wrote " << path.string() << "\n";
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact shortest distances on road graphs with agents, fragments and a super graph"};
    app.require_subcommand(1);

    std::string gr, co, out, index, algo = "disland", algos, csv, dir, metric = "chebyshev";
    std::uint32_t c = 2, regions = 0, bench_regions = 32;
    unsigned threads = 0;
    bool no_ch = false, no_flags = false, no_cost = false;
    long long s_id = 0, t_id = 0;
    std::size_t per_set = 10000;
    std::uint64_t seed = 1;
    std::vector<std::string> files;

    auto* pre = app.add_subcommand("preprocess", "Build an index from DIMACS .gr [.co] files");
    pre->add_option("gr", gr, "graph file")->required();
    pre->add_option("co", co, "coordinate file");
    pre->add_option("-o,--output", out, "index file")->required();
    pre->add_option("--c", c, "agent and fragment size factor")->check(CLI::PositiveNumber);
    pre->add_flag("--no-ch", no_ch, "skip contraction hierarchies");
    pre->add_flag("--no-arcflags", no_flags, "skip arc flags");
    pre->add_flag("--no-cost-model", no_cost, "hybrid covers without the landmark cost test");
    pre->add_option("--regions", regions, "arc-flag regions (default from the fragment count)");
    pre->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* q = app.add_subcommand("query", "Answer one query");
    q->add_option("index", index, "index file")->required();
    q->add_option("gr", gr, "graph file")->required();
    q->add_option("s", s_id, "source (1-based)")->required();
    q->add_option("t", t_id, "target (1-based)")->required();
    q->add_option("--algo", algo, "dijkstra|bidi|ch|arcflag|disland|disland-ch|disland-both");

    auto* gen = app.add_subcommand("gen-queries", "Generate the Q1..Q8 workload");
    gen->add_option("gr", gr, "graph file")->required();
    gen->add_option("co", co, "coordinate file")->required();
    gen->add_option("-o,--output", out, "workload file")->required();
    gen->add_option("--per-set", per_set, "pairs per set");
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--metric", metric, "chebyshev|manhattan|euclidean");

    auto* b = app.add_subcommand("bench", "Time algorithms on a workload");
    b->add_option("files", files, "<gr> [index] <workload>")->required()->expected(2, 3);
    b->add_option("--algos", algos, "comma-separated algorithms (default: all available)");
    b->add_option("--csv", csv, "write CSV here instead of standard output");
    b->add_option("--regions", bench_regions, "regions for the standalone arc-flag baselines");

    auto* st = app.add_subcommand("stats", "Index statistics as CSV tables");
    st->add_option("gr", gr, "graph file")->required();
    st->add_option("index", index, "index file")->required();
    st->add_option("--out-dir", dir, "write one CSV per table here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*pre) return run_preprocess(gr, co, out, c, no_ch, no_flags, no_cost, regions, threads);
        if (*q) return run_query(index, gr, s_id, t_id, algo);
        if (*gen) return run_gen(gr, co, out, per_set, seed, metric);
        if (*b) return run_bench(files, algos, csv, bench_regions);
        if (*st) return run_stats(gr, index, dir);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kInvalid;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kUsage;
}
