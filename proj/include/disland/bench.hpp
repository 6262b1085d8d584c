#pragma once

#include "disland/disland.hpp"
#include "disland/workload.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace disland {

enum class Algo {
    dijkstra,
    bidi,
    agent_dijkstra,
    ch,
    agents_ch,
    arcflag,
    agents_arcflag,
    disland,
    disland_ch,
    disland_arcflag,
    disland_both,
};

const char* to_string(Algo a);
Algo parse_algo(const std::string& s);
std::vector<Algo> all_algos();
bool needs_index(Algo a);

struct BenchOptions {
    std::vector<Algo> algos;
    // Regions for the standalone arc-flag baselines.
    std::uint32_t arcflag_regions = 32;
};

struct BenchRow {
    Algo algo;
    std::size_t set = 0;  // 1..8
    std::size_t queries = 0;
    double mean_us = 0;
    double mean_settled = 0;
    std::uint64_t checksum = 0;
};

struct AlgoSummary {
    Algo algo;
    double preprocess_seconds = 0;  // for the baselines built here, or the index build when known
    double extra_ratio = 0;         // auxiliary bytes over graph bytes
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<AlgoSummary> algos;
    // (algorithm, set) pairs whose checksum differs from the first algorithm's
    std::vector<std::pair<Algo, std::size_t>> mismatches;
    bool exact() const { return mismatches.empty(); }
};

// Runs every selected algorithm over every query set. idx may be null when no
// selected algorithm needs it; otherwise ValidationError.
BenchReport bench(const WeightedGraph& g, const PreprocessedIndex* idx, const QueryWorkload& w,
                  const BenchOptions& opts);

void write_bench_csv(const BenchReport& r, std::ostream& out);
void write_bench_table(const BenchReport& r, std::ostream& out);

struct CsvTable {
    std::string name;  // file stem
    std::string csv;
};

// Agent, partition, per-fragment cover, super graph and space tables.
std::vector<CsvTable> stats_tables(const WeightedGraph& g, const PreprocessedIndex& idx);

}  // namespace disland
