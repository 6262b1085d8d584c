#pragma once

#include "disland/agents.hpp"
#include "disland/graph.hpp"
#include "disland/partition.hpp"
#include "disland/speedups.hpp"
#include "disland/supergraph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace disland {

struct PreprocessConfig {
    AgentConfig agents;
    bool ch = true;
    bool arcflags = true;
    bool cost_model = true;
    // Overrides the default region count of the arc-flag grouping.
    std::optional<std::uint32_t> arcflag_regions;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct PreprocessTimings {
    double dras = 0, shrink = 0, ch = 0, partition = 0, supergraph = 0, super_ch = 0, arcflags = 0, total = 0;
};

struct PreprocessedIndex {
    PreprocessConfig config;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::uint64_t graph_checksum = 0;

    DraAssignment dra;
    ShrinkGraph shrink;
    Partition partition;  // over shrink ids
    SuperGraph super;     // over shrink ids

    // Compact copy of the super graph: node i is super.nodes[i].
    WeightedGraph super_compact;
    std::vector<NodeId> super_index;  // shrink id -> compact id, kNoNode otherwise

    std::optional<ChIndex> ch;        // over the shrink graph
    std::optional<ChIndex> super_ch;  // over super_compact
    std::optional<ArcFlagIndex> arcflags;        // over super_compact
    std::vector<std::uint32_t> fragment_region;  // first-level fragment -> arc-flag region

    PreprocessTimings timings;  // not serialized

    // Throws ValidationError when g is not the graph this index was built from.
    void check_graph(const WeightedGraph& g) const;
    // Rebuilds super_compact and super_index from super.
    void rebuild_compact();
};

PreprocessedIndex preprocess(const WeightedGraph& g, const PreprocessConfig& cfg = {});

enum class QueryMode { plain, ch, arcflags, both };

const char* to_string(QueryMode m);

// Per-thread query scratch over one index and its source graph.
class QueryEngine {
public:
    QueryEngine(const PreprocessedIndex& idx, const WeightedGraph& g);

    // Throws ValidationError on out-of-range ids or when the mode needs a
    // structure the index lacks.
    Distance run(NodeId s, NodeId t, QueryMode mode = QueryMode::plain);
    std::size_t settled_count() const { return settled_; }

private:
    Distance union_search(NodeId us, NodeId ut, bool prune);
    Distance ch_search(NodeId us, NodeId ut);
    // Dijkstra inside one fragment of the shrink graph; side 0 or 1.
    void local_search(int side, NodeId source, std::uint32_t fragment);

    const PreprocessedIndex& idx_;
    const WeightedGraph& g_;
    Dijkstra dra_search_;
    std::optional<ChQuery> super_query_;
    std::vector<Distance> dist_[2];
    std::vector<std::uint32_t> stamp_[2];
    std::uint32_t round_ = 0;
    std::size_t settled_ = 0;
};

Distance query(const PreprocessedIndex& idx, const WeightedGraph& g, NodeId s, NodeId t,
               QueryMode mode = QueryMode::plain);

struct ExtraSpaceReport {
    std::size_t dra_edges = 0;            // agent-to-member distances stored
    std::size_t supergraph_enforced = 0;  // enforced edges over all fragments
    std::size_t ch_shortcuts = 0;         // shrink-graph hierarchy
    std::size_t super_ch_shortcuts = 0;   // super-graph hierarchy
    std::size_t arcflag_bits = 0;         // regions x super-graph arcs
    std::size_t graph_bytes = 0;          // adjacency lists, 4-byte ids and weights
    std::size_t extra_bytes = 0;
    double ratio = 0;
};

ExtraSpaceReport extra_space(const PreprocessedIndex& idx);

// Region count for grouping m first-level fragments.
std::uint32_t second_level_regions(std::size_t m);

std::vector<std::uint8_t> serialize(const PreprocessedIndex& idx);
PreprocessedIndex deserialize(std::span<const std::uint8_t> bytes);
void save_index(const PreprocessedIndex& idx, const std::string& path);
PreprocessedIndex load_index(const std::string& path);

}  // namespace disland
