#pragma once

#include "disland/graph.hpp"
#include "disland/landmarks.hpp"
#include "disland/partition.hpp"

#include <cstdint>
#include <vector>

namespace disland {

inline constexpr std::uint32_t kCrossOrigin = 0xffffffffu;

struct SuperEdge {
    NodeId u = kNoNode, v = kNoNode;  // u < v
    Weight w = 0;
    std::uint32_t origin = kCrossOrigin;  // fragment index for enforced edges
};

struct FragmentCover {
    std::size_t pairs = 0;      // boundary pairs whose local distance is global
    std::size_t landmarks = 0;  // |D_i|
    std::size_t enforced = 0;   // |E_D~i|
    std::size_t direct = 0;     // direct edges among them
};

struct SuperGraph {
    std::vector<NodeId> nodes;           // ascending
    std::vector<std::uint8_t> is_node;   // per node of the partitioned graph
    std::vector<SuperEdge> edges;        // one per node pair, minimum weight, ascending
    std::vector<FragmentCover> covers;   // per fragment
    WeightedGraph graph;                 // the edges over the partitioned graph's id space

    std::size_t enforced_edge_count() const;
    std::size_t cross_edge_count() const;
};

// Boundary pairs of fragment i whose distance inside the fragment equals their
// distance in g. Locally unreachable pairs are dropped.
std::vector<NodePair> local_global_filter(const WeightedGraph& g, const Partition& p, std::uint32_t i);

struct SuperGraphOptions {
    bool cost_model = true;
    unsigned threads = 0;  // 0 = hardware concurrency
};

// Super graph of g under p. When `order` is given (a rank per node of g) the
// fragment covers prefer order-turning peaks as landmarks.
SuperGraph build_supergraph(const WeightedGraph& g, const Partition& p, const NodeOrder* order = nullptr,
                            const SuperGraphOptions& opts = {});

// Assembles a super graph from stored parts (used when loading an index).
SuperGraph assemble_supergraph(std::size_t node_count, std::vector<NodeId> nodes, std::vector<SuperEdge> edges,
                               std::vector<FragmentCover> covers);

}  // namespace disland
