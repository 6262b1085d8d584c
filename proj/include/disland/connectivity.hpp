#pragma once

#include "disland/graph.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace disland {

struct Bcc {
    std::vector<Edge> edges;     // member edges, u < v
    std::vector<NodeId> nodes;   // distinct member nodes, ascending
};

struct BccDecomposition {
    std::vector<NodeId> cut_nodes;       // ascending
    std::vector<std::uint8_t> is_cut;    // per graph node
    std::vector<Bcc> bccs;               // isolated nodes get an edgeless single-node entry
};

// Bipartite forest of cut vertices and BCC vertices. Sketch vertex ids are
// split: cut vertex i mirrors graph node cut_node[i]; BCC vertex j mirrors bccs[j].
struct BcSketch {
    std::vector<NodeId> cut_node;
    std::vector<std::uint32_t> omega;                     // per BCC vertex: graph node count
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // (cut vertex, BCC vertex)
    std::vector<std::vector<std::uint32_t>> cut_adj;      // cut vertex -> BCC vertices
    std::vector<std::vector<std::uint32_t>> bcc_adj;      // BCC vertex -> cut vertices

    std::size_t vertex_count() const { return cut_node.size() + omega.size(); }
};

// Iterative Hopcroft-Tarjan; linear time, no recursion.
BccDecomposition find_bccs(const WeightedGraph& g);

BcSketch build_sketch(const WeightedGraph& g, const BccDecomposition& d);

}  // namespace disland
