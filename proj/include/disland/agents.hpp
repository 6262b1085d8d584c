#pragma once

#include "disland/connectivity.hpp"
#include "disland/graph.hpp"

#include <cstdint>
#include <vector>

namespace disland {

struct AgentConfig {
    std::uint32_t c = 2;

    // c * floor(sqrt(n)), n being the whole graph's node count.
    std::size_t threshold(std::size_t node_count) const;
};

inline constexpr std::uint32_t kNoBranch = 0xffffffffu;
inline constexpr std::uint32_t kNoDra = 0xffffffffu;

// One deterministic routing area: a maximal agent and the nodes it represents.
struct Dra {
    NodeId agent = kNoNode;
    std::vector<NodeId> members;  // ascending, includes the agent
    std::uint32_t branch_count = 0;
};

struct DraAssignment {
    std::size_t threshold = 0;
    std::vector<NodeId> owner;             // maximal agent per node; self when outside every DRA
    std::vector<std::uint32_t> branch;     // branch index of a non-agent member, kNoBranch otherwise
    std::vector<Distance> owner_dist;      // dist(owner(v), v) inside the DRA; 0 for self-owned
    std::vector<std::uint32_t> dra_of;     // index into dras for members (agent included)
    std::vector<Dra> dras;                 // only non-trivial ones, ascending by agent

    bool is_represented(NodeId v) const { return owner[v] != v; }
    std::size_t represented_count() const;
};

// Linear-time extraction over the BC-sketch, followed by a Dijkstra fill of
// owner_dist restricted to each DRA.
DraAssignment compute_dras(const WeightedGraph& g, const AgentConfig& cfg);
DraAssignment compute_dras(const WeightedGraph& g, const BcSketch& sketch,
                           const BccDecomposition& bccs, std::size_t threshold);

struct ShrinkGraph {
    WeightedGraph graph;
    std::vector<NodeId> to_original;  // shrink id -> graph id
    std::vector<NodeId> to_shrink;    // graph id -> shrink id, kNoNode for DRA interiors
};

ShrinkGraph build_shrink_graph(const WeightedGraph& g, const DraAssignment& a);

// dist(s, t) for two nodes sharing an owner. Throws std::invalid_argument otherwise.
// The scratch overload reuses `search` (built over g) for the same-branch case.
Distance dra_distance(const DraAssignment& a, const WeightedGraph& g, NodeId s, NodeId t);
Distance dra_distance(const DraAssignment& a, Dijkstra& search, NodeId s, NodeId t);

}  // namespace disland
