#pragma once

#include "disland/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace disland {

using NodePair = std::pair<NodeId, NodeId>;

struct LandmarkCover {
    std::vector<NodeId> landmarks;
    // Row i holds dist(landmarks[i], v) for every covered node v (the whole graph
    // for vertex-cover covers, pair endpoints for set-cover covers).
    std::vector<std::vector<std::pair<NodeId, Distance>>> dist_vectors;
};

struct HybridLandmark {
    NodeId node = kNoNode;
    std::vector<std::pair<NodeId, Distance>> covered;  // N_x with dist(x, .), ascending ids
    std::vector<NodePair> pairs;                        // P_x
};

struct HybridLandmarkCover {
    std::vector<HybridLandmark> landmarks;
    std::vector<Edge> direct_edges;  // pairs no landmark takes, weight = dist(u, v)

    // Edges enforced by the cover: landmark-to-covered edges (self entries
    // excluded) plus direct edges.
    std::vector<Edge> enforced_edges() const;
    std::size_t enforced_edge_count() const;
};

// Rank per node; higher rank = more important (contracted later).
using NodeOrder = std::vector<std::uint32_t>;

// True iff dropping (u,v) leaves dist(u,v) unchanged. Throws std::invalid_argument
// when (u,v) is not an edge.
bool is_redundant_edge(const WeightedGraph& g, NodeId u, NodeId v);

// Removes redundant edges one at a time in ascending (u,v) order, re-testing
// against the already reduced graph.
WeightedGraph refree_reduce(const WeightedGraph& g);

// Vertex cover of the RE-free reduction from a greedy maximal matching.
LandmarkCover vc_landmark_cover(const WeightedGraph& g);

// Greedy set cover: repeatedly takes the node lying on the shortest paths of
// the most uncovered pairs. Throws ValidationError on an unreachable pair.
LandmarkCover greedy_setcover_landmarks(const WeightedGraph& g, std::span<const NodePair> pairs);

struct HybridOptions {
    bool cost_model = true;
};

// Hybrid cover of `pairs`. With an order, pairs having an order-turning
// shortest path are first grouped under their highest-ranked peak.
HybridLandmarkCover hybrid_cover(const WeightedGraph& g, std::span<const NodePair> pairs,
                                 const NodeOrder* order = nullptr, HybridOptions opts = {});

}  // namespace disland
