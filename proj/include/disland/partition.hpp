#pragma once

#include "disland/graph.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace disland {

inline constexpr std::uint32_t kNoFragment = 0xffffffffu;

struct Partition {
    std::uint32_t k = 0;
    std::size_t gamma = 0;
    std::vector<std::uint32_t> fragment_of;
    std::vector<std::vector<NodeId>> members;   // per fragment, ascending
    std::vector<std::vector<NodeId>> boundary;  // per fragment, ascending
    std::vector<std::uint8_t> is_boundary;
    std::vector<Edge> cross_edges;              // E_B, u < v, ascending

    std::size_t boundary_count() const;
    std::size_t max_fragment_size() const;
};

// Fills members, boundary and cross edges from a fragment assignment. Empty
// fragments are dropped and the rest renumbered by their smallest node.
Partition make_partition(const WeightedGraph& g, std::vector<std::uint32_t> fragment_of, std::size_t gamma);

struct PartitionOptions {
    std::optional<std::uint32_t> k_hint;
    // Called after every refinement move with the cut size before and after.
    std::function<void(std::size_t, std::size_t)> on_move;
    std::size_t refine_passes = 8;
};

// Default fragment count: ceil(n / gamma) rounded up to a multiple of 10.
std::uint32_t default_fragment_count(std::size_t n, std::size_t gamma);

Partition partition_bounded(const WeightedGraph& g, std::size_t gamma, const PartitionOptions& opts = {});

double boundary_fraction(const Partition& p);

}  // namespace disland
