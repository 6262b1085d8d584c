#pragma once

#include "disland/graph.hpp"
#include "disland/partition.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace disland {

using Seed = std::pair<NodeId, Distance>;

// Reusable bidirectional Dijkstra; alternates forward and backward settles and
// stops once the two queue minima together reach the best meeting value.
class BidirectionalDijkstra {
public:
    explicit BidirectionalDijkstra(const WeightedGraph& g);
    Distance run(NodeId s, NodeId t);
    std::size_t settled_count() const { return settled_; }

private:
    const WeightedGraph& g_;
    std::vector<Distance> dist_[2];
    std::vector<std::uint32_t> stamp_[2];
    std::uint32_t round_ = 0;
    std::size_t settled_ = 0;
};

Distance bidirectional_dijkstra(const WeightedGraph& g, NodeId s, NodeId t);

struct Shortcut {
    NodeId u = kNoNode, w = kNoNode;
    Weight weight = 0;
    NodeId via = kNoNode;
};

struct ChIndex {
    std::vector<std::uint32_t> rank;  // 0 = contracted first
    std::vector<Shortcut> shortcuts;  // in contraction order
    // upward view: arcs to higher-ranked neighbours, base edges and shortcuts merged
    std::vector<std::size_t> up_begin;
    std::vector<Arc> up_arcs;

    std::size_t node_count() const { return rank.size(); }
    std::span<const Arc> up(NodeId v) const { return {up_arcs.data() + up_begin[v], up_arcs.data() + up_begin[v + 1]}; }
    // Rebuilds the upward view from the base graph plus shortcuts.
    void build_upward(const WeightedGraph& g);
};

// Bytes per stored shortcut: two node ids and a distance, 4 bytes each.
inline constexpr std::size_t kShortcutRecordBytes = 12;

// Contracts by lazy priority (edge difference plus contracted neighbours), or
// in exactly the given sequence when one is passed.
ChIndex ch_build(const WeightedGraph& g, std::span<const NodeId> sequence = {});

class ChQuery {
public:
    explicit ChQuery(const ChIndex& idx);
    Distance run(NodeId s, NodeId t);
    // Upward searches from several weighted sources and targets at once.
    Distance run(std::span<const Seed> sources, std::span<const Seed> targets);
    std::size_t settled_count() const { return settled_; }

private:
    const ChIndex& idx_;
    std::vector<Distance> dist_[2];
    std::vector<std::uint32_t> stamp_[2];
    std::uint32_t round_ = 0;
    std::size_t settled_ = 0;
};

Distance ch_query(const ChIndex& idx, const WeightedGraph& g, NodeId s, NodeId t);

struct ArcFlagIndex {
    std::uint32_t k = 0;
    std::vector<std::uint32_t> region_of;
    std::size_t words = 0;              // 64-bit words per arc
    std::vector<std::uint64_t> flags;   // arc id * words + region / 64

    bool flag(std::size_t arc, std::uint32_t region) const {
        return flags[arc * words + region / 64] >> (region % 64) & 1;
    }
    std::size_t arc_count() const { return words ? flags.size() / words : 0; }
};

ArcFlagIndex arcflags_build(const WeightedGraph& g, std::vector<std::uint32_t> region_of, std::uint32_t k);
ArcFlagIndex arcflags_build(const WeightedGraph& g, const Partition& regions);

class ArcFlagQuery {
public:
    ArcFlagQuery(const ArcFlagIndex& idx, const WeightedGraph& g);
    Distance run(NodeId s, NodeId t);
    std::size_t settled_count() const { return settled_; }

private:
    const ArcFlagIndex& idx_;
    const WeightedGraph& g_;
    std::vector<Distance> dist_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t round_ = 0;
    std::size_t settled_ = 0;
};

Distance arcflags_query(const ArcFlagIndex& idx, const WeightedGraph& g, NodeId s, NodeId t);

enum class PathShape { rising, turning, neither };

// Shape of the rank sequence along `path`, read from its first node.
PathShape classify_path(std::span<const std::uint32_t> rank, std::span<const NodeId> path);

}  // namespace disland
