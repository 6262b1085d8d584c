#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace disland {

using NodeId = std::uint32_t;
using Weight = std::uint64_t;
using Distance = std::uint64_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr Distance kUnreachable = std::numeric_limits<Distance>::max();

// Saturating add: anything plus kUnreachable stays kUnreachable.
inline Distance dist_add(Distance a, Distance b) {
    if (a == kUnreachable || b == kUnreachable) return kUnreachable;
    return a + b;
}

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Edge {
    NodeId u;
    NodeId v;
    Weight w;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Arc {
    NodeId head;
    Weight w;
};

struct Coord {
    std::int64_t x;
    std::int64_t y;
};

// Undirected graph in CSR form. Each undirected edge is stored as two arcs.
// Immutable once built.
class WeightedGraph {
public:
    WeightedGraph() = default;

    // Builds from an edge list. Self-loops are dropped, parallel edges collapse
    // to the minimum weight. Throws ValidationError on bad ids or zero weights.
    static WeightedGraph from_edges(std::size_t node_count, std::span<const Edge> edges,
                                    std::vector<Coord> coords = {});

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return arcs_.size() / 2; }
    std::size_t arc_count() const { return arcs_.size(); }

    std::span<const Arc> neighbors(NodeId u) const {
        return {arcs_.data() + offsets_[u], arcs_.data() + offsets_[u + 1]};
    }
    std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
    // Index of the first arc of u; arc ids are offsets into the CSR arc array.
    std::size_t arc_begin(NodeId u) const { return offsets_[u]; }
    const Arc& arc(std::size_t id) const { return arcs_[id]; }

    std::optional<Weight> edge_weight(NodeId u, NodeId v) const;

    bool has_coords() const { return !coords_.empty(); }
    const std::vector<Coord>& coords() const { return coords_; }

    // Every undirected edge once, with u < v, in ascending (u, v) order.
    std::vector<Edge> edges() const;

    // Order-independent fingerprint of node count and edge set.
    std::uint64_t checksum() const;

    // Induced subgraph on `nodes` (ascending local ids follow the given order).
    WeightedGraph induced(std::span<const NodeId> nodes) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<Arc> arcs_;
    std::vector<Coord> coords_;
};

// DIMACS challenge 9 .gr / .co text. Streams starting with the gzip magic bytes
// are inflated transparently.
WeightedGraph load_dimacs(std::istream& gr, std::istream* co = nullptr);
WeightedGraph load_dimacs_files(const std::string& gr_path, const std::string& co_path = {});

using NodeFilter = std::function<bool(NodeId)>;

// Plain Dijkstra with a binary heap. Scratch arrays are reused across runs and
// reset lazily, so one instance can serve many queries on the same graph.
class Dijkstra {
public:
    explicit Dijkstra(const WeightedGraph& g);

    // Settles from `source` until every node in `targets` is settled (or the
    // queue runs dry when `targets` is empty). Nodes rejected by `filter` are
    // never entered.
    void run(NodeId source, std::span<const NodeId> targets = {}, const NodeFilter& filter = {});

    // Same, but stops as soon as the smallest tentative distance exceeds `bound`.
    void run_bounded(NodeId source, Distance bound, const NodeFilter& filter = {});

    // Final distance of a settled node; kUnreachable for anything not settled.
    Distance dist(NodeId v) const { return done_[v] == round_ ? dist_[v] : kUnreachable; }
    bool settled(NodeId v) const { return done_[v] == round_; }
    std::size_t settled_count() const { return settled_; }

private:
    void begin_round();
    template <class Stop>
    void search(NodeId source, const NodeFilter& filter, Stop&& stop);

    const WeightedGraph* g_;
    std::vector<Distance> dist_;
    std::vector<std::uint32_t> stamp_;
    std::vector<std::uint32_t> done_;
    std::vector<std::uint32_t> target_;
    std::uint32_t round_ = 0;
    std::size_t settled_ = 0;
};

// Full distance map from `source`; unreached (or filtered) nodes are kUnreachable.
std::vector<Distance> dijkstra(const WeightedGraph& g, NodeId source,
                               std::span<const NodeId> targets = {}, const NodeFilter& filter = {});

// Component label per node, labels dense from 0 in order of smallest member.
std::vector<std::uint32_t> connected_components(const WeightedGraph& g);

}  // namespace disland
