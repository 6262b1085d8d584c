#pragma once

#include "disland/graph.hpp"
#include "disland/landmarks.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace disland {

inline constexpr std::size_t kQuerySets = 8;
inline constexpr std::uint32_t kGridCells = 256;

enum class GridMetric { chebyshev, manhattan, euclidean };

const char* to_string(GridMetric m);
GridMetric parse_metric(const std::string& s);

struct Cell {
    std::uint32_t x = 0, y = 0;
};

// Distance between cell centres in cell units. Euclidean is rounded down.
std::uint32_t grid_distance(Cell a, Cell b, GridMetric m = GridMetric::chebyshev);

// Set index 1..8 whose band [2^(i-1), 2^i) holds d; 0 when d is in none.
std::size_t band_of(std::uint32_t d);

struct QueryWorkload {
    std::uint64_t seed = 0;
    std::size_t per_set = 0;
    std::uint32_t grid_x = kGridCells, grid_y = kGridCells;
    double ell_x = 0, ell_y = 0;  // cell side in coordinate units
    GridMetric metric = GridMetric::chebyshev;
    std::array<std::vector<NodePair>, kQuerySets> sets;  // sets[i-1] is Q_i
    // True when the sampling budget ran out before the set was full.
    std::array<bool, kQuerySets> short_set{};
};

// Cell of every node on a grid over the coordinate bounding box.
std::vector<Cell> assign_cells(const WeightedGraph& g, std::uint32_t cells = kGridCells);

// Uniform pairs with rejection into the eight distance bands. Each set stops
// at `per_set` pairs or after 1000 x per_set draws. Throws ValidationError when
// g has no coordinates.
QueryWorkload gen_queries(const WeightedGraph& g, std::size_t per_set, std::uint64_t seed,
                          GridMetric metric = GridMetric::chebyshev);

// Pair lines "i s t" carry 1-based node ids, as in the DIMACS files.
void write_workload(const QueryWorkload& w, std::ostream& out);
// Throws ParseError on malformed lines.
QueryWorkload read_workload(std::istream& in);

}  // namespace disland
