#include "disland/workload.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace disland {

const char* to_string(GridMetric m) {
    switch (m) {
        case GridMetric::chebyshev: return "chebyshev";
        case GridMetric::manhattan: return "manhattan";
        case GridMetric::euclidean: return "euclidean";
    }
    return "?";
}

GridMetric parse_metric(const std::string& s) {
    if (s == "chebyshev") return GridMetric::chebyshev;
    if (s == "manhattan") return GridMetric::manhattan;
    if (s == "euclidean") return GridMetric::euclidean;
    throw ValidationError("unknown grid metric '" + s + "'");
}

std::uint32_t grid_distance(Cell a, Cell b, GridMetric m) {
    const std::uint32_t dx = a.x > b.x ? a.x - b.x : b.x - a.x;
    const std::uint32_t dy = a.y > b.y ? a.y - b.y : b.y - a.y;
    switch (m) {
        case GridMetric::chebyshev: return std::max(dx, dy);
        case GridMetric::manhattan: return dx + dy;
        case GridMetric::euclidean:
            return static_cast<std::uint32_t>(std::sqrt(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy));
    }
    return 0;
}

std::size_t band_of(std::uint32_t d) {
    for (std::size_t i = 1; i <= kQuerySets; ++i)
        if (d >= (1u << (i - 1)) && d < (1u << i)) return i;
    return 0;
}

std::vector<Cell> assign_cells(const WeightedGraph& g, std::uint32_t cells) {
    if (!g.has_coords()) throw ValidationError("query generation needs node coordinates");
    const auto& c = g.coords();
    std::vector<Cell> out(c.size());
    if (c.empty()) return out;
    auto [lo_x, hi_x] = std::minmax_element(c.begin(), c.end(), [](const Coord& a, const Coord& b) { return a.x < b.x; });
    auto [lo_y, hi_y] = std::minmax_element(c.begin(), c.end(), [](const Coord& a, const Coord& b) { return a.y < b.y; });
    const std::int64_t x0 = lo_x->x, y0 = lo_y->y;
    const std::int64_t wx = hi_x->x - x0 + 1, wy = hi_y->y - y0 + 1;
    for (std::size_t v = 0; v < c.size(); ++v) {
        out[v].x = static_cast<std::uint32_t>((c[v].x - x0) * cells / wx);
        out[v].y = static_cast<std::uint32_t>((c[v].y - y0) * cells / wy);
    }
    return out;
}

QueryWorkload gen_queries(const WeightedGraph& g, std::size_t per_set, std::uint64_t seed, GridMetric metric) {
    const auto cells = assign_cells(g, kGridCells);
    QueryWorkload w;
    w.seed = seed;
    w.per_set = per_set;
    w.metric = metric;
    if (!g.coords().empty()) {
        const auto& c = g.coords();
        auto [lo_x, hi_x] = std::minmax_element(c.begin(), c.end(), [](const Coord& a, const Coord& b) { return a.x < b.x; });
        auto [lo_y, hi_y] = std::minmax_element(c.begin(), c.end(), [](const Coord& a, const Coord& b) { return a.y < b.y; });
        w.ell_x = static_cast<double>(hi_x->x - lo_x->x + 1) / kGridCells;
        w.ell_y = static_cast<double>(hi_y->y - lo_y->y + 1) / kGridCells;
    }
    if (per_set == 0 || g.node_count() < 2) {
        for (std::size_t i = 0; i < kQuerySets; ++i) w.short_set[i] = per_set > 0;
        return w;
    }
    const std::size_t budget = 1000 * per_set;
    std::array<std::size_t, kQuerySets> draws{};
    std::size_t open = kQuerySets;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.node_count() - 1));
    while (open > 0) {
        const NodeId s = pick(rng), t = pick(rng);
        const std::size_t band = band_of(grid_distance(cells[s], cells[t], metric));
        for (std::size_t i = 0; i < kQuerySets; ++i) {
            if (w.sets[i].size() >= per_set || draws[i] >= budget) continue;
            ++draws[i];
            if (band == i + 1) w.sets[i].push_back({s, t});
            if (w.sets[i].size() >= per_set || draws[i] >= budget) --open;
        }
    }
    for (std::size_t i = 0; i < kQuerySets; ++i) w.short_set[i] = w.sets[i].size() < per_set;
    return w;
}

void write_workload(const QueryWorkload& w, std::ostream& out) {
    out << "# disland query workload\n";
    out << "seed " << w.seed << "\n";
    out << "ell " << w.ell_x << " " << w.ell_y << "\n";
    out << "grid " << w.grid_x << " " << w.grid_y << "\n";
    out << "metric " << to_string(w.metric) << "\n";
    out << "per_set " << w.per_set << "\n";
    for (std::size_t i = 0; i < kQuerySets; ++i)
        out << "set " << i + 1 << " " << w.sets[i].size() << (w.short_set[i] ? " short" : "") << "\n";
    for (std::size_t i = 0; i < kQuerySets; ++i)
        for (const auto& [s, t] : w.sets[i]) out << i + 1 << " " << s + 1 << " " << t + 1 << "\n";
}

QueryWorkload read_workload(std::istream& in) {
    QueryWorkload w;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        auto fail = [&](const std::string& what) { throw ParseError(no, what); };
        if (key == "seed") {
            if (!(ls >> w.seed)) fail("bad seed");
        } else if (key == "ell") {
            if (!(ls >> w.ell_x >> w.ell_y)) fail("bad ell");
        } else if (key == "grid") {
            if (!(ls >> w.grid_x >> w.grid_y)) fail("bad grid");
        } else if (key == "metric") {
            std::string m;
            ls >> m;
            try {
                w.metric = parse_metric(m);
            } catch (const ValidationError& e) {
                fail(e.what());
            }
        } else if (key == "per_set") {
            if (!(ls >> w.per_set)) fail("bad per_set");
        } else if (key == "set") {
            std::size_t i = 0, count = 0;
            std::string flag;
            if (!(ls >> i >> count) || i < 1 || i > kQuerySets) fail("bad set line");
            ls >> flag;
            w.short_set[i - 1] = flag == "short";
        } else {
            std::istringstream ps(line);
            long long i = 0, s = 0, t = 0;
            if (!(ps >> i >> s >> t) || i < 1 || i > static_cast<long long>(kQuerySets) || s < 1 || t < 1 ||
                s > static_cast<long long>(kNoNode) || t > static_cast<long long>(kNoNode))
                fail("expected 'i s t' with 1-based node ids");
            std::string rest;
            if (ps >> rest) fail("trailing text");
            w.sets[static_cast<std::size_t>(i - 1)].push_back({static_cast<NodeId>(s - 1), static_cast<NodeId>(t - 1)});
        }
    }
    return w;
}

}  // namespace disland
