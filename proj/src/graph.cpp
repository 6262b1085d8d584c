#include "disland/graph.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <queue>
#include <sstream>
#include <string_view>
#include <tuple>

namespace disland {

WeightedGraph WeightedGraph::from_edges(std::size_t node_count, std::span<const Edge> edges,
                                        std::vector<Coord> coords) {
    if (node_count >= kNoNode) throw ValidationError("node count exceeds 32-bit id space");
    if (!coords.empty() && coords.size() != node_count)
        throw ValidationError("coordinate count does not match node count");

    std::vector<Edge> norm;
    norm.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.u >= node_count || e.v >= node_count)
            throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  ") references a node outside [0," + std::to_string(node_count) + ")");
        if (e.w == 0) throw ValidationError("edge weights must be positive");
        if (e.u == e.v) continue;
        norm.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
    }
    std::sort(norm.begin(), norm.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v, a.w) < std::tie(b.u, b.v, b.w);
    });
    // after sorting, the first of each (u,v) run carries the minimum weight
    norm.erase(std::unique(norm.begin(), norm.end(),
                           [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }),
               norm.end());

    WeightedGraph g;
    g.offsets_.assign(node_count + 1, 0);
    for (const Edge& e : norm) {
        ++g.offsets_[e.u + 1];
        ++g.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.arcs_.resize(norm.size() * 2);
    std::vector<std::size_t> pos(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : norm) {
        g.arcs_[pos[e.u]++] = {e.v, e.w};
        g.arcs_[pos[e.v]++] = {e.u, e.w};
    }
    for (std::size_t u = 0; u < node_count; ++u) {
        std::sort(g.arcs_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u]),
                  g.arcs_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u + 1]),
                  [](const Arc& a, const Arc& b) { return a.head < b.head; });
    }
    g.coords_ = std::move(coords);
    return g;
}

std::optional<Weight> WeightedGraph::edge_weight(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v,
                               [](const Arc& a, NodeId x) { return a.head < x; });
    if (it == nb.end() || it->head != v) return std::nullopt;
    return it->w;
}

std::vector<Edge> WeightedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (const Arc& a : neighbors(u))
            if (u < a.head) out.push_back({u, a.head, a.w});
    return out;
}

std::uint64_t WeightedGraph::checksum() const {
    // FNV-1a over the canonical edge listing
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    mix(node_count());
    for (const Edge& e : edges()) {
        mix(e.u);
        mix(e.v);
        mix(e.w);
    }
    return h;
}

WeightedGraph WeightedGraph::induced(std::span<const NodeId> nodes) const {
    std::vector<NodeId> local(node_count(), kNoNode);
    for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<NodeId>(i);
    std::vector<Edge> sub;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (const Arc& a : neighbors(nodes[i]))
            if (local[a.head] != kNoNode && i < local[a.head])
                sub.push_back({static_cast<NodeId>(i), local[a.head], a.w});
    std::vector<Coord> c;
    if (has_coords()) {
        c.reserve(nodes.size());
        for (NodeId v : nodes) c.push_back(coords_[v]);
    }
    return from_edges(nodes.size(), sub, std::move(c));
}

// ---------------------------------------------------------------------------
// DIMACS parsing

namespace {

std::string slurp(std::istream& in) {
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (raw.size() < 2 || static_cast<unsigned char>(raw[0]) != 0x1f ||
        static_cast<unsigned char>(raw[1]) != 0x8b)
        return raw;

    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw std::runtime_error("zlib init failed");
    zs.next_in = reinterpret_cast<Bytef*>(raw.data());
    zs.avail_in = static_cast<uInt>(raw.size());
    std::string out;
    char buf[1 << 16];
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof(buf);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw std::runtime_error("corrupt gzip stream");
        }
        out.append(buf, sizeof(buf) - zs.avail_out);
        if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) break;  // truncated input
    }
    inflateEnd(&zs);
    return out;
}

class Tokens {
public:
    Tokens(std::string_view line, std::size_t lineno) : rest_(line), lineno_(lineno) {}

    std::string_view word() {
        skip();
        auto end = rest_.find_first_of(" \t\r");
        auto w = rest_.substr(0, end);
        rest_.remove_prefix(w.size());
        if (w.empty()) throw ParseError(lineno_, "unexpected end of line");
        return w;
    }

    std::int64_t integer() {
        auto w = word();
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc() || p != w.data() + w.size())
            throw ParseError(lineno_, "expected integer, got '" + std::string(w) + "'");
        return v;
    }

    void expect_end() {
        skip();
        if (!rest_.empty()) throw ParseError(lineno_, "trailing characters");
    }

private:
    void skip() {
        while (!rest_.empty() && (rest_.front() == ' ' || rest_.front() == '\t' || rest_.front() == '\r'))
            rest_.remove_prefix(1);
    }
    std::string_view rest_;
    std::size_t lineno_;
};

template <class F>
void for_each_line(const std::string& text, F&& f) {
    std::size_t lineno = 0, pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        ++lineno;
        std::string_view line(text.data() + pos, nl - pos);
        pos = nl + 1;
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
        if (line.empty() || line == "\r" || line.front() == 'c') continue;
        f(line, lineno);
    }
}

}  // namespace

WeightedGraph load_dimacs(std::istream& gr, std::istream* co) {
    const std::string text = slurp(gr);
    std::optional<std::size_t> n;
    std::vector<Edge> edges;

    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        Tokens tok(line, lineno);
        auto kind = tok.word();
        if (kind == "p") {
            if (n) throw ParseError(lineno, "duplicate problem line");
            if (tok.word() != "sp") throw ParseError(lineno, "expected 'p sp <n> <m>'");
            auto nn = tok.integer();
            auto mm = tok.integer();
            tok.expect_end();
            if (nn < 0 || mm < 0) throw ParseError(lineno, "negative size in problem line");
            n = static_cast<std::size_t>(nn);
            edges.reserve(static_cast<std::size_t>(mm));
        } else if (kind == "a") {
            if (!n) throw ParseError(lineno, "arc before problem line");
            auto u = tok.integer();
            auto v = tok.integer();
            auto w = tok.integer();
            tok.expect_end();
            if (u < 1 || v < 1 || static_cast<std::size_t>(u) > *n || static_cast<std::size_t>(v) > *n)
                throw ValidationError("line " + std::to_string(lineno) + ": arc (" + std::to_string(u) +
                                      "," + std::to_string(v) + ") outside node range 1.." +
                                      std::to_string(*n));
            if (w <= 0)
                throw ValidationError("line " + std::to_string(lineno) + ": non-positive weight " +
                                      std::to_string(w));
            edges.push_back({static_cast<NodeId>(u - 1), static_cast<NodeId>(v - 1),
                             static_cast<Weight>(w)});
        } else {
            throw ParseError(lineno, "unknown line type '" + std::string(kind) + "'");
        }
    });
    if (!n) throw ParseError(0, "missing problem line");

    std::vector<Coord> coords;
    if (co) {
        const std::string ctext = slurp(*co);
        coords.assign(*n, Coord{0, 0});
        std::vector<bool> seen(*n, false);
        for_each_line(ctext, [&](std::string_view line, std::size_t lineno) {
            Tokens tok(line, lineno);
            auto kind = tok.word();
            if (kind == "p") return;
            if (kind != "v") throw ParseError(lineno, "unknown line type '" + std::string(kind) + "'");
            auto id = tok.integer();
            auto x = tok.integer();
            auto y = tok.integer();
            tok.expect_end();
            if (id < 1 || static_cast<std::size_t>(id) > *n)
                throw ValidationError("line " + std::to_string(lineno) + ": coordinate for unknown node " +
                                      std::to_string(id));
            coords[static_cast<std::size_t>(id - 1)] = {x, y};
            seen[static_cast<std::size_t>(id - 1)] = true;
        });
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            throw ValidationError("coordinate file does not cover every node");
    }
    return WeightedGraph::from_edges(*n, edges, std::move(coords));
}

WeightedGraph load_dimacs_files(const std::string& gr_path, const std::string& co_path) {
    std::ifstream gr(gr_path, std::ios::binary);
    if (!gr) throw std::runtime_error("cannot open " + gr_path);
    if (co_path.empty()) return load_dimacs(gr);
    std::ifstream co(co_path, std::ios::binary);
    if (!co) throw std::runtime_error("cannot open " + co_path);
    return load_dimacs(gr, &co);
}

// ---------------------------------------------------------------------------
// Dijkstra

Dijkstra::Dijkstra(const WeightedGraph& g)
    : g_(&g),
      dist_(g.node_count()),
      stamp_(g.node_count(), 0),
      done_(g.node_count(), 0),
      target_(g.node_count(), 0) {}

template <class Stop>
void Dijkstra::search(NodeId source, const NodeFilter& filter, Stop&& stop) {
    settled_ = 0;
    if (filter && !filter(source)) return;

    using Item = std::pair<Distance, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist_[source] = 0;
    stamp_[source] = round_;
    pq.push({0, source});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (done_[u] == round_) continue;
        if (stop.before_settle(d)) break;
        done_[u] = round_;
        ++settled_;
        if (stop.after_settle(u)) break;
        for (const Arc& a : g_->neighbors(u)) {
            const Distance nd = d + a.w;
            if (stamp_[a.head] == round_ && dist_[a.head] <= nd) continue;
            if (filter && !filter(a.head)) continue;
            dist_[a.head] = nd;
            stamp_[a.head] = round_;
            pq.push({nd, a.head});
        }
    }
}

void Dijkstra::begin_round() {
    if (++round_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        std::fill(done_.begin(), done_.end(), 0);
        std::fill(target_.begin(), target_.end(), 0);
        round_ = 1;
    }
}

namespace {
struct TargetStop {
    const std::vector<std::uint32_t>* mark;
    std::uint32_t round;
    std::size_t remaining;
    bool before_settle(Distance) const { return false; }
    bool after_settle(NodeId u) {
        if (remaining == 0) return false;
        return (*mark)[u] == round && --remaining == 0;
    }
};
struct BoundStop {
    Distance bound;
    bool before_settle(Distance d) const { return d > bound; }
    bool after_settle(NodeId) const { return false; }
};
}  // namespace

void Dijkstra::run(NodeId source, std::span<const NodeId> targets, const NodeFilter& filter) {
    begin_round();
    std::size_t remaining = 0;
    for (NodeId t : targets)
        if (target_[t] != round_) {
            target_[t] = round_;
            ++remaining;
        }
    search(source, filter, TargetStop{&target_, round_, remaining});
    // Targets rejected by the filter are never settled; the search then simply
    // exhausts the admitted region.
}

void Dijkstra::run_bounded(NodeId source, Distance bound, const NodeFilter& filter) {
    begin_round();
    search(source, filter, BoundStop{bound});
}

std::vector<Distance> dijkstra(const WeightedGraph& g, NodeId source, std::span<const NodeId> targets,
                               const NodeFilter& filter) {
    Dijkstra d(g);
    d.run(source, targets, filter);
    std::vector<Distance> out(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) out[v] = d.dist(v);
    return out;
}

std::vector<std::uint32_t> connected_components(const WeightedGraph& g) {
    constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> label(g.node_count(), kUnset);
    std::vector<NodeId> stack;
    std::uint32_t next = 0;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (label[s] != kUnset) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (const Arc& a : g.neighbors(u))
                if (label[a.head] == kUnset) {
                    label[a.head] = next;
                    stack.push_back(a.head);
                }
        }
        ++next;
    }
    return label;
}

}  // namespace disland
