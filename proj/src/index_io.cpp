#include "disland/disland.hpp"

#include <zlib.h>

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <type_traits>

namespace disland {

namespace {

constexpr std::array<char, 4> kMagic{'D', 'L', 'N', 'D'};
constexpr std::uint16_t kVersion = 1;

using Tag = std::array<char, 4>;
constexpr Tag kMeta{'M', 'E', 'T', 'A'};
constexpr Tag kDra{'D', 'R', 'A', ' '};
constexpr Tag kShrink{'S', 'H', 'R', 'K'};
constexpr Tag kPartition{'P', 'A', 'R', 'T'};
constexpr Tag kSuper{'S', 'U', 'P', 'R'};
constexpr Tag kCh{'C', 'H', ' ', ' '};
constexpr Tag kArcFlag{'A', 'F', 'L', 'G'};

class Writer {
public:
    template <class T>
    void put(T v) {
        static_assert(std::is_integral_v<T>);
        using U = std::make_unsigned_t<T>;
        U u = static_cast<U>(v);
        for (std::size_t i = 0; i < sizeof(T); ++i) bytes.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
    }
    template <class T>
    void put_vec(const std::vector<T>& v) {
        put<std::uint64_t>(v.size());
        for (T x : v) put(x);
    }
    void put_graph(const WeightedGraph& g) {
        put<std::uint64_t>(g.node_count());
        const auto edges = g.edges();
        put<std::uint64_t>(edges.size());
        for (const Edge& e : edges) {
            put(e.u);
            put(e.v);
            put(e.w);
        }
    }
    void put_ch(const ChIndex& ch) {
        put_vec(ch.rank);
        put<std::uint64_t>(ch.shortcuts.size());
        for (const Shortcut& s : ch.shortcuts) {
            put(s.u);
            put(s.w);
            put(s.weight);
            put(s.via);
        }
    }
    std::vector<std::uint8_t> bytes;
};

class Reader {
public:
    Reader(std::span<const std::uint8_t> b, const char* what) : b_(b), what_(what) {}

    template <class T>
    T get() {
        need(sizeof(T));
        using U = std::make_unsigned_t<T>;
        U u = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<U>(b_[pos_ + i]) << (8 * i));
        pos_ += sizeof(T);
        return static_cast<T>(u);
    }
    std::size_t count(std::size_t record_bytes) {
        const auto n = get<std::uint64_t>();
        if (record_bytes && n > (b_.size() - pos_) / record_bytes) fail("length exceeds section size");
        return static_cast<std::size_t>(n);
    }
    template <class T>
    std::vector<T> get_vec() {
        std::vector<T> v(count(sizeof(T)));
        for (T& x : v) x = get<T>();
        return v;
    }
    WeightedGraph get_graph() {
        const auto n = get<std::uint64_t>();
        std::vector<Edge> edges(count(sizeof(NodeId) * 2 + sizeof(Weight)));
        for (Edge& e : edges) {
            e.u = get<NodeId>();
            e.v = get<NodeId>();
            e.w = get<Weight>();
            if (e.u >= n || e.v >= n) fail("edge endpoint out of range");
        }
        return WeightedGraph::from_edges(static_cast<std::size_t>(n), edges);
    }
    ChIndex get_ch(const WeightedGraph& g) {
        ChIndex ch;
        ch.rank = get_vec<std::uint32_t>();
        if (ch.rank.size() != g.node_count()) fail("hierarchy rank size mismatch");
        ch.shortcuts.resize(count(3 * sizeof(NodeId) + sizeof(Weight)));
        for (Shortcut& s : ch.shortcuts) {
            s.u = get<NodeId>();
            s.w = get<NodeId>();
            s.weight = get<Weight>();
            s.via = get<NodeId>();
            if (s.u >= g.node_count() || s.w >= g.node_count()) fail("shortcut endpoint out of range");
        }
        ch.build_upward(g);
        return ch;
    }
    bool done() const { return pos_ == b_.size(); }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ValidationError(std::string("index section ") + what_ + ": " + msg);
    }

private:
    void need(std::size_t k) {
        if (b_.size() - pos_ < k) fail("truncated");
    }
    std::span<const std::uint8_t> b_;
    std::size_t pos_ = 0;
    const char* what_;
};

std::uint32_t crc_of(std::span<const std::uint8_t> b) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes 32-bit lengths
    for (std::size_t off = 0; off < b.size();) {
        const std::size_t len = std::min<std::size_t>(b.size() - off, 1u << 30);
        crc = crc32(crc, b.data() + off, static_cast<uInt>(len));
        off += len;
    }
    return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> serialize(const PreprocessedIndex& idx) {
    Writer out;
    for (char c : kMagic) out.put(static_cast<std::uint8_t>(c));
    out.put(kVersion);
    auto section = [&](const Tag& tag, auto&& fill) {
        Writer body;
        fill(body);
        for (char c : tag) out.put(static_cast<std::uint8_t>(c));
        out.put<std::uint64_t>(body.bytes.size());
        out.bytes.insert(out.bytes.end(), body.bytes.begin(), body.bytes.end());
        out.put(crc_of(body.bytes));
    };
    section(kMeta, [&](Writer& w) {
        w.put<std::uint64_t>(idx.node_count);
        w.put<std::uint64_t>(idx.edge_count);
        w.put(idx.graph_checksum);
        w.put(idx.config.agents.c);
        w.put<std::uint8_t>(idx.config.ch);
        w.put<std::uint8_t>(idx.config.arcflags);
        w.put<std::uint8_t>(idx.config.cost_model);
        w.put<std::uint32_t>(idx.config.arcflag_regions.value_or(0));
    });
    section(kDra, [&](Writer& w) {
        const DraAssignment& a = idx.dra;
        w.put<std::uint64_t>(a.threshold);
        w.put_vec(a.owner);
        w.put_vec(a.branch);
        w.put_vec(a.owner_dist);
        w.put_vec(a.dra_of);
        w.put<std::uint64_t>(a.dras.size());
        for (const Dra& d : a.dras) {
            w.put(d.agent);
            w.put(d.branch_count);
            w.put_vec(d.members);
        }
    });
    section(kShrink, [&](Writer& w) {
        w.put_graph(idx.shrink.graph);
        w.put_vec(idx.shrink.to_original);
    });
    section(kPartition, [&](Writer& w) {
        w.put<std::uint64_t>(idx.partition.gamma);
        w.put_vec(idx.partition.fragment_of);
    });
    section(kSuper, [&](Writer& w) {
        w.put_vec(idx.super.nodes);
        w.put<std::uint64_t>(idx.super.edges.size());
        for (const SuperEdge& e : idx.super.edges) {
            w.put(e.u);
            w.put(e.v);
            w.put(e.w);
            w.put(e.origin);
        }
        w.put<std::uint64_t>(idx.super.covers.size());
        for (const FragmentCover& c : idx.super.covers) {
            w.put<std::uint64_t>(c.pairs);
            w.put<std::uint64_t>(c.landmarks);
            w.put<std::uint64_t>(c.enforced);
            w.put<std::uint64_t>(c.direct);
        }
    });
    if (idx.ch || idx.super_ch)
        section(kCh, [&](Writer& w) {
            w.put<std::uint8_t>(idx.ch.has_value());
            if (idx.ch) w.put_ch(*idx.ch);
            w.put<std::uint8_t>(idx.super_ch.has_value());
            if (idx.super_ch) w.put_ch(*idx.super_ch);
        });
    if (idx.arcflags)
        section(kArcFlag, [&](Writer& w) {
            const ArcFlagIndex& f = *idx.arcflags;
            w.put(f.k);
            w.put<std::uint64_t>(f.words);
            w.put_vec(f.region_of);
            w.put_vec(f.flags);
            w.put_vec(idx.fragment_region);
        });
    return std::move(out.bytes);
}

PreprocessedIndex deserialize(std::span<const std::uint8_t> bytes) {
    Reader head(bytes, "header");
    std::array<char, 4> magic{};
    for (char& c : magic) c = static_cast<char>(head.get<std::uint8_t>());
    if (magic != kMagic) throw ValidationError("not a DisLand index (bad magic)");
    const auto version = head.get<std::uint16_t>();
    if (version != kVersion) throw ValidationError("unsupported index format version " + std::to_string(version));

    PreprocessedIndex idx;
    bool seen_meta = false, seen_dra = false, seen_shrink = false, seen_part = false, seen_super = false;
    std::optional<std::span<const std::uint8_t>> ch_body, af_body;
    std::size_t pos = 6;
    while (pos < bytes.size()) {
        if (bytes.size() - pos < 12) throw ValidationError("index truncated in section header");
        Tag tag;
        std::memcpy(tag.data(), bytes.data() + pos, 4);
        Reader len_reader(bytes.subspan(pos + 4, 8), "header");
        const auto len = len_reader.get<std::uint64_t>();
        pos += 12;
        if (len > bytes.size() - pos || bytes.size() - pos - len < 4) throw ValidationError("index truncated in section body");
        const auto body = bytes.subspan(pos, static_cast<std::size_t>(len));
        pos += static_cast<std::size_t>(len);
        Reader crc_reader(bytes.subspan(pos, 4), "header");
        const auto crc = crc_reader.get<std::uint32_t>();
        pos += 4;
        const std::string name(tag.begin(), tag.end());
        if (crc != crc_of(body)) throw ValidationError("index section " + name + ": checksum mismatch");

        if (tag == kMeta) {
            Reader r(body, "META");
            idx.node_count = r.get<std::uint64_t>();
            idx.edge_count = r.get<std::uint64_t>();
            idx.graph_checksum = r.get<std::uint64_t>();
            idx.config.agents.c = r.get<std::uint32_t>();
            idx.config.ch = r.get<std::uint8_t>();
            idx.config.arcflags = r.get<std::uint8_t>();
            idx.config.cost_model = r.get<std::uint8_t>();
            if (const auto k = r.get<std::uint32_t>()) idx.config.arcflag_regions = k;
            seen_meta = true;
        } else if (tag == kDra) {
            Reader r(body, "DRA");
            DraAssignment& a = idx.dra;
            a.threshold = r.get<std::uint64_t>();
            a.owner = r.get_vec<NodeId>();
            a.branch = r.get_vec<std::uint32_t>();
            a.owner_dist = r.get_vec<Distance>();
            a.dra_of = r.get_vec<std::uint32_t>();
            a.dras.resize(r.count(8));
            for (Dra& d : a.dras) {
                d.agent = r.get<NodeId>();
                d.branch_count = r.get<std::uint32_t>();
                d.members = r.get_vec<NodeId>();
            }
            seen_dra = true;
        } else if (tag == kShrink) {
            Reader r(body, "SHRK");
            idx.shrink.graph = r.get_graph();
            idx.shrink.to_original = r.get_vec<NodeId>();
            seen_shrink = true;
        } else if (tag == kPartition) {
            Reader r(body, "PART");
            idx.partition.gamma = r.get<std::uint64_t>();
            idx.partition.fragment_of = r.get_vec<std::uint32_t>();
            seen_part = true;
        } else if (tag == kSuper) {
            Reader r(body, "SUPR");
            idx.super.nodes = r.get_vec<NodeId>();
            idx.super.edges.resize(r.count(2 * sizeof(NodeId) + sizeof(Weight) + 4));
            for (SuperEdge& e : idx.super.edges) {
                e.u = r.get<NodeId>();
                e.v = r.get<NodeId>();
                e.w = r.get<Weight>();
                e.origin = r.get<std::uint32_t>();
            }
            idx.super.covers.resize(r.count(32));
            for (FragmentCover& c : idx.super.covers) {
                c.pairs = r.get<std::uint64_t>();
                c.landmarks = r.get<std::uint64_t>();
                c.enforced = r.get<std::uint64_t>();
                c.direct = r.get<std::uint64_t>();
            }
            seen_super = true;
        } else if (tag == kCh) {
            ch_body = body;
        } else if (tag == kArcFlag) {
            af_body = body;
        }
        // anything else is a section from a newer writer; skip it
    }
    if (!seen_meta || !seen_dra || !seen_shrink || !seen_part || !seen_super)
        throw ValidationError("index is missing a required section");

    const std::size_t n = idx.node_count;
    const DraAssignment& a = idx.dra;
    if (a.owner.size() != n || a.branch.size() != n || a.owner_dist.size() != n || a.dra_of.size() != n)
        throw ValidationError("index section DRA: size does not match the node count");
    const std::size_t sn = idx.shrink.graph.node_count();
    if (idx.shrink.to_original.size() != sn) throw ValidationError("index section SHRK: size mismatch");
    idx.shrink.to_shrink.assign(n, kNoNode);
    for (NodeId i = 0; i < sn; ++i) {
        const NodeId v = idx.shrink.to_original[i];
        if (v >= n) throw ValidationError("index section SHRK: node out of range");
        idx.shrink.to_shrink[v] = i;
    }
    for (NodeId v = 0; v < n; ++v)
        if (a.owner[v] >= n || idx.shrink.to_shrink[a.owner[v]] == kNoNode)
            throw ValidationError("index section DRA: owner is not a shrink node");
    if (idx.partition.fragment_of.size() != sn) throw ValidationError("index section PART: size mismatch");
    idx.partition = make_partition(idx.shrink.graph, idx.partition.fragment_of, idx.partition.gamma);
    idx.super = assemble_supergraph(sn, std::move(idx.super.nodes), std::move(idx.super.edges),
                                    std::move(idx.super.covers));
    idx.rebuild_compact();

    if (ch_body) {
        Reader r(*ch_body, "CH");
        if (r.get<std::uint8_t>()) idx.ch = r.get_ch(idx.shrink.graph);
        if (r.get<std::uint8_t>()) idx.super_ch = r.get_ch(idx.super_compact);
    }
    if (af_body) {
        Reader r(*af_body, "AFLG");
        ArcFlagIndex f;
        f.k = r.get<std::uint32_t>();
        f.words = static_cast<std::size_t>(r.get<std::uint64_t>());
        f.region_of = r.get_vec<std::uint32_t>();
        f.flags = r.get_vec<std::uint64_t>();
        idx.fragment_region = r.get_vec<std::uint32_t>();
        if (f.region_of.size() != idx.super_compact.node_count() ||
            f.flags.size() != f.words * idx.super_compact.arc_count() || f.words != (f.k + 63) / 64 ||
            idx.fragment_region.size() != idx.partition.k)
            r.fail("size mismatch");
        for (auto x : idx.fragment_region)
            if (x >= f.k) r.fail("region out of range");
        idx.arcflags = std::move(f);
    }
    return idx;
}

void save_index(const PreprocessedIndex& idx, const std::string& path) {
    const auto bytes = serialize(idx);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing " + path);
}

PreprocessedIndex load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

}  // namespace disland
