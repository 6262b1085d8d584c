#include "disland/landmarks.hpp"

#include "doctest.h"
#include "support.hpp"

#include <set>

using namespace disland;
namespace dt = disland::testing;
using dt::is_landmark_cover;
using dt::is_vertex_cover;
using dt::min_vertex_cover;
using dt::subset;

namespace {

WeightedGraph make(std::size_t n, std::vector<Edge> e) { return WeightedGraph::from_edges(n, e); }

std::vector<NodePair> all_pairs(std::size_t n) {
    std::vector<NodePair> p;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) p.push_back({u, v});
    return p;
}

void check_hybrid(const WeightedGraph& g, const std::vector<NodePair>& pairs, const HybridLandmarkCover& h,
                  bool cost_model) {
    auto d = dt::floyd_warshall(g);
    std::set<NodePair> claimed;
    for (const auto& lm : h.landmarks) {
        if (cost_model) CHECK(lm.covered.size() <= lm.pairs.size());
        for (auto [y, dist] : lm.covered) CHECK(dist == d[lm.node][y]);
        for (auto pr : lm.pairs) CHECK(claimed.insert(pr).second);
    }
    for (const Edge& e : h.direct_edges) {
        CHECK(claimed.insert({e.u, e.v}).second);
        CHECK(e.w == d[e.u][e.v]);
    }
    for (auto [u, v] : pairs) {
        if (u == v) continue;
        Distance best = kUnreachable;
        for (const auto& lm : h.landmarks) {
            Distance du = kUnreachable, dv = kUnreachable;
            for (auto [y, dist] : lm.covered) {
                if (y == u) du = dist;
                if (y == v) dv = dist;
            }
            if (du != kUnreachable && dv != kUnreachable) best = std::min(best, du + dv);
        }
        for (const Edge& e : h.direct_edges)
            if (e.u == std::min(u, v) && e.v == std::max(u, v)) best = std::min(best, e.w);
        CHECK(best == d[u][v]);
    }
}

}  // namespace

TEST_CASE("redundant edges") {
    // a=0, b=1, c=2
    auto tri = make(3, {{0, 1, 2}, {0, 2, 1}, {2, 1, 1}});
    CHECK(is_redundant_edge(tri, 0, 1));
    CHECK_FALSE(is_redundant_edge(tri, 0, 2));
    auto unit = make(3, {{0, 1, 1}, {0, 2, 1}, {2, 1, 1}});
    for (auto e : unit.edges()) CHECK_FALSE(is_redundant_edge(unit, e.u, e.v));
    auto path = dt::path_graph({3, 3});
    CHECK_FALSE(is_redundant_edge(path, 0, 1));
    CHECK_THROWS_AS(is_redundant_edge(path, 0, 2), std::invalid_argument);
}

TEST_CASE("redundancy agrees with a brute-force detour check") {
    std::mt19937_64 rng(2);
    for (int round = 0; round < 30; ++round) {
        auto g = dt::random_connected(12, 10, 6, rng);
        for (const Edge& e : g.edges()) {
            std::vector<Edge> rest;
            for (const Edge& f : g.edges())
                if (!(f == e)) rest.push_back(f);
            auto d = dt::floyd_warshall(make(g.node_count(), rest));
            CHECK(is_redundant_edge(g, e.u, e.v) == (d[e.u][e.v] <= e.w));
        }
    }
}

TEST_CASE("refree_reduce") {
    auto tri = make(3, {{0, 1, 2}, {0, 2, 1}, {2, 1, 1}});
    CHECK(refree_reduce(tri).edges() == std::vector<Edge>{{0, 2, 1}, {1, 2, 1}});

    std::mt19937_64 rng(9);
    auto tree = dt::random_connected(25, 0, 7, rng);
    CHECK(refree_reduce(tree).edges() == tree.edges());

    for (int round = 0; round < 20; ++round) {
        auto g = dt::random_connected(30, 40, round % 2 ? 3 : 20, rng);
        auto r = refree_reduce(g);
        CHECK(dt::floyd_warshall(r) == dt::floyd_warshall(g));
        for (const Edge& e : r.edges()) CHECK_FALSE(is_redundant_edge(r, e.u, e.v));
        CHECK(refree_reduce(r).edges() == r.edges());
    }
}

TEST_CASE("vertex-cover landmark cover examples") {
    auto one = vc_landmark_cover(make(2, {{0, 1, 4}}));
    CHECK(one.landmarks == std::vector<NodeId>{0, 1});
    auto p4 = dt::path_graph({1, 1, 1});
    auto c = vc_landmark_cover(p4);
    auto sorted = c.landmarks;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<NodeId>{0, 1, 2, 3});
    CHECK(min_vertex_cover(p4) == 2);
    REQUIRE(c.dist_vectors.size() == 4);
    CHECK(c.dist_vectors[0].size() == 4);
}

TEST_CASE("landmark covers of RE-free graphs are exactly vertex covers") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 120; ++round) {
        const std::size_t n = 2 + round % 7;
        auto g = refree_reduce(dt::random_connected(n, rng() % (2 * n), 1 + rng() % 8, rng));
        auto d = dt::floyd_warshall(g);
        for (std::uint32_t m = 0; m < (1u << n); ++m) {
            auto s = subset(m, n);
            REQUIRE(is_landmark_cover(d, s) == is_vertex_cover(g, s));
        }
    }
}

TEST_CASE("vertex-cover landmarks stay within twice the minimum") {
    std::mt19937_64 rng(37);
    for (int round = 0; round < 150; ++round) {
        const std::size_t n = 2 + round % 7;
        auto g = dt::random_connected(n, rng() % (2 * n), 1 + rng() % 8, rng);
        auto c = vc_landmark_cover(g);
        auto r = refree_reduce(g);
        auto d = dt::floyd_warshall(g);
        CHECK(is_vertex_cover(r, c.landmarks));
        CHECK(is_landmark_cover(d, c.landmarks));
        const std::size_t mvc = min_vertex_cover(r);
        CHECK(c.landmarks.size() >= mvc);
        CHECK(c.landmarks.size() <= 2 * mvc);
        for (std::size_t i = 0; i < c.landmarks.size(); ++i)
            for (auto [y, dist] : c.dist_vectors[i]) CHECK(dist == d[c.landmarks[i]][y]);
    }
}

TEST_CASE("greedy set-cover landmarks") {
    auto p = dt::path_graph({1, 1});
    std::vector<NodePair> one{{0, 2}};
    CHECK(greedy_setcover_landmarks(p, one).landmarks == std::vector<NodeId>{0});
    CHECK(greedy_setcover_landmarks(p, {}).landmarks.empty());

    std::vector<Edge> star;
    for (NodeId l = 1; l <= 6; ++l) star.push_back({0, l, l});
    auto s = make(7, star);
    std::vector<NodePair> leaf_pairs;
    for (NodeId a = 1; a <= 6; ++a)
        for (NodeId b = a + 1; b <= 6; ++b) leaf_pairs.push_back({a, b});
    CHECK(greedy_setcover_landmarks(s, leaf_pairs).landmarks == std::vector<NodeId>{0});

    std::vector<NodePair> cut{{0, 1}, {0, 2}};
    auto split = make(3, {{0, 1, 1}});
    CHECK_THROWS_AS(greedy_setcover_landmarks(split, cut), ValidationError);

    std::mt19937_64 rng(43);
    for (int round = 0; round < 20; ++round) {
        auto g = dt::random_connected(25, 30, 9, rng);
        auto d = dt::floyd_warshall(g);
        std::vector<NodePair> pairs;
        for (int k = 0; k < 40; ++k) pairs.push_back({NodeId(rng() % 25), NodeId(rng() % 25)});
        auto c = greedy_setcover_landmarks(g, pairs);
        for (auto [u, v] : pairs) {
            bool ok = u == v;
            for (NodeId x : c.landmarks) ok = ok || d[u][x] + d[x][v] == d[u][v];
            CHECK(ok);
        }
    }
}

TEST_CASE("hybrid cover cost model") {
    std::vector<Edge> star;
    for (NodeId l = 1; l <= 6; ++l) star.push_back({0, l, 2});
    auto s = make(7, star);

    // three vertex-disjoint pairs through the centre: 3 direct edges beat 6 landmark entries
    std::vector<NodePair> three{{1, 2}, {3, 4}, {5, 6}};
    auto h3 = hybrid_cover(s, three);
    CHECK(h3.landmarks.empty());
    CHECK(h3.direct_edges.size() == 3);
    CHECK(h3.enforced_edge_count() == 3);
    check_hybrid(s, three, h3, true);

    std::vector<NodePair> leaf_pairs;
    for (NodeId a = 1; a <= 6; ++a)
        for (NodeId b = a + 1; b <= 6; ++b) leaf_pairs.push_back({a, b});
    auto h15 = hybrid_cover(s, leaf_pairs);
    REQUIRE(h15.landmarks.size() == 1);
    CHECK(h15.landmarks[0].node == 0);
    CHECK(h15.landmarks[0].covered.size() == 6);
    CHECK(h15.landmarks[0].pairs.size() == 15);
    CHECK(h15.direct_edges.empty());
    check_hybrid(s, leaf_pairs, h15, true);

    auto plain = hybrid_cover(s, three, nullptr, HybridOptions{false});
    CHECK(plain.enforced_edge_count() == 6);
}

TEST_CASE("hybrid covers answer every pair and never cost more than plain greedy") {
    std::mt19937_64 rng(53);
    for (int round = 0; round < 40; ++round) {
        auto g = round % 2 ? dt::road_like(40, rng) : dt::random_connected(30, 25, 9, rng);
        const std::size_t n = g.node_count();
        std::vector<NodePair> pairs;
        if (round % 4 == 0) {
            pairs = all_pairs(n);
        } else {
            for (int k = 0; k < 60; ++k) pairs.push_back({NodeId(rng() % n), NodeId(rng() % n)});
        }
        NodeOrder order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::shuffle(order.begin(), order.end(), rng);

        auto with = hybrid_cover(g, pairs);
        auto without = hybrid_cover(g, pairs, nullptr, HybridOptions{false});
        auto ordered = hybrid_cover(g, pairs, &order);
        check_hybrid(g, pairs, with, true);
        check_hybrid(g, pairs, without, false);
        check_hybrid(g, pairs, ordered, true);
        CHECK(without.direct_edges.empty());
        CHECK(with.enforced_edge_count() <= without.enforced_edge_count());
        CHECK(with.enforced_edges().size() == with.enforced_edge_count());
    }
}
