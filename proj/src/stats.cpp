#include "disland/bench.hpp"

#include <sstream>

namespace disland {

namespace {

double pct(double a, double b) { return b > 0 ? 100.0 * a / b : 0.0; }

}  // namespace

std::vector<CsvTable> stats_tables(const WeightedGraph& g, const PreprocessedIndex& idx) {
    idx.check_graph(g);
    const double n = static_cast<double>(g.node_count());
    const double m = static_cast<double>(g.edge_count());
    std::vector<CsvTable> out;

    {
        std::ostringstream s;
        const double agents = static_cast<double>(idx.dra.dras.size());
        const double covered = static_cast<double>(idx.dra.represented_count());
        s << "nodes,threshold,agents,agents_pct,dra_nodes,dra_nodes_pct,shrink_nodes,shrink_edges\n";
        s << g.node_count() << "," << idx.dra.threshold << "," << idx.dra.dras.size() << "," << pct(agents, n) << ","
          << idx.dra.represented_count() << "," << pct(covered, n) << "," << idx.shrink.graph.node_count() << ","
          << idx.shrink.graph.edge_count() << "\n";
        out.push_back({"agents", s.str()});
    }
    {
        const Partition& p = idx.partition;
        double frac_sum = 0, count_sum = 0;
        for (std::uint32_t i = 0; i < p.k; ++i) {
            count_sum += static_cast<double>(p.boundary[i].size());
            frac_sum += pct(static_cast<double>(p.boundary[i].size()), static_cast<double>(p.members[i].size()));
        }
        const double k = p.k ? p.k : 1;
        std::ostringstream s;
        s << "fragments,gamma,max_fragment,boundary_nodes,boundary_pct,avg_boundary_per_fragment,"
             "avg_boundary_pct_per_fragment,cross_edges\n";
        s << p.k << "," << p.gamma << "," << p.max_fragment_size() << "," << p.boundary_count() << ","
          << pct(static_cast<double>(p.boundary_count()), static_cast<double>(idx.shrink.graph.node_count())) << ","
          << count_sum / k << "," << frac_sum / k << "," << p.cross_edges.size() << "\n";
        out.push_back({"partition", s.str()});
    }
    {
        std::ostringstream s;
        s << "fragment,nodes,boundary,pairs,landmarks,enforced_edges,direct_edges\n";
        for (std::uint32_t i = 0; i < idx.partition.k; ++i) {
            const auto& c = idx.super.covers[i];
            s << i << "," << idx.partition.members[i].size() << "," << idx.partition.boundary[i].size() << ","
              << c.pairs << "," << c.landmarks << "," << c.enforced << "," << c.direct << "\n";
        }
        out.push_back({"covers", s.str()});
    }
    {
        std::ostringstream s;
        const double sn = static_cast<double>(idx.super.nodes.size());
        const double se = static_cast<double>(idx.super.edges.size());
        s << "super_nodes,node_pct,super_edges,edge_pct,cross_edges,enforced_edges,node_pct_of_shrink,"
             "edge_pct_of_shrink\n";
        s << idx.super.nodes.size() << "," << pct(sn, n) << "," << idx.super.edges.size() << "," << pct(se, m) << ","
          << idx.super.cross_edge_count() << "," << idx.super.enforced_edge_count() << ","
          << pct(sn, static_cast<double>(idx.shrink.graph.node_count())) << ","
          << pct(se, static_cast<double>(idx.shrink.graph.edge_count())) << "\n";
        out.push_back({"supergraph", s.str()});
    }
    {
        const auto r = extra_space(idx);
        std::ostringstream s;
        s << "dra_edges,supergraph_enforced,ch_shortcuts,super_ch_shortcuts,arcflag_bits,graph_bytes,extra_bytes,"
             "ratio\n";
        s << r.dra_edges << "," << r.supergraph_enforced << "," << r.ch_shortcuts << "," << r.super_ch_shortcuts << ","
          << r.arcflag_bits << "," << r.graph_bytes << "," << r.extra_bytes << "," << r.ratio << "\n";
        out.push_back({"space", s.str()});
    }
    return out;
}

}  // namespace disland
