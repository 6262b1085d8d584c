#include "disland/disland.hpp"
#include "support.hpp"

#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace disland;
using namespace disland::testing;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

Result cli(const std::string& args) {
    static int counter = 0;
    const auto out = fs::temp_directory_path() / ("disland_cli_out_" + std::to_string(++counter));
    const std::string cmd = std::string(DISLAND_CLI) + " " + args + " > " + out.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    fs::remove(out);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

struct Fixture {
    fs::path dir = fs::temp_directory_path() / "disland_cli_test";
    std::string gr, co, index, workload;
    WeightedGraph g;

    Fixture() {
        fs::create_directories(dir);
        gr = (dir / "g.gr").string();
        co = (dir / "g.co").string();
        index = (dir / "g.idx").string();
        workload = (dir / "g.wl").string();
        std::mt19937_64 rng(12);
        g = road_like(800, rng);
        std::ofstream fg(gr), fc(co);
        write_dimacs(g, fg, &fc);
    }
    ~Fixture() { fs::remove_all(dir); }
};

}  // namespace

TEST_CASE("command line round trip") {
    Fixture f;
    auto r = cli("preprocess " + f.gr + " " + f.co + " -o " + f.index + " --regions 4");
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(r.out.find("wrote") != std::string::npos);

    SUBCASE("preprocess is byte-identical across runs") {
        const auto second = (f.dir / "again.idx").string();
        REQUIRE(cli("preprocess " + f.gr + " -o " + second + " --regions 4").code == 0);
        std::ifstream a(f.index, std::ios::binary), b(second, std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        CHECK(sa.str() == sb.str());
    }
    SUBCASE("queries match dijkstra") {
        const auto want = dijkstra(f.g, 4)[700];
        for (const char* algo : {"dijkstra", "bidi", "ch", "arcflag", "disland", "disland-ch", "disland-both"}) {
            const auto q = cli("query " + f.index + " " + f.gr + " 5 701 --algo " + algo);
            CHECK_MESSAGE(q.code == 0, q.out);
            CHECK_MESSAGE(q.out.rfind(std::to_string(want) + "\n", 0) == 0, algo << ": " << q.out);
        }
        CHECK(cli("query " + f.index + " " + f.gr + " 0 5").code == 2);
        CHECK(cli("query " + f.index + " " + f.gr + " 1 801").code == 2);
        CHECK(cli("query " + f.index + " " + f.gr + " 1 2 --algo astar").code == 1);
    }
    SUBCASE("workload, bench and stats") {
        r = cli("gen-queries " + f.gr + " " + f.co + " -o " + f.workload + " --per-set 20 --seed 7");
        REQUIRE_MESSAGE(r.code == 0, r.out);
        const auto csv = (f.dir / "bench.csv").string();
        r = cli("bench " + f.gr + " " + f.index + " " + f.workload + " --csv " + csv +
                " --algos dijkstra,bidi,agents-ch,disland,disland-ch,disland-arcflag");
        CHECK_MESSAGE(r.code == 0, r.out);
        CHECK(r.out.find("all algorithms agree") != std::string::npos);
        std::ifstream in(csv);
        std::string header;
        std::getline(in, header);
        CHECK(header.rfind("algorithm,set", 0) == 0);

        r = cli("bench " + f.gr + " " + f.workload + " --algos dijkstra,bidi");
        CHECK_MESSAGE(r.code == 0, r.out);
        CHECK(cli("bench " + f.gr + " " + f.workload + " --algos disland").code == 2);

        const auto out_dir = (f.dir / "stats").string();
        r = cli("stats " + f.gr + " " + f.index + " --out-dir " + out_dir);
        CHECK_MESSAGE(r.code == 0, r.out);
        for (const char* t : {"agents", "partition", "covers", "supergraph", "space"})
            CHECK(fs::exists(fs::path(out_dir) / (std::string(t) + ".csv")));
    }
    SUBCASE("bench rejects an index built for another graph") {
        std::vector<Edge> edges = f.g.edges();
        for (auto& e : edges) e.w += 1;
        const auto other = WeightedGraph::from_edges(f.g.node_count(), edges);
        const auto other_gr = (f.dir / "other.gr").string();
        std::ofstream og(other_gr);
        write_dimacs(other, og);
        og.close();
        REQUIRE(cli("gen-queries " + f.gr + " " + f.co + " -o " + f.workload + " --per-set 5").code == 0);
        CHECK(cli("bench " + other_gr + " " + f.index + " " + f.workload + " --algos dijkstra,disland").code == 2);
    }
}

TEST_CASE("command line errors") {
    Fixture f;
    CHECK(cli("").code == 1);
    CHECK(cli("frobnicate").code == 1);
    CHECK(cli("preprocess " + f.gr).code == 1);
    CHECK(cli("--help").code == 0);
    CHECK(cli("preprocess " + (f.dir / "missing.gr").string() + " -o " + f.index).code == 2);
    {
        std::ofstream bad(f.dir / "bad.gr");
        bad << "p sp 2 1\na 1 3 5\n";
    }
    const auto r = cli("preprocess " + (f.dir / "bad.gr").string() + " -o " + f.index);
    CHECK(r.code == 2);
    CHECK(r.out.find("line 2") != std::string::npos);
    CHECK(cli("gen-queries " + f.gr + " " + (f.dir / "missing.co").string() + " -o " + f.workload).code == 2);
    {
        std::ofstream junk(f.dir / "junk.idx", std::ios::binary);
        junk << "DLNDxx";
    }
    CHECK(cli("query " + (f.dir / "junk.idx").string() + " " + f.gr + " 1 2").code == 2);
}
