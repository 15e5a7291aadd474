#include <doctest.h>
#include <zlib.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

#include "noderank/graph.hpp"
#include "noderank/io.hpp"
#include "oracles.hpp"

using namespace noderank;

namespace {

TemporalEdge edge(NodeId from, NodeId to, Timestamp t, ActionKind k = ActionKind::Retweet) {
    return {from, to, t, k};
}

std::vector<TemporalEdge> random_edges(std::mt19937_64& gen, int nodes, int count, int max_t = 20) {
    std::uniform_int_distribution<int> node(0, nodes - 1);
    std::uniform_int_distribution<int> when(0, max_t);
    std::uniform_int_distribution<int> kind(0, 3);
    std::vector<TemporalEdge> edges;
    while (static_cast<int>(edges.size()) < count) {
        const int a = node(gen);
        const int b = node(gen);
        if (a == b) continue;
        edges.push_back(edge(a, b, when(gen), static_cast<ActionKind>(kind(gen))));
    }
    return edges;
}

/// Transitive closure by repeated relaxation; SCC = mutual reachability.
std::vector<std::vector<NodeId>> brute_force_sccs(const DisseminationGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = 1;
    for (const auto& e : g.edges()) reach[*g.index_of(e.informer)][*g.index_of(e.receiver)] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = 1;
    std::vector<char> done(n, 0);
    std::vector<std::vector<NodeId>> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        std::vector<NodeId> comp;
        for (std::size_t j = 0; j < n; ++j) {
            if (reach[i][j] && reach[j][i]) {
                comp.push_back(g.node(j));
                done[j] = 1;
            }
        }
        out.push_back(comp);
    }
    return out;
}

}  // namespace

TEST_CASE("parse_activity reads the receiver-acts-on-informer convention") {
    const auto parsed = parse_activity(std::string_view("7 4 1341100972 RT"));
    REQUIRE(parsed.edges.size() == 1);
    CHECK(parsed.edges[0] == edge(4, 7, 1341100972, ActionKind::Retweet));
    CHECK(parsed.diagnostics.empty());
}

TEST_CASE("parse_activity drops self-loops and counts them") {
    const auto parsed = parse_activity(std::string_view("1 1 100 MT\n2 3 5 RE\n"));
    CHECK(parsed.self_loops == 1);
    REQUIRE(parsed.edges.size() == 1);
    CHECK(parsed.edges[0] == edge(3, 2, 5, ActionKind::Reply));
}

TEST_CASE("parse_activity on empty input warns and returns nothing") {
    const auto parsed = parse_activity(std::string_view(""));
    CHECK(parsed.edges.empty());
    REQUIRE(parsed.diagnostics.size() == 1);
    CHECK(parsed.diagnostics[0].line == 0);
}

TEST_CASE("parse_activity collects malformed lines without failing") {
    const auto parsed = parse_activity(std::string_view("1 2 abc RT\n1 2\n\n5 6 7 MT\n-1 2 3 RT\n1 2 -5 RT\n8 9 10 XX\n"));
    CHECK(parsed.malformed == 4);
    CHECK(parsed.unknown_actions == 1);
    REQUIRE(parsed.edges.size() == 2);
    CHECK(parsed.edges[0] == edge(6, 5, 7, ActionKind::Mention));
    CHECK(parsed.edges[1].action == ActionKind::Other);
    CHECK(parsed.diagnostics.front().line == 1);
    CHECK(parsed.diagnostics[1].line == 2);
}

TEST_CASE("action tokens") {
    CHECK(parse_action_token("RT") == ActionKind::Retweet);
    CHECK(parse_action_token("RE") == ActionKind::Reply);
    CHECK(parse_action_token("MT") == ActionKind::Mention);
    CHECK(parse_action_token("rt") == ActionKind::Other);
    CHECK(parse_action_token("") == ActionKind::Other);
    for (auto k : {ActionKind::Retweet, ActionKind::Reply, ActionKind::Mention, ActionKind::Other}) {
        CHECK(parse_action_token(action_token(k)) == k);
    }
}

TEST_CASE("parse_social") {
    SUBCASE("mutual follow") {
        const auto s = parse_social(std::string_view("1 2\n2 1"));
        CHECK(s.graph.node_count() == 2);
        CHECK(s.graph.edge_count() == 2);
    }
    SUBCASE("duplicates collapse") {
        const auto s = parse_social(std::string_view("1 2\n1 2"));
        CHECK(s.graph.node_count() == 2);
        CHECK(s.graph.edge_count() == 1);
    }
    SUBCASE("adjacency") {
        const auto s = parse_social(std::string_view("1 2\n2 3"));
        const auto f1 = s.graph.followees(1);
        const auto f2 = s.graph.followees(2);
        CHECK(std::vector<NodeId>(f1.begin(), f1.end()) == std::vector<NodeId>{2});
        CHECK(std::vector<NodeId>(f2.begin(), f2.end()) == std::vector<NodeId>{3});
        CHECK(s.graph.followees(3).empty());
        CHECK(s.graph.node_count() == 3);
    }
    SUBCASE("malformed line") {
        const auto s = parse_social(std::string_view("1 2\nx y\n3"));
        CHECK(s.malformed == 2);
        CHECK(s.graph.edge_count() == 1);
    }
}

TEST_CASE("dedup_earliest keeps the minimum timestamp") {
    const std::vector<TemporalEdge> in{edge(1, 2, 5, ActionKind::Retweet), edge(1, 2, 3, ActionKind::Reply)};
    const auto out = dedup_earliest(in);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == edge(1, 2, 3, ActionKind::Reply));
    CHECK(dedup_earliest({}).empty());
}

TEST_CASE("dedup_earliest equal timestamps prefer the stronger action") {
    const std::vector<TemporalEdge> in{edge(1, 2, 3, ActionKind::Mention), edge(1, 2, 3, ActionKind::Retweet)};
    const auto out = dedup_earliest(in);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == edge(1, 2, 3, ActionKind::Retweet));
}

TEST_CASE("dedup_earliest matches an exhaustive small-case oracle") {
    // every sequence of up to 3 edges on one pair over t in {3, 5} and all actions
    std::vector<TemporalEdge> alphabet;
    for (Timestamp t : {3, 5})
        for (int k = 0; k < 4; ++k) alphabet.push_back(edge(1, 2, t, static_cast<ActionKind>(k)));
    const int a = static_cast<int>(alphabet.size());
    std::size_t cases = 0;
    for (int len = 1; len <= 3; ++len) {
        int total = 1;
        for (int i = 0; i < len; ++i) total *= a;
        for (int code = 0; code < total; ++code) {
            std::vector<TemporalEdge> seq;
            int c = code;
            for (int i = 0; i < len; ++i) {
                seq.push_back(alphabet[c % a]);
                c /= a;
            }
            // oracle: linear scan for the lexicographic minimum of (t, priority)
            TemporalEdge best = seq[0];
            for (const auto& e : seq) {
                if (e.timestamp < best.timestamp ||
                    (e.timestamp == best.timestamp && action_priority(e.action) < action_priority(best.action))) {
                    best = e;
                }
            }
            const auto out = dedup_earliest(seq);
            REQUIRE(out.size() == 1);
            CHECK(out[0] == best);
            ++cases;
        }
    }
    CHECK(cases == 8 + 64 + 512);
}

TEST_CASE("dedup_earliest is idempotent") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto edges = random_edges(gen, 6, 40, 5);
        const auto once = dedup_earliest(edges);
        CHECK(dedup_earliest(once) == once);
        CHECK(std::is_sorted(once.begin(), once.end(), canonical_less));
    }
}

TEST_CASE("largest_scc on small shapes") {
    SUBCASE("3-cycle is kept whole") {
        const DisseminationGraph g({edge(1, 2, 0), edge(2, 3, 1), edge(3, 1, 2)}, View::Retweet);
        const auto scc = largest_scc(g);
        CHECK(scc.node_count() == 3);
        CHECK(scc.edge_count() == 3);
    }
    SUBCASE("chain gives the smallest-id singleton") {
        const DisseminationGraph g({edge(10, 20, 0), edge(20, 30, 1)}, View::Retweet);
        const auto scc = largest_scc(g);
        REQUIRE(scc.node_count() == 1);
        CHECK(scc.node(0) == 10);
        CHECK(scc.edge_count() == 0);
    }
    SUBCASE("size ties go to the smaller minimum id") {
        const DisseminationGraph g({edge(5, 6, 0), edge(6, 5, 0), edge(1, 9, 0), edge(9, 1, 0), edge(6, 9, 3)},
                                   View::Retweet);
        const auto scc = largest_scc(g);
        REQUIRE(scc.node_count() == 2);
        CHECK(scc.node(0) == 1);
        CHECK(scc.node(1) == 9);
    }
    SUBCASE("empty graph is an error") {
        CHECK_THROWS_AS(largest_scc(DisseminationGraph{}), DataError);
    }
}

TEST_CASE("largest_scc agrees with brute-force mutual reachability") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int nodes = 2 + trial % 12;
        const auto g = build_view(random_edges(gen, nodes, nodes * 2), View::Mixed);
        const auto scc = largest_scc(g);
        CHECK(is_strongly_connected(scc));

        auto comps = brute_force_sccs(g);
        std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
            return a.size() != b.size() ? a.size() > b.size() : a.front() < b.front();
        });
        const std::vector<NodeId> got(scc.nodes().begin(), scc.nodes().end());
        CHECK(got == comps.front());
        for (const auto& e : scc.edges()) {
            CHECK(scc.contains(e.informer));
            CHECK(scc.contains(e.receiver));
        }
        // induced: every original edge between members survives
        std::size_t induced = 0;
        for (const auto& e : g.edges()) induced += scc.contains(e.informer) && scc.contains(e.receiver);
        CHECK(induced == scc.edge_count());
    }
}

TEST_CASE("SCC survives a very deep cycle") {
    std::vector<TemporalEdge> edges;
    const NodeId n = 200000;
    for (NodeId i = 0; i < n; ++i) edges.push_back(edge(i, (i + 1) % n, static_cast<Timestamp>(i)));
    const DisseminationGraph g(std::move(edges), View::Retweet);
    const auto scc = largest_scc(g);
    CHECK(scc.node_count() == n);
    CHECK(is_strongly_connected(scc));
}

TEST_CASE("build_view filters, dedups and sets t0") {
    const std::vector<TemporalEdge> edges{
        edge(1, 2, 50, ActionKind::Retweet), edge(1, 2, 40, ActionKind::Reply), edge(2, 1, 60, ActionKind::Mention),
        edge(3, 1, 70, ActionKind::Retweet), edge(1, 2, 45, ActionKind::Retweet)};
    SUBCASE("single action view dedups within the type") {
        const auto g = build_view(edges, View::Retweet);
        CHECK(g.edge_count() == 2);
        CHECK(g.t0() == 45);
        CHECK(g.edges()[0] == edge(1, 2, 45, ActionKind::Retweet));
    }
    SUBCASE("mixed view dedups across types") {
        const auto g = build_view(edges, View::Mixed);
        CHECK(g.edge_count() == 3);
        CHECK(g.t0() == 40);
        CHECK(g.edges()[0] == edge(1, 2, 40, ActionKind::Reply));
    }
    SUBCASE("empty view") {
        const std::vector<TemporalEdge> retweets{edge(1, 2, 50, ActionKind::Retweet)};
        CHECK_THROWS_AS(build_view(retweets, View::Reply), DataError);
    }
}

TEST_CASE("DisseminationGraph rejects duplicates and self-loops") {
    CHECK_THROWS_AS(DisseminationGraph({edge(1, 2, 0), edge(1, 2, 4)}, View::Mixed), std::invalid_argument);
    CHECK_THROWS_AS(DisseminationGraph({edge(1, 1, 0)}, View::Mixed), std::invalid_argument);
}

TEST_CASE("pipeline stage counts never increase") {
    const auto parsed = parse_activity(std::string_view(oracle::synthetic_activity(5)));
    for (View v : {View::Retweet, View::Reply, View::Mention, View::Mixed}) {
        std::vector<TemporalEdge> filtered;
        for (const auto& e : parsed.edges)
            if (view_accepts(v, e.action)) filtered.push_back(e);
        const auto g = build_view(parsed.edges, v);
        const auto scc = largest_scc(g);
        CHECK(g.edge_count() <= filtered.size());
        CHECK(scc.edge_count() <= g.edge_count());
        CHECK(scc.node_count() <= g.node_count());
        CHECK(is_strongly_connected(scc));
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            CHECK(g.in_edges(i).size() + g.out_edges(i).size() >= 1);
        }
    }
}

TEST_CASE("canonical edge file") {
    const std::vector<TemporalEdge> edges{edge(4, 7, 1341100972, ActionKind::Retweet),
                                          edge(2, 3, 100, ActionKind::Other), edge(1, 3, 100, ActionKind::Mention)};
    const std::string text = canonical_edges_text(edges);
    CHECK(text == "1,3,100,MT\n2,3,100,OT\n4,7,1341100972,RT\n");

    SUBCASE("round trip reproduces the graph") {
        std::mt19937_64 gen(3);
        const auto g = build_view(random_edges(gen, 30, 200, 10000), View::Mixed);
        std::istringstream in(canonical_edges_text(g.edges()));
        const DisseminationGraph again(read_canonical_edges(in), View::Mixed);
        CHECK(std::equal(g.edges().begin(), g.edges().end(), again.edges().begin(), again.edges().end()));
        CHECK(std::equal(g.nodes().begin(), g.nodes().end(), again.nodes().begin(), again.nodes().end()));
        CHECK(canonical_edges_text(again.edges()) == canonical_edges_text(g.edges()));
    }
    SUBCASE("malformed line names the line") {
        std::istringstream in("1,2,3,RT\n1,2,x,RT\n");
        CHECK_THROWS_WITH_AS(read_canonical_edges(in), "malformed canonical edge at line 2", DataError);
    }
    SUBCASE("view inference") {
        CHECK(infer_view(edges) == View::Mixed);
        const std::vector<TemporalEdge> rt{edge(1, 2, 0), edge(2, 1, 0)};
        CHECK(infer_view(rt) == View::Retweet);
    }
}

TEST_CASE("read_file inflates gzip transparently") {
    const auto dir = std::filesystem::temp_directory_path() / "noderank_test_graph";
    std::filesystem::create_directories(dir);
    const std::string content = "7 4 1341100972 RT\n1 2 5 RE\n";
    const auto plain = dir / "activity.txt";
    const auto gz = dir / "activity.txt.gz";
    io::write_file_atomic(plain, content);
    gzFile f = gzopen(gz.c_str(), "wb");
    REQUIRE(f != nullptr);
    gzwrite(f, content.data(), static_cast<unsigned>(content.size()));
    gzclose(f);
    CHECK(io::read_file(plain) == content);
    CHECK(io::read_file(gz) == content);
    CHECK_THROWS_AS(io::read_file(dir / "missing.txt"), DataError);
    std::filesystem::remove_all(dir);
}
