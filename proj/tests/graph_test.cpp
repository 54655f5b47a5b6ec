#include "doctest.h"

#include <random>
#include <set>
#include <string>

#include "dagmm/graph.hpp"

using namespace dagmm;

namespace {

std::string big_nodes_csv(int rows) {
  std::string s = "id,label,year,month\n";
  for (int i = 0; i < rows; ++i) s += "n" + std::to_string(i) + ",Article " + std::to_string(i) + "," + std::to_string(1950 + i % 60) + ",\n";
  return s;
}

CitationGraph graph_of(const std::vector<std::pair<std::string, std::string>>& pairs,
                       std::vector<NodeMeta> nodes = {}) {
  EdgeList edges;
  for (const auto& [a, b] : pairs) edges.push_back({a, b});
  if (nodes.empty()) return CitationGraph::from_edges(edges);
  return CitationGraph(std::move(nodes), edges);
}

// Random DAG on n nodes: edges only from lower to higher index of a hidden shuffle.
CitationGraph random_dag(std::mt19937& gen, int n, double p) {
  std::vector<int> hidden(n);
  std::iota(hidden.begin(), hidden.end(), 0);
  std::shuffle(hidden.begin(), hidden.end(), gen);
  std::bernoulli_distribution coin(p);
  std::vector<NodeMeta> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({"x" + std::to_string(i), "", std::nullopt, std::nullopt});
  EdgeList edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(gen)) edges.push_back({nodes[hidden[a]].id, nodes[hidden[b]].id});
  return CitationGraph(nodes, edges);
}

}  // namespace

TEST_SUITE("parse") {
  TEST_CASE("single node maps fields directly") {
    const auto nodes = parse_nodes("id,label,year,month\nabfx08,Airoldi et al.,2008,\n");
    REQUIRE(nodes.size() == 1);
    CHECK(nodes[0].id == "abfx08");
    CHECK(nodes[0].label == "Airoldi et al.");
    CHECK(nodes[0].year == 2008);
    CHECK_FALSE(nodes[0].month.has_value());
  }

  TEST_CASE("duplicate ids are rejected") {
    CHECK_THROWS_AS(parse_nodes("id,label,year,month\nx,,,\nx,,,"), DuplicateNode);
  }

  TEST_CASE("malformed year reports its row") {
    try {
      parse_nodes("id,label,year,month\na,,2001,\nb,,20x1,\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 2);
    }
    CHECK_THROWS_AS(parse_nodes("id,label,year,month\na,,1700,\n"), ParseError);
    CHECK_THROWS_AS(parse_nodes("id,label,year,month\na,,,5\n"), ParseError);
    CHECK_THROWS_AS(parse_nodes("id,label,year,month\na,,2000,13\n"), ParseError);
    CHECK_THROWS_AS(parse_nodes("id,name\na,b\n"), ParseError);
  }

  TEST_CASE("135 rows give 135 nodes") { CHECK(parse_nodes(big_nodes_csv(135)).size() == 135); }

  TEST_CASE("edges are deduplicated and self-loops rejected") {
    const auto edges = parse_edges("from,to\na,b\na,b\n");
    REQUIRE(edges.size() == 1);
    CHECK(edges[0] == Edge{"a", "b"});
    CHECK_THROWS_AS(parse_edges("from,to\na,a\n"), SelfLoopError);
    CHECK_THROWS_AS(parse_edges("source,target\na,b\n"), ParseError);
  }

  TEST_CASE("7010 rows over 4026 ids stay within 7010 edges") {
    std::mt19937 gen(7);
    std::uniform_int_distribution<int> pick(0, 4025);
    std::string csv = "from,to\n";
    for (int i = 0; i < 7010; ++i) {
      int a = pick(gen), b = pick(gen);
      if (a == b) b = (b + 1) % 4026;
      csv += "id" + std::to_string(a) + ",id" + std::to_string(b) + "\n";
    }
    const auto edges = parse_edges(csv);
    CHECK(edges.size() <= 7010);
    CHECK(edges.size() > 7000);
  }

  TEST_CASE("canonical CSV round-trips byte for byte") {
    std::mt19937 gen(11);
    const std::vector<std::string> labels = {"plain", "with, comma", "quote \"q\"", "", "multi\nline"};
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<NodeMeta> nodes;
      for (int i = 0; i < 8; ++i) {
        NodeMeta m{"id" + std::to_string(trial) + "_" + std::to_string(i), labels[gen() % labels.size()],
                   std::nullopt, std::nullopt};
        if (gen() % 2) {
          m.year = 1990 + static_cast<int>(gen() % 30);
          if (gen() % 2) m.month = 1 + static_cast<int>(gen() % 12);
        }
        nodes.push_back(m);
      }
      const auto text = write_nodes_csv(nodes);
      CHECK(parse_nodes(text) == nodes);
      CHECK(write_nodes_csv(parse_nodes(text)) == text);
    }
    const std::string edges = "from,to\na,b\nb,\"c,d\"\n";
    CHECK(write_edges_csv(parse_edges(edges)) == edges);
  }
}

TEST_SUITE("clean") {
  TEST_CASE("the earlier article's edge to the later one is removed") {
    const auto g = graph_of({{"er59", "er60"}, {"er60", "er59"}},
                            {{"er59", "", 1959, std::nullopt}, {"er60", "", 1960, std::nullopt}});
    const auto [clean, report] = remove_mutual_edges(g, 3);
    REQUIRE(report.removed.size() == 1);
    CHECK(report.removed[0] == RemovedEdge{"er59", "er60", RemovalReason::kYearOrder});
    CHECK(clean.edge_count() == 1);
    CHECK(clean.edges()[0] == Edge{"er60", "er59"});
  }

  TEST_CASE("month breaks a year tie, missing month is a tie") {
    const auto with_month = graph_of({{"a", "b"}, {"b", "a"}},
                                     {{"a", "", 2001, 3}, {"b", "", 2001, 7}});
    const auto r1 = remove_mutual_edges(with_month, 1).report;
    REQUIRE(r1.removed.size() == 1);
    CHECK(r1.removed[0] == RemovedEdge{"a", "b", RemovalReason::kYearOrder});

    const auto no_month = graph_of({{"a", "b"}, {"b", "a"}},
                                   {{"a", "", 2001, 3}, {"b", "", 2001, std::nullopt}});
    CHECK(remove_mutual_edges(no_month, 1).report.removed[0].reason == RemovalReason::kTieRandom);
    const auto no_year = graph_of({{"a", "b"}, {"b", "a"}});
    CHECK(remove_mutual_edges(no_year, 1).report.removed[0].reason == RemovalReason::kTieRandom);
  }

  TEST_CASE("acyclic input is untouched") {
    const auto g = graph_of({{"a", "b"}, {"b", "c"}});
    const auto [clean, report] = remove_mutual_edges(g, 5);
    CHECK(report.removed.empty());
    CHECK(clean.edges() == g.edges());
    CHECK(report.seed == 5);
  }

  TEST_CASE("ties replay identically under the same seed") {
    EdgeList edges;
    for (int i = 0; i < 40; ++i) {
      const auto a = "a" + std::to_string(i), b = "b" + std::to_string(i);
      edges.push_back({a, b});
      edges.push_back({b, a});
    }
    const auto g = CitationGraph::from_edges(edges);
    for (std::uint64_t seed : {1u, 2u, 99u}) {
      const auto first = remove_mutual_edges(g, seed).report.removed;
      const auto second = remove_mutual_edges(g, seed).report.removed;
      CHECK(first == second);
    }
    // both directions occur across 40 fair coins
    const auto removed = remove_mutual_edges(g, 1).report.removed;
    const auto forward = std::count_if(removed.begin(), removed.end(),
                                       [](const auto& r) { return r.from[0] == 'a'; });
    CHECK(forward > 0);
    CHECK(forward < 40);
  }

  TEST_CASE("no 2-cycles remain and the result is a DAG") {
    std::mt19937 gen(21);
    for (int trial = 0; trial < 30; ++trial) {
      auto base = random_dag(gen, 12, 0.3);
      EdgeList edges = base.edges();
      const auto original = edges;
      for (const auto& e : original)
        if (gen() % 3 == 0) edges.push_back({e.to, e.from});
      std::vector<NodeMeta> nodes = base.nodes();
      for (auto& node : nodes)
        if (gen() % 2) node.year = 2000 + static_cast<int>(gen() % 5);
      const CitationGraph g(nodes, edges);
      const auto [clean, report] = remove_mutual_edges(g, trial);
      const auto& y = clean.adjacency();
      for (Eigen::Index r = 0; r < y.rows(); ++r)
        for (Eigen::Index s = 0; s < y.cols(); ++s) CHECK(y(r, s) * y(s, r) == 0);
      CHECK(clean.edge_count() + report.removed.size() == g.edge_count());
      for (const auto& removed : report.removed) {
        const auto from = g.index_of(removed.from), to = g.index_of(removed.to);
        CHECK(g.adjacency()(*from, *to) == 1);
      }
    }
  }
}

TEST_SUITE("dag") {
  TEST_CASE("chains are acyclic, triangles are not") {
    CHECK_NOTHROW(assert_dag(graph_of({{"a", "b"}, {"b", "c"}})));
    try {
      assert_dag(graph_of({{"a", "b"}, {"b", "c"}, {"c", "a"}}));
      FAIL("expected CycleFound");
    } catch (const CycleFound& e) {
      CHECK(e.witness() == std::vector<std::string>{"a", "b", "c", "a"});
    }
  }

  TEST_CASE("cleaning seeded 2-cycles on a synthetic DAG leaves a DAG") {
    std::mt19937 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
      const auto base = random_dag(gen, 15, 0.25);
      // years consistent with a topological order: earlier position, later year
      const auto order = topological_order(base);
      std::vector<NodeMeta> nodes = base.nodes();
      for (std::size_t p = 0; p < order.size(); ++p) nodes[order.node_at(p)].year = 2020 - static_cast<int>(p);
      EdgeList edges = base.edges();
      for (const auto& e : base.edges())
        if (gen() % 4 == 0) edges.push_back({e.to, e.from});
      const CitationGraph g(nodes, edges);
      CHECK_NOTHROW(assert_dag(remove_mutual_edges(g, trial).graph));
    }
  }

  TEST_CASE("a single edge orders its endpoints") {
    const auto g = graph_of({{"a", "b"}});
    const auto o = topological_order(g);
    CHECK(o.position_of(*g.index_of("a")) < o.position_of(*g.index_of("b")));
  }

  TEST_CASE("ties go to the latest year, then the smallest id") {
    const CitationGraph g({{"old", "", 1999, std::nullopt}, {"new", "", 2008, std::nullopt}}, {});
    CHECK(g.node(topological_order(g).node_at(0)).id == "new");
    const CitationGraph h({{"b", "", std::nullopt, std::nullopt},
                           {"c", "", 2000, std::nullopt},
                           {"a", "", std::nullopt, std::nullopt}},
                          {});
    const auto o = topological_order(h);
    CHECK(h.node(o.node_at(0)).id == "c");
    CHECK(h.node(o.node_at(1)).id == "a");
    CHECK(h.node(o.node_at(2)).id == "b");
  }

  TEST_CASE("random small DAGs sort to an upper-triangular adjacency") {
    std::mt19937 gen(3);
    for (int n = 1; n <= 7; ++n)
      for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_dag(gen, n, 0.4);
        CHECK(is_upper_triangular(reorder(g.adjacency(), topological_order(g))));
        CHECK(is_upper_triangular(reorder(g.adjacency(), topological_order(g.adjacency()))));
      }
    CHECK_THROWS_AS(topological_order(graph_of({{"a", "b"}, {"b", "a"}})), CycleFound);
  }
}

TEST_SUITE("matrix") {
  TEST_CASE("identity leaves the matrix alone; a swap transposes the 2x2") {
    Adjacency m(2, 2);
    m << 0, 1, 0, 0;
    CHECK(reorder(m, Ordering::identity(2)) == m);
    Adjacency expected(2, 2);
    expected << 0, 0, 1, 0;
    CHECK(reorder(m, Ordering({1, 0})) == expected);
    CHECK_THROWS_AS(reorder(m, Ordering::identity(3)), DimensionMismatch);
  }

  TEST_CASE("reordering by o then by its inverse restores the matrix") {
    std::mt19937 gen(17);
    for (int trial = 0; trial < 50; ++trial) {
      RealMatrix m = RealMatrix::Random(5, 5);
      std::vector<int> perm(5);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), gen);
      const Ordering o(perm);
      CHECK(reorder(reorder(m, o), o.inverse()) == m);
    }
    CHECK_THROWS_AS(Ordering({0, 0, 1}), ConfigError);
  }
}

TEST_SUITE("stats") {
  TEST_CASE("density identities") {
    CHECK(std::abs(density(135, 1118, DensityMode::kDagHalved) - 0.1236) < 1e-4);
    CHECK(std::abs(density(4026, 6995, DensityMode::kDagHalved) - 0.00086) < 1e-5);
    CHECK(density(3, 0, DensityMode::kDagHalved) == 0.0);
    CHECK(density(4, 6, DensityMode::kDirectedFull) == doctest::Approx(0.5));
    CHECK_THROWS_AS(density(1, 0, DensityMode::kDagHalved), TooFewNodes);
  }

  TEST_CASE("the complete DAG has density one") {
    for (int n = 2; n <= 9; ++n) {
      std::vector<std::pair<std::string, std::string>> pairs;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.emplace_back(std::to_string(a), std::to_string(b));
      CHECK(density(graph_of(pairs), DensityMode::kDagHalved) == 1.0);
    }
  }

  TEST_CASE("induced subgraphs") {
    const auto g = graph_of({{"a", "b"}, {"b", "c"}});
    std::set<std::string> all{"a", "b", "c"};
    CHECK(induced_subgraph(g, all).edges() == g.edges());
    const auto one = induced_subgraph(graph_of({{"a", "b"}}), {"a"});
    CHECK(one.size() == 1);
    CHECK(one.edge_count() == 0);
    CHECK_THROWS_AS(induced_subgraph(g, {"zz"}), UnknownNode);

    std::mt19937 gen(9);
    for (int trial = 0; trial < 30; ++trial) {
      const auto r = random_dag(gen, 20, 0.2);
      std::set<std::string> keep;
      for (const auto& node : r.nodes())
        if (gen() % 2) keep.insert(node.id);
      std::size_t expected = 0;
      for (const auto& e : r.edges()) expected += keep.count(e.from) && keep.count(e.to);
      const auto sub = induced_subgraph(r, keep);
      CHECK(sub.edge_count() == expected);
      CHECK(sub.size() == keep.size());
      CHECK(static_cast<std::size_t>(sub.adjacency().cast<int>().sum()) == expected);
    }
  }
}
