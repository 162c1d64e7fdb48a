#include "dynmatch/oracles.hpp"

#include <map>

#include "doctest.h"
#include "dynmatch/rng.hpp"

using namespace dynmatch;

namespace {

DynamicGraph path_graph(int n) {
  DynamicGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.insert_edge(Edge(i, i + 1));
  return g;
}

DynamicGraph cycle_graph(int n) {
  DynamicGraph g = path_graph(n);
  g.insert_edge(Edge(0, n - 1));
  return g;
}

DynamicGraph petersen_graph() {
  DynamicGraph g(10);
  for (int i = 0; i < 5; ++i) {
    g.insert_edge(Edge(i, (i + 1) % 5));          // outer cycle
    g.insert_edge(Edge(i + 5, (i + 2) % 5 + 5));  // inner pentagram
    g.insert_edge(Edge(i, i + 5));                // spokes
  }
  return g;
}

DynamicGraph random_graph(int n, int m_target, rng::Sequence& seq) {
  DynamicGraph g(n);
  int guard = 0;
  while (g.m() < m_target && ++guard < 1000) {
    int u = static_cast<int>(seq.below(n));
    int v = static_cast<int>(seq.below(n));
    if (u == v || g.has_edge(Edge(u, v))) continue;
    g.insert_edge(Edge(u, v));
  }
  return g;
}

}  // namespace

TEST_CASE("exhaustive matching on small named graphs") {
  CHECK(max_matching_exhaustive(cycle_graph(3)) == 1);
  CHECK(max_matching_exhaustive(cycle_graph(6)) == 3);
  CHECK(max_matching_exhaustive(petersen_graph()) == 5);
  CHECK(max_matching_exhaustive(DynamicGraph(4)) == 0);
}

TEST_CASE("exhaustive oracle refuses oversized graphs") {
  DynamicGraph g(12);
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      if (g.m() < 30) g.insert_edge(Edge(i, j));
  CHECK(g.m() == 30);
  CHECK_THROWS_AS(max_matching_exhaustive(g), TooLarge);
  OracleLimits wide;
  wide.max_edges_exhaustive = 30;
  CHECK(max_matching_exhaustive(g, wide) == 3);  // 3..11 touch only {0,1,2}
}

TEST_CASE("bipartiteness detection") {
  CHECK(is_bipartite(cycle_graph(6)));
  CHECK(!is_bipartite(cycle_graph(5)));
  CHECK(is_bipartite(DynamicGraph(3)));
  std::vector<int> color;
  DynamicGraph p = path_graph(4);
  CHECK(is_bipartite(p, &color));
  for (const Edge& e : p.edges()) CHECK(color[e.u] != color[e.v]);
}

TEST_CASE("bipartite solver matches the exhaustive one") {
  CHECK_THROWS_AS(max_matching_bipartite(cycle_graph(3)),
                  std::invalid_argument);
  rng::Sequence seq(17);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 4 + static_cast<int>(seq.below(6));
    DynamicGraph g(n);
    // bipartition: evens vs odds
    for (int tries = 0; tries < 3 * n; ++tries) {
      int u = 2 * static_cast<int>(seq.below((n + 1) / 2));
      int v = 2 * static_cast<int>(seq.below(n / 2)) + 1;
      if (u >= n || v >= n || g.has_edge(Edge(u, v))) continue;
      g.insert_edge(Edge(u, v));
    }
    CHECK(max_matching_bipartite(g) == max_matching_exhaustive(g));
    CHECK(exact_max_matching(g) == max_matching_exhaustive(g));
  }
}

TEST_CASE("max_matching_witness returns an actual maximum matching") {
  rng::Sequence seq(23);
  for (int trial = 0; trial < 40; ++trial) {
    DynamicGraph g = random_graph(8, 3 + static_cast<int>(seq.below(10)), seq);
    Matching m = max_matching_witness(g);
    CHECK(matching_is_valid(g, m));
    CHECK(m.size() == max_matching_exhaustive(g));
  }
}

TEST_CASE("exhaustive maximum weight matching") {
  SUBCASE("single edge") {
    DynamicGraph g(2);
    g.insert_edge(Edge(0, 1));
    std::map<Edge, Rational> w{{Edge(0, 1), Rational(7)}};
    CHECK(exact_mwm(g, w) == Rational(7));
  }
  SUBCASE("middle edge of a path beats both ends") {
    DynamicGraph g = path_graph(4);
    std::map<Edge, Rational> w{{Edge(0, 1), Rational(1)},
                               {Edge(1, 2), Rational(3)},
                               {Edge(2, 3), Rational(1)}};
    CHECK(exact_mwm(g, w) == Rational(3));
  }
  SUBCASE("empty graph") {
    CHECK(exact_mwm(DynamicGraph(3), {}) == Rational(0));
  }
  SUBCASE("missing weights count as zero") {
    DynamicGraph g = path_graph(3);
    std::map<Edge, Rational> w{{Edge(1, 2), Rational(2)}};
    CHECK(exact_mwm(g, w) == Rational(2));
  }
}

TEST_CASE("degree-bounded subgraph witness value") {
  SUBCASE("single matched edge at d = 1") {
    Matching mstar(2);
    mstar.add(Edge(0, 1));
    std::set<Edge> h{Edge(0, 1)};
    // matched edge carries max{1 - (1+1-2)/1, 0} = 1
    CHECK(kernel_witness_value(2, h, mstar, Rational(1)) == Rational(1));
  }
  SUBCASE("four-cycle with one perfect matching, d = 2") {
    // matched edges carry max{1 - (2+2-2)/2, 0} = 0, the other two 1/2 each
    std::set<Edge> h{Edge(0, 1), Edge(1, 2), Edge(2, 3), Edge(0, 3)};
    Matching mstar(4);
    mstar.add(Edge(0, 1));
    mstar.add(Edge(2, 3));
    CHECK(kernel_witness_value(4, h, mstar, Rational(2)) == Rational(1));
  }
  SUBCASE("overloaded vertex is rejected") {
    // star of three unmatched edges at d = 1 puts weight 2 on the hub
    std::set<Edge> h{Edge(0, 1), Edge(0, 2), Edge(0, 3)};
    Matching mstar(4);
    mstar.add(Edge(0, 1));
    CHECK_THROWS_AS(kernel_witness_value(4, h, mstar, Rational(1)),
                    InfeasibleWitness);
  }
}

TEST_CASE("subgraph matching bound") {
  SUBCASE("whole graph as its own subgraph") {
    DynamicGraph g = cycle_graph(6);
    std::set<Edge> h(g.edges().begin(), g.edges().end());
    CHECK(verify_kernel_matching_bound(g, h, Rational(1), Rational(2)));
  }
  SUBCASE("greedy maximal matching as the subgraph, c = d = 1") {
    rng::Sequence seq(31);
    for (int trial = 0; trial < 50; ++trial) {
      DynamicGraph g =
          random_graph(9, 4 + static_cast<int>(seq.below(8)), seq);
      std::set<Edge> h;
      Matching greedy(g.n());
      for (const Edge& e : g.edges()) {
        if (!greedy.covers(e.u) && !greedy.covers(e.v)) {
          greedy.add(e);
          h.insert(e);
        }
      }
      // mu(H) = |greedy| must be at least mu(G)/(2*1*(1+1)) = mu(G)/4
      CHECK(verify_kernel_matching_bound(g, h, Rational(1), Rational(1)));
    }
  }
}

TEST_CASE("fractional value lower bound") {
  SUBCASE("maximal matching weights") {
    DynamicGraph g = path_graph(5);
    std::map<Edge, Rational> w{{Edge(0, 1), Rational(1)},
                               {Edge(2, 3), Rational(1)}};
    CHECK(fractional_value_bound(g, w, Rational(1), Rational(1)));
  }
  SUBCASE("empty graph") {
    CHECK(fractional_value_bound(DynamicGraph(2), {}, Rational(1),
                                 Rational(1)));
  }
}

TEST_CASE("greedy maximal matching is maximal and within half of optimal") {
  DynamicGraph g = path_graph(6);
  // edges scan in sorted order, so (0,1), (2,3), (4,5) are all taken
  CHECK(greedy_maximal_matching(g) == 3);
  rng::Sequence seq(41);
  for (int trial = 0; trial < 50; ++trial) {
    DynamicGraph r = random_graph(9, 4 + static_cast<int>(seq.below(8)), seq);
    int greedy = greedy_maximal_matching(r);
    int mu = max_matching_exhaustive(r);
    CHECK(greedy <= mu);
    CHECK(2 * greedy >= mu);
  }
}
