#include "dynmatch/partition.hpp"

#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "dynmatch/rng.hpp"

using namespace dynmatch;

namespace {

PartitionParams desk_params(int n, int floor_level) {
  return PartitionParams::from_epsilon(Rational(1, 2), n, floor_level);
}

// Replays a delta list onto a copy of the previous weight map and compares
// against the partition's current weights.
void check_delta_replay(std::map<Edge, Rational>& shadow,
                        const std::vector<WeightDelta>& deltas,
                        const LevelPartition& p) {
  for (const WeightDelta& d : deltas) {
    CHECK(d.old_w != d.new_w);
    Rational prev = shadow.count(d.e) ? shadow[d.e] : Rational(0);
    CHECK(prev == d.old_w);
    if (d.new_w == 0) {
      shadow.erase(d.e);
    } else {
      shadow[d.e] = d.new_w;
    }
  }
  CHECK(shadow == p.weights());
}

}  // namespace

TEST_CASE("parameters derived from epsilon") {
  PartitionParams p = desk_params(64, 20);
  CHECK(p.beta == Rational(6));
  CHECK(p.epsilon == Rational(1, 2));
  CHECK(p.K == 20);
  CHECK(p.L == 21);  // hosts the heavy/light threshold level
  CHECK(p.f() == Rational(1, 2));

  PartitionParams q = desk_params(64, 0);
  CHECK(q.K == 0);
  CHECK(q.L == 4);

  PartitionParams r = PartitionParams::from_epsilon(Rational(1, 4), 256, 0);
  CHECK(r.beta == Rational(12));
  CHECK(r.f() == Rational(3, 4));
}

TEST_CASE("parameter validation") {
  PartitionParams p = desk_params(64, 20);
  p.beta = Rational(4);  // beta must stay >= 5
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = desk_params(64, 20);
  p.L = p.K - 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_THROWS_AS(PartitionParams::from_epsilon(Rational(0), 64, 20),
                  std::invalid_argument);
  CHECK_THROWS_AS(PartitionParams::from_epsilon(Rational(2, 3), 64, 20),
                  std::invalid_argument);  // beta = 3/epsilon would dip below 5
}

TEST_CASE("threshold derivation") {
  SUBCASE("epsilon one half at desk scale") {
    for (int n : {10, 100, 64, 256, 1000000}) {
      PartitionParams p = desk_params(n, 20);
      MaximalityParams mp = derive_cd(p, n);
      CHECK(mp.c == Rational(2));  // always 1 + 2 epsilon
      CHECK(mp.k_prime == 21);
      CHECK(mp.d == pow_rational(Rational(6), 21));
    }
  }
  SUBCASE("density threshold dominates at a low floor") {
    PartitionParams p = desk_params(64, 0);
    MaximalityParams mp = derive_cd(p, 64);
    // 18 * 2 * ln 64 / (1/4) = 598.88; 6^3 = 216 < it <= 6^4
    CHECK(mp.k_prime == 4);
    CHECK(mp.d == Rational(1296));
  }
  SUBCASE("density meets the sampling hypothesis") {
    PartitionParams p = desk_params(100, 20);
    MaximalityParams mp = derive_cd(p, 100);
    double needed = 9.0 * 2.0 * std::log(100.0) / 0.25;
    CHECK(to_double(mp.d) >= needed);
    PartitionParams q = desk_params(100, 0);
    MaximalityParams mq = derive_cd(q, 100);
    CHECK(to_double(mq.d) >= needed);
  }
  SUBCASE("rejected when the range cannot host the threshold") {
    PartitionParams p = desk_params(64, 20);
    p.L = 20;  // valid range, but the threshold level needs 21
    p.validate();
    CHECK_THROWS_AS(derive_cd(p, 64), EpsilonTooSmall);
  }
}

TEST_CASE("first edge settles at the floor weight when the floor is high") {
  PartitionParams p = desk_params(8, 20);
  LevelPartition part(p, 8);
  std::vector<WeightDelta> deltas = part.insert_edge(Edge(0, 1));
  REQUIRE(deltas.size() == 1);
  CHECK(deltas[0].e == Edge(0, 1));
  CHECK(deltas[0].old_w == Rational(0));
  CHECK(deltas[0].new_w == pow_rational(Rational(6), -20));
  CHECK(part.level(0) == 20);
  CHECK(part.level(1) == 20);
  CHECK(part.vertex_weight(0) == pow_rational(Rational(6), -20));
}

TEST_CASE("first edge at floor zero is pushed under the feasibility bound") {
  PartitionParams p = desk_params(8, 0);
  LevelPartition part(p, 8);
  std::vector<WeightDelta> deltas = part.insert_edge(Edge(0, 1));
  REQUIRE(deltas.size() == 1);
  CHECK(deltas[0].old_w == Rational(0));
  CHECK(deltas[0].new_w == Rational(1, 6));  // weight 1 would saturate both ends
  CHECK(part.level(0) == 0);
  CHECK(part.vertex_weight(0) == Rational(1, 6));
  CHECK(part.last_update_moves() == 1);
  DynamicGraph g(8);
  g.insert_edge(Edge(0, 1));
  std::string diag;
  CHECK(check_nice_partition(part, g, &diag));
}

TEST_CASE("insert with headroom touches only the new edge") {
  PartitionParams p = desk_params(8, 0);
  LevelPartition part(p, 8);
  part.insert_edge(Edge(0, 1));
  std::vector<WeightDelta> deltas = part.insert_edge(Edge(0, 2));
  REQUIRE(deltas.size() == 1);
  CHECK(deltas[0].e == Edge(0, 2));
  CHECK(deltas[0].new_w == Rational(1, 6));
  CHECK(part.vertex_weight(0) == Rational(1, 3));
}

TEST_CASE("deleting the only edge returns every vertex to the floor") {
  for (int floor_level : {0, 20}) {
    PartitionParams p = desk_params(8, floor_level);
    LevelPartition part(p, 8);
    part.insert_edge(Edge(0, 1));
    std::vector<WeightDelta> deltas = part.delete_edge(Edge(0, 1));
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0].new_w == Rational(0));
    CHECK(deltas[0].old_w > 0);
    CHECK(part.m() == 0);
    for (int v = 0; v < 8; ++v) {
      CHECK(part.level(v) == floor_level);
      CHECK(part.vertex_weight(v) == Rational(0));
    }
  }
}

TEST_CASE("insert then delete restores the initial state") {
  PartitionParams p = desk_params(6, 0);
  LevelPartition part(p, 6);
  part.insert_edge(Edge(2, 4));
  part.delete_edge(Edge(2, 4));
  LevelPartition fresh(p, 6);
  for (int v = 0; v < 6; ++v) {
    CHECK(part.level(v) == fresh.level(v));
    CHECK(part.vertex_weight(v) == fresh.vertex_weight(v));
  }
  CHECK(part.weights().empty());
}

TEST_CASE("star pile-up drives the hub up the levels") {
  PartitionParams p = desk_params(64, 0);
  LevelPartition part(p, 64);
  DynamicGraph g(64);
  for (int leaf = 1; leaf <= 40; ++leaf) {
    g.insert_edge(Edge(0, leaf));
    part.insert_edge(Edge(0, leaf));
    std::string diag;
    CHECK_MESSAGE(check_nice_partition(part, g, &diag), diag);
  }
  CHECK(part.level(0) >= 1);
  CHECK(part.vertex_weight(0) < 1);
  CHECK(part.vertex_weight(0) >= p.f());  // hub sits above the floor
  for (int leaf = 1; leaf <= 40; ++leaf) {
    g.delete_edge(Edge(0, leaf));
    part.delete_edge(Edge(0, leaf));
    std::string diag;
    CHECK_MESSAGE(check_nice_partition(part, g, &diag), diag);
  }
  CHECK(part.level(0) == 0);
}

TEST_CASE("random churn keeps the partition nice and deltas replayable") {
  for (int floor_level : {0, 20}) {
    const int n = 64;
    PartitionParams p = desk_params(n, floor_level);
    LevelPartition part(p, n);
    DynamicGraph g(n);
    std::map<Edge, Rational> shadow;
    rng::Sequence seq(777 + floor_level);
    std::vector<Edge> live;
    int checked = 0;
    for (int step = 0; step < 1000; ++step) {
      bool insert = live.empty() || seq.below(100) < 60;
      std::vector<WeightDelta> deltas;
      if (insert) {
        int u = static_cast<int>(seq.below(n));
        int v = static_cast<int>(seq.below(n));
        if (u == v || g.has_edge(Edge(u, v))) continue;
        g.insert_edge(Edge(u, v));
        deltas = part.insert_edge(Edge(u, v));
        live.push_back(Edge(u, v));
      } else {
        size_t idx = seq.below(live.size());
        Edge e = live[idx];
        live[idx] = live.back();
        live.pop_back();
        g.delete_edge(e);
        deltas = part.delete_edge(e);
      }
      check_delta_replay(shadow, deltas, part);
      std::string diag;
      bool ok = check_nice_partition(part, g, &diag);
      CHECK_MESSAGE(ok, diag);
      if (!ok) return;
      ++checked;
    }
    CHECK(checked > 800);
  }
}

TEST_CASE("every weight is an exact power of one over beta") {
  PartitionParams p = desk_params(32, 0);
  LevelPartition part(p, 32);
  rng::Sequence seq(4242);
  for (int step = 0; step < 300; ++step) {
    int u = static_cast<int>(seq.below(32));
    int v = static_cast<int>(seq.below(32));
    if (u == v || part.has_edge(Edge(u, v))) continue;
    part.insert_edge(Edge(u, v));
  }
  for (const auto& [e, w] : part.weights()) {
    int lvl = part.edge_level(e);
    CHECK(w == pow_rational(p.beta, -lvl));
    CHECK(lvl >= p.K);
    CHECK(lvl <= p.L + 1);  // shadows may sit one above the top vertex level
  }
}

TEST_CASE("validator pinpoints constructed violations") {
  PartitionParams p = desk_params(8, 0);
  DynamicGraph g(8);
  SUBCASE("stored weight drifting off the shadow levels") {
    LevelPartition part(p, 8);
    g.insert_edge(Edge(0, 1));
    part.insert_edge(Edge(0, 1));
    part.corrupt_edge_level_for_test(Edge(0, 1), 3);
    std::string diag;
    CHECK(!check_nice_partition(part, g, &diag));
    CHECK(diag.find("weight") != std::string::npos);
  }
  SUBCASE("vertex floated above the floor without the weight to justify it") {
    LevelPartition part(p, 8);
    g.insert_edge(Edge(0, 1));
    part.insert_edge(Edge(0, 1));
    part.force_vertex_level_for_test(0, 2);
    std::string diag;
    CHECK(!check_nice_partition(part, g, &diag));
    CHECK(diag.find("floor") != std::string::npos);
  }
  SUBCASE("edge set mismatch") {
    LevelPartition part(p, 8);
    g.insert_edge(Edge(0, 1));
    std::string diag;
    CHECK(!check_nice_partition(part, g, &diag));
  }
}

TEST_CASE("approximate maximality checker follows the definition") {
  SUBCASE("empty graph satisfies any thresholds") {
    CHECK(check_approx_maximal(DynamicGraph(3), {}, Rational(1), Rational(1)));
  }
  SUBCASE("single saturated edge is maximal") {
    DynamicGraph g(2);
    g.insert_edge(Edge(0, 1));
    std::map<Edge, Rational> w{{Edge(0, 1), Rational(1)}};
    CHECK(check_approx_maximal(g, w, Rational(1), Rational(1)));
  }
  SUBCASE("overloaded vertex is rejected before the clauses run") {
    DynamicGraph g(3);
    g.insert_edge(Edge(0, 1));
    g.insert_edge(Edge(1, 2));
    std::map<Edge, Rational> w{{Edge(0, 1), Rational(1)},
                               {Edge(1, 2), Rational(1, 8)}};
    CHECK_THROWS_AS(check_approx_maximal(g, w, Rational(1), Rational(4)),
                    InfeasibleFractional);
  }
  SUBCASE("light edge with no tight all-light endpoint fails") {
    DynamicGraph g(3);
    g.insert_edge(Edge(0, 1));
    g.insert_edge(Edge(1, 2));
    std::map<Edge, Rational> w{{Edge(0, 1), Rational(7, 8)},
                               {Edge(1, 2), Rational(1, 8)}};
    // (1,2) is light for d = 4; vertex 1 is tight but carries the heavy
    // (0,1); vertex 2 only holds 1/8
    CHECK(!check_approx_maximal(g, w, Rational(1), Rational(4)));
    // with d = 8 the edge itself clears the weight threshold
    CHECK(check_approx_maximal(g, w, Rational(1), Rational(8)));
  }
}
