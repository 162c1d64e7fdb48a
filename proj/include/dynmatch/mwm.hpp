#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>

#include "dynmatch/engine.hpp"

namespace dynmatch {

struct NonPositiveWeight : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Index i of the geometric band ((1+epsilon)^i, (1+epsilon)^{i+1}] holding x.
// Throws NonPositiveWeight unless x > 0.
int class_of(const Rational& x, const Rational& epsilon);

// Scans classes in decreasing order and keeps each edge whose endpoints are
// both still free; any skipped edge is blocked by a kept edge of a class at
// least as heavy.
Matching greedy_merge(int n, const std::map<int, Matching>& by_class);

/**
 * Maximum-weight matching via weight classes. Each geometric weight band is
 * handled by its own unweighted engine; the per-class matchings are merged
 * greedily from heavy to light. Edges lighter than eps/n times the current
 * maximum weight are parked (kept but excluded from every class) until a
 * rebalance() re-admits them.
 */
class MwmEngine {
 public:
  MwmEngine(int n, const Rational& epsilon, uint64_t seed = 0,
            std::optional<int64_t> d_override = std::nullopt,
            int floor_level = 20);

  // Reports come from the class engine that absorbed the update; a parked
  // edge yields an all-zero report.
  UpdateReport insert_edge(Edge e, const Rational& w);
  UpdateReport delete_edge(Edge e);

  // Re-applies the parking cutoff to every live edge. Insertions and
  // deletions shift the maximum weight lazily; call this to settle parked /
  // active sets against the current cutoff.
  void rebalance();

  // Merged matching over all class engines plus its total weight.
  std::pair<Matching, Rational> current_matching() const;

  int n() const { return n_; }
  bool has_edge(Edge e) const { return weights_.count(e) > 0; }
  bool is_parked(Edge e) const { return parked_.count(e) > 0; }
  size_t edge_count() const { return weights_.size(); }
  size_t parked_count() const { return parked_.size(); }
  Rational weight_of(Edge e) const;
  // Weight below which a newly seen edge is parked: eps/n * max live weight.
  Rational park_cutoff() const;
  const std::map<int, Engine>& class_engines() const { return engines_; }

 private:
  int n_;
  Rational epsilon_;
  uint64_t seed_;
  std::optional<int64_t> d_override_;
  int floor_level_;
  std::map<Edge, Rational> weights_;
  std::map<Edge, int> active_class_;
  std::set<Edge> parked_;
  std::multiset<Rational> live_weights_;
  std::map<int, Engine> engines_;

  Engine& engine_for(int cls);
  UpdateReport activate(Edge e, const Rational& w);
  UpdateReport deactivate(Edge e);
};

}  // namespace dynmatch
