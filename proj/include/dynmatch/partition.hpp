#pragma once

#include <map>
#include <string>
#include <vector>

#include "dynmatch/core.hpp"
#include "dynmatch/rational.hpp"

namespace dynmatch {

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EpsilonTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InfeasibleFractional : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Level structure parameters. Vertices live on integer levels in [K, L] and
 * an edge at level l carries weight beta^-l, so weights form an exact
 * geometric ladder. beta = 3/epsilon when built from an approximation target.
 */
struct PartitionParams {
  Rational beta;
  int K = 20;  // floor level; vertices below the density threshold park here
  int L = 21;  // top level; high enough that a full-degree vertex stays < 1
  Rational epsilon;

  // beta = 3/epsilon, K = floor_level, L sized so that (a) a vertex of degree
  // n-1 fits under total weight 1 and (b) the heavy/light threshold level
  // from derive_cd always fits.
  static PartitionParams from_epsilon(const Rational& epsilon, int n,
                                      int floor_level = 20);

  Rational f() const { return Rational(1) - Rational(3) / beta; }
  void validate() const;
};

// One edge's weight change: old_w and new_w are powers of 1/beta or zero, and
// differ. Replaying a delta list onto the old weight map gives the new one.
struct WeightDelta {
  Edge e;
  Rational old_w;
  Rational new_w;
};

// Output of derive_cd: every edge either carries weight >= 1/d or has an
// endpoint with total weight >= 1/c whose incident weights are all <= 1/d.
struct MaximalityParams {
  Rational c;
  Rational d;
  int k_prime = 0;
};

/**
 * Dynamic vertex-level assignment maintaining, after every update:
 *   - levels in [K, L], per-edge endpoint shadows within +1 of the level
 *     and spreading over at most two adjacent values,
 *   - edge weight exactly beta^-(max of the two shadows),
 *   - vertex totals W_v < 1 everywhere and W_v >= 1 - 3/beta above the floor.
 *
 * Repairs move one incident shadow at a time (lowest dirty vertex first,
 * then lowest neighbor id, weight-changing moves before free ones) and
 * relabel the vertex once every incident shadow has shifted. A guard of
 * 4 n L moves per update turns a non-terminating repair into an error.
 */
class LevelPartition {
 public:
  LevelPartition(PartitionParams params, int n);

  std::vector<WeightDelta> insert_edge(Edge e);
  std::vector<WeightDelta> delete_edge(Edge e);

  int n() const { return static_cast<int>(base_.size()); }
  int m() const { return static_cast<int>(stored_level_.size()); }
  const PartitionParams& params() const { return params_; }

  bool has_edge(Edge e) const { return stored_level_.count(e) != 0; }
  int level(int v) const { return base_.at(v); }
  int shadow(int v, Edge e) const;
  int edge_level(Edge e) const;  // the stored exponent backing the weight
  Rational weight(Edge e) const;
  const Rational& vertex_weight(int v) const { return wsum_.at(v); }
  std::map<Edge, Rational> weights() const;

  // Repair moves (shadow shifts + relabels) spent on the last update.
  uint64_t last_update_moves() const { return last_moves_; }
  uint64_t total_moves() const { return total_moves_; }

  // Test hooks: corrupt the stored exponent / force a level without repair.
  void corrupt_edge_level_for_test(Edge e, int forced_level);
  void force_vertex_level_for_test(int v, int forced_level);

 private:
  struct Side {
    // raised bit per incident edge, keyed by neighbor id
    std::map<int, char> raised;
  };

  PartitionParams params_;
  std::vector<int> base_;
  std::vector<Side> inc_;
  std::vector<int> raised_count_;
  std::map<Edge, int> stored_level_;
  std::vector<Rational> wsum_;
  uint64_t last_moves_ = 0;
  uint64_t total_moves_ = 0;

  struct DeltaLog;
  bool raised(int v, Edge e) const;
  int true_level(Edge e) const;
  void set_stored_level(Edge e, int lvl, DeltaLog& log);
  bool dirty_up(int v) const;
  bool dirty_down(int v) const;
  void refresh_dirty(std::set<int>& dirty, int v) const;
  void repair(std::set<int>& dirty, DeltaLog& log);
  void raise_one(int v, std::set<int>& dirty, DeltaLog& log);
  void unraise_one(int v, std::set<int>& dirty, DeltaLog& log);

  friend bool check_nice_partition(const LevelPartition&, const DynamicGraph&,
                                   std::string*);
};

// Validates the level structure against g edge-for-edge: matching edge sets,
// levels and shadows in range, spread <= 1, stored exponents equal to the
// shadow maximum, W_v < 1, and W_v >= 1 - 3/beta above the floor. On failure
// *diagnostic names the violated property and a witness vertex or edge.
bool check_nice_partition(const LevelPartition& p, const DynamicGraph& g,
                          std::string* diagnostic = nullptr);

// c = 1 + 2 epsilon; d = beta^K' with K' = max(ceil(log_beta(18 c ln n /
// eps^2)), K+1). Throws EpsilonTooSmall when K' does not fit under params.L.
MaximalityParams derive_cd(const PartitionParams& params, int n);

// True iff every edge of g either carries w_e >= 1/d or has an endpoint v
// with W_v >= 1/c and all of v's incident weights <= 1/d. Edges absent from
// w count as weight zero. Throws InfeasibleFractional when some W_v > 1.
bool check_approx_maximal(const DynamicGraph& g,
                          const std::map<Edge, Rational>& w, const Rational& c,
                          const Rational& d);

}  // namespace dynmatch
