#pragma once

#include <map>
#include <set>
#include <vector>

#include "dynmatch/core.hpp"
#include "dynmatch/partition.hpp"
#include "dynmatch/rational.hpp"

namespace dynmatch {

struct SamplerConfig {
  Rational d;        // density target; sampling keeps expected loads near d
  Rational epsilon;  // slack factor in the hard degree cap floor((1+eps) d)
  uint64_t seed = 0;
};

// Net kernel membership changes from one batch of weight deltas.
struct KernelDelta {
  std::vector<Edge> added;
  std::vector<Edge> removed;
};

struct KernelReport {
  uint64_t degree_cap = 0;
  int max_degree = 0;
  std::vector<int> overfull;           // vertices past the hard cap (never expected)
  std::vector<Edge> weak_exclusions;   // skipped edges with both endpoints light
  bool degrees_ok() const { return overfull.empty(); }
};

// min{1, w * d}; w must lie in [0, 1].
Rational sample_probability(const Rational& w, const Rational& d);

/**
 * Sparsifier fed by weight deltas. Every edge whose weight changes is
 * re-drawn with a fresh coin from its own substream (keyed by endpoints and
 * insertion epoch, so replays are bit-identical for a fixed seed). Each
 * vertex admits its sampled edges in arrival order up to floor((1+eps) d);
 * the kernel H holds the edges admitted by both endpoints, which hard-caps
 * every kernel degree. One weight change moves at most three edges in or
 * out of H: the edge itself plus one promotion per endpoint.
 */
class KernelSampler {
 public:
  KernelSampler(SamplerConfig cfg, int n);

  KernelDelta apply_weight_deltas(const std::vector<WeightDelta>& deltas);

  int n() const { return static_cast<int>(order_.size()); }
  uint64_t degree_cap() const { return cap_; }
  const Rational& d() const { return cfg_.d; }

  bool is_live(Edge e) const { return recs_.count(e) != 0; }
  bool is_sampled(Edge e) const;
  bool in_kernel(Edge e) const { return h_edges_.count(e) != 0; }
  int h_degree(int v) const { return static_cast<int>(h_adj_.at(v).size()); }
  const std::set<int>& h_neighbors(int v) const { return h_adj_.at(v); }
  const std::set<Edge>& h_edges() const { return h_edges_; }

 private:
  struct EdgeRec {
    bool sampled = false;
    uint64_t epoch = 0;   // insertion sequence number; keys the substream
    uint32_t draws = 0;   // coins consumed so far within the substream
  };

  SamplerConfig cfg_;
  uint64_t cap_;
  uint64_t next_epoch_ = 0;
  std::map<Edge, EdgeRec> recs_;
  std::vector<std::vector<Edge>> order_;  // per-vertex arrival order of sampled edges
  std::vector<std::set<int>> h_adj_;
  std::set<Edge> h_edges_;

  bool allowed_by(int v, Edge e) const;
  void update_membership(Edge e, KernelDelta& raw, std::map<Edge, bool>& initial);
  void append_to_lists(Edge e, KernelDelta& raw, std::map<Edge, bool>& initial);
  void drop_from_lists(Edge e, KernelDelta& raw, std::map<Edge, bool>& initial);
};

// Independent degree audit: (a) vertices whose kernel degree exceeds
// floor((1+epsilon) d); (b) edges outside H whose endpoints both have kernel
// degree below (1-epsilon) d / c.
KernelReport check_kernel(const DynamicGraph& g, const KernelSampler& k,
                          const Rational& c, const Rational& d,
                          const Rational& epsilon);

}  // namespace dynmatch
