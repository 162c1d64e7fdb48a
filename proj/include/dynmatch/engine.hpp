#pragma once

#include <cstdint>
#include <optional>

#include "dynmatch/core.hpp"
#include "dynmatch/kernel.hpp"
#include "dynmatch/matcher.hpp"
#include "dynmatch/partition.hpp"

namespace dynmatch {

struct EngineConfig {
  int n = 0;
  Rational epsilon = Rational(1, 2);
  uint64_t seed = 0;
  // When set, the sampler uses this density instead of the derived one; the
  // level structure and its validators are unaffected.
  std::optional<int64_t> d_override;
  int floor_level = 20;
};

// Per-update accounting emitted by the engine.
struct UpdateReport {
  int weight_changes = 0;  // edges whose fractional weight moved
  int kernel_added = 0;
  int kernel_removed = 0;
  uint64_t partition_moves = 0;
  uint64_t matcher_work = 0;
  int64_t wall_ns = 0;
  int matching_size = 0;
  bool rebuilt = false;
};

/**
 * Full update pipeline: an edge insertion or deletion flows through the level
 * partition (producing weight changes), each changed weight is re-sampled
 * into or out of the kernel, and the bounded matcher folds the kernel delta
 * into the integral matching.
 */
class Engine {
 public:
  explicit Engine(const EngineConfig& cfg);

  UpdateReport insert_edge(Edge e);
  UpdateReport delete_edge(Edge e);

  const EngineConfig& config() const { return cfg_; }
  const DynamicGraph& graph() const { return g_; }
  const LevelPartition& partition() const { return part_; }
  const KernelSampler& kernel() const { return samp_; }
  const BoundedMatcher& matcher() const { return match_; }
  const Matching& current_matching() const { return match_.current(); }
  const PartitionParams& params() const { return params_; }
  // Thresholds certified by the level structure.
  const MaximalityParams& maximality() const { return maxim_; }
  // Density actually used by the sampler (override or derived).
  const Rational& effective_d() const { return d_eff_; }

 private:
  EngineConfig cfg_;
  PartitionParams params_;
  MaximalityParams maxim_;
  Rational d_eff_;
  DynamicGraph g_;
  LevelPartition part_;
  KernelSampler samp_;
  BoundedMatcher match_;

  UpdateReport run_update(bool inserting, Edge e);
};

}  // namespace dynmatch
