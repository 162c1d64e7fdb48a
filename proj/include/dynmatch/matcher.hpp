#pragma once

#include "dynmatch/core.hpp"
#include "dynmatch/kernel.hpp"
#include "dynmatch/rational.hpp"

namespace dynmatch {

/**
 * Maintains an integral matching inside the kernel. Between rebuilds the
 * matching is only patched: edges leaving the kernel are dropped, and a new
 * kernel edge is claimed greedily when both endpoints are free. Every epoch
 * (ceil(eps * max(|M|, 1)) updates, or immediately when the matching falls
 * to half its last rebuilt size) a rebuild augments along simple alternating
 * paths until none of length <= 2 ceil(1/eps) - 1 remains, which keeps the
 * rebuilt matching within (1+eps) of the kernel's maximum.
 */
class BoundedMatcher {
 public:
  BoundedMatcher(const Rational& epsilon, int n);

  // Folds one update's kernel changes into the matching and advances the
  // epoch clock; returns true when the step ended with a rebuild.
  bool apply(const KernelDelta& kd, const KernelSampler& h);

  void rebuild(const KernelSampler& h);

  // True iff two free vertices are joined by a simple alternating path of
  // length <= path_bound() in the kernel graph.
  bool has_short_augmenting_path(const KernelSampler& h) const;

  const Matching& current() const { return current_; }
  const Matching& reference() const { return reference_; }
  int path_bound() const { return path_bound_; }
  int epoch_length() const;
  int updates_since_rebuild() const { return updates_since_; }
  int rebuild_count() const { return rebuilds_; }
  uint64_t work() const { return work_; }

 private:
  Rational epsilon_;
  int path_bound_;
  Matching current_;
  Matching reference_;
  int updates_since_ = 0;
  int size_at_rebuild_ = 0;
  int rebuilds_ = 0;
  mutable uint64_t work_ = 0;

  bool extend_path(const KernelSampler& h, int x, int edges_left,
                   std::vector<char>& on_path, std::vector<int>& path) const;
  bool find_augmenting_path(const KernelSampler& h, int from,
                            std::vector<int>& path) const;
  void augment(const std::vector<int>& path);
};

}  // namespace dynmatch
