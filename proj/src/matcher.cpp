#include "dynmatch/matcher.hpp"

#include <stdexcept>

namespace dynmatch {

namespace {

int checked_vertex_count(int n) {
  if (n < 0) throw std::invalid_argument("vertex count must be non-negative");
  return n;
}

}  // namespace

BoundedMatcher::BoundedMatcher(const Rational& epsilon, int n)
    : epsilon_(epsilon), current_(checked_vertex_count(n)), reference_(n) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  path_bound_ = 2 * static_cast<int>(ceil_rational(Rational(1) / epsilon)) - 1;
}

int BoundedMatcher::epoch_length() const {
  int sz = std::max(static_cast<int>(current_.size()), 1);
  return static_cast<int>(ceil_rational(epsilon_ * sz));
}

bool BoundedMatcher::apply(const KernelDelta& kd, const KernelSampler& h) {
  for (const Edge& e : kd.removed) {
    if (current_.contains(e)) current_.remove(e);
  }
  for (const Edge& e : kd.added) {
    if (!current_.covers(e.u) && !current_.covers(e.v)) current_.add(e);
  }
  ++updates_since_;
  int sz = static_cast<int>(current_.size());
  bool halved = 2 * sz <= size_at_rebuild_;
  if (updates_since_ >= epoch_length() || halved) {
    rebuild(h);
    return true;
  }
  return false;
}

// Depth-first walk over kernel edges. `x` is the tip of an even-length
// alternating prefix, so the next edge must be unmatched; reaching a free
// vertex completes an augmenting path. Matched continuations consume two
// edges at once (unmatched into y, matched on to y's partner).
bool BoundedMatcher::extend_path(const KernelSampler& h, int x, int edges_left,
                                 std::vector<char>& on_path,
                                 std::vector<int>& path) const {
  if (edges_left < 1) return false;
  for (int y : h.h_neighbors(x)) {
    ++work_;
    if (on_path[y]) continue;
    if (current_.contains(Edge(x, y))) continue;
    if (!current_.covers(y)) {
      path.push_back(y);
      return true;
    }
    if (edges_left < 3) continue;
    int z = current_.mate(y);
    if (on_path[z]) continue;
    on_path[y] = 1;
    on_path[z] = 1;
    path.push_back(y);
    path.push_back(z);
    if (extend_path(h, z, edges_left - 2, on_path, path)) return true;
    path.pop_back();
    path.pop_back();
    on_path[y] = 0;
    on_path[z] = 0;
  }
  return false;
}

bool BoundedMatcher::find_augmenting_path(const KernelSampler& h, int from,
                                          std::vector<int>& path) const {
  std::vector<char> on_path(current_.n(), 0);
  on_path[from] = 1;
  path.clear();
  path.push_back(from);
  return extend_path(h, from, path_bound_, on_path, path);
}

void BoundedMatcher::augment(const std::vector<int>& path) {
  // path = v0, y1, z1, y2, z2, ..., yk: odd-index gaps are matched edges.
  for (size_t i = 1; i + 1 < path.size(); i += 2) {
    current_.remove(Edge(path[i], path[i + 1]));
  }
  for (size_t i = 0; i + 1 < path.size(); i += 2) {
    current_.add(Edge(path[i], path[i + 1]));
  }
}

void BoundedMatcher::rebuild(const KernelSampler& h) {
  std::vector<int> path;
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (int v = 0; v < current_.n(); ++v) {
      if (current_.covers(v)) continue;
      if (h.h_degree(v) == 0) continue;
      if (find_augmenting_path(h, v, path)) {
        augment(path);
        progressed = true;
      }
    }
  }
  reference_ = current_;
  size_at_rebuild_ = static_cast<int>(current_.size());
  updates_since_ = 0;
  ++rebuilds_;
}

bool BoundedMatcher::has_short_augmenting_path(const KernelSampler& h) const {
  std::vector<int> path;
  for (int v = 0; v < current_.n(); ++v) {
    if (current_.covers(v)) continue;
    if (h.h_degree(v) == 0) continue;
    if (find_augmenting_path(h, v, path)) return true;
  }
  return false;
}

}  // namespace dynmatch
