#include "dynmatch/mwm.hpp"

#include <string>
#include <vector>

#include "dynmatch/rng.hpp"

namespace dynmatch {

int class_of(const Rational& x, const Rational& epsilon) {
  if (x <= 0) {
    throw NonPositiveWeight("weight must be positive, got " +
                            format_rational(x));
  }
  Rational base = 1 + epsilon;
  if (base <= 1) throw std::invalid_argument("epsilon must be positive");
  Rational p = 1;
  int i = 0;
  if (x > 1) {
    // Smallest i with base^i >= x puts x in ((base^{i-1}, base^i]).
    while (p < x) {
      p *= base;
      ++i;
    }
    return i - 1;
  }
  // Walk down until base^i < x; then x <= base^{i+1} held at the last step.
  while (p >= x) {
    p /= base;
    --i;
  }
  return i;
}

Matching greedy_merge(int n, const std::map<int, Matching>& by_class) {
  Matching out(n);
  for (auto it = by_class.rbegin(); it != by_class.rend(); ++it) {
    for (const Edge& e : it->second.edges()) {
      if (!out.covers(e.u) && !out.covers(e.v)) out.add(e);
    }
  }
  return out;
}

MwmEngine::MwmEngine(int n, const Rational& epsilon, uint64_t seed,
                     std::optional<int64_t> d_override, int floor_level)
    : n_(n),
      epsilon_(epsilon),
      seed_(seed),
      d_override_(d_override),
      floor_level_(floor_level) {
  if (n < 0) throw std::invalid_argument("vertex count must be non-negative");
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
}

Engine& MwmEngine::engine_for(int cls) {
  auto it = engines_.find(cls);
  if (it == engines_.end()) {
    EngineConfig cfg;
    cfg.n = n_;
    cfg.epsilon = epsilon_;
    cfg.seed = rng::mix(seed_, {static_cast<uint64_t>(cls + (1LL << 32))});
    cfg.d_override = d_override_;
    cfg.floor_level = floor_level_;
    it = engines_.try_emplace(cls, cfg).first;
  }
  return it->second;
}

Rational MwmEngine::park_cutoff() const {
  if (live_weights_.empty() || n_ == 0) return Rational(0);
  return epsilon_ / n_ * *live_weights_.rbegin();
}

UpdateReport MwmEngine::activate(Edge e, const Rational& w) {
  int cls = class_of(w, epsilon_);
  UpdateReport rep = engine_for(cls).insert_edge(e);
  active_class_[e] = cls;
  return rep;
}

UpdateReport MwmEngine::deactivate(Edge e) {
  auto it = active_class_.find(e);
  UpdateReport rep = engines_.at(it->second).delete_edge(e);
  active_class_.erase(it);
  return rep;
}

UpdateReport MwmEngine::insert_edge(Edge e, const Rational& w) {
  if (e.u < 0 || e.v >= n_) {
    int bad = e.u < 0 ? e.u : e.v;
    throw InvalidVertex("vertex " + std::to_string(bad) + " out of range [0," +
                        std::to_string(n_) + ")");
  }
  if (e.u == e.v) throw SelfLoop("self loop at vertex " + std::to_string(e.u));
  if (weights_.count(e)) throw DuplicateEdge("edge " + to_string(e) +
                                             " already present");
  if (w <= 0) {
    throw NonPositiveWeight("weight must be positive, got " +
                            format_rational(w));
  }
  weights_.emplace(e, w);
  live_weights_.insert(w);
  if (w < park_cutoff()) {
    parked_.insert(e);
    return UpdateReport{};
  }
  return activate(e, w);
}

UpdateReport MwmEngine::delete_edge(Edge e) {
  auto it = weights_.find(e);
  if (it == weights_.end()) {
    throw MissingEdge("edge " + to_string(e) + " not present");
  }
  live_weights_.erase(live_weights_.find(it->second));
  UpdateReport rep;
  if (parked_.erase(e) == 0) rep = deactivate(e);
  weights_.erase(it);
  return rep;
}

void MwmEngine::rebalance() {
  Rational cutoff = park_cutoff();
  std::vector<Edge> to_park;
  std::vector<Edge> to_wake;
  for (const auto& [e, w] : weights_) {
    bool parked = parked_.count(e) > 0;
    if (parked && w >= cutoff) to_wake.push_back(e);
    if (!parked && w < cutoff) to_park.push_back(e);
  }
  for (const Edge& e : to_park) {
    deactivate(e);
    parked_.insert(e);
  }
  for (const Edge& e : to_wake) {
    parked_.erase(e);
    activate(e, weights_.at(e));
  }
}

Rational MwmEngine::weight_of(Edge e) const {
  auto it = weights_.find(e);
  if (it == weights_.end()) {
    throw MissingEdge("edge " + to_string(e) + " not present");
  }
  return it->second;
}

std::pair<Matching, Rational> MwmEngine::current_matching() const {
  std::map<int, Matching> by_class;
  for (const auto& [cls, eng] : engines_) {
    if (eng.current_matching().size() > 0) {
      by_class.emplace(cls, eng.current_matching());
    }
  }
  Matching merged = greedy_merge(n_, by_class);
  Rational total = 0;
  for (const Edge& e : merged.edges()) total += weights_.at(e);
  return {merged, total};
}

}  // namespace dynmatch
