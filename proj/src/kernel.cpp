#include "dynmatch/kernel.hpp"

#include <algorithm>

#include "dynmatch/rng.hpp"

namespace dynmatch {

Rational sample_probability(const Rational& w, const Rational& d) {
  if (w < 0 || w > 1)
    throw std::invalid_argument("edge weight " + format_rational(w) +
                                " outside [0,1]");
  if (d <= 0) throw std::invalid_argument("d must be positive");
  Rational p = w * d;
  return p > 1 ? Rational(1) : p;
}

KernelSampler::KernelSampler(SamplerConfig cfg, int n) : cfg_(std::move(cfg)) {
  if (n < 0) throw std::invalid_argument("vertex count must be nonnegative");
  if (cfg_.d <= 0) throw std::invalid_argument("d must be positive");
  if (cfg_.epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  cap_ = floor_to_uint64((1 + cfg_.epsilon) * cfg_.d);
  order_.resize(n);
  h_adj_.resize(n);
}

bool KernelSampler::is_sampled(Edge e) const {
  auto it = recs_.find(e);
  return it != recs_.end() && it->second.sampled;
}

bool KernelSampler::allowed_by(int v, Edge e) const {
  const auto& vec = order_.at(v);
  auto it = std::find(vec.begin(), vec.end(), e);
  if (it == vec.end()) return false;
  return static_cast<uint64_t>(it - vec.begin()) < cap_;
}

void KernelSampler::update_membership(Edge e, KernelDelta& raw,
                                      std::map<Edge, bool>& initial) {
  bool now = is_sampled(e) && allowed_by(e.u, e) && allowed_by(e.v, e);
  bool cur = h_edges_.count(e) != 0;
  if (now == cur) return;
  initial.try_emplace(e, cur);
  if (now) {
    h_edges_.insert(e);
    h_adj_[e.u].insert(e.v);
    h_adj_[e.v].insert(e.u);
    raw.added.push_back(e);
  } else {
    h_edges_.erase(e);
    h_adj_[e.u].erase(e.v);
    h_adj_[e.v].erase(e.u);
    raw.removed.push_back(e);
  }
}

void KernelSampler::append_to_lists(Edge e, KernelDelta& raw,
                                    std::map<Edge, bool>& initial) {
  order_[e.u].push_back(e);
  order_[e.v].push_back(e);
  update_membership(e, raw, initial);
}

void KernelSampler::drop_from_lists(Edge e, KernelDelta& raw,
                                    std::map<Edge, bool>& initial) {
  std::vector<Edge> promoted;
  for (int v : {e.u, e.v}) {
    auto& vec = order_[v];
    auto it = std::find(vec.begin(), vec.end(), e);
    if (it == vec.end())
      throw std::logic_error("sampled edge missing from arrival list");
    uint64_t idx = static_cast<uint64_t>(it - vec.begin());
    vec.erase(it);
    // Dropping an admitted slot slides the first waiting edge under the cap.
    if (idx < cap_ && vec.size() >= cap_) promoted.push_back(vec[cap_ - 1]);
  }
  update_membership(e, raw, initial);
  for (const Edge& p : promoted) update_membership(p, raw, initial);
}

KernelDelta KernelSampler::apply_weight_deltas(
    const std::vector<WeightDelta>& deltas) {
  KernelDelta raw;
  std::map<Edge, bool> initial;
  for (const WeightDelta& wd : deltas) {
    size_t before = raw.added.size() + raw.removed.size();
    if (wd.old_w == wd.new_w)
      throw std::logic_error("weight delta with old == new at " + to_string(wd.e));

    if (wd.old_w == 0) {
      auto [it, fresh] = recs_.try_emplace(wd.e);
      if (!fresh)
        throw std::logic_error("insertion delta for live edge " + to_string(wd.e));
      it->second.epoch = next_epoch_++;
    }
    auto it = recs_.find(wd.e);
    if (it == recs_.end())
      throw std::logic_error("delta for unknown edge " + to_string(wd.e));
    EdgeRec& rec = it->second;

    if (wd.new_w == 0) {
      bool was = rec.sampled;
      rec.sampled = false;
      if (was) drop_from_lists(wd.e, raw, initial);
      recs_.erase(it);
    } else {
      uint64_t word = rng::mix(cfg_.seed, {static_cast<uint64_t>(wd.e.u),
                                           static_cast<uint64_t>(wd.e.v),
                                           rec.epoch, rec.draws});
      ++rec.draws;
      bool keep = rng::bernoulli(word, sample_probability(wd.new_w, cfg_.d));
      if (keep != rec.sampled) {
        rec.sampled = keep;
        if (keep)
          append_to_lists(wd.e, raw, initial);
        else
          drop_from_lists(wd.e, raw, initial);
      }
    }

    size_t churn = raw.added.size() + raw.removed.size() - before;
    if (churn > 3)
      throw std::logic_error("one weight change moved " + std::to_string(churn) +
                             " kernel edges");
  }

  // Collapse the raw sequence to net membership changes.
  KernelDelta net;
  for (const auto& [e, was] : initial) {
    bool now = in_kernel(e);
    if (now && !was) net.added.push_back(e);
    if (!now && was) net.removed.push_back(e);
  }
  return net;
}

KernelReport check_kernel(const DynamicGraph& g, const KernelSampler& k,
                          const Rational& c, const Rational& d,
                          const Rational& epsilon) {
  if (c < 1 || d <= 0) throw std::invalid_argument("need c >= 1 and d > 0");
  KernelReport report;
  report.degree_cap = floor_to_uint64((1 + epsilon) * d);
  for (int v = 0; v < g.n(); ++v) {
    int deg = k.h_degree(v);
    report.max_degree = std::max(report.max_degree, deg);
    if (static_cast<uint64_t>(deg) > report.degree_cap) report.overfull.push_back(v);
  }
  Rational light = (1 - epsilon) * d / c;
  for (const Edge& e : g.edges()) {
    if (k.in_kernel(e)) continue;
    if (Rational(std::max(k.h_degree(e.u), k.h_degree(e.v))) < light)
      report.weak_exclusions.push_back(e);
  }
  return report;
}

}  // namespace dynmatch
