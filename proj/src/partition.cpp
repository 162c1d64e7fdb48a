#include "dynmatch/partition.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace dynmatch {

namespace {

// Smallest level k such that beta^k >= 18 c ln(n) / eps^2, floored at K+1.
long threshold_level(const Rational& beta, int K, const Rational& epsilon,
                     int n) {
  long k1 = 0;
  if (n >= 2) {
    Rational c = 1 + 2 * epsilon;
    double t = 18.0 * to_double(c) * std::log(static_cast<double>(n)) /
               std::pow(to_double(epsilon), 2.0);
    k1 = ceil_log(beta, Rational(t));
  }
  return std::max<long>(k1, K + 1);
}

}  // namespace

void PartitionParams::validate() const {
  if (beta < 5) throw std::invalid_argument("beta must be >= 5");
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  if (K < 0) throw std::invalid_argument("floor level must be >= 0");
  if (K > L)
    throw std::invalid_argument("level range is empty (K > L): n too small "
                                "for the chosen epsilon");
}

PartitionParams PartitionParams::from_epsilon(const Rational& epsilon, int n,
                                              int floor_level) {
  if (epsilon <= 0 || epsilon > Rational(3, 5))
    throw std::invalid_argument(
        "epsilon must lie in (0, 3/5] so that beta = 3/epsilon >= 5");
  if (n < 0) throw std::invalid_argument("vertex count must be nonnegative");
  if (floor_level < 0) throw std::invalid_argument("floor level must be >= 0");
  PartitionParams p;
  p.beta = Rational(3) / epsilon;
  p.epsilon = epsilon;
  p.K = floor_level;
  long degree_cap = ceil_log(p.beta, Rational(std::max(n, 1)));
  long threshold = threshold_level(p.beta, p.K, epsilon, n);
  p.L = static_cast<int>(std::max({degree_cap, static_cast<long>(p.K) + 1,
                                   threshold}));
  p.validate();
  return p;
}

MaximalityParams derive_cd(const PartitionParams& params, int n) {
  params.validate();
  Rational c = 1 + 2 * params.epsilon;
  long k_prime = threshold_level(params.beta, params.K, params.epsilon, n);
  if (k_prime > params.L)
    throw EpsilonTooSmall("threshold level " + std::to_string(k_prime) +
                          " does not fit in the level range [" +
                          std::to_string(params.K) + "," +
                          std::to_string(params.L) + "]");
  Rational d = pow_rational(params.beta, k_prime);
  return MaximalityParams{c, d, static_cast<int>(k_prime)};
}

// ---- LevelPartition ----

struct LevelPartition::DeltaLog {
  std::vector<Edge> order;
  std::map<Edge, std::pair<Rational, Rational>> entries;

  void record(const Edge& e, const Rational& old_w, const Rational& new_w) {
    auto it = entries.find(e);
    if (it == entries.end()) {
      entries.emplace(e, std::make_pair(old_w, new_w));
      order.push_back(e);
    } else {
      it->second.second = new_w;
    }
  }

  std::vector<WeightDelta> finalize() const {
    std::vector<WeightDelta> out;
    for (const Edge& e : order) {
      const auto& pr = entries.at(e);
      if (pr.first != pr.second) out.push_back(WeightDelta{e, pr.first, pr.second});
    }
    return out;
  }
};

LevelPartition::LevelPartition(PartitionParams params, int n)
    : params_(std::move(params)) {
  params_.validate();
  if (n < 0) throw std::invalid_argument("vertex count must be nonnegative");
  base_.assign(n, params_.K);
  inc_.resize(n);
  raised_count_.assign(n, 0);
  wsum_.assign(n, Rational(0));
}

bool LevelPartition::raised(int v, Edge e) const {
  return inc_.at(v).raised.at(e.other(v)) != 0;
}

int LevelPartition::shadow(int v, Edge e) const {
  return base_.at(v) + (raised(v, e) ? 1 : 0);
}

int LevelPartition::true_level(Edge e) const {
  return std::max(shadow(e.u, e), shadow(e.v, e));
}

int LevelPartition::edge_level(Edge e) const {
  auto it = stored_level_.find(e);
  if (it == stored_level_.end())
    throw MissingEdge("edge " + to_string(e) + " not present");
  return it->second;
}

Rational LevelPartition::weight(Edge e) const {
  return pow_rational(params_.beta, -static_cast<long>(edge_level(e)));
}

std::map<Edge, Rational> LevelPartition::weights() const {
  std::map<Edge, Rational> out;
  for (const auto& [e, lvl] : stored_level_)
    out.emplace(e, pow_rational(params_.beta, -static_cast<long>(lvl)));
  return out;
}

void LevelPartition::set_stored_level(Edge e, int lvl, DeltaLog& log) {
  int& cur = stored_level_.at(e);
  if (cur == lvl) return;
  Rational old_w = pow_rational(params_.beta, -static_cast<long>(cur));
  Rational new_w = pow_rational(params_.beta, -static_cast<long>(lvl));
  wsum_[e.u] += new_w - old_w;
  wsum_[e.v] += new_w - old_w;
  log.record(e, old_w, new_w);
  cur = lvl;
}

bool LevelPartition::dirty_up(int v) const { return wsum_[v] >= 1; }

bool LevelPartition::dirty_down(int v) const {
  return base_[v] > params_.K && wsum_[v] < params_.f();
}

void LevelPartition::refresh_dirty(std::set<int>& dirty, int v) const {
  if (dirty_up(v) || dirty_down(v))
    dirty.insert(v);
  else
    dirty.erase(v);
}

void LevelPartition::raise_one(int v, std::set<int>& dirty, DeltaLog& log) {
  auto& side = inc_[v];
  if (raised_count_[v] == static_cast<int>(side.raised.size())) {
    // Every incident shadow already sits one above the level: the relabel is
    // a pure renaming, no weight moves.
    if (base_[v] + 1 > params_.L)
      throw InvariantViolation("relabel above top level at vertex " +
                               std::to_string(v));
    base_[v] += 1;
    for (auto& [nbr, bit] : side.raised) bit = 0;
    raised_count_[v] = 0;
    refresh_dirty(dirty, v);
    return;
  }
  int pick = -1, fallback = -1;
  for (auto& [nbr, bit] : side.raised) {
    if (bit) continue;
    if (shadow(nbr, Edge(v, nbr)) <= base_[v]) {
      pick = nbr;  // raising actually shrinks the weight
      break;
    }
    if (fallback == -1) fallback = nbr;
  }
  if (pick == -1) pick = fallback;
  Edge e(v, pick);
  side.raised[pick] = 1;
  ++raised_count_[v];
  set_stored_level(e, true_level(e), log);
  refresh_dirty(dirty, v);
  refresh_dirty(dirty, pick);
}

void LevelPartition::unraise_one(int v, std::set<int>& dirty, DeltaLog& log) {
  auto& side = inc_[v];
  if (raised_count_[v] == 0) {
    // dirty_down guarantees base_[v] > K, so there is room below.
    base_[v] -= 1;
    for (auto& [nbr, bit] : side.raised) bit = 1;
    raised_count_[v] = static_cast<int>(side.raised.size());
    refresh_dirty(dirty, v);
    return;
  }
  int pick = -1, fallback = -1;
  for (auto& [nbr, bit] : side.raised) {
    if (!bit) continue;
    if (shadow(nbr, Edge(v, nbr)) <= base_[v]) {
      pick = nbr;  // dropping the shadow actually grows the weight
      break;
    }
    if (fallback == -1) fallback = nbr;
  }
  if (pick == -1) pick = fallback;
  Edge e(v, pick);
  side.raised[pick] = 0;
  --raised_count_[v];
  set_stored_level(e, true_level(e), log);
  refresh_dirty(dirty, v);
  refresh_dirty(dirty, pick);
}

void LevelPartition::repair(std::set<int>& dirty, DeltaLog& log) {
  const uint64_t budget = 4ull * static_cast<uint64_t>(std::max(n(), 1)) *
                          static_cast<uint64_t>(std::max(params_.L, 1));
  uint64_t moves = 0;
  while (!dirty.empty()) {
    if (++moves > budget)
      throw InvariantViolation("repair exceeded the move guard of " +
                               std::to_string(budget) + " moves");
    int v = *dirty.begin();
    if (dirty_up(v)) {
      raise_one(v, dirty, log);
    } else if (dirty_down(v)) {
      unraise_one(v, dirty, log);
    } else {
      dirty.erase(v);  // stale entry
      --moves;
    }
  }
  last_moves_ = moves;
  total_moves_ += moves;
}

std::vector<WeightDelta> LevelPartition::insert_edge(Edge e) {
  if (e.u < 0 || e.v >= n())
    throw InvalidVertex("vertex out of range on edge " + to_string(e));
  if (e.u == e.v) throw SelfLoop("self loop at vertex " + std::to_string(e.u));
  if (has_edge(e)) throw DuplicateEdge("edge " + to_string(e) + " already present");
  DeltaLog log;
  inc_[e.u].raised[e.v] = 0;
  inc_[e.v].raised[e.u] = 0;
  int lvl = std::max(base_[e.u], base_[e.v]);
  stored_level_.emplace(e, lvl);
  Rational w = pow_rational(params_.beta, -static_cast<long>(lvl));
  wsum_[e.u] += w;
  wsum_[e.v] += w;
  log.record(e, Rational(0), w);
  std::set<int> dirty;
  refresh_dirty(dirty, e.u);
  refresh_dirty(dirty, e.v);
  repair(dirty, log);
  return log.finalize();
}

std::vector<WeightDelta> LevelPartition::delete_edge(Edge e) {
  if (!has_edge(e)) throw MissingEdge("edge " + to_string(e) + " not present");
  DeltaLog log;
  Rational w = weight(e);
  log.record(e, w, Rational(0));
  wsum_[e.u] -= w;
  wsum_[e.v] -= w;
  if (raised(e.u, e)) --raised_count_[e.u];
  if (raised(e.v, e)) --raised_count_[e.v];
  inc_[e.u].raised.erase(e.v);
  inc_[e.v].raised.erase(e.u);
  stored_level_.erase(e);
  std::set<int> dirty;
  refresh_dirty(dirty, e.u);
  refresh_dirty(dirty, e.v);
  repair(dirty, log);
  return log.finalize();
}

void LevelPartition::corrupt_edge_level_for_test(Edge e, int forced_level) {
  Rational old_w = weight(e);
  Rational new_w = pow_rational(params_.beta, -static_cast<long>(forced_level));
  stored_level_.at(e) = forced_level;
  wsum_[e.u] += new_w - old_w;
  wsum_[e.v] += new_w - old_w;
}

void LevelPartition::force_vertex_level_for_test(int v, int forced_level) {
  base_.at(v) = forced_level;
  for (auto& [nbr, bit] : inc_[v].raised) {
    (void)nbr;
    bit = 0;
  }
  raised_count_[v] = 0;
  for (const auto& [nbr, bit] : inc_[v].raised) {
    (void)bit;
    Edge e(v, nbr);
    stored_level_.at(e) = true_level(e);
  }
  // levels moved without deltas: rebuild every cached total
  std::fill(wsum_.begin(), wsum_.end(), Rational(0));
  for (const auto& [e, lvl] : stored_level_) {
    Rational w = pow_rational(params_.beta, -static_cast<long>(lvl));
    wsum_[e.u] += w;
    wsum_[e.v] += w;
  }
}

bool check_nice_partition(const LevelPartition& p, const DynamicGraph& g,
                          std::string* diagnostic) {
  auto fail = [&](const std::string& msg) {
    if (diagnostic) *diagnostic = msg;
    return false;
  };
  if (p.n() != g.n()) return fail("vertex count mismatch");
  if (p.m() != g.m()) return fail("edge set mismatch: sizes differ");
  for (const Edge& e : g.edges())
    if (!p.has_edge(e)) return fail("edge set mismatch: missing " + to_string(e));

  for (int v = 0; v < p.n(); ++v) {
    if (p.level(v) < p.params().K || p.level(v) > p.params().L)
      return fail("level out of range [K,L] at vertex " + std::to_string(v));
    int lo = INT_MAX, hi = INT_MIN;
    for (const auto& [nbr, bit] : p.inc_[v].raised) {
      int s = p.base_[v] + (bit ? 1 : 0);
      if (s < p.level(v) - 1 || s > p.level(v) + 1)
        return fail("shadow out of range at vertex " + std::to_string(v) +
                    " edge " + to_string(Edge(v, nbr)));
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (hi > lo + 1)
      return fail("shadow spread exceeds 1 at vertex " + std::to_string(v));
  }

  // The stored exponent backing each weight must be the shadow maximum.
  for (const auto& [e, lvl] : p.stored_level_) {
    if (lvl != p.true_level(e))
      return fail("stored weight exponent off its shadows at edge " +
                  to_string(e) + ": stored " + std::to_string(lvl) +
                  ", shadows give " + std::to_string(p.true_level(e)));
  }

  std::vector<Rational> total(p.n(), Rational(0));
  for (const auto& [e, lvl] : p.stored_level_) {
    Rational w = pow_rational(p.params().beta, -static_cast<long>(lvl));
    total[e.u] += w;
    total[e.v] += w;
  }
  for (int v = 0; v < p.n(); ++v) {
    if (total[v] != p.wsum_[v])
      return fail("cached vertex weight drift at vertex " + std::to_string(v));
    // Strict feasibility everywhere.
    if (total[v] >= 1)
      return fail("vertex weight reached 1 at vertex " + std::to_string(v) +
                  ": W = " + format_rational(total[v]));
    // Vertices held above the floor must be nearly tight.
    if (p.level(v) > p.params().K && total[v] < p.params().f())
      return fail("underweight vertex above the floor: vertex " +
                  std::to_string(v) + " has W = " + format_rational(total[v]) +
                  " at level " + std::to_string(p.level(v)));
  }
  return true;
}

bool check_approx_maximal(const DynamicGraph& g,
                          const std::map<Edge, Rational>& w, const Rational& c,
                          const Rational& d) {
  if (c < 1 || d <= 0) throw std::invalid_argument("need c >= 1 and d > 0");
  std::vector<Rational> total(g.n(), Rational(0));
  std::vector<Rational> max_incident(g.n(), Rational(0));
  for (const Edge& e : g.edges()) {
    auto it = w.find(e);
    Rational we = it == w.end() ? Rational(0) : it->second;
    total[e.u] += we;
    total[e.v] += we;
    max_incident[e.u] = std::max(max_incident[e.u], we);
    max_incident[e.v] = std::max(max_incident[e.v], we);
  }
  for (int v = 0; v < g.n(); ++v)
    if (total[v] > 1)
      throw InfeasibleFractional("vertex " + std::to_string(v) +
                                 " carries weight " + format_rational(total[v]));
  Rational heavy = Rational(1) / d;
  Rational tight = Rational(1) / c;
  for (const Edge& e : g.edges()) {
    auto it = w.find(e);
    Rational we = it == w.end() ? Rational(0) : it->second;
    if (we >= heavy) continue;
    bool ok_u = total[e.u] >= tight && max_incident[e.u] <= heavy;
    bool ok_v = total[e.v] >= tight && max_incident[e.v] <= heavy;
    if (!ok_u && !ok_v) return false;
  }
  return true;
}

}  // namespace dynmatch
