#include "dynmatch/engine.hpp"

#include <chrono>
#include <stdexcept>

namespace dynmatch {

namespace {

PartitionParams make_params(const EngineConfig& cfg) {
  return PartitionParams::from_epsilon(cfg.epsilon, cfg.n, cfg.floor_level);
}

Rational pick_density(const EngineConfig& cfg, const MaximalityParams& mp) {
  if (cfg.d_override) {
    if (*cfg.d_override <= 0) {
      throw std::invalid_argument("density override must be positive");
    }
    return Rational(*cfg.d_override);
  }
  return mp.d;
}

}  // namespace

Engine::Engine(const EngineConfig& cfg)
    : cfg_(cfg),
      params_(make_params(cfg)),
      maxim_(derive_cd(params_, cfg.n)),
      d_eff_(pick_density(cfg, maxim_)),
      g_(cfg.n),
      part_(params_, cfg.n),
      samp_(SamplerConfig{d_eff_, cfg.epsilon, cfg.seed}, cfg.n),
      match_(cfg.epsilon, cfg.n) {}

UpdateReport Engine::run_update(bool inserting, Edge e) {
  auto t0 = std::chrono::steady_clock::now();
  uint64_t work_before = match_.work();
  if (inserting) {
    g_.insert_edge(e);
  } else {
    g_.delete_edge(e);
  }
  std::vector<WeightDelta> deltas =
      inserting ? part_.insert_edge(e) : part_.delete_edge(e);
  KernelDelta kd = samp_.apply_weight_deltas(deltas);
  bool rebuilt = match_.apply(kd, samp_);
  auto t1 = std::chrono::steady_clock::now();

  UpdateReport rep;
  rep.weight_changes = static_cast<int>(deltas.size());
  rep.kernel_added = static_cast<int>(kd.added.size());
  rep.kernel_removed = static_cast<int>(kd.removed.size());
  rep.partition_moves = part_.last_update_moves();
  rep.matcher_work = match_.work() - work_before;
  rep.wall_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
  rep.matching_size = static_cast<int>(match_.current().size());
  rep.rebuilt = rebuilt;
  return rep;
}

UpdateReport Engine::insert_edge(Edge e) { return run_update(true, e); }

UpdateReport Engine::delete_edge(Edge e) { return run_update(false, e); }

}  // namespace dynmatch
