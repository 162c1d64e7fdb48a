#include "dynmatch/stream.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "dynmatch/rng.hpp"

namespace dynmatch {

namespace {

std::string with_line(int line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

}  // namespace

ParseError::ParseError(int line_no, const std::string& what)
    : std::runtime_error(with_line(line_no, what)), line(line_no) {}

PreconditionError::PreconditionError(int line_no, const std::string& what)
    : std::runtime_error(with_line(line_no, what)), line(line_no) {}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& s, int line_no, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "bad " + what + " value: " + s);
  }
}

uint64_t parse_u64(const std::string& s, int line_no, const std::string& what) {
  try {
    size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size() || s[0] == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "bad " + what + " value: " + s);
  }
}

void apply_header(StreamHeader& h, const std::string& key,
                  const std::string& value, int line_no, bool& have_n) {
  if (key == "n") {
    h.n = parse_int(value, line_no, "n");
    if (h.n < 0) throw ParseError(line_no, "n must be non-negative");
    have_n = true;
  } else if (key == "weighted") {
    if (value == "0") {
      h.weighted = false;
    } else if (value == "1") {
      h.weighted = true;
    } else {
      throw ParseError(line_no, "weighted must be 0 or 1, got " + value);
    }
  } else if (key == "epsilon") {
    try {
      h.epsilon = parse_rational(value);
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad epsilon value: " + value);
    }
    if (h.epsilon <= 0) throw ParseError(line_no, "epsilon must be positive");
  } else if (key == "seed") {
    h.seed = parse_u64(value, line_no, "seed");
  } else if (key == "d_override") {
    try {
      size_t pos = 0;
      h.d_override = std::stoll(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad d_override value: " + value);
    }
  } else if (key == "k") {
    h.floor_level = parse_int(value, line_no, "k");
  } else {
    throw ParseError(line_no, "unknown header key: " + key);
  }
}

}  // namespace

UpdateStream parse_stream(std::istream& in) {
  UpdateStream s;
  bool have_n = false;
  bool ops_started = false;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string rest = trim(line.substr(1));
      size_t eq = rest.find('=');
      if (eq == std::string::npos) continue;  // plain comment
      if (ops_started) throw ParseError(line_no, "header line after ops");
      apply_header(s.header, trim(rest.substr(0, eq)),
                   trim(rest.substr(eq + 1)), line_no, have_n);
      continue;
    }
    ops_started = true;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    StreamOp op;
    op.line = line_no;
    std::string extra;
    if (tok == "+") {
      op.kind = OpKind::Insert;
      if (!(ss >> op.u >> op.v)) {
        throw ParseError(line_no, "insert needs two vertex ids");
      }
      if (s.header.weighted) {
        std::string wtok;
        if (!(ss >> wtok)) {
          throw ParseError(line_no, "weighted insert needs a weight");
        }
        try {
          op.w = parse_rational(wtok);
        } catch (const std::exception&) {
          throw ParseError(line_no, "bad weight value: " + wtok);
        }
      }
      if (ss >> extra) throw ParseError(line_no, "trailing token: " + extra);
    } else if (tok == "-") {
      op.kind = OpKind::Delete;
      if (!(ss >> op.u >> op.v)) {
        throw ParseError(line_no, "delete needs two vertex ids");
      }
      if (ss >> extra) throw ParseError(line_no, "trailing token: " + extra);
    } else if (tok == "?") {
      op.kind = OpKind::Query;
      if (ss >> extra) throw ParseError(line_no, "trailing token: " + extra);
    } else {
      throw ParseError(line_no, "unknown op: " + tok);
    }
    s.ops.push_back(op);
  }
  if (!have_n) throw ParseError(0, "missing required header: n");
  return s;
}

UpdateStream load_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream file: " + path);
  return parse_stream(in);
}

void write_stream(const UpdateStream& s, std::ostream& out) {
  const StreamHeader& h = s.header;
  out << "# n=" << h.n << "\n";
  out << "# weighted=" << (h.weighted ? 1 : 0) << "\n";
  out << "# epsilon=" << format_rational(h.epsilon) << "\n";
  out << "# seed=" << h.seed << "\n";
  if (h.d_override) out << "# d_override=" << *h.d_override << "\n";
  out << "# k=" << h.floor_level << "\n";
  for (const StreamOp& op : s.ops) {
    switch (op.kind) {
      case OpKind::Insert:
        out << "+ " << op.u << " " << op.v;
        if (h.weighted) out << " " << format_rational(op.w);
        out << "\n";
        break;
      case OpKind::Delete:
        out << "- " << op.u << " " << op.v << "\n";
        break;
      case OpKind::Query:
        out << "?\n";
        break;
    }
  }
}

void save_stream(const UpdateStream& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_stream(s, out);
}

namespace {

StreamHeader make_header(int n, bool weighted, uint64_t seed,
                         const GenParams& p) {
  StreamHeader h;
  h.n = n;
  h.weighted = weighted;
  h.epsilon = p.epsilon;
  h.seed = seed;
  h.d_override = p.d_override;
  h.floor_level = p.floor_level;
  return h;
}

// Random insert/delete mix: ~60% inserts while room remains, uniform deletes
// otherwise. `bipartite` restricts pairs to cross the [0,n/2) boundary;
// `weighted` attaches powers of 3/2 spanning eight classes at epsilon = 1/2.
UpdateStream gen_dynamic(int n, int steps, uint64_t seed, const GenParams& p,
                         bool bipartite, bool weighted, uint64_t tag) {
  UpdateStream s;
  s.header = make_header(n, weighted, seed, p);
  rng::Sequence seq(rng::mix(seed, {tag, static_cast<uint64_t>(n)}));
  std::set<std::pair<int, int>> present;
  std::vector<std::pair<int, int>> live;
  int left = n / 2;
  auto draw_pair = [&]() -> std::optional<std::pair<int, int>> {
    for (int t = 0; t < 64; ++t) {
      int u, v;
      if (bipartite) {
        if (left < 1 || n - left < 1) return std::nullopt;
        u = static_cast<int>(seq.below(left));
        v = left + static_cast<int>(seq.below(n - left));
      } else {
        if (n < 2) return std::nullopt;
        u = static_cast<int>(seq.below(n));
        v = static_cast<int>(seq.below(n));
      }
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (present.count({u, v})) continue;
      return std::make_pair(u, v);
    }
    return std::nullopt;
  };
  for (int i = 1; i <= steps; ++i) {
    if (p.query_every > 0 && i % p.query_every == 0) {
      s.ops.push_back({OpKind::Query, 0, 0, Rational(), 0});
      continue;
    }
    bool insert = live.empty() || seq.below(100) < 60;
    std::optional<std::pair<int, int>> pr;
    if (insert) {
      pr = draw_pair();
      if (!pr) insert = false;
    }
    if (insert) {
      StreamOp op{OpKind::Insert, pr->first, pr->second, Rational(), 0};
      if (weighted) {
        op.w = pow_rational(Rational(3, 2), static_cast<long>(seq.below(8)));
      }
      present.insert(*pr);
      live.push_back(*pr);
      s.ops.push_back(op);
    } else if (!live.empty()) {
      size_t idx = seq.below(live.size());
      auto gone = live[idx];
      live[idx] = live.back();
      live.pop_back();
      present.erase(gone);
      s.ops.push_back({OpKind::Delete, gone.first, gone.second, Rational(), 0});
    } else {
      s.ops.push_back({OpKind::Query, 0, 0, Rational(), 0});
    }
  }
  return s;
}

// Keeps at most `window` live edges; once full, each new arrival is preceded
// by deleting the oldest live edge.
UpdateStream gen_sliding_window(int n, int steps, uint64_t seed,
                                const GenParams& p) {
  UpdateStream s;
  s.header = make_header(n, false, seed, p);
  rng::Sequence seq(rng::mix(seed, {2, static_cast<uint64_t>(n)}));
  std::set<std::pair<int, int>> present;
  std::deque<std::pair<int, int>> order;
  int window = std::max(p.window, 1);
  auto draw_pair = [&]() -> std::optional<std::pair<int, int>> {
    if (n < 2) return std::nullopt;
    for (int t = 0; t < 64; ++t) {
      int u = static_cast<int>(seq.below(n));
      int v = static_cast<int>(seq.below(n));
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (present.count({u, v})) continue;
      return std::make_pair(u, v);
    }
    return std::nullopt;
  };
  for (int i = 1; i <= steps; ++i) {
    if (p.query_every > 0 && i % p.query_every == 0) {
      s.ops.push_back({OpKind::Query, 0, 0, Rational(), 0});
      continue;
    }
    if (static_cast<int>(order.size()) >= window) {
      auto oldest = order.front();
      order.pop_front();
      present.erase(oldest);
      s.ops.push_back(
          {OpKind::Delete, oldest.first, oldest.second, Rational(), 0});
      continue;
    }
    auto pr = draw_pair();
    if (pr) {
      present.insert(*pr);
      order.push_back(*pr);
      s.ops.push_back({OpKind::Insert, pr->first, pr->second, Rational(), 0});
    } else if (!order.empty()) {
      auto oldest = order.front();
      order.pop_front();
      present.erase(oldest);
      s.ops.push_back(
          {OpKind::Delete, oldest.first, oldest.second, Rational(), 0});
    } else {
      s.ops.push_back({OpKind::Query, 0, 0, Rational(), 0});
    }
  }
  return s;
}

// Fills a star around vertex 0 leaf by leaf, then drains it oldest-first,
// repeatedly; hammers the level repairs and allow-list promotions at the hub.
UpdateStream gen_adversarial_star(int n, int steps, uint64_t seed,
                                  const GenParams& p) {
  UpdateStream s;
  s.header = make_header(n, false, seed, p);
  bool filling = true;
  int leaf = 1;
  for (int i = 1; i <= steps; ++i) {
    if (p.query_every > 0 && i % p.query_every == 0) {
      s.ops.push_back({OpKind::Query, 0, 0, Rational(), 0});
      continue;
    }
    if (n < 2) {
      s.ops.push_back({OpKind::Query, 0, 0, Rational(), 0});
      continue;
    }
    s.ops.push_back({filling ? OpKind::Insert : OpKind::Delete, 0, leaf,
                     Rational(), 0});
    ++leaf;
    if (leaf == n) {
      leaf = 1;
      filling = !filling;
    }
  }
  return s;
}

}  // namespace

UpdateStream generate_stream(const std::string& kind, int n, int steps,
                             uint64_t seed, const GenParams& params) {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  if (kind == "erdos-renyi-dynamic") {
    return gen_dynamic(n, steps, seed, params, false, false, 1);
  }
  if (kind == "sliding-window") {
    return gen_sliding_window(n, steps, seed, params);
  }
  if (kind == "bipartite-random") {
    return gen_dynamic(n, steps, seed, params, true, false, 3);
  }
  if (kind == "adversarial-star") {
    return gen_adversarial_star(n, steps, seed, params);
  }
  if (kind == "weighted-geometric") {
    return gen_dynamic(n, steps, seed, params, false, true, 5);
  }
  throw UnknownKind("unknown stream kind: " + kind);
}

void validate_engine_state(const Engine& eng) {
  std::string diag;
  if (!check_nice_partition(eng.partition(), eng.graph(), &diag)) {
    throw std::runtime_error("level partition check failed: " + diag);
  }
  if (!check_approx_maximal(eng.graph(), eng.partition().weights(),
                            eng.maximality().c, eng.maximality().d)) {
    throw std::runtime_error("approximate-maximality check failed");
  }
  KernelReport kr = check_kernel(eng.graph(), eng.kernel(),
                                 eng.maximality().c, eng.effective_d(),
                                 eng.config().epsilon);
  if (!kr.degrees_ok()) {
    throw std::runtime_error("kernel degree cap violated at vertex " +
                             std::to_string(kr.overfull.front()));
  }
  const Matching& m = eng.current_matching();
  if (!matching_is_valid(eng.graph(), m)) {
    throw std::runtime_error("matching is not valid in the graph");
  }
  for (const Edge& e : m.edges()) {
    if (!eng.kernel().in_kernel(e)) {
      throw std::runtime_error("matched edge " + to_string(e) +
                               " is outside the kernel");
    }
  }
}

std::string csv_header() {
  return "step,op,C,kernel_added,kernel_removed,matcher_work,wall_ns,"
         "matching_size,oracle_mu,ratio\n";
}

namespace {

char op_char(OpKind k) {
  switch (k) {
    case OpKind::Insert:
      return '+';
    case OpKind::Delete:
      return '-';
    case OpKind::Query:
      return '?';
  }
  return '?';
}

std::string format_ratio(double r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", r);
  return buf;
}

}  // namespace

std::string csv_row(const MetricsRecord& r, bool deterministic_wall) {
  std::ostringstream out;
  out << r.step << ',' << op_char(r.op) << ',' << r.weight_changes << ','
      << r.kernel_added << ',' << r.kernel_removed << ',' << r.matcher_work
      << ',' << (deterministic_wall ? 0 : r.wall_ns) << ',' << r.matching_size
      << ',';
  if (r.oracle_mu) out << *r.oracle_mu;
  out << ',';
  if (r.ratio) out << format_ratio(*r.ratio);
  out << '\n';
  return out.str();
}

namespace {

struct EffectiveConfig {
  int n = 0;
  Rational epsilon;
  uint64_t seed = 0;
  std::optional<int64_t> d_override;
  int floor_level = 20;
};

EffectiveConfig effective_config(const StreamHeader& h, const RunConfig& cfg) {
  EffectiveConfig e;
  e.n = h.n;
  e.epsilon = cfg.epsilon ? *cfg.epsilon : h.epsilon;
  e.seed = cfg.seed ? *cfg.seed : h.seed;
  e.d_override = cfg.d_override ? cfg.d_override : h.d_override;
  e.floor_level = cfg.floor_level ? *cfg.floor_level : h.floor_level;
  return e;
}

std::optional<int64_t> query_oracle(const DynamicGraph& g, OracleMode mode,
                                    const OracleLimits& limits) {
  switch (mode) {
    case OracleMode::Off:
      return std::nullopt;
    case OracleMode::Bipartite:
      return max_matching_bipartite(g, limits);
    case OracleMode::Exhaustive:
      return max_matching_exhaustive(g, limits);
    case OracleMode::Auto:
      break;
  }
  if (g.n() <= limits.max_n_bipartite && is_bipartite(g)) {
    return max_matching_bipartite(g, limits);
  }
  if (g.m() <= limits.max_edges_exhaustive) {
    return max_matching_exhaustive(g, limits);
  }
  // Upper bound: a maximal matching is at least half of a maximum one, so the
  // reported ratio is conservative.
  return 2 * static_cast<int64_t>(greedy_maximal_matching(g));
}

void fill_ratio(MetricsRecord& rec) {
  if (!rec.oracle_mu) return;
  if (rec.matching_size > 0) {
    rec.ratio = static_cast<double>(*rec.oracle_mu) / rec.matching_size;
  } else if (*rec.oracle_mu == 0) {
    rec.ratio = 1.0;
  } else {
    rec.ratio = std::numeric_limits<double>::infinity();
  }
}

struct SummaryAccumulator {
  RunSummary sum;
  double total_c = 0;
  double total_wall = 0;

  void fold(const MetricsRecord& rec, bool keep) {
    ++sum.steps;
    switch (rec.op) {
      case OpKind::Insert:
        ++sum.inserts;
        break;
      case OpKind::Delete:
        ++sum.deletes;
        break;
      case OpKind::Query:
        ++sum.queries;
        break;
    }
    sum.max_weight_changes = std::max(sum.max_weight_changes,
                                      rec.weight_changes);
    total_c += rec.weight_changes;
    total_wall += static_cast<double>(rec.wall_ns);
    sum.max_wall_ns = std::max(sum.max_wall_ns, rec.wall_ns);
    if (rec.ratio) {
      ++sum.ratio_queries;
      if (std::isfinite(*rec.ratio)) {
        sum.worst_ratio = std::max(sum.worst_ratio, *rec.ratio);
      } else {
        sum.worst_ratio = std::numeric_limits<double>::infinity();
      }
    }
    if (keep) sum.records.push_back(rec);
  }

  RunSummary finish(const Rational& beta, int n) {
    int updates = sum.inserts + sum.deletes;
    if (updates > 0) sum.mean_weight_changes = total_c / updates;
    if (sum.steps > 0) sum.mean_wall_ns = total_wall / sum.steps;
    double logn = std::log(std::max(n, 2));
    double b = to_double(beta);
    if (b > 0 && logn > 0) {
      sum.c1_fit = sum.mean_weight_changes / (b * b * logn);
    }
    if (sum.mean_wall_ns > 1 && logn > 1) {
      sum.time_exponent = std::log(sum.mean_wall_ns) / std::log(logn);
    }
    return sum;
  }
};

int64_t elapsed_ns(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

RunSummary run_unweighted(const UpdateStream& s, const RunConfig& cfg,
                          const EffectiveConfig& eff) {
  EngineConfig ec;
  ec.n = eff.n;
  ec.epsilon = eff.epsilon;
  ec.seed = eff.seed;
  ec.d_override = eff.d_override;
  ec.floor_level = eff.floor_level;
  Engine eng(ec);

  if (cfg.csv) *cfg.csv << csv_header();
  SummaryAccumulator acc;
  int step = 0;
  for (const StreamOp& op : s.ops) {
    MetricsRecord rec;
    rec.step = ++step;
    rec.op = op.kind;
    if (op.kind == OpKind::Query) {
      auto t0 = std::chrono::steady_clock::now();
      rec.matching_size = eng.current_matching().size();
      rec.oracle_mu = query_oracle(eng.graph(), cfg.oracle, cfg.limits);
      fill_ratio(rec);
      rec.wall_ns = elapsed_ns(t0);
    } else {
      UpdateReport rep;
      try {
        rep = op.kind == OpKind::Insert ? eng.insert_edge(Edge(op.u, op.v))
                                        : eng.delete_edge(Edge(op.u, op.v));
      } catch (const std::invalid_argument& ex) {
        throw PreconditionError(op.line, ex.what());
      }
      rec.weight_changes = rep.weight_changes;
      rec.kernel_added = rep.kernel_added;
      rec.kernel_removed = rep.kernel_removed;
      rec.matcher_work = rep.matcher_work;
      rec.wall_ns = rep.wall_ns;
      rec.matching_size = rep.matching_size;
      rec.rebuilt = rep.rebuilt;
    }
    if (cfg.validate) {
      try {
        validate_engine_state(eng);
      } catch (const std::exception& ex) {
        throw std::runtime_error("validation failed at step " +
                                 std::to_string(rec.step) + " (line " +
                                 std::to_string(op.line) + "): " + ex.what());
      }
    }
    if (cfg.on_update) cfg.on_update(eng, rec);
    if (cfg.csv) *cfg.csv << csv_row(rec, cfg.deterministic_csv);
    acc.fold(rec, cfg.keep_records);
  }
  return acc.finish(eng.params().beta, eff.n);
}

RunSummary run_weighted(const UpdateStream& s, const RunConfig& cfg,
                        const EffectiveConfig& eff) {
  MwmEngine mwm(eff.n, eff.epsilon, eff.seed, eff.d_override, eff.floor_level);

  if (cfg.csv) *cfg.csv << csv_header();
  SummaryAccumulator acc;
  int step = 0;
  for (const StreamOp& op : s.ops) {
    MetricsRecord rec;
    rec.step = ++step;
    rec.op = op.kind;
    auto t0 = std::chrono::steady_clock::now();
    if (op.kind == OpKind::Query) {
      mwm.rebalance();
    } else {
      UpdateReport rep;
      try {
        rep = op.kind == OpKind::Insert
                  ? mwm.insert_edge(Edge(op.u, op.v), op.w)
                  : mwm.delete_edge(Edge(op.u, op.v));
      } catch (const std::invalid_argument& ex) {
        throw PreconditionError(op.line, ex.what());
      }
      rec.weight_changes = rep.weight_changes;
      rec.kernel_added = rep.kernel_added;
      rec.kernel_removed = rep.kernel_removed;
      rec.matcher_work = rep.matcher_work;
      rec.rebuilt = rep.rebuilt;
    }
    rec.matching_size = mwm.current_matching().first.size();
    rec.wall_ns = elapsed_ns(t0);
    if (cfg.validate) {
      for (const auto& [cls, ce] : mwm.class_engines()) {
        try {
          validate_engine_state(ce);
        } catch (const std::exception& ex) {
          throw std::runtime_error(
              "validation failed at step " + std::to_string(rec.step) +
              " (line " + std::to_string(op.line) + ", class " +
              std::to_string(cls) + "): " + ex.what());
        }
      }
    }
    if (cfg.csv) *cfg.csv << csv_row(rec, cfg.deterministic_csv);
    acc.fold(rec, cfg.keep_records);
  }
  Rational beta = Rational(3) / eff.epsilon;
  return acc.finish(beta, eff.n);
}

}  // namespace

RunSummary run_stream(const UpdateStream& s, const RunConfig& cfg) {
  EffectiveConfig eff = effective_config(s.header, cfg);
  if (s.header.weighted) return run_weighted(s, cfg, eff);
  return run_unweighted(s, cfg, eff);
}

void print_summary(const RunSummary& s, std::ostream& out) {
  char buf[128];
  out << "steps: " << s.steps << "\n";
  out << "inserts: " << s.inserts << "\n";
  out << "deletes: " << s.deletes << "\n";
  out << "queries: " << s.queries << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", s.mean_weight_changes);
  out << "mean_C: " << buf << "\n";
  out << "max_C: " << s.max_weight_changes << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", s.c1_fit);
  out << "c1_fit: " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.1f", s.mean_wall_ns);
  out << "mean_wall_ns: " << buf << "\n";
  out << "max_wall_ns: " << s.max_wall_ns << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", s.time_exponent);
  out << "time_exponent: " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", s.worst_ratio);
  out << "worst_ratio: " << buf << "\n";
  out << "ratio_queries: " << s.ratio_queries << "\n";
}

}  // namespace dynmatch
