#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynmatch/engine.hpp"
#include "dynmatch/mwm.hpp"
#include "dynmatch/oracles.hpp"

namespace dynmatch {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& what);
};

struct PreconditionError : std::runtime_error {
  int line;
  PreconditionError(int line_no, const std::string& what);
};

struct UnknownKind : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class OpKind { Insert, Delete, Query };

struct StreamOp {
  OpKind kind = OpKind::Query;
  int u = 0;
  int v = 0;
  Rational w;  // weighted inserts only
  int line = 0;
};

struct StreamHeader {
  int n = 0;
  bool weighted = false;
  Rational epsilon = Rational(1, 2);
  uint64_t seed = 0;
  std::optional<int64_t> d_override;
  int floor_level = 20;  // header key `k`
};

struct UpdateStream {
  StreamHeader header;
  std::vector<StreamOp> ops;
};

// Text format: `# key=value` headers (n, weighted, epsilon, seed,
// d_override, k), then one op per line: `+ u v [w]`, `- u v`, `?`.
UpdateStream parse_stream(std::istream& in);
UpdateStream load_stream(const std::string& path);
void write_stream(const UpdateStream& s, std::ostream& out);
void save_stream(const UpdateStream& s, const std::string& path);

struct GenParams {
  Rational epsilon = Rational(1, 2);
  std::optional<int64_t> d_override;
  int floor_level = 20;
  int window = 100;     // sliding-window only
  int query_every = 0;  // 0 = no query ops
};

// kinds: erdos-renyi-dynamic, sliding-window, bipartite-random,
// adversarial-star, weighted-geometric. Deterministic given (kind, n, steps,
// seed, params); throws UnknownKind otherwise.
UpdateStream generate_stream(const std::string& kind, int n, int steps,
                             uint64_t seed, const GenParams& params = {});

enum class OracleMode { Auto, Off, Exhaustive, Bipartite };

struct MetricsRecord {
  int step = 0;
  OpKind op = OpKind::Query;
  int weight_changes = 0;
  int kernel_added = 0;
  int kernel_removed = 0;
  uint64_t matcher_work = 0;
  int64_t wall_ns = 0;
  int matching_size = 0;
  std::optional<int64_t> oracle_mu;  // exact or 2x-greedy upper bound
  std::optional<double> ratio;       // oracle_mu / matching_size
  bool rebuilt = false;              // not serialized
};

struct RunConfig {
  // Overrides applied on top of the stream header.
  std::optional<Rational> epsilon;
  std::optional<uint64_t> seed;
  std::optional<int64_t> d_override;
  std::optional<int> floor_level;
  OracleMode oracle = OracleMode::Auto;
  // Runs every structural validator after every update (verify mode); a
  // failure aborts the run with a diagnostic.
  bool validate = false;
  // Serializes wall_ns as 0 so replays are byte-identical.
  bool deterministic_csv = false;
  std::ostream* csv = nullptr;
  bool keep_records = false;
  OracleLimits limits;
  // Called after every op of an unweighted run with the engine snapshot.
  std::function<void(const Engine&, const MetricsRecord&)> on_update;
};

struct RunSummary {
  int steps = 0;
  int inserts = 0;
  int deletes = 0;
  int queries = 0;
  int max_weight_changes = 0;
  double mean_weight_changes = 0;
  // mean weight changes / (beta^2 ln n): constant of the growth target.
  double c1_fit = 0;
  double mean_wall_ns = 0;
  int64_t max_wall_ns = 0;
  // ln(mean wall) / ln(ln n): crude exponent of the update-time shape.
  double time_exponent = 0;
  double worst_ratio = 0;
  int ratio_queries = 0;
  std::vector<MetricsRecord> records;  // filled when keep_records
};

RunSummary run_stream(const UpdateStream& s, const RunConfig& cfg);

std::string csv_header();
std::string csv_row(const MetricsRecord& r, bool deterministic_wall);
void print_summary(const RunSummary& s, std::ostream& out);

// Throws std::runtime_error naming the violated property when any structural
// invariant fails on the engine's current state.
void validate_engine_state(const Engine& eng);

}  // namespace dynmatch
