#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dynmatch/stream.hpp"

namespace {

struct RunFlags {
  std::string stream_path;
  std::string epsilon;
  std::optional<uint64_t> seed;
  std::optional<int64_t> d_override;
  std::optional<int> floor_level;
  std::string oracle = "auto";
  std::string csv_path;
  bool deterministic_csv = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("stream", f.stream_path, "update stream file")->required();
  cmd->add_option("--epsilon", f.epsilon,
                  "approximation parameter (rational, e.g. 1/2); overrides "
                  "the stream header");
  cmd->add_option("--seed", f.seed, "sampler seed; overrides the header");
  cmd->add_option("--d-override", f.d_override,
                  "use this sampling density instead of the derived one");
  cmd->add_option("--floor", f.floor_level,
                  "partition floor level; overrides the header's k");
  cmd->add_option("--oracle", f.oracle, "query-time oracle")
      ->check(CLI::IsMember({"auto", "off", "exhaustive", "bipartite"}));
  cmd->add_option("--csv", f.csv_path,
                  "write per-op metrics CSV here ('-' for stdout)");
  cmd->add_flag("--deterministic-csv", f.deterministic_csv,
                "serialize wall_ns as 0 so replays are byte-identical");
}

dynmatch::OracleMode parse_oracle(const std::string& s) {
  if (s == "off") return dynmatch::OracleMode::Off;
  if (s == "exhaustive") return dynmatch::OracleMode::Exhaustive;
  if (s == "bipartite") return dynmatch::OracleMode::Bipartite;
  return dynmatch::OracleMode::Auto;
}

int do_run(const RunFlags& f, bool validate) {
  dynmatch::UpdateStream stream = dynmatch::load_stream(f.stream_path);
  dynmatch::RunConfig cfg;
  if (!f.epsilon.empty()) cfg.epsilon = dynmatch::parse_rational(f.epsilon);
  cfg.seed = f.seed;
  cfg.d_override = f.d_override;
  cfg.floor_level = f.floor_level;
  cfg.oracle = parse_oracle(f.oracle);
  cfg.validate = validate;
  cfg.deterministic_csv = f.deterministic_csv;

  std::ofstream csv_file;
  if (!f.csv_path.empty()) {
    if (f.csv_path == "-") {
      cfg.csv = &std::cout;
    } else {
      csv_file.open(f.csv_path, std::ios::binary);
      if (!csv_file) {
        std::cerr << "cannot open csv output: " << f.csv_path << "\n";
        return 1;
      }
      cfg.csv = &csv_file;
    }
  }

  dynmatch::RunSummary summary = dynmatch::run_stream(stream, cfg);
  std::ostream& out = cfg.csv == &std::cout ? std::cerr : std::cout;
  dynmatch::print_summary(summary, out);
  if (validate) out << "validators: all passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fully-dynamic approximate matching engine"};
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run_cmd =
      app.add_subcommand("run", "replay an update stream and report metrics");
  add_run_flags(run_cmd, run_flags);

  RunFlags verify_flags;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "replay with every structural validator after each update");
  add_run_flags(verify_cmd, verify_flags);

  std::string gen_kind;
  std::string gen_out;
  int gen_n = 64;
  int gen_steps = 1000;
  uint64_t gen_seed = 0;
  std::string gen_epsilon = "1/2";
  std::optional<int64_t> gen_d_override;
  int gen_floor = 20;
  int gen_window = 100;
  int gen_query_every = 0;
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "write a deterministic update stream");
  gen_cmd->add_option("kind", gen_kind,
                      "erdos-renyi-dynamic | sliding-window | "
                      "bipartite-random | adversarial-star | "
                      "weighted-geometric")
      ->required();
  gen_cmd->add_option("out", gen_out, "output stream path ('-' for stdout)")
      ->required();
  gen_cmd->add_option("--n", gen_n, "vertex count");
  gen_cmd->add_option("--steps", gen_steps, "number of ops");
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--epsilon", gen_epsilon, "header epsilon");
  gen_cmd->add_option("--d-override", gen_d_override, "header d_override");
  gen_cmd->add_option("--floor", gen_floor, "header k (partition floor)");
  gen_cmd->add_option("--window", gen_window, "sliding-window size");
  gen_cmd->add_option("--query-every", gen_query_every,
                      "emit a query every Q ops (0 = never)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) {
      dynmatch::GenParams params;
      params.epsilon = dynmatch::parse_rational(gen_epsilon);
      params.d_override = gen_d_override;
      params.floor_level = gen_floor;
      params.window = gen_window;
      params.query_every = gen_query_every;
      dynmatch::UpdateStream s =
          dynmatch::generate_stream(gen_kind, gen_n, gen_steps, gen_seed,
                                    params);
      if (gen_out == "-") {
        dynmatch::write_stream(s, std::cout);
      } else {
        dynmatch::save_stream(s, gen_out);
      }
      return 0;
    }
    if (run_cmd->parsed()) return do_run(run_flags, false);
    if (verify_cmd->parsed()) return do_run(verify_flags, true);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
