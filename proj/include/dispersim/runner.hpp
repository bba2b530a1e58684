#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dispersim/engine.hpp"
#include "dispersim/port_graph.hpp"

namespace dispersim {

// Everything one experiment needs. The seed drives graph ports, placement
// and id assignment through independent derived sub-seeds, so a config is
// a complete, reproducible description of the run.
struct RunConfig {
  std::string algorithm = "svl";
  GraphSpec graph;
  std::int32_t k = 1;
  std::int32_t l = 1;
  std::string id_scheme = "perm";
  std::uint64_t seed = 0;
  std::int64_t max_steps = -1;  // -1: 64 * m' * (floor(log2 l) + 2), min 1000
  bool monitors = true;
  std::string trace_path;  // empty: no trace
  std::string out_path;    // empty: caller prints
};

struct RunOutcome {
  RunResult result;
  std::string result_json;
  int exit_code = 0;  // 0 ok, 3 timeout, 4 monitor violation
};

// 3 on timeout, else 4 on any failed verdict, else 0. Config errors throw
// before a result exists and map to exit code 2 at the CLI boundary.
int run_exit_code(const RunResult& r);

// Builds graph, placement and ids, runs with the standard monitors (unless
// disabled), serializes the RunResult and optionally writes files.
RunOutcome run_once(const RunConfig& cfg);

// Same run with the per-step trace streamed to `path`.
RunOutcome emit_trace(RunConfig cfg, const std::string& path);

// Cross product of run dimensions; cell (and repetition) seeds are derived
// from the base seed, so the whole sweep is reproducible from this struct.
struct SweepConfig {
  std::vector<std::string> algorithms;
  std::vector<std::string> families;
  std::vector<std::int32_t> n;
  std::vector<std::int32_t> k;
  std::vector<std::int32_t> l;
  std::int32_t reps = 1;
  std::uint64_t base_seed = 0;
  std::string id_scheme = "perm";
  std::int64_t max_steps = -1;
  double er_p = 0.0;
  std::int64_t max_cells = 10000;
};

SweepConfig parse_sweep_config(std::istream& in);
SweepConfig parse_sweep_config_file(const std::string& path);

// One CSV row per run; failed cells carry a status field and the sweep
// continues. Final comment line reports the suite-max bound ratio.
std::string sweep(const SweepConfig& cfg);

}  // namespace dispersim
