#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "dispersim/errors.hpp"
#include "dispersim/runner.hpp"

// Exit codes: 0 success, 2 config/input error, 3 timeout, 4 monitor violation.
int main(int argc, char** argv) {
  CLI::App app{"Mobile-agent dispersion simulator and benchmark harness"};

  std::string algorithm = "svl";
  std::string family = "path";
  std::string graph_file;
  std::string sweep_file;
  std::string ids = "perm";
  std::string trace_path;
  std::string out_path;
  int n = 0;
  int k = 1;
  int l = 1;
  std::uint64_t seed = 0;
  std::int64_t max_steps = -1;
  double er_p = 0.0;
  bool no_monitors = false;

  app.add_option("--algorithm", algorithm, "simple-dfs | zombie | svl");
  app.add_option("--family", family, "path | ring | tree | grid | erdos-renyi | complete");
  app.add_option("--graph-file", graph_file, "load the graph from a file instead of generating");
  app.add_option("--n", n, "node count (generated families)");
  app.add_option("--k", k, "agent count");
  app.add_option("--l", l, "number of distinct start nodes");
  app.add_option("--seed", seed, "run seed (drives ports, placement and ids)");
  app.add_option("--ids", ids, "id scheme: perm (1..k) | poly (distinct in [1,k^2])");
  app.add_option("--max-steps", max_steps, "step cap override (default 64*m'*(floor(log2 l)+2))");
  app.add_option("--p", er_p, "erdos-renyi edge probability (default 2 ln n / n)");
  app.add_option("--trace", trace_path, "write a JSONL trace of every step");
  app.add_option("--out", out_path, "write the result (JSON or sweep CSV) to a file");
  app.add_option("--sweep", sweep_file, "run a sweep described by a JSON config file");
  app.add_flag("--no-monitors", no_monitors, "skip the standard invariant monitors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (!sweep_file.empty()) {
      const dispersim::SweepConfig cfg = dispersim::parse_sweep_config_file(sweep_file);
      const std::string csv = dispersim::sweep(cfg);
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream f(out_path);
        if (!f) dispersim::throw_error(dispersim::Errc::Io, "cannot open '" + out_path + "'");
        f << csv;
      }
      return 0;
    }

    dispersim::RunConfig cfg;
    cfg.algorithm = algorithm;
    if (!graph_file.empty()) {
      cfg.graph.family = dispersim::GraphFamily::File;
      cfg.graph.path = graph_file;
    } else {
      cfg.graph.family = dispersim::family_from_name(family);
      cfg.graph.n = n;
      cfg.graph.edge_probability = er_p;
    }
    cfg.k = k;
    cfg.l = l;
    cfg.id_scheme = ids;
    cfg.seed = seed;
    cfg.max_steps = max_steps;
    cfg.monitors = !no_monitors;
    cfg.trace_path = trace_path;
    cfg.out_path = out_path;

    const dispersim::RunOutcome outcome = dispersim::run_once(cfg);
    if (out_path.empty()) std::cout << outcome.result_json;
    return outcome.exit_code;
  } catch (const dispersim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
