#include "dispersim/runner.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "dispersim/errors.hpp"
#include "dispersim/monitor.hpp"
#include "dispersim/rng.hpp"
#include "dispersim/rules.hpp"
#include "dispersim/trace.hpp"

namespace dispersim {

namespace {

void validate(const RunConfig& cfg) {
  if (cfg.k < 1) throw_error(Errc::InvalidParams, "k must be >= 1");
  if (cfg.l < 1 || cfg.l > cfg.k) throw_error(Errc::InvalidParams, "need 1 <= l <= k");
  if (cfg.algorithm == "simple-dfs" && cfg.l != 1)
    throw_error(Errc::InvalidParams, "simple-dfs assumes all agents start together (l = 1)");
  id_scheme_from_name(cfg.id_scheme);
}

PortGraph build_graph(const RunConfig& cfg) {
  GraphSpec spec = cfg.graph;
  if (spec.family != GraphFamily::File) spec.seed = mix_seed(cfg.seed, 1);
  return generate(spec);
}

}  // namespace

int run_exit_code(const RunResult& r) {
  if (r.timeout()) return 3;
  if (r.any_monitor_failed()) return 4;
  return 0;
}

RunOutcome run_once(const RunConfig& cfg) {
  validate(cfg);
  auto rule = make_rule(cfg.algorithm);
  const PortGraph g = build_graph(cfg);

  const Placement placement = place(g, cfg.k, cfg.l, mix_seed(cfg.seed, 2));
  const std::vector<AgentId> ids =
      make_agent_ids(cfg.k, id_scheme_from_name(cfg.id_scheme), mix_seed(cfg.seed, 3));
  const Configuration c0 = initial_configuration(g, placement, ids);

  const std::int64_t cap =
      cfg.max_steps >= 0 ? cfg.max_steps : default_max_steps(m_prime(g, cfg.k), cfg.l);

  MonitorSet monitors;
  if (cfg.monitors) monitors = standard_monitors(cfg.algorithm);

  std::unique_ptr<JsonlTraceSink> sink;
  if (!cfg.trace_path.empty()) sink = std::make_unique<JsonlTraceSink>(cfg.trace_path);

  RunOutcome out;
  out.result = run(g, c0, *rule, cap, cfg.monitors ? &monitors : nullptr, sink.get());
  out.result_json = run_result_json(out.result);
  out.exit_code = run_exit_code(out.result);

  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path);
    if (!f) throw_error(Errc::Io, "cannot open '" + cfg.out_path + "' for writing");
    f << out.result_json;
  }
  return out;
}

RunOutcome emit_trace(RunConfig cfg, const std::string& path) {
  cfg.trace_path = path;
  return run_once(cfg);
}

SweepConfig parse_sweep_config(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw_error(Errc::ParseError, std::string("bad sweep config: ") + e.what());
  }
  SweepConfig cfg;
  try {
    cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
    cfg.families = j.at("families").get<std::vector<std::string>>();
    cfg.n = j.at("n").get<std::vector<std::int32_t>>();
    cfg.k = j.at("k").get<std::vector<std::int32_t>>();
    cfg.l = j.at("l").get<std::vector<std::int32_t>>();
    cfg.reps = j.value("reps", 1);
    cfg.base_seed = j.value("base_seed", std::uint64_t{0});
    cfg.id_scheme = j.value("id_scheme", std::string("perm"));
    cfg.max_steps = j.value("max_steps", std::int64_t{-1});
    cfg.er_p = j.value("er_p", 0.0);
    cfg.max_cells = j.value("max_cells", std::int64_t{10000});
  } catch (const nlohmann::json::exception& e) {
    throw_error(Errc::ParseError, std::string("sweep config field: ") + e.what());
  }
  if (cfg.algorithms.empty() || cfg.families.empty() || cfg.n.empty() || cfg.k.empty() || cfg.l.empty())
    throw_error(Errc::InvalidParams, "sweep dimension lists must be non-empty");
  if (cfg.reps < 1) throw_error(Errc::InvalidParams, "reps must be >= 1");
  return cfg;
}

SweepConfig parse_sweep_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(Errc::Io, "cannot open '" + path + "'");
  return parse_sweep_config(in);
}

namespace {

struct SweepJob {
  std::string algorithm;
  std::string family;
  std::int32_t n = 0;
  std::int32_t k = 0;
  std::int32_t l = 0;
  std::uint64_t seed = 0;
};

std::string format_ratio(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", r);
  return buf;
}

struct SweepRow {
  std::string text;
  double bound_ratio = -1.0;
};

SweepRow run_sweep_job(const SweepConfig& cfg, const SweepJob& job) {
  SweepRow row;
  std::ostringstream line;
  line << job.algorithm << ',' << job.family << ',' << job.n << ',';
  try {
    RunConfig rc;
    rc.algorithm = job.algorithm;
    rc.graph.family = family_from_name(job.family);
    rc.graph.n = job.n;
    rc.graph.edge_probability = cfg.er_p;
    rc.k = job.k;
    rc.l = job.l;
    rc.id_scheme = cfg.id_scheme;
    rc.seed = job.seed;
    rc.max_steps = cfg.max_steps;
    validate(rc);
    auto rule = make_rule(rc.algorithm);
    const PortGraph g = build_graph(rc);
    const Placement placement = place(g, rc.k, rc.l, mix_seed(rc.seed, 2));
    const auto ids = make_agent_ids(rc.k, id_scheme_from_name(rc.id_scheme), mix_seed(rc.seed, 3));
    const Configuration c0 = initial_configuration(g, placement, ids);
    const std::int64_t mp = m_prime(g, rc.k);
    const std::int64_t cap = rc.max_steps >= 0 ? rc.max_steps : default_max_steps(mp, rc.l);
    MonitorSet monitors = standard_monitors(rc.algorithm);
    const RunResult r = run(g, c0, *rule, cap, &monitors, nullptr);

    line << g.edge_count() << ',' << job.k << ',' << job.l << ',' << mp << ',' << job.seed << ',';
    std::string verdicts = "pass";
    bool all_pass = true;
    std::string failed;
    for (const auto& v : r.invariant_verdicts)
      if (!v.pass) {
        all_pass = false;
        if (!failed.empty()) failed += ';';
        failed += v.name;
      }
    if (!all_pass) verdicts = "fail:" + failed;

    if (r.timeout()) {
      line << ',' << r.max_level_observed << ",," << verdicts << ",timeout";
    } else {
      const std::int64_t steps = *r.steps_to_dispersion;
      const double denom = static_cast<double>(mp) * (floor_log2(job.l) + 2);
      const double ratio = steps == 0 ? 0.0 : static_cast<double>(steps) / denom;
      row.bound_ratio = ratio;
      line << steps << ',' << r.max_level_observed << ',' << format_ratio(ratio) << ','
           << verdicts << ",ok";
    }
  } catch (const Error& e) {
    // Partial failure: record and keep sweeping. m/m' are unknown here.
    line << ',' << job.k << ',' << job.l << ",," << job.seed << ",,,,,"
         << "error:" << errc_name(e.code());
  }
  row.text = line.str();
  return row;
}

}  // namespace

std::string sweep(const SweepConfig& cfg) {
  std::vector<SweepJob> jobs;
  std::uint64_t cell_index = 0;
  for (const auto& alg : cfg.algorithms)
    for (const auto& fam : cfg.families)
      for (std::int32_t n : cfg.n)
        for (std::int32_t k : cfg.k)
          for (std::int32_t l : cfg.l) {
            for (std::int32_t rep = 0; rep < cfg.reps; ++rep)
              jobs.push_back({alg, fam, n, k, l,
                              mix_seed(cfg.base_seed, cell_index, static_cast<std::uint64_t>(rep))});
            ++cell_index;
          }
  if (static_cast<std::int64_t>(jobs.size()) > cfg.max_cells)
    throw_error(Errc::InvalidParams, "sweep would produce " + std::to_string(jobs.size()) +
                                         " runs, above the cap of " + std::to_string(cfg.max_cells));

  // Worker pool over independent cells; rows land in job order, so the CSV
  // is identical however many workers run.
  std::vector<SweepRow> rows(jobs.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(jobs.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      rows[i] = run_sweep_job(cfg, jobs[i]);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::ostringstream csv;
  csv << "algorithm,family,n,m,k,l,m_prime,seed,steps,max_level,bound_ratio,verdicts,status\n";
  double max_ratio = 0.0;
  for (const auto& row : rows) {
    csv << row.text << '\n';
    max_ratio = std::max(max_ratio, row.bound_ratio);
  }
  csv << "# max_bound_ratio=" << format_ratio(max_ratio) << '\n';
  return csv.str();
}

}  // namespace dispersim
