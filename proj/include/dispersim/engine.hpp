#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dispersim/configuration.hpp"
#include "dispersim/monitor.hpp"
#include "dispersim/port_graph.hpp"
#include "dispersim/rules.hpp"

namespace dispersim {

enum class IdScheme { Perm, Poly };

IdScheme id_scheme_from_name(std::string_view name);

// Perm: random permutation of 1..k. Poly: k distinct values in [1, k^2],
// exercising idmax = O(poly(k)). Deterministic given the seed.
std::vector<AgentId> make_agent_ids(std::int32_t k, IdScheme scheme, std::uint64_t seed);

std::int64_t idmax_for(std::int32_t k, IdScheme scheme);

// l distinct start nodes chosen uniformly; the k agents are spread over
// them with every chosen node receiving at least one agent.
Placement place(const PortGraph& g, std::int32_t k, std::int32_t l, std::uint64_t seed);

// All agents in the common initial state at their start nodes, t = 0.
Configuration initial_configuration(const PortGraph& g, const Placement& placement,
                                    const std::vector<AgentId>& ids);

// One synchronous round: the rule runs once per occupied node, then all
// agents with pout != -1 relocate simultaneously; arrivals get pin set to
// the reverse port, everyone else pin = -1; slot and t advance. Pure.
Configuration step(const PortGraph& g, const Configuration& c, const LocalRule& rule);

// Definition of done: all agents on distinct nodes and a side-effect-free
// probe step produces no movement.
bool is_legitimate(const PortGraph& g, const Configuration& c, const LocalRule& rule);

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(const Configuration& c) = 0;
};

// Metrics of one execution. steps_to_dispersion is the least t with C_t
// legitimate; empty means the step cap was hit (Timeout).
struct RunResult {
  std::optional<std::int64_t> steps_to_dispersion;
  std::int32_t max_level_observed = 0;
  std::int64_t m_prime = 0;
  std::int32_t l = 0;
  std::vector<MonitorVerdict> invariant_verdicts;
  std::int64_t moves_total = 0;

  bool timeout() const { return !steps_to_dispersion.has_value(); }
  bool any_monitor_failed() const {
    for (const auto& v : invariant_verdicts)
      if (!v.pass) return true;
    return false;
  }
};

// 64 * m' * (floor(log2 l) + 2), clamped to >= 1000: generous over the
// O(m' log l) bound, so hitting it signals a bug rather than bad luck.
std::int64_t default_max_steps(std::int64_t m_prime_value, std::int32_t l);

std::int32_t floor_log2(std::int64_t x);

// Iterates step() until legitimacy or the cap; monitors (optional) are
// evaluated after every step and finalized at the end; every configuration
// C_0..C_final is offered to the sink if one is given.
RunResult run(const PortGraph& g, const Configuration& c0, const LocalRule& rule,
              std::int64_t max_steps, MonitorSet* monitors, TraceSink* sink);

}  // namespace dispersim
