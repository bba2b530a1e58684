#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dispersim/configuration.hpp"
#include "dispersim/port_graph.hpp"

namespace dispersim {

inline constexpr std::int32_t kLevelInfinity = std::numeric_limits<std::int32_t>::max();

// Max level among the agents co-located with agent `id` (including itself),
// taken on an end-of-step snapshot. Throws UnknownAgent.
std::int32_t vlevel(const Configuration& c, AgentId id);

// Minimum vlevel over all zombies and all active leaders (a leader is
// active iff it shares its node with someone). kLevelInfinity if that set
// is empty, which is exactly the dispersed-and-quiet situation.
std::int32_t lmin(const Configuration& c);

struct MonitorVerdict {
  std::string name;
  bool pass = true;
  std::optional<std::int64_t> first_failure_step;
  std::string details;
};

// Read-only observer evaluated after every step. A failing check records
// the first offending step and never mutates or stops the run, so a full
// counterexample trace stays available.
class Monitor {
 public:
  explicit Monitor(std::string name) { verdict_.name = std::move(name); }
  virtual ~Monitor() = default;

  virtual void at_start(const PortGraph& g, const Configuration& c0);
  virtual void observe(const PortGraph& g, const Configuration& prev, const Configuration& cur) = 0;
  virtual void at_end(const PortGraph& g, const Configuration& last);

  const MonitorVerdict& verdict() const { return verdict_; }

 protected:
  void fail(std::int64_t step, const std::string& details) {
    if (!verdict_.pass) return;
    verdict_.pass = false;
    verdict_.first_failure_step = step;
    verdict_.details = details;
  }

  MonitorVerdict verdict_;
};

using MonitorSet = std::vector<std::unique_ptr<Monitor>>;

// The monitors applicable to an algorithm, operationalizing the protocol's
// correctness arguments: level-bound, settled-immobility, unique-settled,
// mode-order, vlevel-monotone, lmin-monotone-progress, slot-discipline,
// no-strong-zombie, edge-budget, memory-audit. Throws UnknownRule.
MonitorSet standard_monitors(std::string_view rule_name);

std::vector<MonitorVerdict> collect_verdicts(const MonitorSet& monitors);

// Feeds a recorded configuration sequence through the standard monitor set
// for the rule; produces the same verdicts as the live run.
std::vector<MonitorVerdict> replay_verdicts(const PortGraph& g,
                                            const std::vector<Configuration>& trace,
                                            std::string_view rule_name);

}  // namespace dispersim
