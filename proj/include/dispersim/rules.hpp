#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "dispersim/agent.hpp"

namespace dispersim {

// What a rule sees at one occupied node: the local degree and the
// co-located agent states (ascending id), nothing else. Node identity and
// global state are deliberately absent.
struct NodeContext {
  PortNumber degree = 0;
  std::vector<AgentState*> agents;
  AgentState* settled = nullptr;  // the unique settled agent here, if any

  AgentState* smallest_id(AgentMode mode) const {
    for (AgentState* a : agents)
      if (a->mode == mode) return a;  // agents are ordered by id
    return nullptr;
  }
};

// Deterministic local behavior applied once per occupied node per step.
// Must set pout for every agent (kNoPort = stay). slot and pin are engine
// bookkeeping and must not be written here.
class LocalRule {
 public:
  virtual ~LocalRule() = default;
  virtual std::string_view name() const noexcept = 0;
  virtual void apply(NodeContext& ctx) const = 0;
};

// Algorithm selection by CLI name: "simple-dfs", "zombie", "svl".
std::unique_ptr<LocalRule> make_rule(std::string_view name);

class SimpleDfsRule final : public LocalRule {
 public:
  std::string_view name() const noexcept override { return "simple-dfs"; }
  void apply(NodeContext& ctx) const override;
};

class ZombieRule final : public LocalRule {
 public:
  std::string_view name() const noexcept override { return "zombie"; }
  void apply(NodeContext& ctx) const override;
};

class SvlRule final : public LocalRule {
 public:
  std::string_view name() const noexcept override { return "svl"; }
  void apply(NodeContext& ctx) const override;
};

}  // namespace dispersim
