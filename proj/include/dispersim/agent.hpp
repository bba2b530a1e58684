#pragma once

#include <cstdint>
#include <string_view>
#include <tuple>

#include "dispersim/port_graph.hpp"

namespace dispersim {

using AgentId = std::int32_t;

// Settled is terminal; the only transitions are Leader -> Zombie,
// Leader -> Settled and Zombie -> Settled.
enum class AgentMode : std::uint8_t { Leader, Zombie, Settled };

std::string_view mode_name(AgentMode m);
AgentMode mode_from_name(std::string_view name);

// Full protocol memory of one agent. The common initial state: Leader,
// slot 0, level 0, leaderid = id, last 0, inport/pin/pout -1, groupid -1
// (groupid is used by the zombie baseline only).
struct AgentState {
  AgentId id = 0;
  AgentMode mode = AgentMode::Leader;
  std::int32_t slot = 0;
  std::int32_t level = 0;
  AgentId leaderid = 0;
  PortNumber last = 0;
  PortNumber inport = kNoPort;
  PortNumber pin = kNoPort;
  PortNumber pout = kNoPort;
  std::int32_t groupid = -1;

  static AgentState initial(AgentId id) {
    AgentState s;
    s.id = id;
    s.leaderid = id;
    return s;
  }

  bool operator==(const AgentState&) const = default;
};

// (level, leaderid) compared lexicographically. Strict over leaders since
// a leader's leaderid is its own unique id.
struct StrengthKey {
  std::int32_t level = 0;
  AgentId leaderid = 0;

  friend auto operator<=>(const StrengthKey&, const StrengthKey&) = default;
};

inline StrengthKey strength(const AgentState& a) { return {a.level, a.leaderid}; }

inline bool stronger(const AgentState& a, const AgentState& b) { return strength(a) > strength(b); }

inline std::string_view mode_name(AgentMode m) {
  switch (m) {
    case AgentMode::Leader: return "leader";
    case AgentMode::Zombie: return "zombie";
    case AgentMode::Settled: return "settled";
  }
  return "?";
}

}  // namespace dispersim
