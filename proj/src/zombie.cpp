#include "dispersim/rules.hpp"

namespace dispersim {

// O(m'l)-step baseline. Agents that start together form a group named by
// the largest member id; settled agents remember the largest group id
// they have ever hosted and lend their (groupid, last) slot to that group
// alone. Group members seeing a larger id on the host become zombies and
// chase along last pointers every step until they join a group or settle.
//
// The prose this follows leaves several details open; the choices below
// are baseline-approximate and are exercised only for trend comparison:
//   - step 0 is a pure group-formation round (no settle, no movement),
//   - a zombie settles at an unsettled node only as the smallest id there,
//   - a zombie adopts a group when the group's id is >= its own,
//   - a captured host (smaller recorded group id) counts as a first visit.
void ZombieRule::apply(NodeContext& ctx) const {
  for (AgentState* a : ctx.agents) a->pout = kNoPort;

  // Group formation: runs exactly once, at step 0, marked by the -1 sentinel.
  bool unformed = false;
  for (AgentState* a : ctx.agents)
    if (a->groupid < 0) unformed = true;
  if (unformed) {
    std::int32_t max_id = 0;
    for (AgentState* a : ctx.agents) max_id = std::max(max_id, a->id);
    for (AgentState* a : ctx.agents) a->groupid = max_id;
    return;
  }

  if (ctx.agents.size() < 2) return;

  // An unsettled node gains a settled agent first: smallest id present.
  AgentState* host = ctx.settled;
  bool fresh_settle = false;
  if (host == nullptr) {
    for (AgentState* a : ctx.agents)
      if (a->mode != AgentMode::Settled) {
        host = a;
        break;
      }
    if (host == nullptr) return;
    host->mode = AgentMode::Settled;
    host->last = static_cast<PortNumber>((host->pin + 1) % ctx.degree);
    ctx.settled = host;
    fresh_settle = true;
  }

  const std::int32_t host_gid_before = host->groupid;
  std::int32_t max_gid = host->groupid;
  for (AgentState* a : ctx.agents) max_gid = std::max(max_gid, a->groupid);
  host->groupid = max_gid;

  // Members whose group lost the host's memory become zombies.
  for (AgentState* a : ctx.agents)
    if (a->mode == AgentMode::Leader && a->groupid < host->groupid) a->mode = AgentMode::Zombie;

  bool owners = false;
  for (AgentState* a : ctx.agents)
    if (a->mode == AgentMode::Leader) owners = true;

  if (fresh_settle) {
    if (owners)
      for (AgentState* a : ctx.agents)
        if (a->mode == AgentMode::Zombie) a->groupid = host->groupid;
    for (AgentState* a : ctx.agents)
      if (a != host) a->pout = host->last;
    return;
  }

  if (owners) {
    // Zombies caught up with a group: they follow it from now on.
    for (AgentState* a : ctx.agents)
      if (a->mode == AgentMode::Zombie) a->groupid = host->groupid;

    PortNumber p = kNoPort;
    for (AgentState* a : ctx.agents)
      if (a->mode == AgentMode::Leader) {
        p = a->pin;
        break;
      }
    if (p == kNoPort) return;  // stationary group, nothing to decide

    if (host_gid_before < host->groupid) {
      // Captured from a smaller group: first visit of this group's DFS.
      host->last = static_cast<PortNumber>((p + 1) % ctx.degree);
    } else if (p != host->last) {
      // Revisit through a side door: backtrack, last untouched.
      for (AgentState* a : ctx.agents)
        if (a != host) a->pout = p;
      return;
    } else {
      host->last = static_cast<PortNumber>((host->last + 1) % ctx.degree);
    }
    for (AgentState* a : ctx.agents)
      if (a != host) a->pout = host->last;
    return;
  }

  // Zombies without a group chase along the host's pointer every step.
  for (AgentState* a : ctx.agents)
    if (a->mode == AgentMode::Zombie) a->pout = host->last;
}

}  // namespace dispersim
