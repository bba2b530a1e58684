#include <cassert>

#include "dispersim/rules.hpp"

namespace dispersim {

// Knowledge-free dispersion with GHS-style levels. Leaders perform DFS
// over settled agents they own (their minions); meeting a same-level
// rival bumps the level and implicitly restarts the DFS, because the old
// minions stop matching. Demoted leaders (zombies) chase along the
// settled agents' last pointers at a slower slot cadence than leaders,
// which is what bounds the total running time.
void SvlRule::apply(NodeContext& ctx) const {
  if (ctx.agents.empty()) return;
  for (AgentState* a : ctx.agents) a->pout = kNoPort;

  // The unique leader among the strongest agents, else the settled host.
  StrengthKey max_key = strength(*ctx.agents.front());
  for (AgentState* a : ctx.agents) max_key = std::max(max_key, strength(*a));
  AgentState* amax = nullptr;
  for (AgentState* a : ctx.agents) {
    if (a->mode != AgentMode::Leader || strength(*a) != max_key) continue;
    assert(amax == nullptr && "two leaders cannot tie in strength");
    if (amax == nullptr || a->leaderid > amax->leaderid) amax = a;
  }
  if (amax == nullptr) amax = ctx.settled;
  if (amax == nullptr) {
    // Zombies alone at an unsettled node. The chase-path argument says
    // this cannot happen; leave the step as a no-op and let the
    // no-strong-zombie monitor flag the configuration.
    return;
  }

  // amax kills the other leaders.
  for (AgentState* a : ctx.agents)
    if (a != amax && a->mode == AgentMode::Leader) a->mode = AgentMode::Zombie;

  // pin only survives the step it was set in; a leader keeps its latest
  // arrival port in inport so slots 2/3 do not lose it.
  if (amax->mode == AgentMode::Leader && amax->pin != kNoPort) amax->inport = amax->pin;

  if (ctx.agents.size() < 2) return;

  if (amax->mode == AgentMode::Leader) {
    bool same_level_zombie = false;
    for (AgentState* a : ctx.agents)
      if (a->mode == AgentMode::Zombie && a->level == amax->level) same_level_zombie = true;
    if (same_level_zombie) amax->level += 1;

    if (ctx.settled == nullptr) {
      // Unsettled node: recruit a zombie as the node's settled agent and
      // make it a minion. Smallest id, for determinism; any choice works.
      AgentState* z = ctx.smallest_id(AgentMode::Zombie);
      if (z == nullptr) return;
      z->mode = AgentMode::Settled;
      z->level = amax->level;
      z->leaderid = amax->leaderid;
      z->last = amax->inport;
      ctx.settled = z;
    } else if (!(ctx.settled->level == amax->level && ctx.settled->leaderid == amax->leaderid)) {
      // First visit in the current DFS: claim the host as a minion.
      ctx.settled->level = amax->level;
      ctx.settled->leaderid = amax->leaderid;
      ctx.settled->last = amax->inport;
    } else if (amax->inport != ctx.settled->last) {
      // Already visited through another port: backtrack.
      for (AgentState* a : ctx.agents)
        if (a != ctx.settled) a->pout = amax->inport;
    } else if (amax->slot == 0) {
      PortNumber out = static_cast<PortNumber>((amax->inport + 1) % ctx.degree);
      for (AgentState* a : ctx.agents)
        if (a != ctx.settled) a->pout = out;
      ctx.settled->last = out;
    }
    return;
  }

  // No leader here: zombies chase via the host's last pointer. Strong
  // zombies (level equal to the host's) step only in slot 2, weak ones in
  // slots 2 and 3.
  AgentState* host = ctx.settled;
  bool any_zombie = false;
  std::int32_t max_zombie_level = 0;
  for (AgentState* a : ctx.agents)
    if (a->mode == AgentMode::Zombie) {
      max_zombie_level = any_zombie ? std::max(max_zombie_level, a->level) : a->level;
      any_zombie = true;
    }
  if (!any_zombie) return;

  const std::int32_t slot = host->slot;
  const bool move = (max_zombie_level < host->level && (slot == 2 || slot == 3)) ||
                    (max_zombie_level == host->level && slot == 2);
  if (move)
    for (AgentState* a : ctx.agents)
      if (a != host) a->pout = host->last;
}

}  // namespace dispersim
