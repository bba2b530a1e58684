#include "dispersim/errors.hpp"
#include "dispersim/rules.hpp"

namespace dispersim {

// Depth-first traversal of a single co-located group. The first agent to
// stay at a node keeps a `last` pointer recording the port the group used
// to leave; revisits arriving through a different port bounce straight
// back, revisits through `last` advance to the next port.
void SimpleDfsRule::apply(NodeContext& ctx) const {
  for (AgentState* a : ctx.agents) a->pout = kNoPort;
  if (ctx.agents.size() < 2) return;

  if (ctx.settled == nullptr) {
    AgentState* settler = ctx.smallest_id(AgentMode::Leader);
    if (settler == nullptr) return;  // zombies never occur under this rule
    settler->mode = AgentMode::Settled;
    settler->last = static_cast<PortNumber>((settler->pin + 1) % ctx.degree);
    for (AgentState* a : ctx.agents)
      if (a != settler) a->pout = settler->last;
    return;
  }

  AgentState* host = ctx.settled;
  // Common arrival port of the unsettled agents (they move as one unit).
  PortNumber p = kNoPort;
  for (AgentState* a : ctx.agents)
    if (a != host) {
      p = a->pin;
      break;
    }
  if (p == kNoPort) return;  // stationary visitors: nothing to do

  if (p != host->last) {
    // Came in through a side door: already visited, go back out.
    for (AgentState* a : ctx.agents)
      if (a != host) a->pout = p;
  } else {
    host->last = static_cast<PortNumber>((host->last + 1) % ctx.degree);
    for (AgentState* a : ctx.agents)
      if (a != host) a->pout = host->last;
  }
}

}  // namespace dispersim
