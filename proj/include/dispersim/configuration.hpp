#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "dispersim/agent.hpp"
#include "dispersim/port_graph.hpp"

namespace dispersim {

// One synchronous global state C_t: every agent's state and location plus
// the step counter. Agents are kept sorted by id; moves are atomic, so an
// agent is never "on an edge".
struct Configuration {
  std::int64_t t = 0;
  std::vector<AgentState> agents;
  std::vector<NodeId> nodes;  // parallel to agents

  std::size_t size() const { return agents.size(); }

  // Index of the agent with the given id, or -1.
  std::ptrdiff_t index_of(AgentId id) const {
    for (std::size_t i = 0; i < agents.size(); ++i)
      if (agents[i].id == id) return static_cast<std::ptrdiff_t>(i);
    return -1;
  }

  bool all_distinct_nodes() const {
    std::vector<NodeId> sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }
};

// Start nodes per agent slot; slot i of the ids list begins at start_nodes[i].
// l = number of distinct start nodes.
struct Placement {
  std::vector<NodeId> start_nodes;

  std::int32_t distinct_count() const {
    std::vector<NodeId> sorted = start_nodes;
    std::sort(sorted.begin(), sorted.end());
    return static_cast<std::int32_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  }
};

}  // namespace dispersim
