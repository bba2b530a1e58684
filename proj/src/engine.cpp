#include "dispersim/engine.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "dispersim/errors.hpp"
#include "dispersim/rng.hpp"

namespace dispersim {

IdScheme id_scheme_from_name(std::string_view name) {
  if (name == "perm") return IdScheme::Perm;
  if (name == "poly") return IdScheme::Poly;
  throw_error(Errc::InvalidParams, "id scheme must be 'perm' or 'poly', got '" + std::string(name) + "'");
}

std::vector<AgentId> make_agent_ids(std::int32_t k, IdScheme scheme, std::uint64_t seed) {
  if (k < 1) throw_error(Errc::InvalidParams, "k must be >= 1");
  Rng rng(seed);
  std::vector<AgentId> ids;
  if (scheme == IdScheme::Perm) {
    ids.resize(static_cast<std::size_t>(k));
    std::iota(ids.begin(), ids.end(), 1);
    rng.shuffle(ids);
  } else {
    const std::int64_t hi = static_cast<std::int64_t>(k) * k;
    std::set<AgentId> used;
    while (static_cast<std::int32_t>(ids.size()) < k) {
      AgentId candidate = static_cast<AgentId>(1 + rng.below(static_cast<std::uint64_t>(hi)));
      if (used.insert(candidate).second) ids.push_back(candidate);
    }
  }
  return ids;
}

std::int64_t idmax_for(std::int32_t k, IdScheme scheme) {
  return scheme == IdScheme::Perm ? k : static_cast<std::int64_t>(k) * k;
}

Placement place(const PortGraph& g, std::int32_t k, std::int32_t l, std::uint64_t seed) {
  const NodeId n = g.node_count();
  if (l < 1 || l > k || k > n)
    throw_error(Errc::InvalidParams,
                "need 1 <= l <= k <= n, got l=" + std::to_string(l) + " k=" + std::to_string(k) +
                    " n=" + std::to_string(n));
  Rng rng(seed);
  std::vector<NodeId> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (std::int32_t i = 0; i < l; ++i) {
    std::size_t j = static_cast<std::size_t>(i) +
                    static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  Placement p;
  p.start_nodes.resize(static_cast<std::size_t>(k));
  for (std::int32_t i = 0; i < l; ++i) p.start_nodes[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
  for (std::int32_t i = l; i < k; ++i)
    p.start_nodes[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(l)))];
  return p;
}

Configuration initial_configuration(const PortGraph& g, const Placement& placement,
                                    const std::vector<AgentId>& ids) {
  const std::size_t k = ids.size();
  if (k == 0) throw_error(Errc::InvalidParams, "need at least one agent");
  if (placement.start_nodes.size() != k)
    throw_error(Errc::InvalidParams, "placement and id list sizes differ");
  if (k > static_cast<std::size_t>(g.node_count()))
    throw_error(Errc::KExceedsN, "more agents than nodes");

  std::vector<std::pair<AgentId, NodeId>> bound;
  bound.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (ids[i] < 1) throw_error(Errc::InvalidParams, "agent ids must be positive");
    NodeId v = placement.start_nodes[i];
    if (v < 0 || v >= g.node_count()) throw_error(Errc::BadNode, "start node " + std::to_string(v) + " out of range");
    bound.emplace_back(ids[i], v);
  }
  std::sort(bound.begin(), bound.end());
  for (std::size_t i = 1; i < k; ++i)
    if (bound[i].first == bound[i - 1].first)
      throw_error(Errc::DuplicateId, "agent id " + std::to_string(bound[i].first) + " repeated");

  Configuration c;
  c.t = 0;
  c.agents.reserve(k);
  c.nodes.reserve(k);
  for (const auto& [id, node] : bound) {
    c.agents.push_back(AgentState::initial(id));
    c.nodes.push_back(node);
  }
  return c;
}

namespace {

// Applies the rule once per occupied node, ascending node order (order is
// semantically irrelevant by locality but fixed for reproducible traces).
void apply_rules_in_place(const PortGraph& g, Configuration& c, const LocalRule& rule) {
  const std::size_t n = static_cast<std::size_t>(g.node_count());
  std::vector<std::vector<std::size_t>> occupants(n);
  for (std::size_t i = 0; i < c.size(); ++i)
    occupants[static_cast<std::size_t>(c.nodes[i])].push_back(i);

  NodeContext ctx;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& here = occupants[static_cast<std::size_t>(v)];
    if (here.empty()) continue;
    ctx.degree = g.degree(v);
    ctx.agents.clear();
    ctx.settled = nullptr;
    for (std::size_t idx : here) {
      AgentState* a = &c.agents[idx];
      ctx.agents.push_back(a);
      if (a->mode == AgentMode::Settled && ctx.settled == nullptr) ctx.settled = a;
    }
    rule.apply(ctx);
  }
}

}  // namespace

Configuration step(const PortGraph& g, const Configuration& c, const LocalRule& rule) {
  Configuration next = c;
  apply_rules_in_place(g, next, rule);

  const std::size_t k = next.size();
  std::vector<NodeId> dest(k);
  std::vector<PortNumber> arrival(k);
  for (std::size_t i = 0; i < k; ++i) {
    const AgentState& a = next.agents[i];
    const NodeId v = next.nodes[i];
    if (a.pout == kNoPort) {
      dest[i] = v;
      arrival[i] = kNoPort;
    } else {
      if (a.pout < 0 || a.pout >= g.degree(v))
        throw_error(Errc::RuleEmittedInvalidPort,
                    "agent " + std::to_string(a.id) + " emitted pout " + std::to_string(a.pout) +
                        " at a node of degree " + std::to_string(g.degree(v)));
      const auto [u, q] = g.neighbor_via(v, a.pout);
      dest[i] = u;
      arrival[i] = q;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    next.nodes[i] = dest[i];
    next.agents[i].pin = arrival[i];
    next.agents[i].slot = (next.agents[i].slot + 1) % 4;
  }
  next.t = c.t + 1;
  return next;
}

bool is_legitimate(const PortGraph& g, const Configuration& c, const LocalRule& rule) {
  if (!c.all_distinct_nodes()) return false;
  // Quiescence probe on a scratch copy; all rules here are inert on
  // singleton nodes, so this is exact once locations are distinct.
  Configuration probe = c;
  apply_rules_in_place(g, probe, rule);
  for (const AgentState& a : probe.agents)
    if (a.pout != kNoPort) return false;
  return true;
}

std::int32_t floor_log2(std::int64_t x) {
  std::int32_t r = 0;
  while (x > 1) {
    x >>= 1;
    ++r;
  }
  return r;
}

std::int64_t default_max_steps(std::int64_t m_prime_value, std::int32_t l) {
  const std::int64_t cap = 64 * m_prime_value * (floor_log2(l) + 2);
  return std::max<std::int64_t>(cap, 1000);
}

RunResult run(const PortGraph& g, const Configuration& c0, const LocalRule& rule,
              std::int64_t max_steps, MonitorSet* monitors, TraceSink* sink) {
  if (max_steps < 0) throw_error(Errc::InvalidParams, "max_steps must be >= 0");

  RunResult result;
  result.m_prime = m_prime(g, static_cast<std::int64_t>(c0.size()));
  {
    std::vector<NodeId> start = c0.nodes;
    std::sort(start.begin(), start.end());
    result.l = static_cast<std::int32_t>(std::unique(start.begin(), start.end()) - start.begin());
  }

  auto tally = [&result](const Configuration& c) {
    for (const AgentState& a : c.agents) result.max_level_observed = std::max(result.max_level_observed, a.level);
  };

  Configuration cur = c0;
  tally(cur);
  if (sink != nullptr) sink->record(cur);
  if (monitors != nullptr)
    for (auto& m : *monitors) m->at_start(g, cur);

  bool legit = is_legitimate(g, cur, rule);
  std::int64_t executed = 0;
  while (!legit && executed < max_steps) {
    Configuration next = step(g, cur, rule);
    ++executed;
    for (const AgentState& a : next.agents)
      if (a.pin != kNoPort) ++result.moves_total;
    tally(next);
    if (sink != nullptr) sink->record(next);
    if (monitors != nullptr)
      for (auto& m : *monitors) m->observe(g, cur, next);
    cur = std::move(next);
    legit = is_legitimate(g, cur, rule);
  }

  if (legit) result.steps_to_dispersion = cur.t;
  if (monitors != nullptr) {
    for (auto& m : *monitors) m->at_end(g, cur);
    result.invariant_verdicts = collect_verdicts(*monitors);
  }
  return result;
}

}  // namespace dispersim
