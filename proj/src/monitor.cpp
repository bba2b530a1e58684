#include "dispersim/monitor.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dispersim/errors.hpp"

namespace dispersim {

void Monitor::at_start(const PortGraph&, const Configuration&) {}
void Monitor::at_end(const PortGraph&, const Configuration&) {}

namespace {

std::map<NodeId, std::int32_t> node_max_level(const Configuration& c) {
  std::map<NodeId, std::int32_t> m;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto [it, inserted] = m.emplace(c.nodes[i], c.agents[i].level);
    if (!inserted) it->second = std::max(it->second, c.agents[i].level);
  }
  return m;
}

std::map<NodeId, std::int32_t> node_counts(const Configuration& c) {
  std::map<NodeId, std::int32_t> m;
  for (NodeId v : c.nodes) ++m[v];
  return m;
}

// Integer form of level <= log2(l) + 1: equivalent to 2^(level-1) <= l.
bool level_within_bound(std::int32_t level, std::int32_t l) {
  if (level <= 0) return level == 0;
  if (level - 1 >= 62) return false;
  return (std::int64_t{1} << (level - 1)) <= l;
}

std::int32_t distinct_start_nodes(const Configuration& c) {
  std::vector<NodeId> v = c.nodes;
  std::sort(v.begin(), v.end());
  return static_cast<std::int32_t>(std::unique(v.begin(), v.end()) - v.begin());
}

std::string agent_at(const AgentState& a, NodeId v) {
  return "agent " + std::to_string(a.id) + " at node " + std::to_string(v);
}

}  // namespace

std::int32_t vlevel(const Configuration& c, AgentId id) {
  const std::ptrdiff_t i = c.index_of(id);
  if (i < 0) throw_error(Errc::UnknownAgent, "no agent with id " + std::to_string(id));
  const NodeId v = c.nodes[static_cast<std::size_t>(i)];
  std::int32_t best = c.agents[static_cast<std::size_t>(i)].level;
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c.nodes[j] == v) best = std::max(best, c.agents[j].level);
  return best;
}

std::int32_t lmin(const Configuration& c) {
  const auto maxlevel = node_max_level(c);
  const auto counts = node_counts(c);
  std::int32_t best = kLevelInfinity;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const AgentState& a = c.agents[i];
    const NodeId v = c.nodes[i];
    const bool active_leader = a.mode == AgentMode::Leader && counts.at(v) >= 2;
    if (a.mode == AgentMode::Zombie || active_leader) best = std::min(best, maxlevel.at(v));
  }
  return best;
}

namespace {

class LevelBoundMonitor final : public Monitor {
 public:
  LevelBoundMonitor() : Monitor("level-bound") {}
  void at_start(const PortGraph&, const Configuration& c0) override {
    l_ = distinct_start_nodes(c0);
    check(c0);
  }
  void observe(const PortGraph&, const Configuration&, const Configuration& cur) override { check(cur); }

 private:
  void check(const Configuration& c) {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!level_within_bound(c.agents[i].level, l_))
        fail(c.t, agent_at(c.agents[i], c.nodes[i]) + " has level " + std::to_string(c.agents[i].level) +
                      " with l=" + std::to_string(l_));
  }
  std::int32_t l_ = 1;
};

class SettledImmobilityMonitor final : public Monitor {
 public:
  SettledImmobilityMonitor() : Monitor("settled-immobility") {}
  void observe(const PortGraph&, const Configuration& prev, const Configuration& cur) override {
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (prev.agents[i].mode != AgentMode::Settled) continue;
      if (cur.agents[i].mode != AgentMode::Settled)
        fail(cur.t, agent_at(cur.agents[i], cur.nodes[i]) + " left settled mode");
      else if (cur.nodes[i] != prev.nodes[i])
        fail(cur.t, agent_at(cur.agents[i], cur.nodes[i]) + " moved while settled");
    }
  }
};

class UniqueSettledMonitor final : public Monitor {
 public:
  UniqueSettledMonitor() : Monitor("unique-settled") {}
  void at_start(const PortGraph&, const Configuration& c0) override { check(c0); }
  void observe(const PortGraph&, const Configuration&, const Configuration& cur) override { check(cur); }

 private:
  void check(const Configuration& c) {
    std::set<NodeId> settled_nodes;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.agents[i].mode != AgentMode::Settled) continue;
      if (!settled_nodes.insert(c.nodes[i]).second)
        fail(c.t, "two settled agents at node " + std::to_string(c.nodes[i]));
    }
  }
};

class ModeOrderMonitor final : public Monitor {
 public:
  ModeOrderMonitor() : Monitor("mode-order") {}
  void observe(const PortGraph&, const Configuration& prev, const Configuration& cur) override {
    for (std::size_t i = 0; i < prev.size(); ++i)
      if (rank(cur.agents[i].mode) < rank(prev.agents[i].mode))
        fail(cur.t, agent_at(cur.agents[i], cur.nodes[i]) + " went " +
                        std::string(mode_name(prev.agents[i].mode)) + " -> " +
                        std::string(mode_name(cur.agents[i].mode)));
  }

 private:
  static int rank(AgentMode m) { return static_cast<int>(m); }
};

class VlevelMonotoneMonitor final : public Monitor {
 public:
  VlevelMonotoneMonitor() : Monitor("vlevel-monotone") {}
  void observe(const PortGraph&, const Configuration& prev, const Configuration& cur) override {
    const auto before = node_max_level(prev);
    const auto after = node_max_level(cur);
    for (std::size_t i = 0; i < prev.size(); ++i) {
      const std::int32_t was = before.at(prev.nodes[i]);
      const std::int32_t now = after.at(cur.nodes[i]);
      if (now < was)
        fail(cur.t, "virtual level of agent " + std::to_string(cur.agents[i].id) + " dropped " +
                        std::to_string(was) + " -> " + std::to_string(now));
    }
  }
};

class LminProgressMonitor final : public Monitor {
 public:
  LminProgressMonitor() : Monitor("lmin-monotone-progress") {}
  void at_start(const PortGraph&, const Configuration& c0) override { prev_ = lmin(c0); }
  void observe(const PortGraph&, const Configuration&, const Configuration& cur) override {
    const std::int32_t now = lmin(cur);
    if (now < prev_)
      fail(cur.t, "lmin dropped " + std::to_string(prev_) + " -> " + std::to_string(now));
    prev_ = now;
  }
  void at_end(const PortGraph&, const Configuration& last) override {
    if (lmin(last) != kLevelInfinity) fail(last.t, "run ended with lmin still finite");
  }

 private:
  std::int32_t prev_ = 0;
};

// Movement cadence checks: leader-led moves happen in slots 0 (advance via
// inport+1) and 1 (backtrack via inport); settled-led zombie moves happen
// in slot 2 (strong tier present) or slots 2/3 (weak only), through the
// host's last pointer.
class SlotDisciplineMonitor final : public Monitor {
 public:
  SlotDisciplineMonitor() : Monitor("slot-discipline") {}
  void observe(const PortGraph& g, const Configuration& prev, const Configuration& cur) override {
    std::map<NodeId, std::vector<std::size_t>> movers_by_origin;
    for (std::size_t i = 0; i < cur.size(); ++i)
      if (cur.agents[i].pin != kNoPort) movers_by_origin[prev.nodes[i]].push_back(i);

    for (const auto& [origin, movers] : movers_by_origin) {
      const std::int32_t slot = prev.agents[movers.front()].slot;
      bool leader_led = false;
      for (std::size_t i : movers)
        if (cur.agents[i].mode == AgentMode::Leader) leader_led = true;

      if (leader_led) {
        if (slot != 0 && slot != 1) {
          fail(cur.t, "leader-led move from node " + std::to_string(origin) + " in slot " + std::to_string(slot));
          continue;
        }
        for (std::size_t i : movers) {
          if (cur.agents[i].mode != AgentMode::Leader) continue;
          // Reciprocity recovers the departure port from the arrival port.
          const PortNumber used = g.neighbor_via(cur.nodes[i], cur.agents[i].pin).second;
          const PortNumber expect =
              slot == 0 ? static_cast<PortNumber>((cur.agents[i].inport + 1) % g.degree(origin))
                        : cur.agents[i].inport;
          if (used != expect)
            fail(cur.t, "leader " + std::to_string(cur.agents[i].id) + " left node " + std::to_string(origin) +
                            " via port " + std::to_string(used) + " in slot " + std::to_string(slot) +
                            " (expected " + std::to_string(expect) + ")");
        }
      } else {
        // All movers must be zombies walking the host's pointer.
        const AgentState* host = nullptr;
        for (std::size_t j = 0; j < cur.size(); ++j)
          if (cur.nodes[j] == origin && cur.agents[j].mode == AgentMode::Settled) host = &cur.agents[j];
        if (host == nullptr) {
          fail(cur.t, "zombie move from unsettled node " + std::to_string(origin));
          continue;
        }
        std::int32_t max_mover_level = 0;
        for (std::size_t i : movers) {
          if (cur.agents[i].mode != AgentMode::Zombie)
            fail(cur.t, agent_at(cur.agents[i], cur.nodes[i]) + " moved without a leader present");
          max_mover_level = std::max(max_mover_level, cur.agents[i].level);
          const PortNumber used = g.neighbor_via(cur.nodes[i], cur.agents[i].pin).second;
          if (used != host->last)
            fail(cur.t, "zombie " + std::to_string(cur.agents[i].id) + " left node " + std::to_string(origin) +
                            " via port " + std::to_string(used) + " instead of last=" + std::to_string(host->last));
        }
        const bool strong_tier = max_mover_level == host->level;
        if (max_mover_level > host->level)
          fail(cur.t, "zombie above host level moved from node " + std::to_string(origin));
        else if (strong_tier && slot != 2)
          fail(cur.t, "strong-zombie move from node " + std::to_string(origin) + " in slot " + std::to_string(slot));
        else if (!strong_tier && slot != 2 && slot != 3)
          fail(cur.t, "weak-zombie move from node " + std::to_string(origin) + " in slot " + std::to_string(slot));
      }
    }
  }
};

class NoStrongZombieMonitor final : public Monitor {
 public:
  NoStrongZombieMonitor() : Monitor("no-strong-zombie") {}
  void at_start(const PortGraph&, const Configuration& c0) override { check(c0); }
  void observe(const PortGraph&, const Configuration&, const Configuration& cur) override { check(cur); }

 private:
  void check(const Configuration& c) {
    // A zombie strictly stronger than every leader and settled agent on
    // its node (vacuously, a zombies-only node) breaks the chase argument.
    std::map<NodeId, StrengthKey> anchor;  // strongest non-zombie per node
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.agents[i].mode == AgentMode::Zombie) continue;
      auto [it, inserted] = anchor.emplace(c.nodes[i], strength(c.agents[i]));
      if (!inserted) it->second = std::max(it->second, strength(c.agents[i]));
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.agents[i].mode != AgentMode::Zombie) continue;
      const auto it = anchor.find(c.nodes[i]);
      if (it == anchor.end() || strength(c.agents[i]) > it->second)
        fail(c.t, "zombie " + std::to_string(c.agents[i].id) + " is strongest at node " +
                      std::to_string(c.nodes[i]));
    }
  }
};

class EdgeBudgetMonitor final : public Monitor {
 public:
  EdgeBudgetMonitor() : Monitor("edge-budget") {}
  void at_start(const PortGraph&, const Configuration& c0) override { active_ = distinct_start_nodes(c0) == 1; }
  void observe(const PortGraph& g, const Configuration& prev, const Configuration& cur) override {
    if (!active_) return;
    // One group crossing = one traversal, however many agents ride along.
    std::set<std::pair<NodeId, PortNumber>> crossed;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur.agents[i].pin == kNoPort) continue;
      const NodeId from = prev.nodes[i];
      const NodeId to = cur.nodes[i];
      const PortNumber at_to = cur.agents[i].pin;
      if (to < from)
        crossed.emplace(to, at_to);
      else
        crossed.emplace(from, g.neighbor_via(to, at_to).second);
    }
    for (const auto& key : crossed)
      if (++count_[key] > 4)
        fail(cur.t, "edge at node " + std::to_string(key.first) + " port " + std::to_string(key.second) +
                        " traversed " + std::to_string(count_[key]) + " times");
  }

 private:
  bool active_ = false;
  std::map<std::pair<NodeId, PortNumber>, int> count_;
};

// Testable surrogate of the space bound: every stored value stays inside
// its declared range, so the state packs into O(log(k + maxdeg)) bits.
class MemoryAuditMonitor final : public Monitor {
 public:
  MemoryAuditMonitor() : Monitor("memory-audit") {}
  void at_start(const PortGraph& g, const Configuration& c0) override {
    l_ = distinct_start_nodes(c0);
    max_id_ = 0;
    for (const AgentState& a : c0.agents) max_id_ = std::max(max_id_, a.id);
    port_cap_ = std::max<PortNumber>(g.max_degree(), 1);
    check(c0);
  }
  void observe(const PortGraph&, const Configuration&, const Configuration& cur) override { check(cur); }

 private:
  void check(const Configuration& c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const AgentState& a = c.agents[i];
      auto bad = [&](const std::string& what) { fail(c.t, agent_at(a, c.nodes[i]) + ": " + what); };
      if (!level_within_bound(a.level, l_)) bad("level " + std::to_string(a.level) + " out of range");
      for (PortNumber p : {a.last, a.inport, a.pin, a.pout})
        if (p < kNoPort || p >= port_cap_) bad("port value " + std::to_string(p) + " out of range");
      if (a.leaderid < 1 || a.leaderid > max_id_) bad("leaderid " + std::to_string(a.leaderid) + " out of range");
      if (a.slot < 0 || a.slot > 3) bad("slot " + std::to_string(a.slot) + " out of range");
      if (a.groupid != -1 && (a.groupid < 1 || a.groupid > max_id_))
        bad("groupid " + std::to_string(a.groupid) + " out of range");
    }
  }
  std::int32_t l_ = 1;
  AgentId max_id_ = 0;
  PortNumber port_cap_ = 1;
};

}  // namespace

MonitorSet standard_monitors(std::string_view rule_name) {
  MonitorSet out;
  if (rule_name == "svl") {
    out.push_back(std::make_unique<LevelBoundMonitor>());
    out.push_back(std::make_unique<SettledImmobilityMonitor>());
    out.push_back(std::make_unique<UniqueSettledMonitor>());
    out.push_back(std::make_unique<ModeOrderMonitor>());
    out.push_back(std::make_unique<VlevelMonotoneMonitor>());
    out.push_back(std::make_unique<LminProgressMonitor>());
    out.push_back(std::make_unique<SlotDisciplineMonitor>());
    out.push_back(std::make_unique<NoStrongZombieMonitor>());
    out.push_back(std::make_unique<MemoryAuditMonitor>());
  } else if (rule_name == "simple-dfs") {
    out.push_back(std::make_unique<SettledImmobilityMonitor>());
    out.push_back(std::make_unique<UniqueSettledMonitor>());
    out.push_back(std::make_unique<ModeOrderMonitor>());
    out.push_back(std::make_unique<EdgeBudgetMonitor>());
    out.push_back(std::make_unique<MemoryAuditMonitor>());
  } else if (rule_name == "zombie") {
    out.push_back(std::make_unique<SettledImmobilityMonitor>());
    out.push_back(std::make_unique<UniqueSettledMonitor>());
    out.push_back(std::make_unique<ModeOrderMonitor>());
    out.push_back(std::make_unique<MemoryAuditMonitor>());
  } else {
    throw_error(Errc::UnknownRule, "no monitors for rule '" + std::string(rule_name) + "'");
  }
  return out;
}

std::vector<MonitorVerdict> collect_verdicts(const MonitorSet& monitors) {
  std::vector<MonitorVerdict> out;
  out.reserve(monitors.size());
  for (const auto& m : monitors) out.push_back(m->verdict());
  return out;
}

std::vector<MonitorVerdict> replay_verdicts(const PortGraph& g,
                                            const std::vector<Configuration>& trace,
                                            std::string_view rule_name) {
  if (trace.empty()) throw_error(Errc::InvalidParams, "cannot replay an empty trace");
  MonitorSet monitors = standard_monitors(rule_name);
  for (auto& m : monitors) m->at_start(g, trace.front());
  for (std::size_t i = 1; i < trace.size(); ++i)
    for (auto& m : monitors) m->observe(g, trace[i - 1], trace[i]);
  for (auto& m : monitors) m->at_end(g, trace.back());
  return collect_verdicts(monitors);
}

}  // namespace dispersim
