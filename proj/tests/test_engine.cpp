#include <doctest.h>

#include <map>
#include <set>

#include "dispersim/engine.hpp"
#include "dispersim/errors.hpp"
#include "dispersim/rng.hpp"
#include "dispersim/trace.hpp"

using namespace dispersim;

namespace {

PortGraph p2() { return PortGraph::from_edge_list(2, {{0, 0, 1, 0}}); }
PortGraph p3() { return PortGraph::from_edge_list(3, {{0, 0, 1, 0}, {1, 1, 2, 0}}); }

struct NoOpRule final : LocalRule {
  std::string_view name() const noexcept override { return "no-op"; }
  void apply(NodeContext& ctx) const override {
    for (AgentState* a : ctx.agents) a->pout = kNoPort;
  }
};

struct ForcePortRule final : LocalRule {
  PortNumber port;
  explicit ForcePortRule(PortNumber p) : port(p) {}
  std::string_view name() const noexcept override { return "force"; }
  void apply(NodeContext& ctx) const override {
    for (AgentState* a : ctx.agents) a->pout = port;
  }
};

Configuration config_at(const PortGraph& g, const std::vector<AgentId>& ids, NodeId node) {
  Placement p;
  p.start_nodes.assign(ids.size(), node);
  return initial_configuration(g, p, ids);
}

}  // namespace

TEST_CASE("make_agent_ids: perm is a permutation, poly stays within idmax") {
  const auto perm = make_agent_ids(8, IdScheme::Perm, 42);
  std::set<AgentId> seen(perm.begin(), perm.end());
  CHECK(seen.size() == 8);
  CHECK(*seen.begin() == 1);
  CHECK(*seen.rbegin() == 8);
  CHECK(make_agent_ids(8, IdScheme::Perm, 42) == perm);

  const auto poly = make_agent_ids(8, IdScheme::Poly, 42);
  std::set<AgentId> distinct(poly.begin(), poly.end());
  CHECK(distinct.size() == 8);
  for (AgentId id : poly) {
    CHECK(id >= 1);
    CHECK(id <= 64);
  }
  CHECK(idmax_for(8, IdScheme::Perm) == 8);
  CHECK(idmax_for(8, IdScheme::Poly) == 64);
}

TEST_CASE("place spreads k agents over exactly l start nodes") {
  GraphSpec spec;
  spec.family = GraphFamily::Path;
  spec.n = 10;
  spec.seed = 4;
  const PortGraph g = generate(spec);

  const Placement one = place(g, 5, 1, 7);
  CHECK(one.start_nodes.size() == 5);
  CHECK(one.distinct_count() == 1);

  const Placement spread = place(g, 5, 5, 7);
  CHECK(spread.distinct_count() == 5);

  const Placement two = place(g, 4, 2, 9);
  CHECK(two.distinct_count() == 2);
  std::map<NodeId, int> occupancy;
  for (NodeId v : two.start_nodes) ++occupancy[v];
  for (const auto& [node, count] : occupancy) {
    CHECK(count >= 1);
    CHECK(count <= 3);
  }

  CHECK(place(g, 4, 2, 9).start_nodes == two.start_nodes);
  CHECK_THROWS_AS(place(g, 4, 5, 0), Error);
  CHECK_THROWS_AS(place(g, 11, 1, 0), Error);
  CHECK_THROWS_AS(place(g, 4, 0, 0), Error);
}

TEST_CASE("initial_configuration produces the common initial state") {
  const PortGraph g = p3();
  const Configuration c = config_at(g, {2}, 1);
  REQUIRE(c.size() == 1);
  const AgentState& a = c.agents[0];
  CHECK(a.mode == AgentMode::Leader);
  CHECK(a.slot == 0);
  CHECK(a.level == 0);
  CHECK(a.leaderid == 2);
  CHECK(a.last == 0);
  CHECK(a.inport == kNoPort);
  CHECK(a.pin == kNoPort);
  CHECK(a.groupid == -1);
  CHECK(c.t == 0);

  const Configuration crowd = config_at(g, {3, 1, 2}, 0);
  CHECK(crowd.size() == 3);
  CHECK(crowd.agents[0].id == 1);  // sorted by id
  CHECK(crowd.agents[2].id == 3);
  std::vector<NodeId> start = crowd.nodes;
  CHECK(start == std::vector<NodeId>{0, 0, 0});
}

TEST_CASE("initial_configuration rejects bad input") {
  const PortGraph g = p3();
  CHECK_THROWS_WITH_AS(config_at(g, {1, 1}, 0), doctest::Contains("DuplicateId"), Error);
  CHECK_THROWS_AS(config_at(g, {1}, 5), Error);
  CHECK_THROWS_AS(config_at(g, {1, 2, 3, 4}, 0), Error);  // k > n
  CHECK_THROWS_AS(config_at(g, {0}, 0), Error);           // ids positive
}

TEST_CASE("step: all-stay rule is a fixpoint modulo bookkeeping") {
  const PortGraph g = p3();
  const Configuration c0 = config_at(g, {1, 2, 3}, 0);
  const NoOpRule rule;
  const Configuration c1 = step(g, c0, rule);
  CHECK(c1.t == 1);
  for (std::size_t i = 0; i < c1.size(); ++i) {
    CHECK(c1.nodes[i] == c0.nodes[i]);
    CHECK(c1.agents[i].pin == kNoPort);
    CHECK(c1.agents[i].slot == 1);  // slot tracks t mod 4
    CHECK(c1.agents[i].mode == c0.agents[i].mode);
    CHECK(c1.agents[i].level == c0.agents[i].level);
    CHECK(c1.agents[i].last == c0.agents[i].last);
  }
}

TEST_CASE("step: forced move lands with the reverse port as pin") {
  const PortGraph g = p2();
  const Configuration c0 = config_at(g, {1}, 0);
  const ForcePortRule rule(0);
  const Configuration c1 = step(g, c0, rule);
  CHECK(c1.nodes[0] == 1);
  CHECK(c1.agents[0].pin == 0);
  // And back again: reciprocity.
  const Configuration c2 = step(g, c1, rule);
  CHECK(c2.nodes[0] == 0);
  CHECK(c2.agents[0].pin == 0);
}

TEST_CASE("step is a pure function") {
  const PortGraph g = p3();
  const Configuration c0 = config_at(g, {1, 2, 3}, 0);
  const auto rule = make_rule("simple-dfs");
  const Configuration a = step(g, c0, *rule);
  const Configuration b = step(g, c0, *rule);
  CHECK(a.t == b.t);
  CHECK(a.nodes == b.nodes);
  CHECK(a.agents == b.agents);
}

TEST_CASE("step rejects an out-of-range pout") {
  const PortGraph g = p2();
  const Configuration c0 = config_at(g, {1}, 0);
  const ForcePortRule rule(3);
  CHECK_THROWS_WITH_AS(step(g, c0, rule), doctest::Contains("RuleEmittedInvalidPort"), Error);
}

TEST_CASE("is_legitimate: distinctness plus quiescence probe") {
  const PortGraph g = p2();
  const auto svl = make_rule("svl");
  const Configuration solo = config_at(g, {1}, 0);
  CHECK(is_legitimate(g, solo, *svl));

  Placement spread;
  spread.start_nodes = {0, 1};
  const Configuration apart = initial_configuration(g, spread, {1, 2});
  CHECK(is_legitimate(g, apart, *svl));

  const Configuration together = config_at(g, {1, 2}, 0);
  CHECK_FALSE(is_legitimate(g, together, *svl));

  // The probe must not mutate the configuration.
  Configuration copy = together;
  (void)is_legitimate(g, copy, *svl);
  CHECK(copy.agents == together.agents);
  CHECK(copy.nodes == together.nodes);
}

TEST_CASE("run: derived micro traces and the k=1 trivial case") {
  const auto dfs = make_rule("simple-dfs");
  const auto svl = make_rule("svl");

  const PortGraph path3 = p3();
  const RunResult r1 = run(path3, config_at(path3, {1, 2, 3}, 0), *dfs, 1000, nullptr, nullptr);
  REQUIRE(r1.steps_to_dispersion.has_value());
  CHECK(*r1.steps_to_dispersion == 2);

  const PortGraph path2 = p2();
  const RunResult r2 = run(path2, config_at(path2, {1, 2}, 0), *svl, 1000, nullptr, nullptr);
  REQUIRE(r2.steps_to_dispersion.has_value());
  CHECK(*r2.steps_to_dispersion == 5);
  CHECK(r2.max_level_observed == 1);
  CHECK(r2.m_prime == 1);
  CHECK(r2.l == 1);
  CHECK(r2.moves_total == 1);

  const RunResult r3 = run(path3, config_at(path3, {5}, 2), *svl, 1000, nullptr, nullptr);
  REQUIRE(r3.steps_to_dispersion.has_value());
  CHECK(*r3.steps_to_dispersion == 0);
}

TEST_CASE("run reports timeout in the result, not as an error") {
  const PortGraph g = p2();
  const auto svl = make_rule("svl");
  const RunResult r = run(g, config_at(g, {1, 2}, 0), *svl, 2, nullptr, nullptr);
  CHECK(r.timeout());
  CHECK_FALSE(r.steps_to_dispersion.has_value());
}

TEST_CASE("slot synchrony and pin correctness along a run") {
  GraphSpec spec;
  spec.family = GraphFamily::Ring;
  spec.n = 8;
  spec.seed = 17;
  const PortGraph g = generate(spec);
  const auto svl = make_rule("svl");
  const Placement pl = place(g, 5, 2, 3);
  const Configuration c0 = initial_configuration(g, pl, make_agent_ids(5, IdScheme::Perm, 3));

  CollectingTraceSink sink;
  const RunResult r = run(g, c0, *svl, default_max_steps(m_prime(g, 5), 2), nullptr, &sink);
  REQUIRE(r.steps_to_dispersion.has_value());
  for (const Configuration& c : sink.configs)
    for (const AgentState& a : c.agents) CHECK(a.slot == c.t % 4);

  for (std::size_t s = 1; s < sink.configs.size(); ++s) {
    const Configuration& prev = sink.configs[s - 1];
    const Configuration& cur = sink.configs[s];
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur.nodes[i] == prev.nodes[i]) {
        CHECK(cur.agents[i].pin == kNoPort);
      } else {
        REQUIRE(cur.agents[i].pin != kNoPort);
        // pin is the label of the traversed edge at the arrival node.
        const auto [back, port] = g.neighbor_via(cur.nodes[i], cur.agents[i].pin);
        CHECK(back == prev.nodes[i]);
        (void)port;
      }
    }
  }
}

TEST_CASE("default step cap follows the budget formula with a floor") {
  CHECK(default_max_steps(1, 1) == 1000);
  CHECK(default_max_steps(100, 1) == 12800);   // 64 * 100 * 2
  CHECK(default_max_steps(100, 8) == 32000);   // 64 * 100 * 5
  CHECK(floor_log2(1) == 0);
  CHECK(floor_log2(2) == 1);
  CHECK(floor_log2(3) == 1);
  CHECK(floor_log2(32) == 5);
}
