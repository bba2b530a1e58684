#include "dispersim/port_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dispersim/errors.hpp"
#include "dispersim/rng.hpp"

namespace dispersim {

namespace {

std::string node_str(NodeId v) { return std::to_string(v); }

void check_connected(const std::vector<std::vector<std::pair<NodeId, PortNumber>>>& adj) {
  const std::size_t n = adj.size();
  if (n == 0) throw_error(Errc::InvalidParams, "graph needs at least one node");
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (const auto& [u, q] : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++visited;
        stack.push_back(u);
      }
    }
  }
  if (visited != n)
    throw_error(Errc::Disconnected,
                "graph is not connected (" + std::to_string(visited) + " of " +
                    std::to_string(n) + " nodes reachable)");
}

}  // namespace

PortGraph PortGraph::from_edge_list(NodeId n, const std::vector<PortEdge>& edges) {
  if (n < 1) throw_error(Errc::InvalidParams, "node count must be >= 1");
  PortGraph g;
  g.adjacency_.resize(static_cast<std::size_t>(n));

  // First pass: degrees, so port slots can be bounds-checked on insert.
  std::vector<PortNumber> degree(static_cast<std::size_t>(n), 0);
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw_error(Errc::BadNode, "edge endpoint out of range");
    if (e.u == e.v) throw_error(Errc::SelfLoop, "self loop at node " + node_str(e.u));
    if (e.pu < 0 || e.pv < 0)
      throw_error(Errc::PortGap, "negative port on edge " + node_str(e.u) + "-" + node_str(e.v));
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  for (NodeId v = 0; v < n; ++v)
    g.adjacency_[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(degree[static_cast<std::size_t>(v)]),
                                                     {-1, kNoPort});

  std::vector<std::pair<NodeId, NodeId>> seen_pairs;
  seen_pairs.reserve(edges.size());
  auto place = [&](NodeId at, PortNumber port, NodeId to, PortNumber back) {
    auto& slots = g.adjacency_[static_cast<std::size_t>(at)];
    if (port >= static_cast<PortNumber>(slots.size()))
      throw_error(Errc::PortGap, "port " + std::to_string(port) + " at node " + node_str(at) +
                                     " exceeds degree " + std::to_string(slots.size()));
    if (slots[static_cast<std::size_t>(port)].first != -1)
      throw_error(Errc::PortClash, "port " + std::to_string(port) + " reused at node " + node_str(at));
    slots[static_cast<std::size_t>(port)] = {to, back};
  };
  for (const auto& e : edges) {
    seen_pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    place(e.u, e.pu, e.v, e.pv);
    place(e.v, e.pv, e.u, e.pu);
  }

  std::sort(seen_pairs.begin(), seen_pairs.end());
  if (std::adjacent_find(seen_pairs.begin(), seen_pairs.end()) != seen_pairs.end())
    throw_error(Errc::DuplicateEdge, "parallel edge in edge list");

  // Degrees were sized from the edge list, so any unfilled slot means a
  // clash elsewhere; ports are contiguous by construction here. Still, a
  // defensive sweep keeps the invariant explicit.
  for (NodeId v = 0; v < n; ++v)
    for (const auto& [u, q] : g.adjacency_[static_cast<std::size_t>(v)])
      if (u == -1) throw_error(Errc::PortGap, "unbound port slot at node " + node_str(v));

  check_connected(g.adjacency_);

  g.m_ = static_cast<std::int64_t>(edges.size());
  g.max_degree_ = 0;
  for (NodeId v = 0; v < n; ++v) g.max_degree_ = std::max(g.max_degree_, g.degree(v));
  return g;
}

std::pair<NodeId, PortNumber> PortGraph::neighbor_via(NodeId v, PortNumber p) const {
  if (v < 0 || v >= node_count()) throw_error(Errc::BadNode, "node " + node_str(v) + " out of range");
  if (p < 0 || p >= degree(v))
    throw_error(Errc::InvalidPort,
                "port " + std::to_string(p) + " invalid at node " + node_str(v) + " (degree " +
                    std::to_string(degree(v)) + ")");
  return adjacency_[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)];
}

std::vector<PortEdge> PortGraph::canonical_edges() const {
  std::vector<PortEdge> out;
  out.reserve(static_cast<std::size_t>(m_));
  for (NodeId v = 0; v < node_count(); ++v) {
    for (PortNumber p = 0; p < degree(v); ++p) {
      const auto& [u, q] = adjacency_[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)];
      if (v < u) out.push_back({v, p, u, q});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const PortEdge& a, const PortEdge& b) { return std::tie(a.u, a.pu) < std::tie(b.u, b.pu); });
  return out;
}

bool PortGraph::same_edge_set(const PortGraph& other) const {
  if (node_count() != other.node_count() || edge_count() != other.edge_count()) return false;
  auto pairs = [](const PortGraph& g) {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (const auto& e : g.canonical_edges()) out.emplace_back(e.u, e.v);
    std::sort(out.begin(), out.end());
    return out;
  };
  return pairs(*this) == pairs(other);
}

GraphFamily family_from_name(std::string_view name) {
  if (name == "path") return GraphFamily::Path;
  if (name == "ring") return GraphFamily::Ring;
  if (name == "tree") return GraphFamily::Tree;
  if (name == "grid") return GraphFamily::Grid;
  if (name == "erdos-renyi") return GraphFamily::ErdosRenyi;
  if (name == "complete") return GraphFamily::Complete;
  if (name == "file") return GraphFamily::File;
  throw_error(Errc::InvalidParams, "unknown graph family '" + std::string(name) + "'");
}

std::string_view family_name(GraphFamily f) {
  switch (f) {
    case GraphFamily::Path: return "path";
    case GraphFamily::Ring: return "ring";
    case GraphFamily::Tree: return "tree";
    case GraphFamily::Grid: return "grid";
    case GraphFamily::ErdosRenyi: return "erdos-renyi";
    case GraphFamily::Complete: return "complete";
    case GraphFamily::File: return "file";
  }
  return "?";
}

namespace {

// Assigns seed-derived random port permutations to a structural edge list
// and validates the result. The model allows arbitrary labellings;
// randomizing them exercises label independence.
PortGraph finish_with_random_ports(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& structure,
                                   Rng& rng) {
  std::vector<std::vector<std::size_t>> incident(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < structure.size(); ++i) {
    incident[static_cast<std::size_t>(structure[i].first)].push_back(i);
    incident[static_cast<std::size_t>(structure[i].second)].push_back(i);
  }
  std::vector<PortEdge> edges(structure.size());
  for (std::size_t i = 0; i < structure.size(); ++i) {
    edges[i].u = structure[i].first;
    edges[i].v = structure[i].second;
  }
  for (NodeId v = 0; v < n; ++v) {
    const auto& inc = incident[static_cast<std::size_t>(v)];
    auto perm = rng.permutation(static_cast<std::uint32_t>(inc.size()));
    for (std::size_t slot = 0; slot < inc.size(); ++slot) {
      PortEdge& e = edges[inc[slot]];
      PortNumber port = static_cast<PortNumber>(perm[slot]);
      if (e.u == v)
        e.pu = port;
      else
        e.pv = port;
    }
  }
  return PortGraph::from_edge_list(n, edges);
}

std::vector<std::pair<NodeId, NodeId>> path_structure(NodeId n) {
  std::vector<std::pair<NodeId, NodeId>> s;
  for (NodeId i = 0; i + 1 < n; ++i) s.emplace_back(i, i + 1);
  return s;
}

}  // namespace

PortGraph generate(const GraphSpec& spec) {
  if (spec.family == GraphFamily::File) return load_file(spec.path);
  const NodeId n = spec.n;
  if (n < 1) throw_error(Errc::InvalidParams, "n must be >= 1");
  Rng rng(spec.seed);

  std::vector<std::pair<NodeId, NodeId>> structure;
  switch (spec.family) {
    case GraphFamily::Path:
      structure = path_structure(n);
      break;
    case GraphFamily::Ring: {
      if (n < 3) throw_error(Errc::InvalidParams, "ring needs n >= 3");
      structure = path_structure(n);
      structure.emplace_back(n - 1, 0);
      break;
    }
    case GraphFamily::Tree: {
      // Random attachment: node i > 0 hangs off a uniform earlier node.
      for (NodeId i = 1; i < n; ++i)
        structure.emplace_back(static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(i))), i);
      break;
    }
    case GraphFamily::Grid: {
      // 4-neighbor lattice, rows x cols = n with rows the largest divisor
      // of n not exceeding sqrt(n). Prime n degenerates to a 1 x n strip.
      NodeId rows = 1;
      for (NodeId d = 1; static_cast<std::int64_t>(d) * d <= n; ++d)
        if (n % d == 0) rows = d;
      NodeId cols = n / rows;
      auto at = [cols](NodeId r, NodeId c) { return r * cols + c; };
      for (NodeId r = 0; r < rows; ++r)
        for (NodeId c = 0; c < cols; ++c) {
          if (c + 1 < cols) structure.emplace_back(at(r, c), at(r, c + 1));
          if (r + 1 < rows) structure.emplace_back(at(r, c), at(r + 1, c));
        }
      break;
    }
    case GraphFamily::Complete: {
      for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) structure.emplace_back(u, v);
      break;
    }
    case GraphFamily::ErdosRenyi: {
      if (n < 2) throw_error(Errc::InvalidParams, "erdos-renyi needs n >= 2");
      double p = spec.edge_probability;
      if (p == 0.0) p = std::min(1.0, 2.0 * std::log(static_cast<double>(n)) / static_cast<double>(n));
      if (p < 0.0 || p > 1.0) throw_error(Errc::InvalidParams, "edge probability must be in [0,1]");
      // Rejection-sample until connected; keeps the distribution honest.
      const int kRetryBudget = 1000;
      for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        structure.clear();
        for (NodeId u = 0; u < n; ++u)
          for (NodeId v = u + 1; v < n; ++v)
            if (rng.unit() < p) structure.emplace_back(u, v);
        // Cheap connectivity probe before committing to port assignment.
        std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(n));
        for (auto& [u, v] : structure) {
          adj[static_cast<std::size_t>(u)].push_back(v);
          adj[static_cast<std::size_t>(v)].push_back(u);
        }
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<NodeId> stack{0};
        seen[0] = 1;
        std::size_t visited = 1;
        while (!stack.empty()) {
          NodeId v = stack.back();
          stack.pop_back();
          for (NodeId u : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(u)]) {
              seen[static_cast<std::size_t>(u)] = 1;
              ++visited;
              stack.push_back(u);
            }
        }
        if (visited == static_cast<std::size_t>(n)) return finish_with_random_ports(n, structure, rng);
      }
      throw_error(Errc::ConnectivityFailure,
                  "no connected erdos-renyi sample within retry budget (p too small?)");
    }
    case GraphFamily::File:
      break;  // handled above
  }
  return finish_with_random_ports(n, structure, rng);
}

std::int64_t m_prime(const PortGraph& g, std::int64_t k) {
  if (k < 1 || k > g.node_count()) throw_error(Errc::InvalidParams, "need 1 <= k <= n");
  const std::int64_t by_degree = k * static_cast<std::int64_t>(g.max_degree()) / 2;
  const std::int64_t by_pairs = k * (k - 1) / 2;
  return std::min(g.edge_count(), std::min(by_degree, by_pairs));
}

void save(const PortGraph& g, std::ostream& out) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.canonical_edges())
    out << e.u << ' ' << e.pu << ' ' << e.v << ' ' << e.pv << '\n';
}

void save_file(const PortGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_error(Errc::Io, "cannot open '" + path + "' for writing");
  save(g, out);
}

PortGraph load(std::istream& in) {
  std::int64_t n = 0, m = 0;
  if (!(in >> n >> m)) throw_error(Errc::ParseError, "missing 'n m' header");
  if (n < 1 || m < 0) throw_error(Errc::ParseError, "invalid header values");
  std::vector<PortEdge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    PortEdge e;
    if (!(in >> e.u >> e.pu >> e.v >> e.pv))
      throw_error(Errc::ParseError,
                  "expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    edges.push_back(e);
  }
  std::string tail;
  if (in >> tail) throw_error(Errc::ParseError, "trailing content after edge list");
  return PortGraph::from_edge_list(static_cast<NodeId>(n), edges);
}

PortGraph load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(Errc::Io, "cannot open '" + path + "'");
  return load(in);
}

}  // namespace dispersim
