#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dispersim {

using NodeId = std::int32_t;

// Local edge label at a node. Valid outgoing ports at v are 0..deg(v)-1;
// -1 is the "no port / did not move" sentinel.
using PortNumber = std::int32_t;

inline constexpr PortNumber kNoPort = -1;

// One directed half of an undirected edge: (u, p_u, v, p_v) means the edge
// {u,v} carries label p_u at u and p_v at v. The two labels are independent.
struct PortEdge {
  NodeId u = 0;
  PortNumber pu = 0;
  NodeId v = 0;
  PortNumber pv = 0;
};

// Simple connected undirected graph with per-node port labels.
// Immutable after construction; safe to share read-only across runs.
class PortGraph {
 public:
  // Builds and fully validates the port structure. Throws PortClash,
  // PortGap, SelfLoop, DuplicateEdge or Disconnected on invalid input.
  static PortGraph from_edge_list(NodeId n, const std::vector<PortEdge>& edges);

  NodeId node_count() const noexcept { return static_cast<NodeId>(adjacency_.size()); }
  std::int64_t edge_count() const noexcept { return m_; }
  PortNumber degree(NodeId v) const { return static_cast<PortNumber>(adjacency_[static_cast<std::size_t>(v)].size()); }
  PortNumber max_degree() const noexcept { return max_degree_; }

  // The node reached from v via port p together with the port label the
  // mover observes on arrival (the reverse port). Applying it again via
  // the returned port leads back: neighbor_via(u, p_u(v)) == (v, p).
  std::pair<NodeId, PortNumber> neighbor_via(NodeId v, PortNumber p) const;

  // Edge set as canonical tuples (min endpoint first), sorted by
  // (min endpoint, its port). save() emits exactly this order.
  std::vector<PortEdge> canonical_edges() const;

  bool same_edge_set(const PortGraph& other) const;

 private:
  PortGraph() = default;
  // adjacency_[v][p] = (neighbor, reverse port)
  std::vector<std::vector<std::pair<NodeId, PortNumber>>> adjacency_;
  std::int64_t m_ = 0;
  PortNumber max_degree_ = 0;
};

enum class GraphFamily { Path, Ring, Tree, Grid, ErdosRenyi, Complete, File };

GraphFamily family_from_name(std::string_view name);
std::string_view family_name(GraphFamily f);

// Instance description. Same spec + seed => identical graph, including
// port numbering (ports at each node are a seed-derived random permutation).
struct GraphSpec {
  GraphFamily family = GraphFamily::Path;
  NodeId n = 0;
  double edge_probability = 0.0;  // erdos-renyi only; 0 = default 2 ln(n) / n
  std::string path;               // file family only
  std::uint64_t seed = 0;
};

PortGraph generate(const GraphSpec& spec);

// Effective edge budget of a truncated DFS: min(m, floor(k*maxdeg/2), k(k-1)/2).
std::int64_t m_prime(const PortGraph& g, std::int64_t k);

// Text format, line oriented: "n m" header then m lines "u p_u v p_v" in
// canonical order. load(save(g)) reproduces g byte-for-byte on re-save.
void save(const PortGraph& g, std::ostream& out);
void save_file(const PortGraph& g, const std::string& path);
PortGraph load(std::istream& in);
PortGraph load_file(const std::string& path);

}  // namespace dispersim
