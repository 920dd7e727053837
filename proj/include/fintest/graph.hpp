#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fintest {

using Vertex = std::uint64_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Immutable undirected simple graph on vertices 0..n-1. Neighbor lists are
// kept in ascending order. File formats and the oracle protocol use 1-based
// ids; this class is 0-based throughout.
class ExplicitGraph {
 public:
  ExplicitGraph() = default;
  explicit ExplicitGraph(std::size_t n) : adj_(n) {}

  // Throws InputError on self-loops, duplicate edges or out-of-range ids.
  static ExplicitGraph from_edges(std::size_t n, std::span<const Edge> edges);

  // Disjoint union; vertices of `parts[i]` follow those of `parts[i-1]`.
  static ExplicitGraph disjoint_union(std::span<const ExplicitGraph> parts);

  std::size_t size() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adj_.at(v); }
  std::size_t degree(Vertex v) const { return adj_.at(v).size(); }
  std::size_t max_degree() const noexcept;
  bool adjacent(Vertex u, Vertex v) const;

  // Edges with u < v, sorted.
  std::vector<Edge> edges() const;

  // Subgraph induced on `vs`; vertex vs[i] becomes i.
  ExplicitGraph induced(std::span<const Vertex> vs) const;

  // Vertex v becomes perm[v].
  ExplicitGraph relabeled(std::span<const Vertex> perm) const;

  // Connected components, each listed in BFS order from its smallest vertex.
  std::vector<std::vector<Vertex>> components() const;

  // Vertices within distance r of v, in BFS order (v first).
  std::vector<Vertex> ball_vertices(Vertex v, int r) const;

  friend bool operator==(const ExplicitGraph&, const ExplicitGraph&) = default;

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::size_t edge_count_ = 0;
};

// Induced subgraph on N(v, r), relabeled so that the root is vertex 0.
struct RootedBall {
  ExplicitGraph graph;
  Vertex root = 0;
  int radius = 0;
};

RootedBall ball_around(const ExplicitGraph& g, Vertex v, int r);

// A graph reachable only through neighbor queries. Vertex ids are 1..n and
// ports are 1..d; port j answers the j-th neighbor in ascending id order.
// The query counter is shared by all users of the oracle.
class OracleGraph {
 public:
  virtual ~OracleGraph() = default;
  OracleGraph(const OracleGraph&) = delete;
  OracleGraph& operator=(const OracleGraph&) = delete;

  std::uint64_t size() const noexcept { return n_; }
  int degree_bound() const noexcept { return d_; }

  // Throws std::out_of_range for v outside [1, n] or j outside [1, d].
  std::optional<Vertex> query(Vertex v, int j) const;

  std::uint64_t queries() const noexcept { return counter_.load(std::memory_order_relaxed); }
  void reset_queries() noexcept { counter_.store(0, std::memory_order_relaxed); }

  // Reads every neighbor list through counted queries. Only sensible for
  // moderate n.
  ExplicitGraph materialize() const;

 protected:
  OracleGraph(std::uint64_t n, int d);
  virtual std::optional<Vertex> answer(Vertex v, int j) const = 0;

 private:
  std::uint64_t n_;
  int d_;
  mutable std::atomic<std::uint64_t> counter_{0};
};

// Oracle view over an explicit graph.
class ExplicitOracle final : public OracleGraph {
 public:
  ExplicitOracle(ExplicitGraph g, int d);
  const ExplicitGraph& graph() const noexcept { return graph_; }

 private:
  std::optional<Vertex> answer(Vertex v, int j) const override;
  ExplicitGraph graph_;
};

// Per-caller query accounting on top of the oracle's global counter.
class Probe {
 public:
  explicit Probe(const OracleGraph& g) : graph_(&g) {}

  std::optional<Vertex> query(Vertex v, int j) {
    ++used_;
    return graph_->query(v, j);
  }
  const OracleGraph& graph() const noexcept { return *graph_; }
  std::uint64_t used() const noexcept { return used_; }

 private:
  const OracleGraph* graph_;
  std::uint64_t used_ = 0;
};

// Breadth-first exploration of N(v, r). The result is rooted at local vertex
// 0; every ball vertex has its full neighbor list read, so queries <= d*|ball|.
RootedBall explore_ball(Probe& probe, Vertex v, int r);
RootedBall explore_ball(const OracleGraph& g, Vertex v, int r);

// Component of v with local vertex 0 = v, or nullopt when the BFS reaches
// more than `cap` vertices (the input is not cap-finitary).
std::optional<ExplicitGraph> component_of(Probe& probe, Vertex v, std::size_t cap);
std::optional<ExplicitGraph> component_of(const OracleGraph& g, Vertex v, std::size_t cap);

struct MembershipReport {
  bool pass = true;
  std::vector<Vertex> over_degree;     // vertices with degree > d
  std::vector<Vertex> over_size;       // vertices in components larger than c
  std::string summary() const;
};

MembershipReport validate_membership(const ExplicitGraph& g, std::size_t c, int d);

// Minimum number of edge insertions/deletions turning g1 into a graph
// isomorphic to g2. Exponential; throws ResourceError above `vertex_cap`.
std::size_t edit_distance(const ExplicitGraph& g1, const ExplicitGraph& g2,
                          std::size_t vertex_cap = 10);

struct LoadedGraph {
  ExplicitGraph graph;
  int d = 0;
};

// Text format: "n d" then one "u v" line per edge, 1 <= u < v <= n.
LoadedGraph read_graph_text(std::istream& in);
// JSON format: {"n": int, "d": int, "edges": [[u, v], ...]}.
LoadedGraph read_graph_json(std::istream& in);
// Picks the format by the first non-blank character.
LoadedGraph read_graph_file(const std::string& path);

void write_graph_text(std::ostream& out, const ExplicitGraph& g, int d);
void write_graph_json(std::ostream& out, const ExplicitGraph& g, int d);

}  // namespace fintest
