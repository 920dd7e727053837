#include "fintest/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fintest/errors.hpp"

namespace fintest {

ExplicitGraph ExplicitGraph::from_edges(std::size_t n, std::span<const Edge> edges) {
  ExplicitGraph g(n);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw InputError("edge endpoint out of range: " + std::to_string(e.u + 1) + " " +
                       std::to_string(e.v + 1));
    }
    if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u + 1));
    g.adj_[e.u].push_back(e.v);
    g.adj_[e.v].push_back(e.u);
  }
  for (auto& nbrs : g.adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) {
      throw InputError("duplicate edge");
    }
  }
  g.edge_count_ = edges.size();
  return g;
}

ExplicitGraph ExplicitGraph::disjoint_union(std::span<const ExplicitGraph> parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  ExplicitGraph g(total);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (std::size_t v = 0; v < p.size(); ++v) {
      auto& dst = g.adj_[offset + v];
      dst.reserve(p.adj_[v].size());
      for (Vertex w : p.adj_[v]) dst.push_back(offset + w);
    }
    g.edge_count_ += p.edge_count_;
    offset += p.size();
  }
  return g;
}

std::size_t ExplicitGraph::max_degree() const noexcept {
  std::size_t best = 0;
  for (const auto& nbrs : adj_) best = std::max(best, nbrs.size());
  return best;
}

bool ExplicitGraph::adjacent(Vertex u, Vertex v) const {
  const auto& nbrs = adj_.at(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> ExplicitGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < adj_.size(); ++u) {
    for (Vertex v : adj_[u]) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

ExplicitGraph ExplicitGraph::induced(std::span<const Vertex> vs) const {
  std::vector<Edge> es;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      if (adjacent(vs[i], vs[j])) es.push_back({i, j});
    }
  }
  return from_edges(vs.size(), es);
}

ExplicitGraph ExplicitGraph::relabeled(std::span<const Vertex> perm) const {
  if (perm.size() != size()) throw InputError("permutation size mismatch");
  std::vector<Edge> es;
  es.reserve(edge_count_);
  for (const Edge& e : edges()) es.push_back({perm[e.u], perm[e.v]});
  return from_edges(size(), es);
}

std::vector<std::vector<Vertex>> ExplicitGraph::components() const {
  std::vector<std::vector<Vertex>> out;
  std::vector<char> seen(size(), 0);
  for (Vertex s = 0; s < size(); ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (Vertex w : adj_[comp[head]]) {
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<Vertex> ExplicitGraph::ball_vertices(Vertex v, int r) const {
  std::vector<Vertex> order{v};
  std::vector<int> dist{0};
  for (std::size_t head = 0; head < order.size(); ++head) {
    if (dist[head] >= r) continue;
    for (Vertex w : adj_.at(order[head])) {
      if (std::find(order.begin(), order.end(), w) == order.end()) {
        order.push_back(w);
        dist.push_back(dist[head] + 1);
      }
    }
  }
  return order;
}

RootedBall ball_around(const ExplicitGraph& g, Vertex v, int r) {
  auto vs = g.ball_vertices(v, r);
  return RootedBall{g.induced(vs), 0, r};
}

// ---------------------------------------------------------------------------
// Oracles

OracleGraph::OracleGraph(std::uint64_t n, int d) : n_(n), d_(d) {
  if (d < 0) throw InputError("degree bound must be non-negative");
}

std::optional<Vertex> OracleGraph::query(Vertex v, int j) const {
  if (v < 1 || v > n_) throw std::out_of_range("vertex " + std::to_string(v) + " outside [1, n]");
  if (j < 1 || j > d_) throw std::out_of_range("port " + std::to_string(j) + " outside [1, d]");
  counter_.fetch_add(1, std::memory_order_relaxed);
  return answer(v, j);
}

ExplicitGraph OracleGraph::materialize() const {
  std::vector<Edge> es;
  for (Vertex v = 1; v <= n_; ++v) {
    for (int j = 1; j <= d_; ++j) {
      auto w = query(v, j);
      if (!w) break;
      if (v < *w) es.push_back({v - 1, *w - 1});
    }
  }
  return ExplicitGraph::from_edges(n_, es);
}

ExplicitOracle::ExplicitOracle(ExplicitGraph g, int d)
    : OracleGraph(g.size(), d), graph_(std::move(g)) {
  if (graph_.max_degree() > static_cast<std::size_t>(d)) {
    throw InputError("graph exceeds the declared degree bound");
  }
}

std::optional<Vertex> ExplicitOracle::answer(Vertex v, int j) const {
  auto nbrs = graph_.neighbors(v - 1);
  if (static_cast<std::size_t>(j) > nbrs.size()) return std::nullopt;
  return nbrs[j - 1] + 1;
}

// ---------------------------------------------------------------------------
// Exploration

namespace {

std::size_t local_index(const std::vector<Vertex>& ids, Vertex id) {
  auto it = std::find(ids.begin(), ids.end(), id);
  return it == ids.end() ? ids.size() : static_cast<std::size_t>(it - ids.begin());
}

std::vector<Vertex> read_neighbors(Probe& probe, Vertex v) {
  std::vector<Vertex> out;
  const int d = probe.graph().degree_bound();
  for (int j = 1; j <= d; ++j) {
    auto w = probe.query(v, j);
    if (!w) break;
    out.push_back(*w);
  }
  return out;
}

}  // namespace

RootedBall explore_ball(Probe& probe, Vertex v, int r) {
  if (r < 0) throw std::out_of_range("radius must be non-negative");
  std::vector<Vertex> ids{v};
  std::vector<int> dist{0};
  std::vector<Edge> es;
  for (std::size_t head = 0; head < ids.size(); ++head) {
    for (Vertex w : read_neighbors(probe, ids[head])) {
      std::size_t idx = local_index(ids, w);
      if (idx == ids.size()) {
        if (dist[head] >= r) continue;
        ids.push_back(w);
        dist.push_back(dist[head] + 1);
      }
      if (head < idx) es.push_back({head, idx});
    }
  }
  return RootedBall{ExplicitGraph::from_edges(ids.size(), es), 0, r};
}

RootedBall explore_ball(const OracleGraph& g, Vertex v, int r) {
  Probe probe(g);
  return explore_ball(probe, v, r);
}

std::optional<ExplicitGraph> component_of(Probe& probe, Vertex v, std::size_t cap) {
  if (cap < 1) throw std::out_of_range("component cap must be at least 1");
  std::vector<Vertex> ids{v};
  std::vector<Edge> es;
  for (std::size_t head = 0; head < ids.size(); ++head) {
    for (Vertex w : read_neighbors(probe, ids[head])) {
      std::size_t idx = local_index(ids, w);
      if (idx == ids.size()) {
        ids.push_back(w);
        if (ids.size() > cap) return std::nullopt;
      }
      if (head < idx) es.push_back({head, idx});
    }
  }
  return ExplicitGraph::from_edges(ids.size(), es);
}

std::optional<ExplicitGraph> component_of(const OracleGraph& g, Vertex v, std::size_t cap) {
  Probe probe(g);
  return component_of(probe, v, cap);
}

// ---------------------------------------------------------------------------
// Membership

std::string MembershipReport::summary() const {
  if (pass) return "PASS";
  std::ostringstream os;
  os << "FAIL";
  if (!over_degree.empty()) os << ": " << over_degree.size() << " vertices exceed the degree bound";
  if (!over_size.empty()) os << (over_degree.empty() ? ": " : "; ") << over_size.size()
                             << " vertices lie in oversized components";
  return os.str();
}

MembershipReport validate_membership(const ExplicitGraph& g, std::size_t c, int d) {
  MembershipReport report;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (g.degree(v) > static_cast<std::size_t>(std::max(d, 0))) report.over_degree.push_back(v);
  }
  for (auto& comp : g.components()) {
    if (comp.size() > c) {
      report.over_size.insert(report.over_size.end(), comp.begin(), comp.end());
    }
  }
  std::sort(report.over_size.begin(), report.over_size.end());
  report.pass = report.over_degree.empty() && report.over_size.empty();
  return report;
}

// ---------------------------------------------------------------------------
// Edit distance: branch and bound over bijections V(g1) -> V(g2).

namespace {

struct EditSearch {
  std::size_t n;
  std::vector<std::vector<char>> a1, a2;
  std::vector<Vertex> order;  // g1 vertices in assignment order
  std::vector<Vertex> image;  // image[i] = g2 vertex assigned to order[i]
  std::vector<char> used;
  std::size_t e1 = 0, e2 = 0;
  std::size_t best = 0;

  void run(std::size_t pos, std::size_t cost, std::size_t e1_done, std::size_t e2_done) {
    std::size_t rest1 = e1 - e1_done, rest2 = e2 - e2_done;
    std::size_t bound = cost + (rest1 > rest2 ? rest1 - rest2 : rest2 - rest1);
    if (bound >= best) return;
    if (pos == n) {
      best = cost;
      return;
    }
    Vertex x = order[pos];
    for (Vertex y = 0; y < n; ++y) {
      if (used[y]) continue;
      std::size_t add = 0, d1 = 0, d2 = 0;
      for (std::size_t i = 0; i < pos; ++i) {
        char b1 = a1[x][order[i]], b2 = a2[y][image[i]];
        d1 += b1;
        d2 += b2;
        add += (b1 != b2);
      }
      used[y] = 1;
      image[pos] = y;
      run(pos + 1, cost + add, e1_done + d1, e2_done + d2);
      used[y] = 0;
    }
  }
};

std::vector<std::vector<char>> adjacency_matrix(const ExplicitGraph& g) {
  std::vector<std::vector<char>> m(g.size(), std::vector<char>(g.size(), 0));
  for (const Edge& e : g.edges()) m[e.u][e.v] = m[e.v][e.u] = 1;
  return m;
}

}  // namespace

std::size_t edit_distance(const ExplicitGraph& g1, const ExplicitGraph& g2, std::size_t vertex_cap) {
  if (g1.size() != g2.size()) throw InputError("edit_distance needs equal vertex counts");
  if (g1.size() > vertex_cap) {
    throw ResourceError("edit_distance limited to " + std::to_string(vertex_cap) + " vertices");
  }
  EditSearch s;
  s.n = g1.size();
  s.a1 = adjacency_matrix(g1);
  s.a2 = adjacency_matrix(g2);
  s.e1 = g1.edge_count();
  s.e2 = g2.edge_count();
  s.order.resize(s.n);
  std::iota(s.order.begin(), s.order.end(), Vertex{0});
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](Vertex a, Vertex b) { return g1.degree(a) > g1.degree(b); });
  s.image.assign(s.n, 0);
  s.used.assign(s.n, 0);
  s.best = g1.edge_count() + g2.edge_count() + 1;
  s.run(0, 0, 0, 0);
  return s.best;
}

// ---------------------------------------------------------------------------
// I/O

namespace {

void check_degree(const ExplicitGraph& g, int d) {
  if (d < 0) throw InputError("degree bound must be non-negative");
  if (g.max_degree() > static_cast<std::size_t>(d)) {
    throw InputError("graph has degree " + std::to_string(g.max_degree()) +
                     " above the declared bound " + std::to_string(d));
  }
}

Edge checked_edge(long long u, long long v, long long n) {
  if (u < 1 || v < 1 || u > n || v > n) {
    throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
  }
  if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
  if (u > v) std::swap(u, v);
  return Edge{static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1)};
}

}  // namespace

LoadedGraph read_graph_text(std::istream& in) {
  long long n = 0, d = 0;
  if (!(in >> n >> d) || n < 0 || d < 0) throw InputError("graph header must be 'n d'");
  std::vector<Edge> es;
  long long u = 0, v = 0;
  while (in >> u) {
    if (!(in >> v)) throw InputError("dangling edge endpoint");
    es.push_back(checked_edge(u, v, n));
  }
  if (!in.eof()) throw InputError("unexpected token in edge list");
  LoadedGraph out{ExplicitGraph::from_edges(static_cast<std::size_t>(n), es), static_cast<int>(d)};
  check_degree(out.graph, out.d);
  return out;
}

LoadedGraph read_graph_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("graph JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("d")) {
    throw InputError("graph JSON needs fields n, d, edges");
  }
  long long n = j.at("n").get<long long>();
  long long d = j.at("d").get<long long>();
  if (n < 0 || d < 0) throw InputError("graph JSON: n and d must be non-negative");
  std::vector<Edge> es;
  for (const auto& e : j.value("edges", nlohmann::json::array())) {
    if (!e.is_array() || e.size() != 2) throw InputError("graph JSON: edges are [u, v] pairs");
    es.push_back(checked_edge(e[0].get<long long>(), e[1].get<long long>(), n));
  }
  LoadedGraph out{ExplicitGraph::from_edges(static_cast<std::size_t>(n), es), static_cast<int>(d)};
  check_degree(out.graph, out.d);
  return out;
}

LoadedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file " + path);
  in >> std::ws;
  if (in.peek() == '{') return read_graph_json(in);
  return read_graph_text(in);
}

void write_graph_text(std::ostream& out, const ExplicitGraph& g, int d) {
  out << g.size() << ' ' << d << '\n';
  for (const Edge& e : g.edges()) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

void write_graph_json(std::ostream& out, const ExplicitGraph& g, int d) {
  nlohmann::json j;
  j["n"] = g.size();
  j["d"] = d;
  j["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges()) j["edges"].push_back({e.u + 1, e.v + 1});
  out << j.dump() << '\n';
}

}  // namespace fintest
