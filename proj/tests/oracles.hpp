#pragma once
// Brute-force reference implementations used only by the tests. None of
// these share code with the library paths they check.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fintest/graph.hpp"

namespace oracle {

using fintest::Edge;
using fintest::ExplicitGraph;
using fintest::Vertex;

// Least adjacency string over every permutation (root fixed first if given).
inline std::string brute_code(const ExplicitGraph& g, std::optional<Vertex> root = std::nullopt) {
  const std::size_t n = g.size();
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  bool first = true;
  do {
    if (root && perm[0] != *root) continue;
    std::string s;
    for (std::size_t j = 1; j < n; ++j) {
      for (std::size_t i = 0; i < j; ++i) s += g.adjacent(perm[i], perm[j]) ? '1' : '0';
    }
    if (first || s < best) best = s;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline bool is_connected(const ExplicitGraph& g) {
  if (g.size() == 0) return true;
  std::vector<bool> seen(g.size(), false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == g.size();
}

// Every labeled graph on exactly n vertices, via all adjacency bit patterns.
inline std::vector<ExplicitGraph> all_labeled_graphs(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex j = 1; j < n; ++j) {
    for (Vertex i = 0; i < j; ++i) pairs.push_back({i, j});
  }
  std::vector<ExplicitGraph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    std::vector<Edge> es;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (mask >> k & 1) es.push_back({pairs[k].first, pairs[k].second});
    }
    out.push_back(ExplicitGraph::from_edges(n, es));
  }
  return out;
}

// Isomorphism classes of connected graphs on <= c vertices, degree <= d.
inline std::set<std::string> connected_classes(std::size_t c, int d) {
  std::set<std::string> out;
  for (std::size_t n = 1; n <= c; ++n) {
    for (const auto& g : all_labeled_graphs(n)) {
      if (g.max_degree() <= static_cast<std::size_t>(d) && is_connected(g)) {
        out.insert(std::to_string(n) + ":" + brute_code(g));
      }
    }
  }
  return out;
}

// Random graph in C^c_d built from random connected pieces.
inline ExplicitGraph random_member(std::mt19937_64& rng, std::size_t n, std::size_t c, int d) {
  std::vector<ExplicitGraph> parts;
  std::size_t left = n;
  while (left > 0) {
    std::size_t size = std::uniform_int_distribution<std::size_t>(1, std::min(c, left))(rng);
    // Random tree first, then sprinkle extra edges within the degree bound.
    std::vector<Edge> es;
    std::vector<std::size_t> deg(size, 0);
    bool ok = true;
    for (Vertex v = 1; v < size && ok; ++v) {
      std::vector<Vertex> cand;
      for (Vertex u = 0; u < v; ++u) {
        if (deg[u] < static_cast<std::size_t>(d)) cand.push_back(u);
      }
      if (cand.empty()) {
        ok = false;
        break;
      }
      Vertex u = cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)];
      es.push_back({u, v});
      ++deg[u];
      ++deg[v];
    }
    if (!ok) continue;
    for (int extra = 0; extra < 3; ++extra) {
      if (size < 2) break;
      Vertex a = std::uniform_int_distribution<Vertex>(0, size - 1)(rng);
      Vertex b = std::uniform_int_distribution<Vertex>(0, size - 1)(rng);
      if (a == b || deg[a] >= static_cast<std::size_t>(d) || deg[b] >= static_cast<std::size_t>(d)) continue;
      bool dup = false;
      for (const auto& e : es) dup |= (e.u == std::min(a, b) && e.v == std::max(a, b)) || (e.u == std::max(a, b) && e.v == std::min(a, b));
      if (dup) continue;
      es.push_back({a, b});
      ++deg[a];
      ++deg[b];
    }
    parts.push_back(ExplicitGraph::from_edges(size, es));
    left -= size;
  }
  std::shuffle(parts.begin(), parts.end(), rng);
  auto g = ExplicitGraph::disjoint_union(parts);
  std::vector<Vertex> perm(g.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return g.relabeled(perm);
}

// Largest value not reachable as a conical combination, by marking 0..limit.
// Returns -1 when every value is reachable.
inline long long marking_frobenius(const std::vector<std::uint64_t>& ws, std::uint64_t limit = 2000) {
  std::vector<bool> mark(limit + 1, false);
  mark[0] = true;
  for (std::uint64_t x = 1; x <= limit; ++x) {
    for (auto w : ws) {
      if (w <= x && mark[x - w]) {
        mark[x] = true;
        break;
      }
    }
  }
  long long last = -1;
  for (std::uint64_t x = 0; x <= limit; ++x) {
    if (!mark[x]) last = static_cast<long long>(x);
  }
  return last;
}

// The same on the weights divided by their gcd, scaled back: the largest
// unreachable multiple of the gcd, or -gcd when there is none.
inline long long marking_frobenius_multiple(const std::vector<std::uint64_t>& ws) {
  std::uint64_t g = 0;
  for (auto w : ws) g = std::gcd(g, w);
  std::vector<std::uint64_t> reduced;
  for (auto w : ws) reduced.push_back(w / g);
  long long f = marking_frobenius(reduced);
  return f < 0 ? -static_cast<long long>(g) : f * static_cast<long long>(g);
}

// Edit distance by enumerating every edge-modification set of g1 (tiny n).
inline std::size_t brute_edit_distance(const ExplicitGraph& g1, const ExplicitGraph& g2) {
  const std::size_t n = g1.size();
  std::string target = brute_code(g2);
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex j = 1; j < n; ++j) {
    for (Vertex i = 0; i < j; ++i) pairs.push_back({i, j});
  }
  std::size_t best = pairs.size() + 1;
  for (std::uint64_t flip = 0; flip < (std::uint64_t{1} << pairs.size()); ++flip) {
    std::size_t cost = static_cast<std::size_t>(__builtin_popcountll(flip));
    if (cost >= best) continue;
    std::vector<Edge> es;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      bool has = g1.adjacent(pairs[k].first, pairs[k].second);
      if (has != static_cast<bool>(flip >> k & 1)) es.push_back({pairs[k].first, pairs[k].second});
    }
    if (brute_code(ExplicitGraph::from_edges(n, es)) == target) best = cost;
  }
  return best;
}

}  // namespace oracle
