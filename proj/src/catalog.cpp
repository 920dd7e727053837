#include "fintest/catalog.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <set>

#include "fintest/errors.hpp"

namespace fintest {

// ---------------------------------------------------------------------------
// Canonical codes

class Canonicalizer {
 public:
  Canonicalizer(const ExplicitGraph& g, std::optional<Vertex> root) : n_(g.size()) {
    masks_.assign(n_, 0);
    for (const Edge& e : g.edges()) {
      masks_[e.u] |= std::uint64_t{1} << e.v;
      masks_[e.v] |= std::uint64_t{1} << e.u;
    }
    color_vertices(g, root);
    twins_.assign(n_, 0);
    for (std::size_t u = 0; u < n_; ++u) {
      for (std::size_t w = 0; w < n_; ++w) {
        if (u == w || color_[u] != color_[w]) continue;
        std::uint64_t bu = std::uint64_t{1} << u, bw = std::uint64_t{1} << w;
        if ((masks_[u] & ~bw) == (masks_[w] & ~bu)) twins_[u] |= bw;
      }
    }
    rooted_ = root.has_value();
  }

  CanonicalCode run() {
    std::size_t total = n_ * (n_ - (n_ > 0 ? 1 : 0)) / 2;
    cur_.assign(total, '0');
    best_.assign(total, '1');
    order_.assign(n_, 0);
    have_best_ = false;
    search(0, 0);
    std::string text = (rooted_ ? "R" : "G") + std::to_string(n_) + ":" + best_;
    return CanonicalCode(std::move(text));
  }

 private:
  void color_vertices(const ExplicitGraph& g, std::optional<Vertex> root) {
    std::vector<std::tuple<int, int, std::size_t>> key(n_);
    std::vector<int> dist(n_, -1);
    if (root) {
      auto order = g.ball_vertices(*root, static_cast<int>(n_));
      dist[*root] = 0;
      for (Vertex v : order) {
        for (Vertex w : g.neighbors(v)) {
          if (dist[w] < 0) dist[w] = dist[v] + 1;
        }
      }
    }
    for (std::size_t v = 0; v < n_; ++v) {
      bool is_root = root && *root == v;
      key[v] = {is_root ? 0 : 1, dist[v], g.degree(v)};
    }
    auto sorted = key;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    color_.resize(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      color_[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), key[v]) - sorted.begin());
    }
    slot_color_ = color_;
    std::sort(slot_color_.begin(), slot_color_.end());
  }

  void search(std::size_t pos, std::uint64_t used) {
    if (pos == n_) {
      if (!have_best_ || cur_ < best_) best_ = cur_;
      have_best_ = true;
      return;
    }
    const std::size_t start = pos * (pos - (pos > 0 ? 1 : 0)) / 2;
    const std::size_t end = start + pos;
    std::uint64_t tried = 0;
    for (std::size_t v = 0; v < n_; ++v) {
      std::uint64_t bit = std::uint64_t{1} << v;
      if ((used & bit) || color_[v] != slot_color_[pos]) continue;
      if (twins_[v] & tried) continue;
      tried |= bit;
      for (std::size_t i = 0; i < pos; ++i) {
        cur_[start + i] = (masks_[order_[i]] & bit) ? '1' : '0';
      }
      if (have_best_ && cur_.compare(0, end, best_, 0, end) > 0) continue;
      order_[pos] = v;
      search(pos + 1, used | bit);
    }
  }

  std::size_t n_;
  bool rooted_ = false;
  std::vector<std::uint64_t> masks_;
  std::vector<int> color_;
  std::vector<int> slot_color_;
  std::vector<std::uint64_t> twins_;
  std::vector<std::size_t> order_;
  std::string cur_, best_;
  bool have_best_ = false;
};

CanonicalCode canonical_code(const ExplicitGraph& g, std::optional<Vertex> root, std::size_t cap) {
  if (g.size() > std::min<std::size_t>(cap, 64)) {
    throw ResourceError("canonical_code limited to " + std::to_string(std::min<std::size_t>(cap, 64)) +
                        " vertices, got " + std::to_string(g.size()));
  }
  if (root && *root >= g.size()) throw InputError("root outside the graph");
  return Canonicalizer(g, root).run();
}

CanonicalCode CanonicalCode::parse(std::string_view text) {
  if (text.size() < 3 || (text[0] != 'R' && text[0] != 'G')) {
    throw ParseError("canonical code must look like R<n>:<bits> or G<n>:<bits>", 0);
  }
  std::size_t colon = text.find(':');
  if (colon == std::string_view::npos || colon == 1) throw ParseError("canonical code lacks ':'", 1);
  std::size_t n = 0;
  for (std::size_t i = 1; i < colon; ++i) {
    if (text[i] < '0' || text[i] > '9') throw ParseError("bad vertex count in canonical code", i);
    n = n * 10 + static_cast<std::size_t>(text[i] - '0');
    if (n > 64) throw ParseError("canonical code vertex count above 64", i);
  }
  std::string_view bits = text.substr(colon + 1);
  if (bits.size() != n * (n - (n > 0 ? 1 : 0)) / 2) {
    throw ParseError("canonical code bit count does not match vertex count", colon + 1);
  }
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw ParseError("canonical code bits must be 0/1", colon + 1 + i);
  }
  if (text[0] == 'R' && n == 0) throw ParseError("rooted code needs a vertex", 1);
  return CanonicalCode(std::string(text));
}

std::size_t CanonicalCode::vertex_count() const {
  std::size_t colon = text_.find(':');
  return colon == std::string::npos ? 0 : std::stoul(text_.substr(1, colon - 1));
}

ExplicitGraph CanonicalCode::decode() const {
  std::size_t n = vertex_count();
  std::string bits = text_.substr(text_.find(':') + 1);
  std::vector<Edge> es;
  std::size_t k = 0;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i, ++k) {
      if (bits[k] == '1') es.push_back({i, j});
    }
  }
  return ExplicitGraph::from_edges(n, es);
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

bool connected(const ExplicitGraph& g) { return g.size() <= 1 || g.components().size() == 1; }

std::vector<std::uint64_t> invariant_key(const ExplicitGraph& g) {
  std::vector<std::uint64_t> key{g.size(), g.edge_count()};
  std::vector<std::uint64_t> degs;
  degs.reserve(g.size());
  for (Vertex v = 0; v < g.size(); ++v) degs.push_back(g.degree(v));
  std::sort(degs.begin(), degs.end(), std::greater<>());
  key.insert(key.end(), degs.begin(), degs.end());
  return key;
}

}  // namespace

std::vector<CompType> enumerate_component_types(std::size_t c, int d, CatalogLimits limits) {
  if (c < 1) throw InputError("component bound c must be at least 1");
  if (d < 0) throw InputError("degree bound d must be non-negative");
  if (c > limits.canonical_cap) {
    throw ResourceError("c = " + std::to_string(c) + " exceeds the canonical-code cap " +
                        std::to_string(limits.canonical_cap) + "; use a smaller c");
  }
  std::map<CanonicalCode, ExplicitGraph> found;
  std::vector<ExplicitGraph> layer{ExplicitGraph(1)};
  found.emplace(canonical_code(layer.front(), std::nullopt, limits.canonical_cap), layer.front());

  for (std::size_t s = 2; s <= c && !layer.empty(); ++s) {
    std::map<CanonicalCode, ExplicitGraph> next;
    for (const auto& h : layer) {
      const std::size_t m = h.size();
      for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << m); ++subset) {
        if (std::popcount(subset) > d) continue;
        bool ok = true;
        std::vector<Edge> es = h.edges();
        for (std::size_t v = 0; v < m && ok; ++v) {
          if (subset >> v & 1) {
            if (h.degree(v) >= static_cast<std::size_t>(d)) ok = false;
            es.push_back({v, m});
          }
        }
        if (!ok) continue;
        auto g = ExplicitGraph::from_edges(m + 1, es);
        auto code = canonical_code(g, std::nullopt, limits.canonical_cap);
        if (next.emplace(std::move(code), std::move(g)).second &&
            found.size() + next.size() > limits.max_types) {
          throw ResourceError("more than " + std::to_string(limits.max_types) +
                              " component types; use smaller c or d");
        }
      }
    }
    layer.clear();
    for (auto& [code, g] : next) {
      layer.push_back(g);
      found.emplace(code, std::move(g));
    }
  }

  std::vector<CompType> out;
  for (auto& [code, g] : found) {
    CompType t;
    t.code = code;
    t.size = g.size();
    t.edges = g.edge_count();
    t.representative = code.decode();
    out.push_back(std::move(t));
  }
  std::stable_sort(out.begin(), out.end(), [](const CompType& a, const CompType& b) {
    return a.size != b.size ? a.size < b.size : a.code < b.code;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
  return out;
}

std::vector<BallType> enumerate_ball_types(std::span<const CompType> comps, std::size_t c, int r) {
  if (r < 0) throw InputError("radius must be non-negative");
  const bool top = static_cast<std::size_t>(r) + 1 >= c;
  std::map<CanonicalCode, BallType> found;
  for (const auto& t : comps) {
    for (Vertex v = 0; v < t.size; ++v) {
      RootedBall ball = ball_around(t.representative, v, r);
      auto code = canonical_code(ball.graph, Vertex{0}, 64);
      auto [it, fresh] = found.try_emplace(code);
      BallType& b = it->second;
      if (fresh) {
        b.code = code;
        b.radius = r;
        b.representative = RootedBall{code.decode(), 0, r};
        if (top) b.underlying = t.index;
      }
      if (top) ++b.rep;
    }
  }
  std::vector<BallType> out;
  for (auto& [code, b] : found) out.push_back(std::move(b));
  std::stable_sort(out.begin(), out.end(), [](const BallType& a, const BallType& b) {
    std::size_t sa = a.representative.graph.size(), sb = b.representative.graph.size();
    return sa != sb ? sa < sb : a.code < b.code;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
  return out;
}

// ---------------------------------------------------------------------------
// Catalog

TypeCatalog::TypeCatalog(std::size_t c, int d, CatalogLimits limits)
    : c_(c), d_(d), limits_(limits), comps_(enumerate_component_types(c, d, limits)) {
  for (const auto& t : comps_) {
    comp_index_.emplace(t.code, t.index);
    comp_by_invariant_[invariant_key(t.representative)].push_back(t.index);
  }
  for (int r = 0; r <= top_radius(); ++r) {
    balls_.push_back(enumerate_ball_types(comps_, c_, r));
    auto& index = ball_index_.emplace_back();
    for (const auto& b : balls_.back()) index.emplace(b.code, b.index);
  }
}

int TypeCatalog::clamp(int r) const {
  if (r < 0) throw InputError("radius must be non-negative");
  return std::min(r, top_radius());
}

std::span<const BallType> TypeCatalog::balls(int r) const { return balls_[clamp(r)]; }

std::optional<std::size_t> TypeCatalog::find_component(const CanonicalCode& code) const {
  auto it = comp_index_.find(code);
  if (it == comp_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> TypeCatalog::find_ball(int r, const CanonicalCode& code) const {
  const auto& index = ball_index_[clamp(r)];
  auto it = index.find(code);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> TypeCatalog::supertypes(int r, std::size_t i, int R) const {
  r = clamp(r);
  R = clamp(R);
  if (r > R) throw InputError("supertypes needs r <= R");
  const auto& target = ball(r, i).code;
  std::vector<std::size_t> out;
  for (const auto& b : balls(R)) {
    RootedBall inner = ball_around(b.representative.graph, 0, r);
    if (canonical_code(inner.graph, Vertex{0}, 64) == target) out.push_back(b.index);
  }
  return out;
}

std::size_t TypeCatalog::classify_component(const ExplicitGraph& comp) const {
  if (comp.size() == 0 || comp.size() > c_ || comp.max_degree() > static_cast<std::size_t>(d_) ||
      !connected(comp)) {
    throw NotInClassError("component outside C^" + std::to_string(c_) + "_" + std::to_string(d_));
  }
  auto it = comp_by_invariant_.find(invariant_key(comp));
  if (it == comp_by_invariant_.end()) throw NotInClassError("component type not in catalog");
  if (it->second.size() == 1) return it->second.front();
  auto found = find_component(canonical_code(comp, std::nullopt, 64));
  if (!found) throw NotInClassError("component type not in catalog");
  return *found;
}

std::string TypeCatalog::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
    h ^= ';';
    h *= 1099511628211ULL;
  };
  mix(std::to_string(c_));
  mix(std::to_string(d_));
  for (const auto& t : comps_) mix(t.code.text());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Histograms

namespace {

void require_member(const ExplicitGraph& g, const TypeCatalog& cat) {
  auto report = validate_membership(g, cat.c(), cat.d());
  if (!report.pass) throw NotInClassError("graph not in C^c_d: " + report.summary());
}

}  // namespace

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("l1_distance needs equal lengths");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

Histogram bhv(const ExplicitGraph& g, const TypeCatalog& cat, std::optional<int> r) {
  require_member(g, cat);
  int radius = r.value_or(cat.top_radius());
  Histogram h{HistKind::kBhv, radius, std::vector<std::uint64_t>(cat.balls(radius).size(), 0)};
  for (Vertex v = 0; v < g.size(); ++v) {
    auto ball = ball_around(g, v, radius);
    auto idx = cat.find_ball(radius, canonical_code(ball.graph, Vertex{0}, 64));
    if (!idx) throw NotInClassError("ball type not realizable in the catalog class");
    ++h.counts[*idx];
  }
  return h;
}

Histogram chv(const ExplicitGraph& g, const TypeCatalog& cat) {
  require_member(g, cat);
  Histogram h{HistKind::kChv, static_cast<int>(cat.c()),
              std::vector<std::uint64_t>(cat.components().size(), 0)};
  for (const auto& comp : g.components()) ++h.counts[cat.classify_component(g.induced(comp))];
  return h;
}

Histogram bhv_to_chv(const Histogram& balls, const TypeCatalog& cat) {
  if (balls.kind != HistKind::kBhv || balls.parameter < cat.top_radius()) {
    throw InputError("bhv_to_chv needs an exact ball histogram at radius >= c-1");
  }
  if (balls.counts.size() != cat.balls().size()) throw InputError("histogram length mismatch");
  Histogram out{HistKind::kChv, static_cast<int>(cat.c()),
                std::vector<std::uint64_t>(cat.components().size(), 0)};
  for (const auto& t : cat.components()) {
    // Any vertex of the representative works; its ball is the whole component.
    auto code = canonical_code(t.representative, Vertex{0}, 64);
    std::size_t i = *cat.find_ball(cat.top_radius(), code);
    std::uint64_t own = cat.ball(cat.top_radius(), i).rep;
    if (balls.counts[i] % own != 0) {
      throw InputError("ball histogram inconsistent: count " + std::to_string(balls.counts[i]) +
                       " not divisible by " + std::to_string(own));
    }
    out.counts[t.index] = balls.counts[i] / own;
  }
  return out;
}

Distribution bdv(const ExplicitGraph& g, const TypeCatalog& cat, std::optional<int> r) {
  auto h = bhv(g, cat, r);
  Distribution out{h.parameter, std::vector<double>(h.counts.size(), 0.0), false};
  if (g.size() == 0) return out;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out.freq[i] = static_cast<double>(h.counts[i]) / static_cast<double>(g.size());
  }
  return out;
}

ExplicitGraph realize_chv(const TypeCatalog& cat, std::span<const std::uint64_t> counts) {
  if (counts.size() != cat.components().size()) throw InputError("chv length mismatch");
  std::vector<ExplicitGraph> parts;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    for (std::uint64_t i = 0; i < counts[t]; ++i) parts.push_back(cat.component(t).representative);
  }
  return ExplicitGraph::disjoint_union(parts);
}

}  // namespace fintest
