#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fintest/graph.hpp"

namespace fintest {

// Complete isomorphism invariant of a small graph, or of a rooted graph when
// the root is pinned. Text form: "G<n>:<bits>" or "R<n>:<bits>", where the
// bits are the lexicographically least upper-triangle adjacency string (pairs
// in column order (0,1),(0,2),(1,2),(0,3),...) over all vertex orderings
// compatible with an invariant vertex coloring.
class CanonicalCode {
 public:
  CanonicalCode() = default;
  // Validates the text form; throws ParseError.
  static CanonicalCode parse(std::string_view text);

  const std::string& text() const noexcept { return text_; }
  bool rooted() const noexcept { return !text_.empty() && text_[0] == 'R'; }
  std::size_t vertex_count() const;

  // The graph encoded by the code; for rooted codes the root is vertex 0.
  ExplicitGraph decode() const;

  friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;

 private:
  friend class Canonicalizer;
  explicit CanonicalCode(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

inline constexpr std::size_t kDefaultCanonicalCap = 8;

// Throws ResourceError above `cap` vertices.
CanonicalCode canonical_code(const ExplicitGraph& g, std::optional<Vertex> root = std::nullopt,
                             std::size_t cap = kDefaultCanonicalCap);

struct CompType {
  std::size_t index = 0;
  CanonicalCode code;
  std::size_t size = 0;
  std::size_t edges = 0;
  ExplicitGraph representative;
};

struct BallType {
  std::size_t index = 0;
  CanonicalCode code;
  int radius = 0;
  RootedBall representative;
  // Set only at radius c-1, where every ball spans its component.
  std::optional<std::size_t> underlying;
  std::size_t rep = 0;
};

struct CatalogLimits {
  std::size_t max_types = 10'000;
  std::size_t canonical_cap = kDefaultCanonicalCap;
};

// All connected graphs on <= c vertices with degree <= d, up to isomorphism,
// sorted by (size, code). Throws ResourceError past limits.max_types.
std::vector<CompType> enumerate_component_types(std::size_t c, int d, CatalogLimits limits = {});

// Rooted balls of radius r realizable in C^c_d: one per (component type,
// root orbit) at r = c-1, deduplicated by code at smaller radii.
std::vector<BallType> enumerate_ball_types(std::span<const CompType> comps, std::size_t c, int r);

enum class HistKind { kBhv, kChv };

struct Histogram {
  HistKind kind = HistKind::kChv;
  int parameter = 0;  // ball radius for bhv, component bound c for chv
  std::vector<std::uint64_t> counts;

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

struct Distribution {
  int radius = 0;
  std::vector<double> freq;
  bool not_in_class = false;  // some sampled ball was outside the catalog
};

double l1_distance(std::span<const double> a, std::span<const double> b);

// Immutable catalog of component types and of realizable ball types at every
// radius 0..c-1 for the class C^c_d.
class TypeCatalog {
 public:
  TypeCatalog(std::size_t c, int d, CatalogLimits limits = {});

  std::size_t c() const noexcept { return c_; }
  int d() const noexcept { return d_; }
  int top_radius() const noexcept { return static_cast<int>(c_) - 1; }
  const CatalogLimits& limits() const noexcept { return limits_; }

  std::span<const CompType> components() const noexcept { return comps_; }
  const CompType& component(std::size_t i) const { return comps_.at(i); }

  // Ball types at radius r; radii >= c-1 share the radius c-1 catalog.
  std::span<const BallType> balls(int r) const;
  std::span<const BallType> balls() const { return balls(top_radius()); }
  const BallType& ball(int r, std::size_t i) const { return balls(r)[i]; }

  std::optional<std::size_t> find_component(const CanonicalCode& code) const;
  std::optional<std::size_t> find_ball(int r, const CanonicalCode& code) const;

  // Types at radius R whose radius-r restriction around the root is ball(r, i).
  std::vector<std::size_t> supertypes(int r, std::size_t i, int R) const;

  // Index of a component's type; throws NotInClassError when the graph is
  // not a connected member of C^c_d. Cheap invariants settle most lookups.
  std::size_t classify_component(const ExplicitGraph& comp) const;

  // Operational N(c,d): number of realizable ball types at radius c-1.
  std::size_t ball_type_count() const noexcept { return balls().size(); }

  // Stable fingerprint of (c, d, codes), hex.
  std::string hash() const;

 private:
  int clamp(int r) const;

  std::size_t c_;
  int d_;
  CatalogLimits limits_;
  std::vector<CompType> comps_;
  std::vector<std::vector<BallType>> balls_;  // by radius
  std::map<CanonicalCode, std::size_t> comp_index_;
  std::vector<std::map<CanonicalCode, std::size_t>> ball_index_;
  // (size, edges, degree multiset) -> candidate component types
  std::map<std::vector<std::uint64_t>, std::vector<std::size_t>> comp_by_invariant_;
};

// Ball histogram at radius r (defaults to c-1) and component histogram.
// Both throw NotInClassError when g is not in C^c_d.
Histogram bhv(const ExplicitGraph& g, const TypeCatalog& cat, std::optional<int> r = std::nullopt);
Histogram chv(const ExplicitGraph& g, const TypeCatalog& cat);

// Component histogram from an exact ball histogram at radius c-1, dividing
// each count by the representative's own census. Throws InputError when a
// division is not exact.
Histogram bhv_to_chv(const Histogram& balls, const TypeCatalog& cat);

// bhv normalized by the vertex count.
Distribution bdv(const ExplicitGraph& g, const TypeCatalog& cat, std::optional<int> r = std::nullopt);

// Explicit graph realizing a component histogram: types in catalog order,
// components laid out consecutively.
ExplicitGraph realize_chv(const TypeCatalog& cat, std::span<const std::uint64_t> counts);

}  // namespace fintest
