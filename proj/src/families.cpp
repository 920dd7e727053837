#include "fintest/families.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "fintest/errors.hpp"
#include "fintest/numtheory.hpp"

namespace fintest {

PairedOracle::PairedOracle(std::uint64_t pairs, std::uint64_t singles, int d)
    : OracleGraph(2 * pairs + singles, d), paired_(2 * pairs) {
  if (d < 1 && pairs > 0) throw InputError("disjoint edges need degree bound at least 1");
}

std::optional<Vertex> PairedOracle::answer(Vertex v, int j) const {
  if (j != 1 || v > paired_) return std::nullopt;
  return v % 2 == 1 ? v + 1 : v - 1;
}

namespace {

std::uint64_t histogram_size(const TypeCatalog& cat, std::span<const std::uint64_t> counts) {
  std::uint64_t n = 0;
  for (std::size_t t = 0; t < counts.size(); ++t) n += counts[t] * cat.component(t).size;
  return n;
}

}  // namespace

ChvOracle::ChvOracle(const TypeCatalog& cat, std::vector<std::uint64_t> counts)
    : OracleGraph(histogram_size(cat, counts), cat.d()), cat_(&cat), counts_(std::move(counts)) {
  if (counts_.size() != cat.components().size()) throw InputError("histogram length does not match the catalog");
  std::uint64_t at = 0;
  for (std::size_t t = 0; t < counts_.size(); ++t) {
    starts_.push_back(at);
    at += counts_[t] * cat.component(t).size;
  }
}

std::optional<Vertex> ChvOracle::answer(Vertex v, int j) const {
  Vertex v0 = v - 1;
  std::size_t t = static_cast<std::size_t>(std::upper_bound(starts_.begin(), starts_.end(), v0) - starts_.begin()) - 1;
  const CompType& type = cat_->component(t);
  std::uint64_t offset = v0 - starts_[t];
  std::uint64_t base = starts_[t] + offset / type.size * type.size;
  auto nbrs = type.representative.neighbors(offset % type.size);
  if (static_cast<std::size_t>(j) > nbrs.size()) return std::nullopt;
  return base + nbrs[j - 1] + 1;
}

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::kEdges: return "EDGES";
    case FamilyKind::kEdgesPlusVertex: return "EDGES_PLUS_VERTEX";
    case FamilyKind::kFromChv: return "FROM_CHV";
    case FamilyKind::kRandomMix: return "RANDOM_MIX";
  }
  return "?";
}

FamilyKind family_from_name(const std::string& name) {
  for (auto k : {FamilyKind::kEdges, FamilyKind::kEdgesPlusVertex, FamilyKind::kFromChv, FamilyKind::kRandomMix}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown family '" + name + "'");
}

GeneratedGraph gen_family(const FamilySpec& spec, const TypeCatalog& cat) {
  GeneratedGraph out;
  std::vector<std::uint64_t> counts(cat.components().size(), 0);
  switch (spec.kind) {
    case FamilyKind::kEdges:
    case FamilyKind::kEdgesPlusVertex: {
      bool plus = spec.kind == FamilyKind::kEdgesPlusVertex;
      if (spec.n % 2 != (plus ? 1u : 0u)) {
        throw InputError(to_string(spec.kind) + " needs " + (plus ? "odd" : "even") + " n");
      }
      std::uint64_t pairs = spec.n / 2;
      auto vertex = cat.find_component(canonical_code(ExplicitGraph(1)));
      std::vector<Edge> e{{0, 1}};
      auto edge = cat.find_component(canonical_code(ExplicitGraph::from_edges(2, e)));
      if ((pairs > 0 && !edge) || (plus && !vertex)) throw InputError("family not contained in this class");
      if (pairs > 0) counts[*edge] = pairs;
      if (plus) counts[*vertex] = 1;
      out.graph = std::make_unique<PairedOracle>(pairs, plus ? 1 : 0, cat.d());
      break;
    }
    case FamilyKind::kFromChv: {
      if (spec.chv.size() != counts.size()) throw InputError("FROM_CHV histogram length does not match the catalog");
      counts = spec.chv;
      std::uint64_t size = histogram_size(cat, counts);
      if (spec.n != 0 && size != spec.n) {
        throw InputError("FROM_CHV histogram covers " + std::to_string(size) + " vertices, not " +
                         std::to_string(spec.n));
      }
      out.graph = std::make_unique<ChvOracle>(cat, counts);
      break;
    }
    case FamilyKind::kRandomMix: {
      std::vector<double> w = spec.weights;
      if (w.empty()) w.assign(counts.size(), 1.0);
      if (w.size() != counts.size()) throw InputError("RANDOM_MIX weights length does not match the catalog");
      std::discrete_distribution<std::size_t> draw(w.begin(), w.end());
      std::mt19937_64 rng(spec.seed);
      std::size_t smallest = 0;
      for (std::size_t t = 0; t < counts.size(); ++t) {
        if (cat.component(t).size < cat.component(smallest).size) smallest = t;
      }
      std::uint64_t left = spec.n;
      int misses = 0;
      while (left > 0) {
        std::size_t t = draw(rng);
        if (cat.component(t).size <= left) {
          ++counts[t];
          left -= cat.component(t).size;
          misses = 0;
        } else if (++misses >= 100) {
          ++counts[smallest];
          left -= cat.component(smallest).size;
          ++out.padded;
          misses = 0;
        }
      }
      out.graph = std::make_unique<ChvOracle>(cat, counts);
      break;
    }
  }
  out.chv = std::move(counts);
  return out;
}

std::string to_string(FarStatus s) {
  switch (s) {
    case FarStatus::kCertified: return "CERTIFIED";
    case FarStatus::kNotFar: return "NOT_FAR";
    case FarStatus::kUnknown: return "UNKNOWN";
  }
  return "?";
}

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Lower bound on the edit distance from a graph with `edges` edges on n
// vertices to any member of the unit: members' edge counts lie in an
// interval given by the densities of the frequent types.
double edge_bound(const CompiledUnit& u, const TypeCatalog& cat, std::uint64_t n, double edges) {
  if (n < u.rare_budget + u.fixed_budget) return kInfinity;
  std::uint64_t rest = n - u.rare_budget - u.fixed_budget;
  double fixed = 0;
  for (const auto& r : u.rare) fixed += static_cast<double>(r.count * cat.component(r.type).edges);
  for (const auto& f : u.frequent) fixed += static_cast<double>(f.k_i * cat.component(f.type).edges);
  double lo = fixed, hi = fixed;
  if (u.has_frequent()) {
    std::vector<std::uint64_t> weights;
    double min_rho = kInfinity, max_rho = 0;
    for (const auto& f : u.frequent) {
      const CompType& t = cat.component(f.type);
      weights.push_back(f.b * t.size);
      double rho = static_cast<double>(t.edges) / static_cast<double>(t.size);
      min_rho = std::min(min_rho, rho);
      max_rho = std::max(max_rho, rho);
    }
    if (!ConicalSet(weights).contains(rest)) return kInfinity;
    lo += static_cast<double>(rest) * min_rho;
    hi += static_cast<double>(rest) * max_rho;
  } else if (rest != 0) {
    return kInfinity;
  }
  if (edges < lo) return lo - edges;
  if (edges > hi) return edges - hi;
  return 0;
}

void for_each_histogram(const TypeCatalog& cat, std::uint64_t n,
                        const std::function<void(const std::vector<std::uint64_t>&)>& f) {
  std::vector<std::uint64_t> counts(cat.components().size(), 0);
  auto rec = [&](auto&& self, std::size_t t, std::uint64_t left) -> void {
    if (t == counts.size()) {
      if (left == 0) f(counts);
      return;
    }
    std::uint64_t size = cat.component(t).size;
    for (std::uint64_t k = 0; k * size <= left; ++k) {
      counts[t] = k;
      self(self, t + 1, left - k * size);
    }
    counts[t] = 0;
  };
  rec(rec, 0, n);
}

}  // namespace

FarCertificate certify_far(std::span<const std::uint64_t> chv, const Tester& t, const TypeCatalog& cat,
                           std::size_t exact_cap) {
  if (chv.size() != cat.components().size()) throw InputError("histogram length does not match the catalog");
  std::uint64_t n = histogram_size(cat, chv);
  double edges = 0;
  for (std::size_t i = 0; i < chv.size(); ++i) edges += static_cast<double>(chv[i] * cat.component(i).edges);
  FarCertificate cert;
  cert.threshold = t.epsilon * t.d * static_cast<double>(n);
  if (any_template_satisfied(chv, t.templates)) {
    cert.status = FarStatus::kNotFar;
    cert.method = "member";
    return cert;
  }
  if (n <= exact_cap) {
    auto g = realize_chv(cat, chv);
    double best = kInfinity;
    for_each_histogram(cat, n, [&](const std::vector<std::uint64_t>& h) {
      if (!any_template_satisfied(h, t.templates)) return;
      best = std::min(best, static_cast<double>(edit_distance(g, realize_chv(cat, h), exact_cap)));
    });
    cert.method = "exact";
    cert.lower_bound = best;
    cert.status = best > cert.threshold ? FarStatus::kCertified : FarStatus::kNotFar;
    return cert;
  }
  double bound = kInfinity;
  for (const auto& u : t.units) bound = std::min(bound, edge_bound(u, cat, n, edges));
  cert.method = "edge-count";
  cert.lower_bound = bound;
  cert.status = bound > cert.threshold ? FarStatus::kCertified : FarStatus::kUnknown;
  return cert;
}

}  // namespace fintest
