#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fintest/catalog.hpp"
#include "fintest/graph.hpp"
#include "fintest/tester.hpp"

namespace fintest {

// `pairs` disjoint edges {2i-1, 2i} followed by `singles` isolated vertices,
// answered arithmetically.
class PairedOracle final : public OracleGraph {
 public:
  PairedOracle(std::uint64_t pairs, std::uint64_t singles, int d = 1);

 private:
  std::optional<Vertex> answer(Vertex v, int j) const override;
  std::uint64_t paired_;
};

// Disjoint union of catalog representatives with the given component
// histogram, types in catalog order; the same layout as realize_chv.
class ChvOracle final : public OracleGraph {
 public:
  ChvOracle(const TypeCatalog& cat, std::vector<std::uint64_t> counts);

 private:
  std::optional<Vertex> answer(Vertex v, int j) const override;
  const TypeCatalog* cat_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> starts_;  // first vertex id (0-based) of each type's block
};

enum class FamilyKind { kEdges, kEdgesPlusVertex, kFromChv, kRandomMix };
std::string to_string(FamilyKind k);
// Accepts the names EDGES, EDGES_PLUS_VERTEX, FROM_CHV, RANDOM_MIX.
FamilyKind family_from_name(const std::string& name);

struct FamilySpec {
  FamilyKind kind = FamilyKind::kEdges;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> chv;      // FROM_CHV
  std::vector<double> weights;         // RANDOM_MIX, by component type; empty means uniform
  std::uint64_t seed = 0;              // RANDOM_MIX
};

struct GeneratedGraph {
  std::unique_ptr<OracleGraph> graph;
  std::vector<std::uint64_t> chv;
  std::uint64_t padded = 0;  // RANDOM_MIX components added by padding
};

// EDGES needs even n, EDGES_PLUS_VERTEX odd n; FROM_CHV needs the histogram
// to cover exactly n vertices (n = 0 takes the histogram's own size).
// Throws InputError otherwise.
GeneratedGraph gen_family(const FamilySpec& spec, const TypeCatalog& cat);

enum class FarStatus { kCertified, kNotFar, kUnknown };
std::string to_string(FarStatus s);

struct FarCertificate {
  FarStatus status = FarStatus::kUnknown;
  std::string method;            // "member", "edge-count", "exact"
  double lower_bound = 0;        // edge modifications; infinity when no member has n vertices
  double threshold = 0;          // epsilon * d * n
};

// Farness of the graph with component histogram `chv` from the tester's
// property. Edge counts give a lower bound on the distance to every member;
// graphs on at most `exact_cap` vertices get the exact distance.
FarCertificate certify_far(std::span<const std::uint64_t> chv, const Tester& t, const TypeCatalog& cat,
                           std::size_t exact_cap = 10);

}  // namespace fintest
