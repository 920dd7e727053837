#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fintest/catalog.hpp"
#include "fintest/hanf.hpp"

namespace fintest {

// One admissible value for a component count: exactly `value`, or at least
// the cap k and congruent to `value` modulo `modulus`.
struct CchvEntry {
  enum class Kind { kExact, kCong };
  Kind kind = Kind::kExact;
  std::uint64_t value = 0;
  std::uint64_t modulus = 1;

  static CchvEntry exact(std::uint64_t p) { return {Kind::kExact, p, 1}; }
  static CchvEntry cong(std::uint64_t j, std::uint64_t l) { return {Kind::kCong, j, l}; }

  bool admits(std::uint64_t count, std::uint64_t k) const;

  friend bool operator==(const CchvEntry&, const CchvEntry&) = default;
  friend auto operator<=>(const CchvEntry&, const CchvEntry&) = default;
};

using EntrySet = std::vector<CchvEntry>;

// A k-capped component histogram template with one entry set per component
// type (catalog order).
struct CchvTemplate {
  std::uint64_t k = 1;
  std::vector<EntrySet> entries;

  friend bool operator==(const CchvTemplate&, const CchvTemplate&) = default;
};

struct CompileGuards {
  std::size_t tuples = 100'000;   // radius-unification tuples per atom
  std::size_t clauses = 100'000;  // clauses after any stage
};

// Rewrites every atom to radius `target` (default c-1) by expanding over
// supertypes. Atoms above c-1 are clamped, which is exact on C^c_d.
Hnf unify_radius(const Hnf& h, const TypeCatalog& cat, std::optional<int> target = std::nullopt,
                 CompileGuards guards = {});

struct CappedDnf {
  std::uint64_t k = 1;
  DnfSentence dnf;
};

// Removes negations and brings every threshold under one cap k; outputs
// only GEQ k, EQ m (m < k) and MOD atoms.
CappedDnf unify_cap(const DnfSentence& dnf, CompileGuards guards = {});

// Replaces atoms on unrealizable types by their truth value on C^c_d and
// lifts each GEQ k to the vertex-count threshold k * rep(type).
DnfSentence reduce_to_component_radius(const CappedDnf& capped, const TypeCatalog& cat,
                                       CompileGuards guards = {});

// Entry sets per component type for one reduced clause, or nullopt when the
// clause cannot be satisfied on C^c_d.
std::optional<std::vector<EntrySet>> clause_entry_sets(const Clause& clause, const TypeCatalog& cat,
                                                       std::uint64_t k);

std::vector<CchvTemplate> extract_templates(const DnfSentence& reduced, const TypeCatalog& cat,
                                            std::uint64_t k);

// Throws InputError when the histogram length does not match the template.
bool template_satisfied(std::span<const std::uint64_t> chv, const CchvTemplate& t);
bool any_template_satisfied(std::span<const std::uint64_t> chv, const std::vector<CchvTemplate>& ts);

struct CompileStats {
  std::size_t dnf_clauses = 0;
  std::size_t capped_clauses = 0;
  std::size_t reduced_clauses = 0;
  std::size_t unsat_clauses = 0;
};

struct CompiledSentence {
  std::size_t c = 1;
  int d = 0;
  std::uint64_t k = 1;
  std::string catalog_hash;
  std::vector<CchvTemplate> templates;
  CompileStats stats;
};

CompiledSentence compile_hnf(const Hnf& h, const TypeCatalog& cat, CompileGuards guards = {});

// {"c","d","k","catalog_hash","templates":[{"entries":[[{"exact":p}|{"cong":[j,l]}]]}]}
std::string write_templates(const CompiledSentence& cs);
CompiledSentence read_templates(std::string_view json_text);

std::string to_string(const CchvEntry& e);
std::string to_string(const CchvTemplate& t);

}  // namespace fintest
