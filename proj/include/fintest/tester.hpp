#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fintest/catalog.hpp"
#include "fintest/compiler.hpp"
#include "fintest/graph.hpp"

namespace fintest {

struct RareRequirement {
  std::size_t type = 0;
  std::uint64_t count = 0;
};

// Count >= k_i and congruent to a modulo b.
struct FrequentRequirement {
  std::size_t type = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 1;
  std::uint64_t k_i = 0;
};

// One single-vector choice out of a template: every position fixed to one
// entry. Rare types carry exact counts, frequent types congruences.
struct CompiledUnit {
  std::size_t template_index = 0;
  std::uint64_t k = 1;
  std::vector<CchvEntry> choice;
  std::vector<RareRequirement> rare;
  std::vector<FrequentRequirement> frequent;
  std::vector<bool> is_rare;  // by component type
  std::uint64_t g = 0;        // gcd of b_i * |t_i|; 0 when there are no frequent types
  std::int64_t frobenius = 0; // of the same weights; 0 when there are none
  std::uint64_t lcm_b = 1;
  std::uint64_t rare_budget = 0;
  std::uint64_t fixed_budget = 0;
  std::uint64_t n0 = 0;
  std::uint64_t n0_formula = 0;

  bool has_frequent() const noexcept { return !frequent.empty(); }
  bool satisfied_by(std::span<const std::uint64_t> chv) const;
};

struct TesterOptions {
  std::size_t unit_guard = 10'000;
  double c0 = 18.0;
  // Ball-type count used for q in place of the catalog's; it may only be larger.
  std::optional<std::size_t> ball_types;
};

struct Tester {
  std::size_t c = 1;
  int d = 0;
  double epsilon = 0.1;
  std::uint64_t q = 0;
  std::size_t ball_types = 0;  // N(c, d)
  std::uint64_t trials_per_unit = 1;
  std::vector<CchvTemplate> templates;
  std::vector<CompiledUnit> units;
};

// ceil(N^2 / (eps/2)^2 * ln(N + 40)).
std::uint64_t sample_size(std::size_t ball_types, double epsilon);
// ceil(c0 * ln(3 * units)), at least 1.
std::uint64_t majority_trials(std::size_t units, double c0 = 18.0);

// Expands every template into single-vector units, dropping repeats.
// Throws InputError for epsilon outside (0, 1] or a catalog mismatch, and
// ResourceError past the unit guard.
Tester compile_tester(const CompiledSentence& cs, const TypeCatalog& cat, double epsilon, TesterOptions opts = {});

// Seed of the generator for one trial, mixed from (master, unit, trial).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t unit, std::uint64_t trial);

// Empirical ball-type distribution from s uniform vertex draws.
Distribution estimate_frequencies(const OracleGraph& g, const TypeCatalog& cat, int r, std::uint64_t s,
                                  std::mt19937_64& rng);

enum class Decision { kAccept, kReject, kNotInClass };
std::string to_string(Decision d);

struct TrialRecord {
  std::size_t unit = 0;
  std::uint64_t trial = 0;
  std::uint64_t queries = 0;
  bool exact = false;
  bool rare_seen = false;
  bool arithmetic_ok = false;
  Decision decision = Decision::kReject;
};

struct UnitSummary {
  std::size_t unit = 0;
  Decision decision = Decision::kReject;
  std::uint64_t accepts = 0;
  std::uint64_t rejects = 0;
  std::uint64_t queries = 0;
  std::int64_t n_prime = 0;
};

struct Verdict {
  Decision decision = Decision::kReject;
  std::uint64_t seed = 0;
  std::uint64_t queries = 0;
  std::vector<TrialRecord> trials;
  std::vector<UnitSummary> units;
  std::string diagnostic;
};

// Reads the whole graph; throws NotInClassError when it is outside C^c_d.
bool exact_decide(const OracleGraph& g, std::span<const CchvTemplate> templates, const TypeCatalog& cat);

// One run of the unit's tester. For n <= n0 the graph is read exactly.
Verdict run_single(const CompiledUnit& unit, const Tester& t, const TypeCatalog& cat, const OracleGraph& g,
                   std::uint64_t seed);

// Majority of trials_per_unit runs per unit (stopping once the majority is
// settled); accepts at the first accepting unit.
Verdict run_union(const Tester& t, const TypeCatalog& cat, const OracleGraph& g, std::uint64_t seed);

// A member of the unit's vector on exactly n vertices, or nullopt when none
// exists.
std::optional<ExplicitGraph> construct_member(const CompiledUnit& unit, std::uint64_t n, const TypeCatalog& cat);
// Its component histogram, without building the graph.
std::optional<std::vector<std::uint64_t>> member_histogram(const CompiledUnit& unit, std::uint64_t n,
                                                           const TypeCatalog& cat);

}  // namespace fintest
