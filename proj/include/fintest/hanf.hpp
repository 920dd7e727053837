#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fintest/catalog.hpp"
#include "fintest/graph.hpp"

namespace fintest {

enum class AtomKind { kGeq, kEq, kMod };

// Counts the vertices whose radius-`radius` ball is isomorphic to `ball`:
//   kGeq: count >= m,  kEq: count == m,  kMod: count = j (mod l).
// The ball code need not be realizable in the class at hand.
struct HanfAtom {
  AtomKind kind = AtomKind::kGeq;
  std::uint64_t m = 0;
  std::uint64_t j = 0;
  std::uint64_t l = 1;
  int radius = 0;
  CanonicalCode ball;

  static HanfAtom geq(std::uint64_t m, int r, CanonicalCode ball);
  static HanfAtom eq(std::uint64_t m, int r, CanonicalCode ball);
  static HanfAtom mod(std::uint64_t j, std::uint64_t l, int r, CanonicalCode ball);

  bool holds(std::uint64_t count) const;

  friend bool operator==(const HanfAtom&, const HanfAtom&) = default;
  friend auto operator<=>(const HanfAtom&, const HanfAtom&) = default;
};

// Boolean combination of Hanf atoms.
struct Hnf {
  enum class Op { kAtom, kNot, kAnd, kOr, kTrue, kFalse };
  Op op = Op::kTrue;
  HanfAtom atom;
  std::vector<Hnf> kids;

  static Hnf of(HanfAtom a);
  static Hnf truth(bool value);
  static Hnf negation(Hnf h);
  static Hnf all(std::vector<Hnf> hs);
  static Hnf any(std::vector<Hnf> hs);

  friend bool operator==(const Hnf&, const Hnf&) = default;
};

struct Literal {
  HanfAtom atom;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

// Disjunction of conjunctive clauses; no clauses means False and an empty
// clause means True.
struct DnfSentence {
  std::vector<Clause> clauses;

  friend bool operator==(const DnfSentence&, const DnfSentence&) = default;
};

inline constexpr std::size_t kDefaultClauseGuard = 100'000;

// False when some single counter (radius, ball) has no value satisfying all
// of the clause's literals on it; a false result proves the clause
// unsatisfiable on every graph.
bool counter_consistent(const Clause& c);

// Appends the conjunction of a and b to `out` unless it is counter
// inconsistent. Literals are kept sorted and unique.
void merge_clauses(const Clause& a, const Clause& b, std::vector<Clause>& out);

// Negation normal form followed by distribution, dropping clauses that are
// counter inconsistent. Throws ResourceError past `guard` clauses.
DnfSentence to_dnf(const Hnf& h, std::size_t guard = kDefaultClauseGuard);
Hnf from_dnf(const DnfSentence& dnf);

// Ball-type census of one graph, computed lazily per radius.
class HanfEvaluator {
 public:
  explicit HanfEvaluator(const ExplicitGraph& g) : g_(&g) {}

  std::uint64_t count(int radius, const CanonicalCode& ball);
  bool eval(const HanfAtom& a);
  bool eval(const Hnf& h);
  bool eval(const Clause& c);
  bool eval(const DnfSentence& d);

 private:
  const ExplicitGraph* g_;
  std::map<int, std::map<CanonicalCode, std::uint64_t>> census_;
};

bool eval_hanf_atom(const ExplicitGraph& g, const HanfAtom& a);
bool eval_hnf(const ExplicitGraph& g, const Hnf& h);
bool eval_dnf(const ExplicitGraph& g, const DnfSentence& d);

std::string to_string(const HanfAtom& a);
std::string to_string(const Hnf& h);
std::string to_string(const DnfSentence& d);

// HNF JSON documents. Nodes are {"bool": "and"|"or", "args": [...]},
// {"bool": "not", "arg": node}, {"bool": "true"|"false"} and atoms
// {"bool": "atom", "kind": "geq"|"eq"|"mod", "m", "j", "l", "r", "ball"}.
// A ball is a rooted canonical code string, a catalog index at radius r,
// or {"n": int, "root": int, "edges": [[u, v], ...]} with 1-based ids.
struct HnfDocument {
  std::optional<std::size_t> c;
  std::optional<int> d;
  Hnf sentence;
};

// Reads only the optional "c" and "d" fields.
HnfDocument read_hnf_header(std::string_view json_text);
// Index balls need `cat`; throws InputError/ParseError on malformed input.
HnfDocument read_hnf(std::string_view json_text, const TypeCatalog* cat = nullptr);
std::string write_hnf(const HnfDocument& doc);

}  // namespace fintest
