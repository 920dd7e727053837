#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fintest/graph.hpp"

namespace fintest {

// FO+MOD over the edge relation. Counting quantifiers carry their threshold
// (m) or congruence (j mod l) inline.
struct Formula {
  enum class Kind { kEdge, kEqual, kNot, kAnd, kOr, kExists, kForall, kExistsGeq, kExistsEq, kExistsMod };

  Kind kind = Kind::kEqual;
  std::string x, y;  // atom arguments; x is the bound variable of a quantifier
  std::uint64_t m = 0;
  std::uint64_t j = 0;
  std::uint64_t l = 1;
  std::vector<std::shared_ptr<const Formula>> kids;

  bool is_quantifier() const noexcept { return kind >= Kind::kExists; }
};

using FormulaPtr = std::shared_ptr<const Formula>;

bool same_formula(const Formula& a, const Formula& b);

namespace fo {
FormulaPtr edge(std::string x, std::string y);
FormulaPtr equal(std::string x, std::string y);
FormulaPtr negate(FormulaPtr f);
// Nonempty; a single operand is returned as is.
FormulaPtr conj(std::vector<FormulaPtr> fs);
FormulaPtr disj(std::vector<FormulaPtr> fs);
FormulaPtr exists(std::string x, FormulaPtr body);
FormulaPtr forall(std::string x, FormulaPtr body);
FormulaPtr exists_geq(std::uint64_t m, std::string x, FormulaPtr body);
FormulaPtr exists_eq(std::uint64_t m, std::string x, FormulaPtr body);
FormulaPtr exists_mod(std::uint64_t j, std::uint64_t l, std::string x, FormulaPtr body);
}  // namespace fo

// Grammar (whitespace-insensitive):
//   formula := disj ('->' formula)?
//   disj    := conj ('|' conj)*
//   conj    := unary ('&' unary)*
//   unary   := '!' unary | quant var unary | 'E' '(' var ',' var ')' | var '=' var
//            | '(' formula ')'
//   quant   := 'exists' | 'forall' | 'exists>=' m | 'exists=' m | 'exists[' j 'mod' l ']'
// `a -> b` is read as `!a | b`. Throws ParseError on syntax errors, arity
// errors, malformed moduli and free variables.
FormulaPtr parse_sentence(std::string_view text);

// Fully parenthesized text that parses back to the same tree.
std::string to_string(const Formula& f);

inline constexpr std::size_t kDefaultEvalCap = 12;

// Direct semantic recursion. Throws ResourceError above `cap` vertices.
bool eval_exact(const ExplicitGraph& g, const Formula& sentence, std::size_t cap = kDefaultEvalCap);

}  // namespace fintest
