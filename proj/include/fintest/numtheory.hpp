#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fintest {

struct Congruence {
  std::uint64_t residue = 0;
  std::uint64_t modulus = 1;

  friend bool operator==(const Congruence&, const Congruence&) = default;
};

// Throws InputError on an empty set or a zero weight, and ResourceError if
// the lcm overflows 64 bits.
std::uint64_t gcd_many(std::span<const std::uint64_t> ws);
std::uint64_t lcm_many(std::span<const std::uint64_t> ws);

// Combined congruence (modulus = lcm of the inputs), or nullopt when the
// system is inconsistent. Moduli need not be coprime.
std::optional<Congruence> crt_solve(std::span<const Congruence> cs);

// The numerical semigroup generated by a weight set, with the gcd factored
// out. Membership and the Frobenius value come from shortest paths over the
// residues modulo the smallest reduced weight.
class ConicalSet {
 public:
  static constexpr std::uint64_t kDefaultGuard = 1'000'000;

  // Throws ResourceError if the smallest reduced weight exceeds `guard`.
  explicit ConicalSet(std::span<const std::uint64_t> ws, std::uint64_t guard = kDefaultGuard);

  std::uint64_t gcd() const noexcept { return g_; }

  // True iff target is a conical combination of the weights.
  bool contains(std::uint64_t target) const;

  // Largest multiple of gcd() that is not a conical combination, or -gcd()
  // when every multiple is (a reduced weight equals 1).
  std::int64_t frobenius() const noexcept { return frobenius_; }

 private:
  std::vector<std::uint64_t> reduced_;
  std::uint64_t g_ = 1;
  std::uint64_t base_ = 1;
  std::vector<std::uint64_t> least_;  // least_[r]: smallest member = r mod base_
  std::int64_t frobenius_ = -1;
};

std::int64_t frobenius_multiple(std::span<const std::uint64_t> ws,
                                std::uint64_t guard = ConicalSet::kDefaultGuard);

// Coefficients b with sum b[i]*ws[i] == target, or nullopt. Dynamic
// programming over 0..target; throws ResourceError when target > guard.
std::optional<std::vector<std::uint64_t>> conical_decompose(std::uint64_t target,
                                                            std::span<const std::uint64_t> ws,
                                                            std::uint64_t guard = 50'000'000);

}  // namespace fintest
