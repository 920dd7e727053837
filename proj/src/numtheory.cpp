#include "fintest/numtheory.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "fintest/errors.hpp"

namespace fintest {

namespace {

using i128 = __int128;

void require_weights(std::span<const std::uint64_t> ws) {
  if (ws.empty()) throw InputError("weight set must be nonempty");
  for (auto w : ws) {
    if (w == 0) throw InputError("weights must be positive");
  }
}

// x with a*x + b*y = gcd(a, b)
i128 ext_gcd(i128 a, i128 b, i128& x, i128& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  i128 x1 = 0, y1 = 0;
  i128 g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

}  // namespace

std::uint64_t gcd_many(std::span<const std::uint64_t> ws) {
  require_weights(ws);
  std::uint64_t g = 0;
  for (auto w : ws) g = std::gcd(g, w);
  return g;
}

std::uint64_t lcm_many(std::span<const std::uint64_t> ws) {
  require_weights(ws);
  std::uint64_t l = 1;
  for (auto w : ws) {
    std::uint64_t step = w / std::gcd(l, w);
    if (step != 0 && l > std::numeric_limits<std::uint64_t>::max() / step) {
      throw ResourceError("lcm overflows 64 bits");
    }
    l *= step;
  }
  return l;
}

std::optional<Congruence> crt_solve(std::span<const Congruence> cs) {
  if (cs.empty()) throw InputError("crt_solve needs at least one congruence");
  i128 r = 0, m = 1;
  for (const auto& c : cs) {
    if (c.modulus == 0) throw InputError("modulus must be positive");
    i128 r2 = c.residue % c.modulus, m2 = c.modulus;
    i128 p = 0, q = 0;
    i128 g = ext_gcd(m, m2, p, q);
    i128 diff = r2 - r;
    if (diff % g != 0) return std::nullopt;
    i128 m2g = m2 / g;
    i128 a = (diff / g) % m2g, b = p % m2g;
    if (a < 0) a += m2g;
    if (b < 0) b += m2g;
    using u128 = unsigned __int128;
    i128 t = static_cast<i128>((static_cast<u128>(a) * static_cast<u128>(b)) % static_cast<u128>(m2g));
    i128 next_m = m * m2g;
    if (next_m > static_cast<i128>(std::numeric_limits<std::uint64_t>::max())) {
      throw ResourceError("combined modulus overflows 64 bits");
    }
    r = (r + m * t) % next_m;
    m = next_m;
  }
  return Congruence{static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(m)};
}

ConicalSet::ConicalSet(std::span<const std::uint64_t> ws, std::uint64_t guard) {
  g_ = gcd_many(ws);
  for (auto w : ws) reduced_.push_back(w / g_);
  std::sort(reduced_.begin(), reduced_.end());
  reduced_.erase(std::unique(reduced_.begin(), reduced_.end()), reduced_.end());
  base_ = reduced_.front();
  if (base_ > guard) {
    throw ResourceError("smallest reduced weight " + std::to_string(base_) + " exceeds guard " +
                        std::to_string(guard));
  }
  constexpr auto kInf = std::numeric_limits<std::uint64_t>::max();
  least_.assign(base_, kInf);
  least_[0] = 0;
  using Item = std::pair<std::uint64_t, std::uint64_t>;  // (value, residue)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.push({0, 0});
  while (!heap.empty()) {
    auto [value, res] = heap.top();
    heap.pop();
    if (value != least_[res]) continue;
    for (auto w : reduced_) {
      std::uint64_t nv = value + w;
      std::uint64_t nr = nv % base_;
      if (nv < least_[nr]) {
        least_[nr] = nv;
        heap.push({nv, nr});
      }
    }
  }
  std::uint64_t worst = *std::max_element(least_.begin(), least_.end());
  frobenius_ = (static_cast<std::int64_t>(worst) - static_cast<std::int64_t>(base_)) *
               static_cast<std::int64_t>(g_);
}

bool ConicalSet::contains(std::uint64_t target) const {
  if (target % g_ != 0) return false;
  std::uint64_t y = target / g_;
  return y >= least_[y % base_];
}

std::int64_t frobenius_multiple(std::span<const std::uint64_t> ws, std::uint64_t guard) {
  return ConicalSet(ws, guard).frobenius();
}

std::optional<std::vector<std::uint64_t>> conical_decompose(std::uint64_t target,
                                                            std::span<const std::uint64_t> ws,
                                                            std::uint64_t guard) {
  require_weights(ws);
  std::vector<std::uint64_t> coeff(ws.size(), 0);
  if (target == 0) return coeff;
  ConicalSet set(ws);
  if (!set.contains(target)) return std::nullopt;

  // Past the Frobenius value every multiple of the gcd is a member, so bulk
  // copies of the largest weight can be peeled off before the table fill.
  std::size_t big = static_cast<std::size_t>(std::max_element(ws.begin(), ws.end()) - ws.begin());
  std::uint64_t floor = static_cast<std::uint64_t>(std::max<std::int64_t>(set.frobenius() + 1, 0));
  if (target > floor + ws[big]) {
    std::uint64_t t = (target - floor) / ws[big];
    coeff[big] += t;
    target -= t * ws[big];
  }
  if (target > guard) {
    throw ResourceError("conical_decompose target " + std::to_string(target) + " exceeds guard");
  }

  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> via(target + 1, kNone);
  via[0] = 0;
  for (std::uint64_t x = 1; x <= target; ++x) {
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (ws[i] <= x && via[x - ws[i]] != kNone) {
        via[x] = static_cast<std::uint32_t>(i);
        break;
      }
    }
  }
  if (via[target] == kNone) return std::nullopt;
  for (std::uint64_t x = target; x > 0; x -= ws[via[x]]) ++coeff[via[x]];
  return coeff;
}

}  // namespace fintest
