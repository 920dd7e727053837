#include "fintest/tester.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fintest/errors.hpp"
#include "fintest/numtheory.hpp"

namespace fintest {

bool CompiledUnit::satisfied_by(std::span<const std::uint64_t> chv) const {
  if (chv.size() != choice.size()) throw InputError("histogram length does not match the unit");
  for (std::size_t i = 0; i < chv.size(); ++i) {
    if (!choice[i].admits(chv[i], k)) return false;
  }
  return true;
}

std::uint64_t sample_size(std::size_t ball_types, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InputError("epsilon must lie in (0, 1]");
  double n = static_cast<double>(ball_types);
  double half = epsilon / 2.0;
  return static_cast<std::uint64_t>(std::ceil(n * n / (half * half) * std::log(n + 40.0)));
}

std::uint64_t majority_trials(std::size_t units, double c0) {
  if (units == 0) return 1;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(c0 * std::log(3.0 * units))));
}

namespace {

CompiledUnit lower_unit(std::size_t index, std::uint64_t k, std::vector<CchvEntry> choice, const TypeCatalog& cat,
                        double epsilon, std::uint64_t q) {
  CompiledUnit u;
  u.template_index = index;
  u.k = k;
  u.choice = std::move(choice);
  u.is_rare.assign(u.choice.size(), false);
  std::vector<std::uint64_t> weights;
  for (std::size_t t = 0; t < u.choice.size(); ++t) {
    const auto& e = u.choice[t];
    std::uint64_t size = cat.component(t).size;
    if (e.kind == CchvEntry::Kind::kExact) {
      u.rare.push_back({t, e.value});
      u.is_rare[t] = true;
      u.rare_budget += e.value * size;
    } else {
      std::uint64_t k_i = k + (e.value + e.modulus - k % e.modulus) % e.modulus;
      u.frequent.push_back({t, e.value, e.modulus, k_i});
      u.fixed_budget += k_i * size;
      weights.push_back(e.modulus * size);
      u.lcm_b = std::lcm(u.lcm_b, e.modulus);
    }
  }
  if (!weights.empty()) {
    ConicalSet set(weights);
    u.g = set.gcd();
    u.frobenius = set.frobenius();
  }
  double ball_bound = 1.0 + std::pow(static_cast<double>(cat.d()), static_cast<double>(cat.c()));
  double formula = 4.0 / epsilon *
                   (static_cast<double>(u.rare_budget) + static_cast<double>(u.fixed_budget) +
                    static_cast<double>(u.frobenius) + static_cast<double>(u.lcm_b) * ball_bound * static_cast<double>(q));
  u.n0_formula = formula > 0 ? static_cast<std::uint64_t>(std::ceil(formula)) : 0;
  u.n0 = std::max(u.n0_formula, 3 * q * u.rare_budget);
  return u;
}

}  // namespace

Tester compile_tester(const CompiledSentence& cs, const TypeCatalog& cat, double epsilon, TesterOptions opts) {
  if (cs.c != cat.c() || cs.d != cat.d()) throw InputError("templates were compiled for a different class");
  if (!cs.catalog_hash.empty() && cs.catalog_hash != cat.hash()) {
    throw InputError("templates were compiled against a different catalog");
  }
  Tester t;
  t.c = cat.c();
  t.d = cat.d();
  t.epsilon = epsilon;
  t.ball_types = cat.ball_type_count();
  if (opts.ball_types) {
    if (*opts.ball_types < t.ball_types) {
      throw InputError("ball type count " + std::to_string(*opts.ball_types) + " is below the catalog's " +
                       std::to_string(t.ball_types));
    }
    t.ball_types = *opts.ball_types;
  }
  t.q = sample_size(t.ball_types, epsilon);
  t.templates = cs.templates;
  std::set<std::vector<CchvEntry>> seen;
  for (std::size_t i = 0; i < cs.templates.size(); ++i) {
    const auto& tpl = cs.templates[i];
    if (tpl.entries.size() != cat.components().size()) throw InputError("template length does not match the catalog");
    std::vector<std::size_t> pick(tpl.entries.size(), 0);
    while (true) {
      if (t.units.size() >= opts.unit_guard) {
        throw ResourceError("template expansion exceeds " + std::to_string(opts.unit_guard) + " units");
      }
      std::vector<CchvEntry> choice;
      for (std::size_t p = 0; p < pick.size(); ++p) choice.push_back(tpl.entries[p][pick[p]]);
      if (seen.insert(choice).second) t.units.push_back(lower_unit(i, tpl.k, std::move(choice), cat, epsilon, t.q));
      std::size_t p = 0;
      while (p < pick.size() && ++pick[p] == tpl.entries[p].size()) pick[p++] = 0;
      if (p == pick.size()) break;
    }
  }
  t.trials_per_unit = majority_trials(t.units.size(), opts.c0);
  return t;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t unit, std::uint64_t trial) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return mix(mix(mix(master) ^ unit) ^ trial);
}

Distribution estimate_frequencies(const OracleGraph& g, const TypeCatalog& cat, int r, std::uint64_t s,
                                  std::mt19937_64& rng) {
  if (s == 0) throw InputError("sample size must be at least 1");
  if (g.size() == 0) throw InputError("cannot sample from an empty graph");
  Distribution out{r, std::vector<double>(cat.balls(r).size(), 0.0), false};
  std::uniform_int_distribution<Vertex> pick(1, g.size());
  Probe probe(g);
  for (std::uint64_t i = 0; i < s; ++i) {
    auto ball = explore_ball(probe, pick(rng), r);
    if (ball.graph.size() > cat.c() || ball.graph.max_degree() > static_cast<std::size_t>(cat.d())) {
      out.not_in_class = true;
      continue;
    }
    auto idx = cat.find_ball(r, canonical_code(ball.graph, Vertex{0}, 64));
    if (!idx) {
      out.not_in_class = true;
      continue;
    }
    out.freq[*idx] += 1.0 / static_cast<double>(s);
  }
  return out;
}

std::string to_string(Decision d) {
  switch (d) {
    case Decision::kAccept: return "ACCEPT";
    case Decision::kReject: return "REJECT";
    case Decision::kNotInClass: return "NOT_IN_CLASS";
  }
  return "?";
}

bool exact_decide(const OracleGraph& g, std::span<const CchvTemplate> templates, const TypeCatalog& cat) {
  auto h = chv(g.materialize(), cat);
  return std::any_of(templates.begin(), templates.end(),
                     [&](const CchvTemplate& t) { return template_satisfied(h.counts, t); });
}

namespace {

std::int64_t n_prime(const CompiledUnit& u, std::uint64_t n) {
  return static_cast<std::int64_t>(n) - static_cast<std::int64_t>(u.rare_budget + u.fixed_budget);
}

// Sampled regime. The divisibility check does not depend on the samples,
// so a failing check rejects before any query is spent.
TrialRecord sampled_trial(const CompiledUnit& u, const Tester& t, const TypeCatalog& cat, const OracleGraph& g,
                          std::uint64_t seed) {
  TrialRecord rec;
  std::int64_t np = n_prime(u, g.size());
  rec.arithmetic_ok = u.has_frequent() && np >= 0 && np % static_cast<std::int64_t>(u.g) == 0;
  if (!rec.arithmetic_ok) return rec;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Vertex> pick(1, g.size());
  Probe probe(g);
  for (std::uint64_t i = 0; i < t.q; ++i) {
    auto comp = component_of(probe, pick(rng), cat.c());
    std::size_t type = 0;
    try {
      if (!comp) throw NotInClassError("component larger than c");
      type = cat.classify_component(*comp);
    } catch (const NotInClassError&) {
      rec.queries = probe.used();
      rec.decision = Decision::kNotInClass;
      return rec;
    }
    if (u.is_rare[type]) {
      rec.rare_seen = true;
      rec.queries = probe.used();
      return rec;
    }
  }
  rec.queries = probe.used();
  rec.decision = Decision::kAccept;
  return rec;
}

}  // namespace

Verdict run_single(const CompiledUnit& unit, const Tester& t, const TypeCatalog& cat, const OracleGraph& g,
                   std::uint64_t seed) {
  Verdict v;
  v.seed = seed;
  TrialRecord rec;
  if (g.size() <= unit.n0) {
    rec.exact = true;
    std::uint64_t before = g.queries();
    try {
      auto h = chv(g.materialize(), cat);
      rec.decision = unit.satisfied_by(h.counts) ? Decision::kAccept : Decision::kReject;
    } catch (const NotInClassError& e) {
      rec.decision = Decision::kNotInClass;
      v.diagnostic = e.what();
    }
    rec.queries = g.queries() - before;
  } else {
    rec = sampled_trial(unit, t, cat, g, seed);
    if (rec.decision == Decision::kNotInClass) v.diagnostic = "sampled component outside the class";
  }
  v.decision = rec.decision;
  v.queries = rec.queries;
  v.units.push_back({0, rec.decision, rec.decision == Decision::kAccept, rec.decision != Decision::kAccept,
                     rec.queries, n_prime(unit, g.size())});
  v.trials.push_back(rec);
  return v;
}

Verdict run_union(const Tester& t, const TypeCatalog& cat, const OracleGraph& g, std::uint64_t seed) {
  Verdict v;
  v.seed = seed;
  std::optional<std::vector<std::uint64_t>> exact_chv;
  for (std::size_t i = 0; i < t.units.size(); ++i) {
    const CompiledUnit& u = t.units[i];
    UnitSummary sum{i, Decision::kReject, 0, 0, 0, n_prime(u, g.size())};
    if (g.size() <= u.n0) {
      TrialRecord rec;
      rec.unit = i;
      rec.exact = true;
      if (!exact_chv) {
        std::uint64_t before = g.queries();
        try {
          exact_chv = chv(g.materialize(), cat).counts;
        } catch (const NotInClassError& e) {
          v.decision = Decision::kNotInClass;
          v.diagnostic = e.what();
          v.queries += g.queries() - before;
          return v;
        }
        rec.queries = g.queries() - before;
      }
      rec.decision = u.satisfied_by(*exact_chv) ? Decision::kAccept : Decision::kReject;
      (rec.decision == Decision::kAccept ? sum.accepts : sum.rejects) += 1;
      sum.queries = rec.queries;
      sum.decision = rec.decision;
      v.trials.push_back(rec);
    } else {
      const std::uint64_t need = t.trials_per_unit / 2 + 1;
      for (std::uint64_t trial = 0; trial < t.trials_per_unit; ++trial) {
        auto rec = sampled_trial(u, t, cat, g, trial_seed(seed, i, trial));
        rec.unit = i;
        rec.trial = trial;
        sum.queries += rec.queries;
        v.trials.push_back(rec);
        if (rec.decision == Decision::kNotInClass) {
          v.decision = Decision::kNotInClass;
          v.diagnostic = "sampled component outside the class";
          v.queries += sum.queries;
          v.units.push_back(sum);
          return v;
        }
        (rec.decision == Decision::kAccept ? sum.accepts : sum.rejects) += 1;
        if (sum.accepts >= need || sum.rejects > t.trials_per_unit - need) break;
      }
      sum.decision = sum.accepts >= need ? Decision::kAccept : Decision::kReject;
    }
    v.queries += sum.queries;
    v.units.push_back(sum);
    if (sum.decision == Decision::kAccept) {
      v.decision = Decision::kAccept;
      return v;
    }
  }
  v.decision = Decision::kReject;
  return v;
}

std::optional<std::vector<std::uint64_t>> member_histogram(const CompiledUnit& unit, std::uint64_t n,
                                                           const TypeCatalog& cat) {
  if (unit.choice.size() != cat.components().size()) throw InputError("unit does not match the catalog");
  if (n < unit.rare_budget + unit.fixed_budget) return std::nullopt;
  std::uint64_t rest = n - unit.rare_budget - unit.fixed_budget;
  std::vector<std::uint64_t> counts(unit.choice.size(), 0);
  for (const auto& r : unit.rare) counts[r.type] = r.count;
  if (!unit.has_frequent()) {
    if (rest != 0) return std::nullopt;
    return counts;
  }
  std::vector<std::uint64_t> weights;
  for (const auto& f : unit.frequent) weights.push_back(f.b * cat.component(f.type).size);
  auto coeffs = conical_decompose(rest, weights);
  if (!coeffs) return std::nullopt;
  for (std::size_t i = 0; i < unit.frequent.size(); ++i) {
    const auto& f = unit.frequent[i];
    counts[f.type] = f.k_i + (*coeffs)[i] * f.b;
  }
  return counts;
}

std::optional<ExplicitGraph> construct_member(const CompiledUnit& unit, std::uint64_t n, const TypeCatalog& cat) {
  auto counts = member_histogram(unit, n, cat);
  if (!counts) return std::nullopt;
  return realize_chv(cat, *counts);
}

}  // namespace fintest
