#include "fintest/compiler.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>
#include <stdexcept>

#include "fintest/errors.hpp"
#include "fintest/numtheory.hpp"

namespace fintest {

using nlohmann::json;

bool CchvEntry::admits(std::uint64_t count, std::uint64_t k) const {
  if (kind == Kind::kExact) return count == value;
  return count >= k && count % modulus == value;
}

// ---------------------------------------------------------------------------
// Radius unification

namespace {

class RadiusUnifier {
 public:
  RadiusUnifier(const TypeCatalog& cat, int target, CompileGuards guards)
      : cat_(cat), target_(target), guards_(guards) {}

  // Negations are pushed to the atoms; an atom below the target expands to
  // the tuples of its own truth set or of the complement, which keeps the
  // result in negation normal form.
  Hnf expand(const Hnf& h, bool neg) {
    using Op = Hnf::Op;
    switch (h.op) {
      case Op::kTrue: return Hnf::truth(!neg);
      case Op::kFalse: return Hnf::truth(neg);
      case Op::kNot: return expand(h.kids.at(0), !neg);
      case Op::kAtom: return expand_atom(h.atom, neg);
      default: break;
    }
    std::vector<Hnf> kids;
    for (const auto& k : h.kids) kids.push_back(expand(k, neg));
    return (h.op == Op::kAnd) != neg ? Hnf::all(std::move(kids)) : Hnf::any(std::move(kids));
  }

 private:
  Hnf expand_atom(HanfAtom a, bool neg) {
    a.radius = std::min(a.radius, cat_.top_radius());
    if (a.radius > target_) throw InputError("atom radius exceeds the unification target");
    if (a.radius == target_) return neg ? Hnf::negation(Hnf::of(a)) : Hnf::of(a);

    std::vector<CanonicalCode> supers;
    if (auto idx = cat_.find_ball(a.radius, a.ball)) {
      for (std::size_t s : cat_.supertypes(a.radius, *idx, target_)) supers.push_back(cat_.ball(target_, s).code);
    }
    switch (a.kind) {
      case AtomKind::kGeq: return geq(a.m, supers, neg);
      case AtomKind::kEq:
        if (neg) return Hnf::any({geq(a.m, supers, true), geq(a.m + 1, supers, false)});
        return Hnf::all({geq(a.m, supers, false), geq(a.m + 1, supers, true)});
      case AtomKind::kMod: {
        std::vector<Hnf> options;
        for_each_tuple(a.l, supers.size(), [&](const std::vector<std::uint64_t>& b) {
          std::uint64_t sum = 0;
          for (auto x : b) sum = (sum + x) % a.l;
          if ((sum == a.j) == neg) return;
          std::vector<Hnf> parts;
          for (std::size_t i = 0; i < b.size(); ++i) {
            parts.push_back(Hnf::of(HanfAtom::mod(b[i], a.l, target_, supers[i])));
          }
          options.push_back(Hnf::all(std::move(parts)));
        });
        return Hnf::any(std::move(options));
      }
    }
    return Hnf::truth(true);
  }

  // Entries 0..m-1 are exact counts and the value m stands for "at least m".
  Hnf geq(std::uint64_t m, const std::vector<CanonicalCode>& supers, bool neg) {
    if (m == 0) return Hnf::truth(!neg);
    std::vector<Hnf> options;
    for_each_tuple(m + 1, supers.size(), [&](const std::vector<std::uint64_t>& b) {
      std::uint64_t sum = 0;
      for (auto x : b) sum += x;
      if ((sum >= m) == neg) return;
      std::vector<Hnf> parts;
      for (std::size_t i = 0; i < b.size(); ++i) {
        parts.push_back(Hnf::of(b[i] < m ? HanfAtom::eq(b[i], target_, supers[i])
                                         : HanfAtom::geq(m, target_, supers[i])));
      }
      options.push_back(Hnf::all(std::move(parts)));
    });
    return Hnf::any(std::move(options));
  }

  template <class F>
  void for_each_tuple(std::uint64_t base, std::size_t len, F&& f) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < len; ++i) {
      if (total > guards_.tuples / base) {
        throw ResourceError("radius unification exceeds " + std::to_string(guards_.tuples) + " tuples");
      }
      total *= base;
    }
    std::vector<std::uint64_t> b(len, 0);
    for (std::uint64_t n = 0; n < total; ++n) {
      f(b);
      for (std::size_t i = 0; i < len && ++b[i] == base; ++i) b[i] = 0;
    }
  }

  const TypeCatalog& cat_;
  int target_;
  CompileGuards guards_;
};

void check_size(std::size_t n, const CompileGuards& guards) {
  if (n > guards.clauses) throw ResourceError("compilation exceeds " + std::to_string(guards.clauses) + " clauses");
}

// Conjunction over literals of a disjunction of alternatives, each
// alternative a (possibly empty) clause; inconsistent products are dropped.
void expand_clause(const std::vector<std::vector<Clause>>& alternatives, std::set<Clause>& out,
                   const CompileGuards& guards) {
  std::vector<Clause> acc{Clause{}};
  for (const auto& alts : alternatives) {
    std::vector<Clause> next;
    for (const auto& a : acc) {
      for (const auto& b : alts) merge_clauses(a, b, next);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    check_size(next.size(), guards);
    acc = std::move(next);
    if (acc.empty()) return;
  }
  out.insert(acc.begin(), acc.end());
  check_size(out.size(), guards);
}

Clause single(HanfAtom a) { return Clause{Literal{std::move(a), false}}; }

// Count is at least m: exactly m..top-1, or at least top.
std::vector<Clause> at_least_split(const HanfAtom& a, std::uint64_t top) {
  std::vector<Clause> alts;
  for (std::uint64_t i = a.m; i < top; ++i) alts.push_back(single(HanfAtom::eq(i, a.radius, a.ball)));
  alts.push_back(single(HanfAtom::geq(top, a.radius, a.ball)));
  return alts;
}

}  // namespace

Hnf unify_radius(const Hnf& h, const TypeCatalog& cat, std::optional<int> target, CompileGuards guards) {
  int t = target.value_or(cat.top_radius());
  if (t < 0 || t > cat.top_radius()) throw InputError("unification target must lie in 0..c-1");
  return RadiusUnifier(cat, t, guards).expand(h, false);
}

// ---------------------------------------------------------------------------
// Cap unification

CappedDnf unify_cap(const DnfSentence& dnf, CompileGuards guards) {
  std::uint64_t k = 1;
  for (const auto& c : dnf.clauses) {
    for (const auto& lit : c) {
      if (lit.atom.kind == AtomKind::kGeq) k = std::max(k, lit.atom.m);
      if (lit.atom.kind == AtomKind::kEq) k = std::max(k, lit.atom.m + 1);
    }
  }
  std::set<Clause> out;
  for (const auto& c : dnf.clauses) {
    std::vector<std::vector<Clause>> alternatives;
    for (const auto& lit : c) {
      const HanfAtom& a = lit.atom;
      std::vector<Clause> alts;
      switch (a.kind) {
        case AtomKind::kGeq:
          if (!lit.negated) {
            alts = a.m == 0 ? std::vector<Clause>{Clause{}} : at_least_split(a, k);
          } else {
            for (std::uint64_t i = 0; i < a.m; ++i) alts.push_back(single(HanfAtom::eq(i, a.radius, a.ball)));
          }
          break;
        case AtomKind::kEq:
          if (!lit.negated) {
            alts.push_back(single(a));
          } else {
            for (std::uint64_t i = 0; i < k; ++i) {
              if (i != a.m) alts.push_back(single(HanfAtom::eq(i, a.radius, a.ball)));
            }
            alts.push_back(single(HanfAtom::geq(k, a.radius, a.ball)));
          }
          break;
        case AtomKind::kMod:
          if (a.l == 1) {
            if (!lit.negated) alts.push_back(Clause{});
          } else if (!lit.negated) {
            alts.push_back(single(a));
          } else {
            for (std::uint64_t i = 0; i < a.l; ++i) {
              if (i != a.j) alts.push_back(single(HanfAtom::mod(i, a.l, a.radius, a.ball)));
            }
          }
          break;
      }
      alternatives.push_back(std::move(alts));
    }
    expand_clause(alternatives, out, guards);
  }
  return CappedDnf{k, DnfSentence{{out.begin(), out.end()}}};
}

// ---------------------------------------------------------------------------
// Component-radius reduction

DnfSentence reduce_to_component_radius(const CappedDnf& capped, const TypeCatalog& cat, CompileGuards guards) {
  std::set<Clause> out;
  for (const auto& c : capped.dnf.clauses) {
    std::vector<std::vector<Clause>> alternatives;
    for (const auto& lit : c) {
      const HanfAtom& a = lit.atom;
      if (lit.negated) throw InputError("reduction expects a negation-free clause");
      if (a.radius != cat.top_radius()) throw InputError("reduction expects atoms at radius c-1");
      auto idx = cat.find_ball(a.radius, a.ball);
      std::vector<Clause> alts;
      if (!idx) {
        // The count of an unrealizable type is always zero.
        if (a.holds(0)) alts.push_back(Clause{});
      } else if (a.kind == AtomKind::kGeq && cat.ball(a.radius, *idx).rep > 1) {
        alts = at_least_split(a, a.m * cat.ball(a.radius, *idx).rep);
      } else {
        alts.push_back(single(a));
      }
      alternatives.push_back(std::move(alts));
    }
    expand_clause(alternatives, out, guards);
  }
  return DnfSentence{{out.begin(), out.end()}};
}

// ---------------------------------------------------------------------------
// Template extraction

std::optional<std::vector<EntrySet>> clause_entry_sets(const Clause& clause, const TypeCatalog& cat,
                                                       std::uint64_t k) {
  struct Group {
    std::vector<std::uint64_t> exact;  // component counts demanded by EQ atoms
    bool geq = false;
    std::vector<Congruence> mods;  // component-count congruences
  };
  std::vector<Group> groups(cat.components().size());
  for (const auto& lit : clause) {
    const HanfAtom& a = lit.atom;
    if (lit.negated || a.radius != cat.top_radius()) throw InputError("clause is not in reduced normal form");
    auto idx = cat.find_ball(a.radius, a.ball);
    if (!idx) throw InputError("clause mentions an unrealizable ball type");
    const BallType& b = cat.ball(a.radius, *idx);
    Group& g = groups[*b.underlying];
    switch (a.kind) {
      case AtomKind::kEq:
        if (a.m % b.rep != 0) return std::nullopt;
        g.exact.push_back(a.m / b.rep);
        break;
      case AtomKind::kGeq:
        if ((a.m + b.rep - 1) / b.rep != k) throw InputError("threshold is not the lifted cap");
        g.geq = true;
        break;
      case AtomKind::kMod: {
        std::vector<Congruence> sys{{a.j, a.l}, {0, b.rep}};
        auto vertices = crt_solve(sys);
        if (!vertices) return std::nullopt;
        g.mods.push_back({vertices->residue / b.rep, vertices->modulus / b.rep});
        break;
      }
    }
  }

  std::vector<EntrySet> entries;
  for (const Group& g : groups) {
    std::optional<Congruence> mod;
    if (!g.mods.empty()) {
      mod = crt_solve(g.mods);
      if (!mod) return std::nullopt;
    }
    EntrySet set;
    if (!g.exact.empty()) {
      if (g.geq) return std::nullopt;
      std::uint64_t p = g.exact.front();
      if (std::any_of(g.exact.begin(), g.exact.end(), [p](auto x) { return x != p; })) return std::nullopt;
      if (p >= k) throw std::logic_error("exact component count not below the cap");
      if (mod && p % mod->modulus != mod->residue) return std::nullopt;
      set.push_back(CchvEntry::exact(p));
    } else if (mod) {
      if (!g.geq) {
        for (std::uint64_t z = mod->residue; z < k; z += mod->modulus) set.push_back(CchvEntry::exact(z));
      }
      set.push_back(CchvEntry::cong(mod->residue, mod->modulus));
    } else if (g.geq) {
      set.push_back(CchvEntry::cong(0, 1));
    } else {
      for (std::uint64_t z = 0; z < k; ++z) set.push_back(CchvEntry::exact(z));
      set.push_back(CchvEntry::cong(0, 1));
    }
    entries.push_back(std::move(set));
  }
  return entries;
}

std::vector<CchvTemplate> extract_templates(const DnfSentence& reduced, const TypeCatalog& cat, std::uint64_t k) {
  std::vector<CchvTemplate> out;
  for (const auto& c : reduced.clauses) {
    auto entries = clause_entry_sets(c, cat, k);
    if (!entries) continue;
    CchvTemplate t{k, std::move(*entries)};
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
  }
  return out;
}

bool template_satisfied(std::span<const std::uint64_t> chv, const CchvTemplate& t) {
  if (chv.size() != t.entries.size()) throw InputError("histogram length does not match the template");
  for (std::size_t i = 0; i < chv.size(); ++i) {
    const auto& set = t.entries[i];
    if (std::none_of(set.begin(), set.end(), [&](const CchvEntry& e) { return e.admits(chv[i], t.k); })) {
      return false;
    }
  }
  return true;
}

bool any_template_satisfied(std::span<const std::uint64_t> chv, const std::vector<CchvTemplate>& ts) {
  return std::any_of(ts.begin(), ts.end(), [&](const CchvTemplate& t) { return template_satisfied(chv, t); });
}

CompiledSentence compile_hnf(const Hnf& h, const TypeCatalog& cat, CompileGuards guards) {
  CompiledSentence cs;
  cs.c = cat.c();
  cs.d = cat.d();
  cs.catalog_hash = cat.hash();
  auto dnf = to_dnf(unify_radius(h, cat, std::nullopt, guards), guards.clauses);
  cs.stats.dnf_clauses = dnf.clauses.size();
  auto capped = unify_cap(dnf, guards);
  cs.k = capped.k;
  cs.stats.capped_clauses = capped.dnf.clauses.size();
  auto reduced = reduce_to_component_radius(capped, cat, guards);
  cs.stats.reduced_clauses = reduced.clauses.size();
  for (const auto& c : reduced.clauses) {
    if (!clause_entry_sets(c, cat, cs.k)) ++cs.stats.unsat_clauses;
  }
  cs.templates = extract_templates(reduced, cat, cs.k);
  return cs;
}

// ---------------------------------------------------------------------------
// JSON and text

std::string write_templates(const CompiledSentence& cs) {
  json ts = json::array();
  for (const auto& t : cs.templates) {
    json entries = json::array();
    for (const auto& set : t.entries) {
      json js = json::array();
      for (const auto& e : set) {
        if (e.kind == CchvEntry::Kind::kExact) {
          js.push_back({{"exact", e.value}});
        } else {
          js.push_back({{"cong", {e.value, e.modulus}}});
        }
      }
      entries.push_back(std::move(js));
    }
    ts.push_back({{"entries", std::move(entries)}});
  }
  json doc{{"c", cs.c}, {"d", cs.d}, {"k", cs.k}, {"catalog_hash", cs.catalog_hash}, {"templates", std::move(ts)}};
  return doc.dump(1);
}

CompiledSentence read_templates(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("templates JSON: ") + e.what(), e.byte);
  }
  try {
    CompiledSentence cs;
    cs.c = doc.at("c").get<std::size_t>();
    cs.d = doc.at("d").get<int>();
    cs.k = doc.at("k").get<std::uint64_t>();
    cs.catalog_hash = doc.value("catalog_hash", std::string{});
    if (cs.k == 0) throw InputError("template cap must be at least 1");
    for (const auto& jt : doc.at("templates")) {
      CchvTemplate t{cs.k, {}};
      for (const auto& js : jt.at("entries")) {
        EntrySet set;
        for (const auto& je : js) {
          if (je.contains("exact")) {
            auto p = je.at("exact").get<std::uint64_t>();
            if (p >= cs.k) throw InputError("exact entry must be below the cap");
            set.push_back(CchvEntry::exact(p));
          } else {
            auto jl = je.at("cong");
            auto j = jl.at(0).get<std::uint64_t>(), l = jl.at(1).get<std::uint64_t>();
            if (l == 0 || j >= l) throw InputError("congruence entry needs 0 <= j < l");
            set.push_back(CchvEntry::cong(j, l));
          }
        }
        if (set.empty()) throw InputError("template position with an empty entry set");
        t.entries.push_back(std::move(set));
      }
      cs.templates.push_back(std::move(t));
    }
    return cs;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed templates JSON: ") + e.what());
  }
}

std::string to_string(const CchvEntry& e) {
  if (e.kind == CchvEntry::Kind::kExact) return std::to_string(e.value);
  return "(" + std::to_string(e.value) + "," + std::to_string(e.modulus) + ")";
}

std::string to_string(const CchvTemplate& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    if (i) out += ", ";
    const auto& set = t.entries[i];
    if (set.size() == 1) {
      out += to_string(set.front());
      continue;
    }
    out += "{";
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (j) out += "|";
      out += to_string(set[j]);
    }
    out += "}";
  }
  return out + ")";
}

}  // namespace fintest
