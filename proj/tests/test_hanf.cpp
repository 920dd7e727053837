#include <doctest.h>

#include "corpus.hpp"
#include "fintest/errors.hpp"
#include "fintest/hanf.hpp"
#include "fintest/logic.hpp"

using namespace fintest;

namespace {

ExplicitGraph g_family(std::size_t pairs, std::size_t singles) {
  std::vector<Edge> es;
  for (Vertex i = 0; i < pairs; ++i) es.push_back({2 * i, 2 * i + 1});
  return ExplicitGraph::from_edges(2 * pairs + singles, es);
}

CanonicalCode rooted(std::size_t n, std::vector<Edge> es, Vertex root = 0) {
  return canonical_code(ExplicitGraph::from_edges(n, es), root);
}

// First-order rendering of "the radius-r ball around x is isomorphic to the
// rooted graph `code`", built only from E, = and plain quantifiers.
class BallFormula {
 public:
  FormulaPtr ball(const std::string& x, int r, const CanonicalCode& code) {
    auto tau = code.decode();
    std::vector<std::string> names{x};
    for (std::size_t i = 1; i < tau.size(); ++i) names.push_back(fresh());
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t k = i + 1; k < names.size(); ++k) {
        parts.push_back(fo::negate(fo::equal(names[i], names[k])));
        auto e = fo::edge(names[i], names[k]);
        parts.push_back(tau.adjacent(i, k) ? e : fo::negate(e));
      }
    }
    for (std::size_t i = 1; i < names.size(); ++i) parts.push_back(within(x, names[i], r));
    std::string z = fresh();
    std::vector<FormulaPtr> options;
    for (const auto& nm : names) options.push_back(fo::equal(z, nm));
    parts.push_back(fo::forall(z, fo::disj({fo::negate(within(x, z, r)), fo::disj(options)})));
    FormulaPtr body = fo::conj(parts);
    for (std::size_t i = names.size(); i-- > 1;) body = fo::exists(names[i], body);
    return body;
  }

  // dist(a, b) <= r
  FormulaPtr within(const std::string& a, const std::string& b, int r) {
    if (r == 0) return fo::equal(a, b);
    std::string w = fresh();
    return fo::disj({fo::equal(a, b), fo::exists(w, fo::conj({fo::edge(a, w), within(w, b, r - 1)}))});
  }

  // The Hanf atom with the pairwise-distinct expansion for thresholds.
  FormulaPtr atom(const HanfAtom& a) {
    switch (a.kind) {
      case AtomKind::kGeq: return at_least(a.m, a);
      case AtomKind::kEq: return fo::conj({at_least(a.m, a), fo::negate(at_least(a.m + 1, a))});
      case AtomKind::kMod: {
        std::string x = fresh();
        return fo::exists_mod(a.j, a.l, x, ball(x, a.radius, a.ball));
      }
    }
    return nullptr;
  }

 private:
  FormulaPtr at_least(std::uint64_t m, const HanfAtom& a) {
    if (m == 0) {
      std::string t = fresh();
      return fo::forall(t, fo::equal(t, t));
    }
    std::vector<std::string> xs;
    for (std::uint64_t i = 0; i < m; ++i) xs.push_back(fresh());
    FormulaPtr body;
    for (std::size_t i = xs.size(); i-- > 0;) {
      std::vector<FormulaPtr> parts;
      for (std::size_t k = 0; k < i; ++k) parts.push_back(fo::negate(fo::equal(xs[k], xs[i])));
      parts.push_back(ball(xs[i], a.radius, a.ball));
      if (body) parts.push_back(body);
      body = fo::exists(xs[i], fo::conj(parts));
    }
    return body;
  }

  std::string fresh() { return "u" + std::to_string(next_++); }
  int next_ = 0;
};

}  // namespace

TEST_CASE("hanf atom examples") {
  auto edge = rooted(2, {{0, 1}});
  auto vertex = rooted(1, {});
  CHECK(eval_hanf_atom(g_family(3, 0), HanfAtom::geq(6, 1, edge)));
  CHECK_FALSE(eval_hanf_atom(g_family(3, 0), HanfAtom::geq(7, 1, edge)));
  CHECK(eval_hanf_atom(g_family(2, 3), HanfAtom::mod(0, 1, 1, edge)));
  CHECK(eval_hanf_atom(g_family(2, 3), HanfAtom::mod(0, 1, 0, vertex)));
  CHECK(eval_hanf_atom(ExplicitGraph(4), HanfAtom::eq(4, 0, vertex)));
  CHECK(eval_hanf_atom(ExplicitGraph(4), HanfAtom::eq(4, 1, vertex)));
  CHECK_THROWS_AS(HanfAtom::mod(2, 2, 0, vertex), InputError);
}

TEST_CASE("to_dnf examples") {
  auto v = rooted(1, {});
  Hnf a = Hnf::of(HanfAtom::geq(1, 0, v));
  Hnf b = Hnf::of(HanfAtom::geq(2, 0, v));
  Hnf c = Hnf::of(HanfAtom::geq(3, 0, v));
  CHECK(to_dnf(a).clauses.size() == 1);

  auto dist = to_dnf(Hnf::all({Hnf::any({a, b}), c}));
  REQUIRE(dist.clauses.size() == 2);
  CHECK(dist.clauses[0] == Clause{Literal{a.atom, false}, Literal{c.atom, false}});
  CHECK(dist.clauses[1] == Clause{Literal{b.atom, false}, Literal{c.atom, false}});

  auto dm = to_dnf(Hnf::negation(Hnf::all({a, b})));
  REQUIRE(dm.clauses.size() == 2);
  CHECK(dm.clauses[0] == Clause{Literal{a.atom, true}});
  CHECK(dm.clauses[1] == Clause{Literal{b.atom, true}});

  CHECK(to_dnf(Hnf::truth(true)).clauses == std::vector<Clause>{Clause{}});
  CHECK(to_dnf(Hnf::truth(false)).clauses.empty());

  std::vector<Hnf> wide;
  for (int i = 0; i < 20; ++i) {
    wide.push_back(Hnf::any({Hnf::of(HanfAtom::geq(1, i, v)), Hnf::of(HanfAtom::geq(1, i + 20, v))}));
  }
  CHECK_THROWS_AS(to_dnf(Hnf::all(wide)), ResourceError);
}

TEST_CASE("to_dnf drops counter-inconsistent clauses") {
  auto v = rooted(1, {});
  auto m0 = Hnf::of(HanfAtom::mod(0, 2, 0, v));
  auto m1 = Hnf::of(HanfAtom::mod(1, 2, 0, v));
  CHECK(to_dnf(Hnf::all({m0, m1})).clauses.empty());
  CHECK(to_dnf(Hnf::all({Hnf::of(HanfAtom::eq(3, 0, v)), Hnf::negation(Hnf::of(HanfAtom::geq(2, 0, v)))}))
            .clauses.empty());
  CHECK(to_dnf(Hnf::all({Hnf::of(HanfAtom::eq(4, 0, v)), m0})).clauses.size() == 1);
  CHECK_FALSE(counter_consistent({Literal{HanfAtom::eq(3, 0, v), false}, Literal{HanfAtom::mod(0, 3, 0, v), true}}));
  CHECK(counter_consistent({Literal{HanfAtom::eq(3, 0, v), false}, Literal{HanfAtom::mod(0, 3, 1, v), true}}));
}

TEST_CASE("hanf atoms agree with their first-order expansion") {
  struct Setting {
    std::size_t c;
    int d;
    std::size_t max_n;
  };
  for (Setting s : {Setting{2, 1, 8}, Setting{3, 2, 9}}) {
    TypeCatalog cat(s.c, s.d);
    auto graphs = corpus::all_members(cat, s.max_n);
    std::vector<HanfAtom> atoms;
    for (int r = 0; r < static_cast<int>(s.c); ++r) {
      std::vector<CanonicalCode> codes;
      for (const auto& b : cat.balls(r)) codes.push_back(b.code);
      codes.push_back(rooted(4, {{0, 1}, {0, 2}, {0, 3}}));  // not realizable here
      for (const auto& code : codes) {
        for (std::uint64_t m = 0; m <= 3; ++m) atoms.push_back(HanfAtom::geq(m, r, code));
        for (std::uint64_t m = 0; m <= 2; ++m) atoms.push_back(HanfAtom::eq(m, r, code));
        for (std::uint64_t l = 1; l <= 3; ++l) {
          for (std::uint64_t j = 0; j < l; ++j) atoms.push_back(HanfAtom::mod(j, l, r, code));
        }
      }
    }
    std::size_t held = 0, failed = 0;
    for (const auto& a : atoms) {
      BallFormula builder;
      auto f = builder.atom(a);
      for (const auto& g : graphs) {
        bool value = eval_hanf_atom(g, a);
        (value ? held : failed) += 1;
        if (value != eval_exact(g, *f)) {
          FAIL_CHECK("mismatch for " << to_string(a) << " on n=" << g.size());
        }
      }
    }
    CHECK(held > 100);
    CHECK(failed > 100);
  }
}

TEST_CASE("corpus HNF agrees with its sentence") {
  for (const auto& e : corpus::load()) {
    auto f = parse_sentence(e.fo);
    auto h = corpus::hnf_of(e);
    auto dnf = to_dnf(h);
    for (auto [c, d] : e.classes) {
      TypeCatalog cat(c, d);
      for (const auto& g : corpus::all_members(cat, c == 2 ? 8 : 9)) {
        bool truth = eval_exact(g, *f);
        CHECK_MESSAGE(eval_hnf(g, h) == truth, e.name << " n=" << g.size());
        CHECK_MESSAGE(eval_dnf(g, dnf) == truth, e.name << " dnf n=" << g.size());
      }
    }
  }
}

TEST_CASE("HNF JSON") {
  TypeCatalog cat(2, 1);
  auto doc = read_hnf(R"({"c": 2, "d": 1, "bool": "and", "args": [
      {"bool": "atom", "kind": "geq", "m": 1, "r": 1, "ball": 1},
      {"bool": "not", "arg": {"kind": "mod", "j": 0, "l": 2, "r": 0, "ball": {"n": 1, "root": 1, "edges": []}}},
      {"bool": "atom", "kind": "eq", "m": 0, "r": 1, "ball": "R2:1"}]})",
                      &cat);
  CHECK(doc.c == std::optional<std::size_t>(2));
  CHECK(doc.d == std::optional<int>(1));
  REQUIRE(doc.sentence.op == Hnf::Op::kAnd);
  CHECK(doc.sentence.kids[0].atom.ball == cat.ball(1, 1).code);
  CHECK(doc.sentence.kids[1].kids[0].atom.ball == cat.ball(0, 0).code);

  auto again = read_hnf(write_hnf(doc));
  CHECK(again.sentence == doc.sentence);
  CHECK(again.c == doc.c);

  CHECK(read_hnf_header(R"({"bool": "true"})").c == std::nullopt);
  CHECK_THROWS_AS(read_hnf(R"({"bool": "atom", "kind": "geq", "m": 1, "r": 0, "ball": 0})"), InputError);
  CHECK_THROWS_AS(read_hnf(R"({"bool": "atom", "kind": "mod", "j": 3, "l": 2, "r": 0, "ball": "R1:"})"),
                  InputError);
  CHECK_THROWS_AS(read_hnf(R"({"bool": "atom", "kind": "geq", "m": 1, "r": 0, "ball": "G1:"})"), InputError);
  CHECK_THROWS_AS(read_hnf(R"({"bool": "xor"})"), InputError);
  CHECK_THROWS_AS(read_hnf("{"), ParseError);
}
