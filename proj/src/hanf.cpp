#include "fintest/hanf.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <set>
#include <json.hpp>

#include "fintest/errors.hpp"

namespace fintest {

using nlohmann::json;

HanfAtom HanfAtom::geq(std::uint64_t m, int r, CanonicalCode ball) {
  return HanfAtom{AtomKind::kGeq, m, 0, 1, r, std::move(ball)};
}

HanfAtom HanfAtom::eq(std::uint64_t m, int r, CanonicalCode ball) {
  return HanfAtom{AtomKind::kEq, m, 0, 1, r, std::move(ball)};
}

HanfAtom HanfAtom::mod(std::uint64_t j, std::uint64_t l, int r, CanonicalCode ball) {
  if (l == 0 || j >= l) throw InputError("mod atom needs 0 <= j < l");
  return HanfAtom{AtomKind::kMod, 0, j, l, r, std::move(ball)};
}

bool HanfAtom::holds(std::uint64_t count) const {
  switch (kind) {
    case AtomKind::kGeq: return count >= m;
    case AtomKind::kEq: return count == m;
    case AtomKind::kMod: return count % l == j;
  }
  return false;
}

Hnf Hnf::of(HanfAtom a) {
  Hnf h;
  h.op = Op::kAtom;
  h.atom = std::move(a);
  return h;
}

Hnf Hnf::truth(bool value) {
  Hnf h;
  h.op = value ? Op::kTrue : Op::kFalse;
  return h;
}

Hnf Hnf::negation(Hnf inner) {
  Hnf h;
  h.op = Op::kNot;
  h.kids.push_back(std::move(inner));
  return h;
}

Hnf Hnf::all(std::vector<Hnf> hs) {
  if (hs.empty()) return truth(true);
  if (hs.size() == 1) return std::move(hs.front());
  Hnf h;
  h.op = Op::kAnd;
  h.kids = std::move(hs);
  return h;
}

Hnf Hnf::any(std::vector<Hnf> hs) {
  if (hs.empty()) return truth(false);
  if (hs.size() == 1) return std::move(hs.front());
  Hnf h;
  h.op = Op::kOr;
  h.kids = std::move(hs);
  return h;
}

// ---------------------------------------------------------------------------
// DNF

bool counter_consistent(const Clause& c) {
  std::map<std::pair<int, CanonicalCode>, std::vector<const Literal*>> groups;
  for (const auto& lit : c) groups[{lit.atom.radius, lit.atom.ball}].push_back(&lit);
  for (const auto& [key, lits] : groups) {
    if (lits.size() < 2) continue;
    std::uint64_t top = 0, period = 1;
    for (const Literal* lit : lits) {
      top = std::max(top, lit->atom.m);
      if (lit->atom.kind == AtomKind::kMod) period = std::lcm(period, lit->atom.l);
      if (period > 1'000'000) return true;  // too wide to scan; assume satisfiable
    }
    bool found = false;
    for (std::uint64_t count = 0; count <= top + period && !found; ++count) {
      found = std::all_of(lits.begin(), lits.end(),
                          [count](const Literal* lit) { return lit->atom.holds(count) != lit->negated; });
    }
    if (!found) return false;
  }
  return true;
}

void merge_clauses(const Clause& a, const Clause& b, std::vector<Clause>& out) {
  Clause merged;
  merged.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
  if (counter_consistent(merged)) out.push_back(std::move(merged));
}

namespace {

void normalize(Clause& c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
}

[[noreturn]] void too_many(std::size_t guard) {
  throw ResourceError("DNF exceeds " + std::to_string(guard) + " clauses");
}

std::vector<Clause> dnf_of(const Hnf& h, bool neg, std::size_t guard) {
  using Op = Hnf::Op;
  switch (h.op) {
    case Op::kTrue: return neg ? std::vector<Clause>{} : std::vector<Clause>{Clause{}};
    case Op::kFalse: return neg ? std::vector<Clause>{Clause{}} : std::vector<Clause>{};
    case Op::kAtom: return {Clause{Literal{h.atom, neg}}};
    case Op::kNot: return dnf_of(h.kids.at(0), !neg, guard);
    default: break;
  }
  const bool product = (h.op == Op::kAnd) != neg;
  if (!product) {
    std::vector<Clause> out;
    for (const auto& k : h.kids) {
      auto part = dnf_of(k, neg, guard);
      out.insert(out.end(), part.begin(), part.end());
      if (out.size() > guard) too_many(guard);
    }
    return out;
  }
  // Pairs are merged with a consistency check, so the work bound is wider
  // than the clause bound.
  const std::size_t work = guard * 100;
  std::vector<Clause> acc{Clause{}};
  for (const auto& k : h.kids) {
    auto part = dnf_of(k, neg, guard);
    if (acc.size() * part.size() > work) too_many(guard);
    std::vector<Clause> next;
    for (const auto& a : acc) {
      for (const auto& b : part) merge_clauses(a, b, next);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next.size() > guard) too_many(guard);
    acc = std::move(next);
    if (acc.empty()) break;
  }
  return acc;
}

}  // namespace

DnfSentence to_dnf(const Hnf& h, std::size_t guard) {
  DnfSentence out;
  std::set<Clause> seen;
  for (auto& c : dnf_of(h, false, guard)) {
    normalize(c);
    if (!counter_consistent(c)) continue;
    if (seen.insert(c).second) out.clauses.push_back(std::move(c));
  }
  return out;
}

Hnf from_dnf(const DnfSentence& dnf) {
  std::vector<Hnf> clauses;
  for (const auto& c : dnf.clauses) {
    std::vector<Hnf> lits;
    for (const auto& lit : c) {
      lits.push_back(lit.negated ? Hnf::negation(Hnf::of(lit.atom)) : Hnf::of(lit.atom));
    }
    clauses.push_back(Hnf::all(std::move(lits)));
  }
  return Hnf::any(std::move(clauses));
}

// ---------------------------------------------------------------------------
// Evaluation

std::uint64_t HanfEvaluator::count(int radius, const CanonicalCode& ball) {
  if (radius < 0) throw InputError("radius must be non-negative");
  auto it = census_.find(radius);
  if (it == census_.end()) {
    std::map<CanonicalCode, std::uint64_t> tally;
    for (Vertex v = 0; v < g_->size(); ++v) {
      ++tally[canonical_code(ball_around(*g_, v, radius).graph, Vertex{0}, 64)];
    }
    it = census_.emplace(radius, std::move(tally)).first;
  }
  auto found = it->second.find(ball);
  return found == it->second.end() ? 0 : found->second;
}

bool HanfEvaluator::eval(const HanfAtom& a) { return a.holds(count(a.radius, a.ball)); }

bool HanfEvaluator::eval(const Hnf& h) {
  switch (h.op) {
    case Hnf::Op::kTrue: return true;
    case Hnf::Op::kFalse: return false;
    case Hnf::Op::kAtom: return eval(h.atom);
    case Hnf::Op::kNot: return !eval(h.kids.at(0));
    case Hnf::Op::kAnd:
      for (const auto& k : h.kids) {
        if (!eval(k)) return false;
      }
      return true;
    case Hnf::Op::kOr:
      for (const auto& k : h.kids) {
        if (eval(k)) return true;
      }
      return false;
  }
  return false;
}

bool HanfEvaluator::eval(const Clause& c) {
  for (const auto& lit : c) {
    if (eval(lit.atom) == lit.negated) return false;
  }
  return true;
}

bool HanfEvaluator::eval(const DnfSentence& d) {
  for (const auto& c : d.clauses) {
    if (eval(c)) return true;
  }
  return false;
}

bool eval_hanf_atom(const ExplicitGraph& g, const HanfAtom& a) { return HanfEvaluator(g).eval(a); }
bool eval_hnf(const ExplicitGraph& g, const Hnf& h) { return HanfEvaluator(g).eval(h); }
bool eval_dnf(const ExplicitGraph& g, const DnfSentence& d) { return HanfEvaluator(g).eval(d); }

// ---------------------------------------------------------------------------
// Text

std::string to_string(const HanfAtom& a) {
  std::string head;
  switch (a.kind) {
    case AtomKind::kGeq: head = "geq " + std::to_string(a.m); break;
    case AtomKind::kEq: head = "eq " + std::to_string(a.m); break;
    case AtomKind::kMod: head = "mod " + std::to_string(a.j) + "/" + std::to_string(a.l); break;
  }
  return "[" + head + " r" + std::to_string(a.radius) + " " + a.ball.text() + "]";
}

std::string to_string(const Hnf& h) {
  switch (h.op) {
    case Hnf::Op::kTrue: return "true";
    case Hnf::Op::kFalse: return "false";
    case Hnf::Op::kAtom: return to_string(h.atom);
    case Hnf::Op::kNot: return "!" + to_string(h.kids.at(0));
    default: break;
  }
  std::string out = "(";
  for (std::size_t i = 0; i < h.kids.size(); ++i) {
    if (i) out += h.op == Hnf::Op::kAnd ? " & " : " | ";
    out += to_string(h.kids[i]);
  }
  return out + ")";
}

std::string to_string(const DnfSentence& d) { return to_string(from_dnf(d)); }

// ---------------------------------------------------------------------------
// JSON

namespace {

std::uint64_t get_count(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("HNF atom lacks '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InputError(std::string("HNF atom field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

CanonicalCode read_ball(const json& b, int r, const TypeCatalog* cat) {
  if (b.is_string()) {
    auto code = CanonicalCode::parse(b.get<std::string>());
    if (!code.rooted()) throw InputError("ball code must be rooted (R<n>:...)");
    return code;
  }
  if (b.is_number_integer()) {
    if (!cat) throw InputError("ball given by catalog index but no catalog is available");
    long long idx = b.get<long long>();
    auto balls = cat->balls(r);
    if (idx < 0 || static_cast<std::size_t>(idx) >= balls.size()) {
      throw InputError("ball index " + std::to_string(idx) + " outside the radius-" + std::to_string(r) +
                       " catalog");
    }
    return balls[static_cast<std::size_t>(idx)].code;
  }
  if (b.is_object()) {
    long long n = b.value("n", -1LL), root = b.value("root", 1LL);
    if (n < 1 || n > 64) throw InputError("ball object needs 1 <= n <= 64");
    if (root < 1 || root > n) throw InputError("ball root out of range");
    std::vector<Edge> es;
    for (const auto& e : b.value("edges", json::array())) {
      if (!e.is_array() || e.size() != 2) throw InputError("ball edges are [u, v] pairs");
      long long u = e[0].get<long long>(), v = e[1].get<long long>();
      if (u < 1 || v < 1 || u > n || v > n) throw InputError("ball edge out of range");
      es.push_back({static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1)});
    }
    auto g = ExplicitGraph::from_edges(static_cast<std::size_t>(n), es);
    return canonical_code(g, static_cast<Vertex>(root - 1), 64);
  }
  throw InputError("ball must be a code string, a catalog index or a graph object");
}

Hnf read_node(const json& j, const TypeCatalog* cat) {
  if (!j.is_object()) throw InputError("HNF node must be an object");
  std::string op = j.value("bool", j.contains("kind") ? "atom" : "");
  if (op == "true") return Hnf::truth(true);
  if (op == "false") return Hnf::truth(false);
  if (op == "not") {
    if (j.contains("arg")) return Hnf::negation(read_node(j.at("arg"), cat));
    const auto& args = j.value("args", json::array());
    if (args.size() != 1) throw InputError("'not' takes exactly one argument");
    return Hnf::negation(read_node(args[0], cat));
  }
  if (op == "and" || op == "or") {
    if (!j.contains("args") || !j.at("args").is_array()) throw InputError("'" + op + "' needs an args array");
    std::vector<Hnf> kids;
    for (const auto& a : j.at("args")) kids.push_back(read_node(a, cat));
    Hnf h;
    h.op = op == "and" ? Hnf::Op::kAnd : Hnf::Op::kOr;
    h.kids = std::move(kids);
    if (h.kids.empty()) return Hnf::truth(op == "and");
    return h;
  }
  if (op != "atom") throw InputError("unknown HNF node '" + op + "'");
  std::string kind = j.value("kind", "");
  std::uint64_t r = get_count(j, "r");
  if (r > 1000) throw InputError("atom radius too large");
  if (!j.contains("ball")) throw InputError("HNF atom lacks 'ball'");
  auto code = read_ball(j.at("ball"), static_cast<int>(r), cat);
  if (kind == "geq") return Hnf::of(HanfAtom::geq(get_count(j, "m"), static_cast<int>(r), code));
  if (kind == "eq") return Hnf::of(HanfAtom::eq(get_count(j, "m"), static_cast<int>(r), code));
  if (kind == "mod") {
    std::uint64_t jj = get_count(j, "j"), l = get_count(j, "l");
    if (l == 0 || jj >= l) throw InputError("mod atom needs 0 <= j < l");
    return Hnf::of(HanfAtom::mod(jj, l, static_cast<int>(r), code));
  }
  throw InputError("unknown atom kind '" + kind + "'");
}

json write_node(const Hnf& h) {
  switch (h.op) {
    case Hnf::Op::kTrue: return {{"bool", "true"}};
    case Hnf::Op::kFalse: return {{"bool", "false"}};
    case Hnf::Op::kNot: return {{"bool", "not"}, {"arg", write_node(h.kids.at(0))}};
    case Hnf::Op::kAtom: {
      const auto& a = h.atom;
      json out{{"bool", "atom"}, {"r", a.radius}, {"ball", a.ball.text()}};
      switch (a.kind) {
        case AtomKind::kGeq: out["kind"] = "geq"; out["m"] = a.m; break;
        case AtomKind::kEq: out["kind"] = "eq"; out["m"] = a.m; break;
        case AtomKind::kMod: out["kind"] = "mod"; out["j"] = a.j; out["l"] = a.l; break;
      }
      return out;
    }
    default: break;
  }
  json args = json::array();
  for (const auto& k : h.kids) args.push_back(write_node(k));
  return {{"bool", h.op == Hnf::Op::kAnd ? "and" : "or"}, {"args", args}};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("HNF JSON: ") + e.what(), e.byte);
  }
}

void read_header(const json& j, HnfDocument& doc) {
  if (!j.is_object()) throw InputError("HNF document must be a JSON object");
  if (j.contains("c")) {
    long long c = j.at("c").get<long long>();
    if (c < 1) throw InputError("c must be at least 1");
    doc.c = static_cast<std::size_t>(c);
  }
  if (j.contains("d")) {
    long long d = j.at("d").get<long long>();
    if (d < 0) throw InputError("d must be non-negative");
    doc.d = static_cast<int>(d);
  }
}

}  // namespace

HnfDocument read_hnf_header(std::string_view json_text) {
  HnfDocument doc;
  read_header(parse_json(json_text), doc);
  return doc;
}

HnfDocument read_hnf(std::string_view json_text, const TypeCatalog* cat) {
  auto j = parse_json(json_text);
  HnfDocument doc;
  try {
    read_header(j, doc);
    doc.sentence = read_node(j.contains("sentence") ? j.at("sentence") : j, cat);
  } catch (const json::exception& e) {
    throw InputError(std::string("HNF JSON: ") + e.what());
  }
  return doc;
}

std::string write_hnf(const HnfDocument& doc) {
  json out = write_node(doc.sentence);
  if (doc.c) out["c"] = *doc.c;
  if (doc.d) out["d"] = *doc.d;
  return out.dump(2);
}

}  // namespace fintest
