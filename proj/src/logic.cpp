#include "fintest/logic.hpp"

#include <cctype>
#include <limits>

#include "fintest/errors.hpp"

namespace fintest {

bool same_formula(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.x != b.x || a.y != b.y || a.m != b.m || a.j != b.j || a.l != b.l ||
      a.kids.size() != b.kids.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (!same_formula(*a.kids[i], *b.kids[i])) return false;
  }
  return true;
}

namespace fo {
namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

Formula quant(Formula::Kind kind, std::string x, FormulaPtr body) {
  Formula f;
  f.kind = kind;
  f.x = std::move(x);
  f.kids.push_back(std::move(body));
  return f;
}

FormulaPtr junction(Formula::Kind kind, std::vector<FormulaPtr> fs) {
  if (fs.empty()) throw InputError("empty conjunction or disjunction");
  if (fs.size() == 1) return fs.front();
  Formula f;
  f.kind = kind;
  f.kids = std::move(fs);
  return make(std::move(f));
}

}  // namespace

FormulaPtr edge(std::string x, std::string y) {
  Formula f;
  f.kind = Formula::Kind::kEdge;
  f.x = std::move(x);
  f.y = std::move(y);
  return make(std::move(f));
}

FormulaPtr equal(std::string x, std::string y) {
  Formula f;
  f.kind = Formula::Kind::kEqual;
  f.x = std::move(x);
  f.y = std::move(y);
  return make(std::move(f));
}

FormulaPtr negate(FormulaPtr g) {
  Formula f;
  f.kind = Formula::Kind::kNot;
  f.kids.push_back(std::move(g));
  return make(std::move(f));
}

FormulaPtr conj(std::vector<FormulaPtr> fs) { return junction(Formula::Kind::kAnd, std::move(fs)); }
FormulaPtr disj(std::vector<FormulaPtr> fs) { return junction(Formula::Kind::kOr, std::move(fs)); }

FormulaPtr exists(std::string x, FormulaPtr body) {
  return make(quant(Formula::Kind::kExists, std::move(x), std::move(body)));
}

FormulaPtr forall(std::string x, FormulaPtr body) {
  return make(quant(Formula::Kind::kForall, std::move(x), std::move(body)));
}

FormulaPtr exists_geq(std::uint64_t m, std::string x, FormulaPtr body) {
  auto f = quant(Formula::Kind::kExistsGeq, std::move(x), std::move(body));
  f.m = m;
  return make(std::move(f));
}

FormulaPtr exists_eq(std::uint64_t m, std::string x, FormulaPtr body) {
  auto f = quant(Formula::Kind::kExistsEq, std::move(x), std::move(body));
  f.m = m;
  return make(std::move(f));
}

FormulaPtr exists_mod(std::uint64_t j, std::uint64_t l, std::string x, FormulaPtr body) {
  if (l == 0 || j >= l) throw InputError("modular quantifier needs 0 <= j < l");
  auto f = quant(Formula::Kind::kExistsMod, std::move(x), std::move(body));
  f.j = j;
  f.l = l;
  return make(std::move(f));
}

}  // namespace fo

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  FormulaPtr run() {
    auto f = formula();
    skip();
    if (p_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, p_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t pos) const { throw ParseError(what, pos); }

  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(p_, tok.size()) == tok) {
      p_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  static bool ident_start(char ch) { return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_'; }
  static bool ident_char(char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; }

  std::string peek_word() {
    skip();
    std::size_t q = p_;
    if (q < s_.size() && ident_start(s_[q])) {
      while (q < s_.size() && ident_char(s_[q])) ++q;
    }
    return std::string(s_.substr(p_, q - p_));
  }

  std::string variable() {
    skip();
    std::string w = peek_word();
    if (w.empty()) fail("expected a variable");
    if (w == "exists" || w == "forall" || w == "mod" || w == "E") fail("'" + w + "' is reserved");
    p_ += w.size();
    return w;
  }

  std::string bound_variable() {
    skip();
    std::size_t at = p_;
    std::string v = variable();
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (*it == v) return v;
    }
    fail_at("free variable '" + v + "'", at);
  }

  std::uint64_t number() {
    skip();
    std::size_t start = p_;
    std::uint64_t v = 0;
    while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) {
      std::uint64_t digit = static_cast<std::uint64_t>(s_[p_] - '0');
      if (v > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) fail_at("number too large", start);
      v = v * 10 + digit;
      ++p_;
    }
    if (p_ == start) fail("expected a number");
    return v;
  }

  FormulaPtr formula() {
    auto left = disjunction();
    if (eat("->")) {
      auto right = formula();
      return fo::disj({fo::negate(left), right});
    }
    return left;
  }

  FormulaPtr disjunction() {
    std::vector<FormulaPtr> parts{conjunction()};
    while (eat("|")) parts.push_back(conjunction());
    return fo::disj(std::move(parts));
  }

  FormulaPtr conjunction() {
    std::vector<FormulaPtr> parts{unary()};
    while (eat("&")) parts.push_back(unary());
    return fo::conj(std::move(parts));
  }

  FormulaPtr unary() {
    skip();
    if (p_ >= s_.size()) fail("unexpected end of input");
    if (eat("!")) return fo::negate(unary());
    if (eat("(")) {
      auto f = formula();
      expect(")");
      return f;
    }
    std::string w = peek_word();
    if (w == "exists" || w == "forall") return quantified(w);
    if (w == "E") {
      std::size_t at = p_;
      p_ += 1;
      skip();
      if (p_ < s_.size() && s_[p_] == '(') {
        ++p_;
        std::string a = bound_variable();
        if (!eat(",")) fail_at("E takes exactly two arguments", at);
        std::string b = bound_variable();
        if (!eat(")")) fail_at("E takes exactly two arguments", at);
        return fo::edge(a, b);
      }
      fail_at("'E' is reserved for the edge relation", at);
    }
    if (w.empty()) fail("expected a formula");
    std::string a = bound_variable();
    expect("=");
    std::string b = bound_variable();
    return fo::equal(a, b);
  }

  FormulaPtr quantified(const std::string& word) {
    p_ += word.size();
    Formula::Kind kind = word == "forall" ? Formula::Kind::kForall : Formula::Kind::kExists;
    std::uint64_t m = 0, j = 0, l = 1;
    if (kind == Formula::Kind::kExists) {
      if (eat(">=")) {
        kind = Formula::Kind::kExistsGeq;
        m = number();
      } else if (eat("=")) {
        kind = Formula::Kind::kExistsEq;
        m = number();
      } else if (eat("[")) {
        kind = Formula::Kind::kExistsMod;
        std::size_t at = p_;
        j = number();
        if (peek_word() != "mod") fail("expected 'mod'");
        p_ += 3;
        l = number();
        expect("]");
        if (l == 0) fail_at("modulus must be at least 1", at);
        if (j >= l) fail_at("residue must be below the modulus", at);
      }
    }
    std::string x = variable();
    scope_.push_back(x);
    auto body = unary();
    scope_.pop_back();
    switch (kind) {
      case Formula::Kind::kForall: return fo::forall(x, body);
      case Formula::Kind::kExistsGeq: return fo::exists_geq(m, x, body);
      case Formula::Kind::kExistsEq: return fo::exists_eq(m, x, body);
      case Formula::Kind::kExistsMod: return fo::exists_mod(j, l, x, body);
      default: return fo::exists(x, body);
    }
  }

  std::string_view s_;
  std::size_t p_ = 0;
  std::vector<std::string> scope_;
};

}  // namespace

FormulaPtr parse_sentence(std::string_view text) { return Parser(text).run(); }

std::string to_string(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::kEdge: return "E(" + f.x + "," + f.y + ")";
    case K::kEqual: return f.x + " = " + f.y;
    case K::kNot: {
      const Formula& k = *f.kids[0];
      return k.kind == K::kEqual ? "!(" + to_string(k) + ")" : "!" + to_string(k);
    }
    case K::kAnd:
    case K::kOr: {
      std::string out = "(";
      for (std::size_t i = 0; i < f.kids.size(); ++i) {
        if (i) out += f.kind == K::kAnd ? " & " : " | ";
        out += to_string(*f.kids[i]);
      }
      return out + ")";
    }
    default: break;
  }
  std::string head;
  switch (f.kind) {
    case K::kForall: head = "forall"; break;
    case K::kExistsGeq: head = "exists>=" + std::to_string(f.m); break;
    case K::kExistsEq: head = "exists=" + std::to_string(f.m); break;
    case K::kExistsMod: head = "exists[" + std::to_string(f.j) + " mod " + std::to_string(f.l) + "]"; break;
    default: head = "exists"; break;
  }
  const Formula& body = *f.kids[0];
  bool wrapped = body.kind == K::kAnd || body.kind == K::kOr;
  return head + " " + f.x + " " + (wrapped ? to_string(body) : "(" + to_string(body) + ")");
}

// ---------------------------------------------------------------------------
// Exact evaluation

namespace {

struct Node {
  Formula::Kind kind;
  std::size_t a = 0, b = 0;  // variable slots
  std::uint64_t m = 0, j = 0, l = 1;
  std::vector<Node> kids;
};

Node lower(const Formula& f, std::vector<std::string>& scope) {
  auto slot = [&scope](const std::string& v) {
    for (std::size_t i = scope.size(); i-- > 0;) {
      if (scope[i] == v) return i;
    }
    throw InputError("free variable '" + v + "' in sentence");
  };
  Node n{f.kind, 0, 0, f.m, f.j, f.l, {}};
  if (f.kind == Formula::Kind::kEdge || f.kind == Formula::Kind::kEqual) {
    n.a = slot(f.x);
    n.b = slot(f.y);
  } else if (f.is_quantifier()) {
    n.a = scope.size();
    scope.push_back(f.x);
    n.kids.push_back(lower(*f.kids[0], scope));
    scope.pop_back();
  } else {
    for (const auto& k : f.kids) n.kids.push_back(lower(*k, scope));
  }
  return n;
}

class Evaluator {
 public:
  explicit Evaluator(const ExplicitGraph& g) : n_(g.size()), adj_(n_ * n_, 0) {
    for (const Edge& e : g.edges()) {
      adj_[e.u * n_ + e.v] = 1;
      adj_[e.v * n_ + e.u] = 1;
    }
  }

  bool eval(const Node& f) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::kEdge: return adj_[env_[f.a] * n_ + env_[f.b]] != 0;
      case K::kEqual: return env_[f.a] == env_[f.b];
      case K::kNot: return !eval(f.kids[0]);
      case K::kAnd:
        for (const auto& k : f.kids) {
          if (!eval(k)) return false;
        }
        return true;
      case K::kOr:
        for (const auto& k : f.kids) {
          if (eval(k)) return true;
        }
        return false;
      default: break;
    }
    if (env_.size() <= f.a) env_.resize(f.a + 1);
    std::uint64_t count = 0;
    std::uint64_t stop = std::numeric_limits<std::uint64_t>::max();
    if (f.kind == K::kExists) stop = 1;
    if (f.kind == K::kExistsGeq) stop = f.m;
    if (f.kind == K::kExistsEq) stop = f.m + 1;
    if (stop == 0) return true;
    for (Vertex v = 0; v < n_; ++v) {
      env_[f.a] = v;
      bool holds = eval(f.kids[0]);
      if (f.kind == K::kForall) {
        if (!holds) return false;
        continue;
      }
      if (holds && ++count >= stop) break;
    }
    switch (f.kind) {
      case K::kForall: return true;
      case K::kExists: return count >= 1;
      case K::kExistsGeq: return count >= f.m;
      case K::kExistsEq: return count == f.m;
      default: return count % f.l == f.j;
    }
  }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> adj_;
  std::vector<Vertex> env_;
};

}  // namespace

bool eval_exact(const ExplicitGraph& g, const Formula& sentence, std::size_t cap) {
  if (g.size() > cap) {
    throw ResourceError("eval_exact limited to " + std::to_string(cap) + " vertices, got " +
                        std::to_string(g.size()));
  }
  std::vector<std::string> scope;
  Node root = lower(sentence, scope);
  return Evaluator(g).eval(root);
}

}  // namespace fintest
