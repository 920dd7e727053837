#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "corpus.hpp"
#include "fintest/errors.hpp"
#include "fintest/experiment.hpp"
#include "fintest/families.hpp"
#include "fintest/numtheory.hpp"
#include "fintest/tester.hpp"
#include "oracles.hpp"

using namespace fintest;
using nlohmann::json;

namespace {

constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotInClass = 3;
constexpr int kExitResource = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

json edges_json(const ExplicitGraph& g) {
  json es = json::array();
  for (const auto& e : g.edges()) es.push_back({e.u + 1, e.v + 1});
  return es;
}

std::string unit_string(const CompiledUnit& u) {
  std::string out = "(";
  for (std::size_t i = 0; i < u.choice.size(); ++i) {
    if (i) out += ", ";
    out += to_string(u.choice[i]);
  }
  return out + ")";
}

std::string counts_string(const std::vector<std::uint64_t>& h) {
  std::string out = "(";
  for (std::size_t i = 0; i < h.size(); ++i) out += (i ? "," : "") + std::to_string(h[i]);
  return out + ")";
}

std::vector<std::uint64_t> parse_counts(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InputError("bad count '" + item + "' in '" + text + "'");
    }
  }
  return out;
}

// NAME:PARAMS, e.g. EDGES:1000000, FROM_CHV:1,3 or RANDOM_MIX:1000:7 (n, seed).
FamilySpec parse_family(const std::string& text) {
  auto colon = text.find(':');
  FamilySpec spec;
  spec.kind = family_from_name(text.substr(0, colon));
  std::string params = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (spec.kind == FamilyKind::kFromChv) {
    spec.chv = parse_counts(params);
    return spec;
  }
  auto parts = parse_counts(params.find(':') == std::string::npos ? params : params.substr(0, params.find(':')));
  if (parts.size() != 1) throw InputError("family '" + text + "' needs a vertex count");
  spec.n = parts[0];
  if (params.find(':') != std::string::npos) {
    auto seed = parse_counts(params.substr(params.find(':') + 1));
    if (seed.size() != 1) throw InputError("family '" + text + "' has a malformed seed");
    spec.seed = seed[0];
  }
  return spec;
}

struct LoadedTemplates {
  CompiledSentence cs;
  std::unique_ptr<TypeCatalog> cat;
};

LoadedTemplates load_templates(const std::string& path) {
  LoadedTemplates out;
  out.cs = read_templates(read_file(path));
  out.cat = std::make_unique<TypeCatalog>(out.cs.c, out.cs.d);
  return out;
}

// types ---------------------------------------------------------------------

int cmd_types(std::size_t c, int d, const std::string& out) {
  TypeCatalog cat(c, d);
  json comps = json::array();
  for (const auto& t : cat.components()) {
    comps.push_back({{"index", t.index},
                     {"code", t.code.text()},
                     {"size", t.size},
                     {"edges", edges_json(t.representative)}});
  }
  json balls = json::array();
  for (int r = 0; r <= cat.top_radius(); ++r) {
    for (const auto& b : cat.balls(r)) {
      json bj{{"radius", r},
              {"index", b.index},
              {"code", b.code.text()},
              {"size", b.representative.graph.size()},
              {"root", b.representative.root + 1},
              {"edges", edges_json(b.representative.graph)},
              {"rep", b.rep}};
      bj["underlying"] = b.underlying ? json(*b.underlying) : json(nullptr);
      balls.push_back(std::move(bj));
    }
  }
  json doc{{"c", c},
           {"d", d},
           {"catalog_hash", cat.hash()},
           {"component_types", cat.components().size()},
           {"ball_types", cat.ball_type_count()},
           {"components", std::move(comps)},
           {"balls", std::move(balls)}};
  emit(out, doc.dump(2) + "\n");
  return 0;
}

// compile -------------------------------------------------------------------

struct CompileArgs {
  std::string sentence, hnf, out;
  std::optional<std::size_t> c;
  std::optional<int> d;
  std::size_t check_n = 8;
};

int cmd_compile(const CompileArgs& a) {
  if (a.hnf.empty()) {
    std::cerr << "compile: translating a first-order sentence into Hanf normal form is not supported;"
                 " pass --hnf (and --sentence to cross-check it)\n";
    return kExitUsage;
  }
  std::string text = read_file(a.hnf);
  auto header = read_hnf_header(text);
  auto c = a.c ? a.c : header.c;
  auto d = a.d ? a.d : header.d;
  if (!c || !d) throw InputError("compile: the class needs -c and -d (or \"c\"/\"d\" in the HNF file)");
  TypeCatalog cat(*c, *d);
  auto doc = read_hnf(text, &cat);
  auto cs = compile_hnf(doc.sentence, cat);
  std::cerr << "compiled: k=" << cs.k << " templates=" << cs.templates.size()
            << " dnf_clauses=" << cs.stats.dnf_clauses << " unsat_clauses=" << cs.stats.unsat_clauses << "\n";
  for (const auto& t : cs.templates) std::cerr << "  " << to_string(t) << "\n";

  if (!a.sentence.empty()) {
    auto fo = parse_sentence(read_file(a.sentence));
    std::size_t checked = 0, mismatches = 0;
    for (const auto& g : corpus::all_members(cat, a.check_n)) {
      bool want = eval_exact(g, *fo);
      bool got = any_template_satisfied(chv(g, cat).counts, cs.templates);
      ++checked;
      if (want != got) {
        if (++mismatches <= 5) {
          std::cerr << "mismatch: chv " << counts_string(chv(g, cat).counts) << " sentence=" << want
                    << " templates=" << got << "\n";
        }
      }
    }
    std::cerr << "cross-check: " << checked << " members up to " << a.check_n << " vertices, " << mismatches
              << " mismatches\n";
    if (mismatches) return kExitReject;
  }
  emit(a.out, write_templates(cs));
  return 0;
}

// eval ----------------------------------------------------------------------

int cmd_eval(const std::string& sentence, const std::string& hnf, const std::string& graph) {
  auto g = read_graph_file(graph);
  bool value = false;
  if (!sentence.empty()) {
    value = eval_exact(g.graph, *parse_sentence(read_file(sentence)));
  } else if (!hnf.empty()) {
    std::string text = read_file(hnf);
    auto header = read_hnf_header(text);
    std::unique_ptr<TypeCatalog> cat;
    if (header.c && header.d) cat = std::make_unique<TypeCatalog>(*header.c, *header.d);
    value = eval_hnf(g.graph, read_hnf(text, cat.get()).sentence);
  } else {
    throw InputError("eval needs --sentence or --hnf");
  }
  std::cout << (value ? "true" : "false") << "\n";
  return value ? 0 : kExitReject;
}

// test ----------------------------------------------------------------------

struct TestArgs {
  std::string templates, graph, family, report = "text";
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  std::optional<std::size_t> ball_types;
};

int cmd_test(const TestArgs& a) {
  if (a.graph.empty() == a.family.empty()) throw InputError("test needs exactly one of --graph and --family");
  if (a.trials == 0) throw InputError("test needs at least one trial");
  auto lt = load_templates(a.templates);
  const TypeCatalog& cat = *lt.cat;
  auto tester = compile_tester(lt.cs, cat, a.epsilon, {.ball_types = a.ball_types});

  std::unique_ptr<OracleGraph> graph;
  std::string source;
  if (!a.graph.empty()) {
    auto loaded = read_graph_file(a.graph);
    auto check = validate_membership(loaded.graph, cat.c(), cat.d());
    if (!check.pass) {
      if (a.report == "json") {
        std::cout << json{{"decision", "NOT_IN_CLASS"}, {"diagnostic", check.summary()}}.dump(2) << "\n";
      } else {
        std::cout << "NOT_IN_CLASS: " << check.summary() << "\n";
      }
      return kExitNotInClass;
    }
    graph = std::make_unique<ExplicitOracle>(std::move(loaded.graph), cat.d());
    source = a.graph;
  } else {
    graph = gen_family(parse_family(a.family), cat).graph;
    source = a.family;
  }

  json units = json::array();
  for (std::size_t i = 0; i < tester.units.size(); ++i) {
    const auto& u = tester.units[i];
    units.push_back({{"unit", i},
                     {"template", u.template_index},
                     {"vector", unit_string(u)},
                     {"n0", u.n0},
                     {"g", u.g},
                     {"frobenius", u.frobenius},
                     {"k", u.k}});
  }
  json runs = json::array();
  std::uint64_t accepts = 0, rejects = 0, nic = 0;
  std::ostringstream text;
  text << "test " << source << " n=" << graph->size() << " epsilon=" << a.epsilon << " q=" << tester.q
       << " N=" << tester.ball_types << " trials_per_unit=" << tester.trials_per_unit << "\n";
  for (std::size_t i = 0; i < tester.units.size(); ++i) {
    const auto& u = units[i];
    text << "unit " << i << " template " << u["template"].get<std::size_t>() << " "
         << u["vector"].get<std::string>() << " n0=" << u["n0"] << " g=" << u["g"] << " F=" << u["frobenius"]
         << "\n";
  }
  for (std::uint64_t trial = 0; trial < a.trials; ++trial) {
    std::uint64_t seed = trial_seed(a.seed, 0, trial);
    auto v = run_union(tester, cat, *graph, seed);
    switch (v.decision) {
      case Decision::kAccept: ++accepts; break;
      case Decision::kReject: ++rejects; break;
      case Decision::kNotInClass: ++nic; break;
    }
    json per_unit = json::array();
    text << "run " << trial << " seed=" << seed << " " << to_string(v.decision) << " queries=" << v.queries;
    if (!v.diagnostic.empty()) text << " (" << v.diagnostic << ")";
    text << "\n";
    for (const auto& s : v.units) {
      per_unit.push_back({{"unit", s.unit},
                          {"decision", to_string(s.decision)},
                          {"accepts", s.accepts},
                          {"rejects", s.rejects},
                          {"queries", s.queries},
                          {"n_prime", s.n_prime}});
      text << "  unit " << s.unit << " " << to_string(s.decision) << " accepts=" << s.accepts
           << " rejects=" << s.rejects << " queries=" << s.queries << " n'=" << s.n_prime << "\n";
    }
    json rj{{"seed", seed}, {"decision", to_string(v.decision)}, {"queries", v.queries}, {"units", per_unit}};
    if (!v.diagnostic.empty()) rj["diagnostic"] = v.diagnostic;
    runs.push_back(std::move(rj));
  }
  Decision overall = Decision::kReject;
  if (nic > 0) {
    overall = Decision::kNotInClass;
  } else if (2 * accepts > a.trials) {
    overall = Decision::kAccept;
  }
  text << "decision " << to_string(overall) << " accepts=" << accepts << "/" << a.trials << "\n";

  if (a.report == "json") {
    json doc{{"source", source},
             {"n", graph->size()},
             {"epsilon", a.epsilon},
             {"q", tester.q},
             {"ball_types", tester.ball_types},
             {"trials_per_unit", tester.trials_per_unit},
             {"units", std::move(units)},
             {"runs", std::move(runs)},
             {"accepts", accepts},
             {"rejects", rejects},
             {"not_in_class", nic},
             {"decision", to_string(overall)}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << text.str();
  }
  if (overall == Decision::kAccept) return 0;
  return overall == Decision::kNotInClass ? kExitNotInClass : kExitReject;
}

// gen -----------------------------------------------------------------------

struct GenArgs {
  std::string family, chv, weights, out, format;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::size_t c = 2;
  int d = 1;
};

int cmd_gen(const GenArgs& a) {
  TypeCatalog cat(a.c, a.d);
  FamilySpec spec;
  spec.kind = family_from_name(a.family);
  spec.n = a.n;
  spec.seed = a.seed;
  if (!a.chv.empty()) spec.chv = parse_counts(a.chv);
  if (!a.weights.empty()) {
    std::stringstream ss(a.weights);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        spec.weights.push_back(std::stod(item));
      } catch (const std::logic_error&) {
        throw InputError("bad weight '" + item + "'");
      }
    }
  }
  auto gen = gen_family(spec, cat);
  auto g = gen.graph->materialize();
  std::ostringstream os;
  bool as_json = a.format == "json" || (a.format.empty() && a.out.size() > 5 &&
                                        a.out.compare(a.out.size() - 5, 5, ".json") == 0);
  if (as_json) {
    write_graph_json(os, g, a.d);
  } else {
    write_graph_text(os, g, a.d);
  }
  emit(a.out, os.str());
  std::cerr << to_string(spec.kind) << " n=" << g.size() << " chv=" << counts_string(gen.chv);
  if (spec.kind == FamilyKind::kRandomMix) std::cerr << " padded=" << gen.padded;
  std::cerr << "\n";
  return 0;
}

// plan ----------------------------------------------------------------------

int cmd_plan(const std::string& templates, std::optional<std::size_t> unit, std::uint64_t n,
             const std::string& out) {
  auto lt = load_templates(templates);
  auto tester = compile_tester(lt.cs, *lt.cat, 1.0);
  if (!unit) {
    for (std::size_t i = 0; i < tester.units.size(); ++i) {
      std::cout << "unit " << i << " template " << tester.units[i].template_index << " "
                << unit_string(tester.units[i]) << "\n";
    }
    return 0;
  }
  if (*unit >= tester.units.size()) {
    throw InputError("unit " + std::to_string(*unit) + " out of range (" + std::to_string(tester.units.size()) +
                     " units)");
  }
  const auto& u = tester.units[*unit];
  auto h = member_histogram(u, n, *lt.cat);
  if (!h) {
    std::cout << "unit " << *unit << " " << unit_string(u) << ": no member on " << n << " vertices\n";
    return kExitReject;
  }
  std::cout << "unit " << *unit << " " << unit_string(u) << ": member on " << n << " vertices with chv "
            << counts_string(*h) << "\n";
  if (!out.empty()) {
    auto g = construct_member(u, n, *lt.cat);
    std::ostringstream os;
    if (out.size() > 5 && out.compare(out.size() - 5, 5, ".json") == 0) {
      write_graph_json(os, *g, lt.cat->d());
    } else {
      write_graph_text(os, *g, lt.cat->d());
    }
    emit(out, os.str());
  }
  return 0;
}

// experiment ----------------------------------------------------------------

int cmd_experiment(const std::string& config, bool timing, const std::string& report, const std::string& out) {
  auto base = std::filesystem::path(config).parent_path().string();
  auto cfg = parse_experiment_config(read_file(config), base.empty() ? "." : base);
  TypeCatalog cat(cfg.templates.c, cfg.templates.d);
  auto r = run_experiment(cfg, cat, timing);
  emit(out, report == "json" ? report_json(r) : report_text(r));
  return 0;
}

// selftest ------------------------------------------------------------------

const char* kPsiHnf = R"({"bool": "not", "arg": {"bool": "and", "args": [
  {"bool": "atom", "kind": "geq", "m": 1, "r": 1, "ball": {"n": 1, "root": 1, "edges": []}},
  {"bool": "atom", "kind": "geq", "m": 1, "r": 1, "ball": {"n": 2, "root": 1, "edges": [[1, 2]]}}]}})";
const char* kPsiFo =
    "!(exists x (forall y (!E(x,y))) & exists x exists y (E(x,y) & forall z ((E(x,z) -> z = y) & (E(y,z) -> z = "
    "x))))";

int cmd_selftest() {
  int failed = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    if (!ok) ++failed;
  };

  {
    bool ok = true;
    std::string detail;
    for (auto [c, d] : {std::pair<std::size_t, int>{2, 1}, {3, 2}, {4, 3}}) {
      auto want = oracle::connected_classes(c, d).size();
      auto got = TypeCatalog(c, d).components().size();
      ok = ok && want == got;
      detail += "C^" + std::to_string(c) + "_" + std::to_string(d) + "=" + std::to_string(got) + " ";
    }
    report("catalog", ok, detail + "(brute force agrees)");
  }
  {
    std::size_t subsets = 0, bad = 0;
    for (std::uint64_t a = 2; a <= 9; ++a) {
      for (std::uint64_t b = a; b <= 9; ++b) {
        for (std::uint64_t c = b; c <= 9; ++c) {
          std::vector<std::uint64_t> ws{a, b, c};
          ++subsets;
          if (frobenius_multiple(ws) != oracle::marking_frobenius_multiple(ws)) ++bad;
        }
      }
    }
    std::mt19937_64 rng(1);
    std::size_t crt_bad = 0;
    for (int i = 0; i < 300; ++i) {
      std::vector<Congruence> cs;
      std::uint64_t lcm = 1;
      for (int k = 0; k < 3; ++k) {
        std::uint64_t m = std::uniform_int_distribution<std::uint64_t>(1, 12)(rng);
        cs.push_back({std::uniform_int_distribution<std::uint64_t>(0, m - 1)(rng), m});
        lcm = std::lcm(lcm, m);
      }
      std::optional<std::uint64_t> first;
      for (std::uint64_t x = 0; x < lcm && !first; ++x) {
        bool all = true;
        for (const auto& cg : cs) all = all && x % cg.modulus == cg.residue;
        if (all) first = x;
      }
      auto got = crt_solve(cs);
      if (got.has_value() != first.has_value() || (got && (got->residue != *first || got->modulus != lcm))) {
        ++crt_bad;
      }
    }
    report("numtheory", bad == 0 && crt_bad == 0,
           std::to_string(subsets) + " weight sets, 300 congruence systems, " + std::to_string(bad + crt_bad) +
               " disagreements");
  }
  TypeCatalog cat(2, 1);
  auto cs = compile_hnf(read_hnf(kPsiHnf).sentence, cat);
  {
    auto fo = parse_sentence(kPsiFo);
    std::size_t checked = 0, bad = 0;
    for (const auto& g : corpus::all_members(cat, 8)) {
      ++checked;
      if (eval_exact(g, *fo) != any_template_satisfied(chv(g, cat).counts, cs.templates)) ++bad;
    }
    report("pipeline", bad == 0,
           std::to_string(checked) + " members up to 8 vertices, " + std::to_string(bad) + " mismatches");
  }
  auto tester = compile_tester(cs, cat, 0.1);
  {
    auto edges = gen_family({FamilyKind::kEdges, 1'000'000, {}, {}, 0}, cat);
    auto plus = gen_family({FamilyKind::kEdgesPlusVertex, 1'000'001, {}, {}, 0}, cat);
    std::size_t acc = 0, rej = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      acc += run_union(tester, cat, *edges.graph, s).decision == Decision::kAccept;
      rej += run_union(tester, cat, *plus.graph, s).decision == Decision::kReject;
    }
    report("tester", acc == 20 && rej == 20,
           "EDGES accepted " + std::to_string(acc) + "/20, EDGES_PLUS_VERTEX rejected " + std::to_string(rej) +
               "/20");
  }
  {
    std::size_t bad = 0, checked = 0;
    for (const auto& u : tester.units) {
      for (std::uint64_t n = 0; n <= 30; ++n) {
        bool exists = false;
        for (std::uint64_t a = 0; a <= n && !exists; ++a) {
          if ((n - a) % 2 == 0) exists = u.satisfied_by(std::vector<std::uint64_t>{a, (n - a) / 2});
        }
        auto g = construct_member(u, n, cat);
        ++checked;
        if (g.has_value() != exists) ++bad;
        if (g && (g->size() != n || !u.satisfied_by(chv(*g, cat).counts))) ++bad;
      }
    }
    report("construct_member", bad == 0,
           std::to_string(checked) + " (unit, n) pairs, " + std::to_string(bad) + " disagreements");
  }
  return failed ? kExitReject : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-query testers for counting properties of bounded-degree graphs"};
  app.require_subcommand(1);
  int code = 0;

  std::size_t tc = 2;
  int td = 1;
  std::string tout;
  auto* types = app.add_subcommand("types", "Export the component and ball type catalog of C^c_d");
  types->add_option("-c", tc, "Component size bound")->required()->check(CLI::Range(1, 12));
  types->add_option("-d", td, "Degree bound")->required()->check(CLI::Range(0, 12));
  types->add_option("-o,--out", tout, "Output file (stdout when omitted)");
  types->callback([&] { code = cmd_types(tc, td, tout); });

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "Compile a Hanf normal form sentence into chv templates");
  compile->add_option("--sentence", ca.sentence, "FO+MOD sentence; with --hnf it is used as a cross-check");
  compile->add_option("--hnf", ca.hnf, "Sentence in Hanf normal form (JSON)");
  compile->add_option("-c", ca.c, "Component size bound")->check(CLI::Range(1, 12));
  compile->add_option("-d", ca.d, "Degree bound")->check(CLI::Range(0, 12));
  compile->add_option("-o,--out", ca.out, "Templates file (stdout when omitted)");
  compile->add_option("--check-n", ca.check_n, "Largest member size in the cross-check");
  compile->callback([&] {
    if (ca.sentence.empty() && ca.hnf.empty()) throw CLI::ValidationError("compile needs --hnf or --sentence");
    code = cmd_compile(ca);
  });

  std::string es, eh, eg;
  auto* eval = app.add_subcommand("eval", "Evaluate a sentence on an explicit graph");
  eval->add_option("--sentence", es, "FO+MOD sentence file");
  eval->add_option("--hnf", eh, "Hanf normal form file");
  eval->add_option("--graph", eg, "Graph file (text or JSON)")->required();
  eval->callback([&] { code = cmd_eval(es, eh, eg); });

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Run the tester on a graph file or an implicit family");
  test->add_option("--templates", ta.templates, "Templates file from `compile`")->required();
  test->add_option("--graph", ta.graph, "Graph file");
  test->add_option("--family", ta.family, "NAME:PARAMS, e.g. EDGES:1000000 or FROM_CHV:1,3");
  test->add_option("--epsilon", ta.epsilon, "Proximity parameter")->check(CLI::Range(0.0, 1.0));
  test->add_option("--seed", ta.seed, "Master seed");
  test->add_option("--trials", ta.trials, "Independent tester runs");
  test->add_option("--ball-types", ta.ball_types, "Ball-type count N used for q (at least the catalog's)");
  test->add_option("--report", ta.report, "Report format")->check(CLI::IsMember({"json", "text"}));
  test->callback([&] { code = cmd_test(ta); });

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Write a member of a graph family to a file");
  gen->add_option("--family", ga.family, "EDGES, EDGES_PLUS_VERTEX, FROM_CHV or RANDOM_MIX")->required();
  gen->add_option("--n", ga.n, "Vertex count");
  gen->add_option("--chv", ga.chv, "Component histogram, comma separated (FROM_CHV)");
  gen->add_option("--weights", ga.weights, "Component type weights, comma separated (RANDOM_MIX)");
  gen->add_option("--seed", ga.seed, "Seed (RANDOM_MIX)");
  gen->add_option("-c", ga.c, "Component size bound")->check(CLI::Range(1, 12));
  gen->add_option("-d", ga.d, "Degree bound")->check(CLI::Range(0, 12));
  gen->add_option("--format", ga.format, "Graph format")->check(CLI::IsMember({"json", "text"}));
  gen->add_option("-o,--out", ga.out, "Output file (stdout when omitted)");
  gen->callback([&] { code = cmd_gen(ga); });

  std::string pt, pout;
  std::optional<std::size_t> pu;
  std::uint64_t pn = 0;
  auto* plan = app.add_subcommand("plan", "Construct a member of one tester unit on n vertices");
  plan->add_option("--templates", pt, "Templates file")->required();
  plan->add_option("--unit", pu, "Unit index (lists the units when omitted)");
  plan->add_option("--n", pn, "Vertex count");
  plan->add_option("-o,--out", pout, "Write the constructed graph here");
  plan->callback([&] { code = cmd_plan(pt, pu, pn, pout); });

  std::string xc, xr = "text", xo;
  bool timing = false;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment sweep from a JSON config");
  experiment->add_option("--config", xc, "Experiment config")->required();
  experiment->add_option("--report", xr, "Report format")->check(CLI::IsMember({"json", "text"}));
  experiment->add_option("-o,--out", xo, "Report file (stdout when omitted)");
  experiment->add_flag("--timing", timing, "Record wall time per cell");
  experiment->callback([&] { code = cmd_experiment(xc, timing, xr, xo); });

  auto* selftest = app.add_subcommand("selftest", "Check the library against brute-force oracles");
  selftest->callback([&] { code = cmd_selftest(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  } catch (const NotInClassError& e) {
    std::cerr << "not in class: " << e.what() << "\n";
    return kExitNotInClass;
  } catch (const ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kExitResource;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  }
  return code;
}
