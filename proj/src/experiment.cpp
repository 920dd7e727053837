#include "fintest/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fintest/errors.hpp"

namespace fintest {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
std::vector<T> one_or_many(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("experiment config: ") + e.what(), e.byte);
  }
  try {
    ExperimentConfig cfg;
    const json& tj = doc.at("templates");
    if (tj.is_string()) {
      std::filesystem::path p(tj.get<std::string>());
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      cfg.templates = read_templates(read_file(p.string()));
    } else {
      cfg.templates = read_templates(tj.dump());
    }
    cfg.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("ball_types")) cfg.ball_types = doc.at("ball_types").get<std::size_t>();
    for (const auto& cj : doc.at("cells")) {
      FamilySpec base;
      base.kind = family_from_name(cj.at("family").get<std::string>());
      if (cj.contains("chv")) base.chv = cj.at("chv").get<std::vector<std::uint64_t>>();
      if (cj.contains("weights")) base.weights = cj.at("weights").get<std::vector<double>>();
      base.seed = cj.value("mix_seed", std::uint64_t{0});
      std::vector<std::uint64_t> ns = cj.contains("n") ? one_or_many<std::uint64_t>(cj.at("n"))
                                                       : std::vector<std::uint64_t>{0};
      std::vector<double> eps = one_or_many<double>(cj.at("epsilon"));
      std::uint64_t trials = cj.value("trials", std::uint64_t{100});
      if (trials == 0) throw InputError("cells need at least one trial");
      for (auto n : ns) {
        for (double e : eps) {
          ExperimentCell cell;
          cell.family = base;
          cell.family.n = n;
          cell.epsilon = e;
          cell.trials = trials;
          cfg.cells.push_back(std::move(cell));
        }
      }
    }
    return cfg;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed experiment config: ") + e.what());
  }
}

ExperimentReport run_experiment(const ExperimentConfig& config, const TypeCatalog& cat, bool timing) {
  ExperimentReport report;
  report.seed = config.seed;
  report.c = cat.c();
  report.d = cat.d();
  for (std::size_t ci = 0; ci < config.cells.size(); ++ci) {
    const auto& cell = config.cells[ci];
    auto start = std::chrono::steady_clock::now();
    auto tester = compile_tester(config.templates, cat, cell.epsilon, {.ball_types = config.ball_types});
    auto gen = gen_family(cell.family, cat);
    CellResult res;
    res.cell = cell;
    res.n = gen.graph->size();
    res.q = tester.q;
    res.padded = gen.padded;
    res.certificate = certify_far(gen.chv, tester, cat);
    std::uint64_t total = 0;
    for (std::uint64_t trial = 0; trial < cell.trials; ++trial) {
      auto v = run_union(tester, cat, *gen.graph, trial_seed(config.seed, ci, trial));
      total += v.queries;
      res.max_queries = std::max(res.max_queries, v.queries);
      switch (v.decision) {
        case Decision::kAccept: ++res.accepts; break;
        case Decision::kReject: ++res.rejects; break;
        case Decision::kNotInClass: ++res.not_in_class; break;
      }
    }
    res.accept_frequency = static_cast<double>(res.accepts) / static_cast<double>(cell.trials);
    res.mean_queries = static_cast<double>(total) / static_cast<double>(cell.trials);
    if (timing) {
      res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    report.cells.push_back(std::move(res));
  }
  return report;
}

std::string report_json(const ExperimentReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    json cj{{"family", to_string(c.cell.family.kind)},
            {"n", c.n},
            {"epsilon", c.cell.epsilon},
            {"trials", c.cell.trials},
            {"accepts", c.accepts},
            {"rejects", c.rejects},
            {"not_in_class", c.not_in_class},
            {"accept_frequency", c.accept_frequency},
            {"mean_queries", c.mean_queries},
            {"max_queries", c.max_queries},
            {"q", c.q},
            {"far", {{"status", to_string(c.certificate.status)},
                     {"method", c.certificate.method},
                     {"threshold", c.certificate.threshold}}}};
    if (std::isfinite(c.certificate.lower_bound)) {
      cj["far"]["lower_bound"] = c.certificate.lower_bound;
    } else {
      cj["far"]["lower_bound"] = "inf";
    }
    if (c.cell.family.kind == FamilyKind::kRandomMix) cj["padded"] = c.padded;
    if (c.wall_seconds) cj["wall_seconds"] = *c.wall_seconds;
    cells.push_back(std::move(cj));
  }
  json doc{{"seed", r.seed}, {"c", r.c}, {"d", r.d}, {"cells", std::move(cells)}};
  return doc.dump(2) + "\n";
}

std::string report_text(const ExperimentReport& r) {
  std::ostringstream os;
  os << "experiment seed=" << r.seed << " class C^" << r.c << "_" << r.d << "\n";
  for (const auto& c : r.cells) {
    os << to_string(c.cell.family.kind) << " n=" << c.n << " eps=" << c.cell.epsilon << " trials=" << c.cell.trials
       << " accept=" << fixed(c.accept_frequency, 3) << " mean_queries=" << fixed(c.mean_queries, 1)
       << " max_queries=" << c.max_queries << " q=" << c.q << " far=" << to_string(c.certificate.status);
    if (c.not_in_class) os << " not_in_class=" << c.not_in_class;
    if (c.cell.family.kind == FamilyKind::kRandomMix) os << " padded=" << c.padded;
    if (c.wall_seconds) os << " wall=" << fixed(*c.wall_seconds, 3) << "s";
    os << "\n";
  }
  return os.str();
}

}  // namespace fintest
