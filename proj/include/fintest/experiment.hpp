#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fintest/catalog.hpp"
#include "fintest/compiler.hpp"
#include "fintest/families.hpp"
#include "fintest/tester.hpp"

namespace fintest {

struct ExperimentCell {
  FamilySpec family;
  double epsilon = 0.1;
  std::uint64_t trials = 100;
};

struct ExperimentConfig {
  CompiledSentence templates;
  std::uint64_t seed = 0;
  std::optional<std::size_t> ball_types;  // overrides N in q
  std::vector<ExperimentCell> cells;
};

// {"templates": "file.json" | {...}, "seed": S, "cells": [{"family": NAME,
//  "n": N | [N, ...], "epsilon": E | [E, ...], "trials": T, "chv": [...],
//  "weights": [...], "mix_seed": S}], "ball_types": N}; N is optional. Relative template paths resolve
// against `base_dir`. Lists expand to one cell per (n, epsilon) pair.
ExperimentConfig parse_experiment_config(std::string_view json_text, const std::string& base_dir = ".");

struct CellResult {
  ExperimentCell cell;
  std::uint64_t n = 0;
  std::uint64_t accepts = 0;
  std::uint64_t rejects = 0;
  std::uint64_t not_in_class = 0;
  double accept_frequency = 0;
  double mean_queries = 0;
  std::uint64_t max_queries = 0;
  std::uint64_t q = 0;
  std::uint64_t padded = 0;
  FarCertificate certificate;
  std::optional<double> wall_seconds;
};

struct ExperimentReport {
  std::uint64_t seed = 0;
  std::size_t c = 1;
  int d = 0;
  std::vector<CellResult> cells;
};

// Trials use run_union with seeds mixed from (master seed, cell, trial), so
// the report is a function of the config alone. Wall time is recorded only
// when `timing` is set.
ExperimentReport run_experiment(const ExperimentConfig& config, const TypeCatalog& cat, bool timing = false);

std::string report_json(const ExperimentReport& r);
std::string report_text(const ExperimentReport& r);

}  // namespace fintest
