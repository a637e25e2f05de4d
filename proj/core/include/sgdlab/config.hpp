#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sgdlab/geometry.hpp"
#include "sgdlab/objectives.hpp"
#include "sgdlab/optimizers.hpp"

namespace sgdlab {

enum class Algorithm { Rapgd, Ppgd, Raspgd, Ssgd };

std::string algorithm_name(Algorithm a);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Rapgd;
  std::string problem_name;
  ConvexBody body{Ball{{0.0}, 1.0}};
  Schedule schedule;
  long long T = 0;          // resolved value (auto already applied)
  bool auto_T = false;
  std::optional<double> eps;
  std::optional<double> eps_sm;
  bool smooth = true;       // ssgd only
  int trials = 1;
  std::uint64_t master_seed = 0;
  std::string trace_dir;
  std::string summary_path;
  bool record_half_steps = false;
  int n_mc = 10000;
  std::optional<Vec> u1;    // default: a deterministic member point

  // Problem construction is deferred so the config stays copyable/printable.
  std::optional<Vec> problem_a;
  std::vector<Vec> problem_X;
  std::vector<double> problem_y;
};

// Parses and validates a JSON config; fills defaults and resolves T="auto"
// through the step-count formulas. Throws std::invalid_argument naming the
// offending field.
ExperimentConfig parse_config(const std::string& text);

// Builds the stochastic problem named by the config (deterministic problems
// are wrapped as zero-variance samplers).
StochasticObjective build_problem(const ExperimentConfig& cfg);

// Builds the body from the config's body spec (exposed for tools/tests).
ConvexBody body_from_json_text(const std::string& text);

}  // namespace sgdlab
