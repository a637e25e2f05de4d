#pragma once

#include <string>

#include "sgdlab/analysis.hpp"
#include "sgdlab/config.hpp"

namespace sgdlab {

// Executes cfg.trials seeded runs (worker pool of `threads`), writes one
// trace CSV per trial into cfg.trace_dir (when set) and the summary JSON to
// cfg.summary_path (when set). Deterministic given the config, independent
// of the worker count.
EnsembleSummary run_experiment(const ExperimentConfig& cfg, int threads = 1);

// Summary JSON with ASCII-sorted keys; floats at 17 significant digits, so
// repeated runs are byte-identical.
void write_results(const EnsembleSummary& summary, const std::string& path);
std::string summary_to_json(const EnsembleSummary& summary);

// One CSV per trial: t, eps_t, f_u_t, dist_to_body, sampled_value_at_u,
// sampled_value_at_opt.
void write_trace_csv(const RunTrace& trace, const ConvexObjective& mean_f,
                     const std::string& path);

}  // namespace sgdlab
