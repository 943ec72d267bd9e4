#pragma once
/**
 * @file experiments.hpp
 * @brief Runners behind the CLI subcommands and the worked-examples suite.
 */

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rjd/config.hpp"
#include "rjd/report.hpp"
#include "rjd/wasserstein.hpp"

namespace rjd {

/// Runs the experiment described by cfg. Tabular output goes to `tables`;
/// verdicts, certificate and details go to the returned report.
Report run_experiment(const ExperimentConfig& cfg, TableSink& tables);

struct ExamplesOptions {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t paths = 10000;
  double dt = 1e-3;
};

/// Worked examples: the Lévy certificate, the OU closed form, the RBM and OU
/// decay experiments, and the coupling verifications. Every check becomes a
/// verdict.
Report run_examples(const ExamplesOptions& opt, TableSink& tables);

/// Least-squares slope of log(values) against times.
double log_slope(const std::vector<double>& times, const std::vector<double>& values);

/// Streams a decay curve as a table with the decay CSV columns.
void emit_decay_table(const std::string& name, const DecayCurve& curve, TableSink& sink);

}  // namespace rjd
