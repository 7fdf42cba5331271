#pragma once

#include <string>
#include <vector>

#include "sdwsn/channel.hpp"
#include "sdwsn/config.hpp"
#include "sdwsn/linear.hpp"

// Config-driven experiment runs. Each run builds its moments, fits the second
// degree network and the linear baseline, evaluates the closed-form errors,
// and writes trace CSVs, a report CSV and SVG charts into the output
// directory. Identical config and seed give byte-identical CSVs.

namespace sdwsn {

struct MethodReport {
  std::string method;
  double mse = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct RunReport {
  std::vector<MethodReport> methods;
  std::vector<std::string> artifacts;  // files written, relative to out_dir
  double wall_seconds = 0.0;

  const MethodReport& method(const std::string& name) const;
};

/// Analytic Gaussian moments, ideal channels: second degree fit against the
/// linear baseline, bar chart of the two errors.
RunReport run_analytic_ideal(const ExperimentConfig& cfg);

/// Sampled training moments from y_j = A_j x + beta_j xi_j with random A_j
/// and uniform x; the covariances are singular by construction.
RunReport run_sampled_ideal(const ExperimentConfig& cfg);

/// Image pipeline: Hadamard-masked noisy observations of a grayscale image,
/// training on the even columns, reconstruction of every column, per-column
/// error plot, reconstructed images.
RunReport run_image(const ExperimentConfig& cfg);

/// Nonideal channels on analytic moments: alternating-iterative fit of the
/// second degree model and of its linear restriction.
RunReport run_channel(const ExperimentConfig& cfg);

/// Dispatch on mode / model source.
RunReport run_experiment(const ExperimentConfig& cfg);

/// Deterministic synthetic grayscale test image in [0, 1].
Mat synthetic_image(int size);

/// Trace CSV writers shared by the runs and the CLI.
void write_ideal_trace_csv(const std::string& path, const FitTrace& trace);
void write_channel_trace_csv(const std::string& path, const FitTrace& trace);
void write_report_csv(const std::string& path,
                      const std::vector<MethodReport>& methods);

}  // namespace sdwsn
