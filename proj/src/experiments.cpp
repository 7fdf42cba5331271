#include "sdwsn/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include "sdwsn/model_io.hpp"
#include "sdwsn/rng.hpp"
#include "sdwsn/svg.hpp"
#include "sdwsn/textio.hpp"

namespace sdwsn {
namespace {

const Mat kExample1Exx = {{1.0, 0.64, 0.08}, {0.64, 1.0, 0.08}, {0.08, 0.08, 1.0}};
const Mat kExample5Exx = {{1.000, 0.580, 0.275, 0.450},
                          {0.580, 1.000, 0.295, 0.540},
                          {0.275, 0.295, 1.000, 0.215},
                          {0.450, 0.540, 0.215, 1.000}};

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

Mat analytic_exx(const ExperimentConfig& cfg) {
  if (!cfg.exx.empty()) return cfg.exx;
  if (cfg.m == 3) return kExample1Exx;
  if (cfg.m == 4) return kExample5Exx;
  throw InvalidInput("config: model.exx is required for this signal dimension");
}

std::vector<int> image_ranks(const ExperimentConfig& cfg, int m) {
  if (!cfg.r.empty()) return cfg.r;
  return std::vector<int>(cfg.p, m / 2);  // half-rank compression
}

bool want_csv(const ExperimentConfig& cfg) { return cfg.format != "svg"; }
bool want_svg(const ExperimentConfig& cfg) { return cfg.format != "csv"; }

void ensure_out(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
}

FitConfig fit_config(const ExperimentConfig& cfg) {
  FitConfig fc;
  fc.epsilon = cfg.epsilon;
  fc.max_iterations = cfg.max_iterations;
  return fc;
}

ChannelSpec channel_spec(const ExperimentConfig& cfg,
                         const BlockPartition& part) {
  ChannelSpec ch = ChannelSpec::white(part, cfg.gamma);
  for (int j = 0; j < part.p; ++j) {
    require(cfg.channel_d[j].rows() == part.r[j] &&
                cfg.channel_d[j].cols() == part.r[j],
            "config: d" + std::to_string(j + 1) + " must be r_j x r_j");
    ch.d[j] = cfg.channel_d[j];
  }
  return ch;
}

void check_finite(const RunReport& report) {
  for (const MethodReport& m : report.methods) {
    require(std::isfinite(m.mse) && m.mse >= 0.0,
            "run: non-finite or negative error for method " + m.method);
  }
}

}  // namespace

const MethodReport& RunReport::method(const std::string& name) const {
  for (const MethodReport& m : methods)
    if (m.method == name) return m;
  throw InvalidInput("run report: no method named " + name);
}

void write_ideal_trace_csv(const std::string& path, const FitTrace& trace) {
  CsvWriter csv(path, {"iteration", "objective", "chosen_block"});
  csv.row({CsvWriter::cell(0), CsvWriter::cell(trace.objectives[0]),
           CsvWriter::cell(-1)});
  for (int i = 0; i < trace.iterations; ++i) {
    csv.row({CsvWriter::cell(i + 1), CsvWriter::cell(trace.objectives[i + 1]),
             CsvWriter::cell(trace.chosen_block[i])});
  }
}

void write_channel_trace_csv(const std::string& path, const FitTrace& trace) {
  CsvWriter csv(path, {"iteration", "psi", "chosen_candidate"});
  csv.row({CsvWriter::cell(0), CsvWriter::cell(trace.objectives[0]),
           CsvWriter::cell(-1)});
  for (int i = 0; i < trace.iterations; ++i) {
    csv.row({CsvWriter::cell(i + 1), CsvWriter::cell(trace.objectives[i + 1]),
             CsvWriter::cell(trace.chosen_block[i])});
  }
}

void write_report_csv(const std::string& path,
                      const std::vector<MethodReport>& methods) {
  CsvWriter csv(path, {"method", "mse", "iterations", "converged"});
  for (const MethodReport& m : methods) {
    csv.row({m.method, CsvWriter::cell(m.mse), CsvWriter::cell(m.iterations),
             m.converged ? "true" : "false"});
  }
}

Mat synthetic_image(int size) {
  require(size >= 4, "synthetic image: size too small");
  Mat img(size, size);
  const double c = (size - 1) / 2.0;
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const double grad = 0.35 * (i + j) / (2.0 * (size - 1));
      const double waves =
          0.25 * std::sin(6.0 * 3.14159265358979 * i / size) *
          std::cos(4.0 * 3.14159265358979 * j / size);
      const double dist = std::sqrt((i - c) * (i - c) + (j - c) * (j - c));
      const double disc = dist < size / 3.5 ? 0.3 : 0.0;
      img(i, j) = std::min(1.0, std::max(0.0, 0.2 + grad + waves + disc));
    }
  }
  return img;
}

RunReport run_analytic_ideal(const ExperimentConfig& cfg) {
  Stopwatch watch;
  ensure_out(cfg);
  require(static_cast<int>(cfg.sigma.size()) == cfg.p,
          "config: noise.sigma must list one level per sensor");
  require(!cfg.r.empty(), "config: partition.r is required");
  BlockPartition part = cfg.partition();
  CovariancePack pack =
      gaussian_analytic_covariances(analytic_exx(cfg), cfg.sigma, part);
  ReducedForm red = reduce(pack);
  const FitConfig fc = fit_config(cfg);

  FitResult sd = mbi_fit(red, pack, fc);
  const double sd_err = error_exact(assemble_blocks(sd.blocks, part), red);

  LinearFitResult lin = linear_fit(pack, fc);
  const double lin_err =
      error_exact(assemble_blocks(lin.blocks, lin.pack.part), lin.red);

  RunReport report;
  report.methods.push_back(
      {"second-degree", sd_err, sd.trace.iterations, sd.trace.converged});
  report.methods.push_back(
      {"linear", lin_err, lin.trace.iterations, lin.trace.converged});
  check_finite(report);

  if (want_csv(cfg)) {
    write_ideal_trace_csv(cfg.out_dir + "/trace_second_degree.csv", sd.trace);
    write_ideal_trace_csv(cfg.out_dir + "/trace_linear.csv", lin.trace);
    write_report_csv(cfg.out_dir + "/report.csv", report.methods);
    report.artifacts = {"trace_second_degree.csv", "trace_linear.csv",
                        "report.csv"};
  }
  if (want_svg(cfg)) {
    write_bar_svg(cfg.out_dir + "/mse.svg", "Reconstruction error", "MSE",
                  {{"second-degree", sd_err, "#1f6fb2"},
                   {"linear", lin_err, "#c44e52"}});
    report.artifacts.push_back("mse.svg");
  }
  report.wall_seconds = watch.seconds();
  return report;
}

RunReport run_sampled_ideal(const ExperimentConfig& cfg) {
  Stopwatch watch;
  ensure_out(cfg);
  require(static_cast<int>(cfg.beta.size()) == cfg.p,
          "config: noise.beta must list one level per sensor");
  require(!cfg.r.empty(), "config: partition.r is required");
  Rng rng(cfg.seed);
  Rng a_rng = rng.fork(1);
  Rng x_rng = rng.fork(2);
  Rng noise_rng = rng.fork(3);

  BlockPartition part = cfg.partition();
  part.lifting = Lifting::full;  // sampled signals are not zero-mean
  const int s = cfg.sample_count;
  const Mat x = x_rng.uniform_mat(cfg.m, s);
  std::vector<Mat> ys;
  for (int j = 0; j < cfg.p; ++j) {
    require(part.n[j] == cfg.m, "sample mode: observation matrices are m x m");
    const Mat a = a_rng.uniform_mat(cfg.m, cfg.m);
    Mat y = a * x;
    for (double& v : y.data()) v += cfg.beta[j] * noise_rng.normal();
    ys.push_back(std::move(y));
  }
  CovariancePack pack = sample_covariances(x, ys, part);
  ReducedForm red = reduce(pack);
  const FitConfig fc = fit_config(cfg);

  FitResult sd = mbi_fit(red, pack, fc);
  const double sd_err = error_exact(assemble_blocks(sd.blocks, part), red);
  LinearFitResult lin = linear_fit(pack, fc);
  const double lin_err =
      error_exact(assemble_blocks(lin.blocks, lin.pack.part), lin.red);

  RunReport report;
  report.methods.push_back(
      {"second-degree", sd_err, sd.trace.iterations, sd.trace.converged});
  report.methods.push_back(
      {"linear", lin_err, lin.trace.iterations, lin.trace.converged});
  check_finite(report);
  for (const Mat& b : sd.blocks) require(b.is_finite(), "sample fit: non-finite block");

  if (want_csv(cfg)) {
    write_ideal_trace_csv(cfg.out_dir + "/trace_second_degree.csv", sd.trace);
    write_ideal_trace_csv(cfg.out_dir + "/trace_linear.csv", lin.trace);
    write_report_csv(cfg.out_dir + "/report.csv", report.methods);
    report.artifacts = {"trace_second_degree.csv", "trace_linear.csv",
                        "report.csv"};
  }
  if (want_svg(cfg)) {
    Series sd_series{"second-degree", sd.trace.objectives, "#1f6fb2"};
    Series lin_series{"linear", lin.trace.objectives, "#c44e52"};
    write_line_svg(cfg.out_dir + "/objective.svg", "Fit objective", "iteration",
                   "objective", {sd_series, lin_series});
    report.artifacts.push_back("objective.svg");
  }
  report.wall_seconds = watch.seconds();
  return report;
}

RunReport run_image(const ExperimentConfig& cfg) {
  Stopwatch watch;
  ensure_out(cfg);
  require(cfg.p == 2, "image mode: two sensors expected");
  require(static_cast<int>(cfg.beta.size()) == cfg.p,
          "config: noise.beta must list one level per sensor");
  const Mat x_full = cfg.image_path.empty() ? synthetic_image(cfg.image_size)
                                            : read_pgm(cfg.image_path);
  const int m = x_full.rows();
  const int k = x_full.cols();
  require(k % 2 == 0, "image mode: even column count required");

  Rng rng(cfg.seed);
  Rng mask_rng = rng.fork(1);
  Rng noise_rng = rng.fork(2);

  // Y_j = A_j .* X + beta_j Xi_j with standard normal A_j and Xi_j.
  std::vector<Mat> y_full;
  for (int j = 0; j < 2; ++j) {
    const Mat a = mask_rng.normal_mat(m, k);
    Mat y(m, k);
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < k; ++c)
        y(i, c) = a(i, c) * x_full(i, c) + cfg.beta[j] * noise_rng.normal();
    y_full.push_back(std::move(y));
  }

  // Training sample: the even columns (1-based), s = k/2.
  const int s = k / 2;
  Mat x_train(m, s);
  std::vector<Mat> y_train(2, Mat(m, s));
  for (int c = 0; c < s; ++c) {
    const int col = 2 * c + 1;
    for (int i = 0; i < m; ++i) {
      x_train(i, c) = x_full(i, col);
      y_train[0](i, c) = y_full[0](i, col);
      y_train[1](i, c) = y_full[1](i, col);
    }
  }

  const std::vector<int> ranks = image_ranks(cfg, m);
  BlockPartition part = BlockPartition::make(m, {m, m}, ranks, Lifting::full);
  CovariancePack pack = sample_covariances(x_train, y_train, part);
  ReducedForm red = reduce(pack);
  const FitConfig fc = fit_config(cfg);

  FitResult sd = mbi_fit(red, pack, fc);
  NetworkModel sd_model =
      extract_models(sd.blocks, red, FactorVariant::orthonormal_t, sd.g_pinv);
  const Mat x_hat_sd = apply_network(sd_model, y_full);

  LinearFitResult lin = linear_fit(pack, fc);
  const Mat x_hat_lin = apply_network(lin.model, y_full);

  require(x_hat_sd.is_finite() && x_hat_lin.is_finite(),
          "image mode: reconstruction must stay finite");

  std::vector<double> err_sd(k), err_lin(k);
  double mean_sd = 0.0, mean_lin = 0.0;
  for (int c = 0; c < k; ++c) {
    double acc_sd = 0.0, acc_lin = 0.0;
    for (int i = 0; i < m; ++i) {
      const double d1 = x_full(i, c) - x_hat_sd(i, c);
      const double d2 = x_full(i, c) - x_hat_lin(i, c);
      acc_sd += d1 * d1;
      acc_lin += d2 * d2;
    }
    err_sd[c] = acc_sd;
    err_lin[c] = acc_lin;
    mean_sd += acc_sd;
    mean_lin += acc_lin;
  }
  mean_sd /= k;
  mean_lin /= k;

  RunReport report;
  report.methods.push_back(
      {"second-degree", mean_sd, sd.trace.iterations, sd.trace.converged});
  report.methods.push_back(
      {"linear", mean_lin, lin.trace.iterations, lin.trace.converged});
  check_finite(report);

  if (want_csv(cfg)) {
    CsvWriter csv(cfg.out_dir + "/column_errors.csv",
                  {"column", "second_degree", "linear"});
    for (int c = 0; c < k; ++c) {
      csv.row({CsvWriter::cell(c + 1), CsvWriter::cell(err_sd[c]),
               CsvWriter::cell(err_lin[c])});
    }
    write_ideal_trace_csv(cfg.out_dir + "/trace_second_degree.csv", sd.trace);
    write_ideal_trace_csv(cfg.out_dir + "/trace_linear.csv", lin.trace);
    write_report_csv(cfg.out_dir + "/report.csv", report.methods);
    report.artifacts = {"column_errors.csv", "trace_second_degree.csv",
                        "trace_linear.csv", "report.csv"};
  }
  write_pgm(cfg.out_dir + "/reconstruction_second_degree.pgm", x_hat_sd);
  write_pgm(cfg.out_dir + "/reconstruction_linear.pgm", x_hat_lin);
  report.artifacts.push_back("reconstruction_second_degree.pgm");
  report.artifacts.push_back("reconstruction_linear.pgm");
  if (want_svg(cfg)) {
    write_line_svg(cfg.out_dir + "/column_errors.svg",
                   "Per-column reconstruction error", "column",
                   "squared error",
                   {{"second-degree", err_sd, "#1f6fb2"},
                    {"linear", err_lin, "#c44e52"}});
    report.artifacts.push_back("column_errors.svg");
  }
  report.wall_seconds = watch.seconds();
  return report;
}

RunReport run_channel(const ExperimentConfig& cfg) {
  Stopwatch watch;
  ensure_out(cfg);
  require(static_cast<int>(cfg.sigma.size()) == cfg.p,
          "config: noise.sigma must list one level per sensor");
  require(!cfg.r.empty(), "config: partition.r is required");
  BlockPartition part = cfg.partition();
  CovariancePack pack =
      gaussian_analytic_covariances(analytic_exx(cfg), cfg.sigma, part);
  ChannelSpec ch = channel_spec(cfg, part);
  const FitConfig fc = fit_config(cfg);

  ReducedForm red = reduce(pack);
  ChannelFitState init = channel_init(pack, red, fc);
  ChannelFitState sd = ai_fit(pack, ch, fc, init);

  CovariancePack pack_lin = restrict_linear(pack);
  ReducedForm red_lin = reduce(pack_lin);
  ChannelFitState init_lin = channel_init(pack_lin, red_lin, fc);
  ChannelFitState lin = ai_fit(pack_lin, ch, fc, init_lin);

  RunReport report;
  report.methods.push_back({"second-degree", sd.trace.final_objective(),
                            sd.trace.iterations, sd.trace.converged});
  report.methods.push_back({"linear", lin.trace.final_objective(),
                            lin.trace.iterations, lin.trace.converged});
  check_finite(report);

  if (want_csv(cfg)) {
    write_channel_trace_csv(cfg.out_dir + "/trace_second_degree.csv", sd.trace);
    write_channel_trace_csv(cfg.out_dir + "/trace_linear.csv", lin.trace);
    write_report_csv(cfg.out_dir + "/report.csv", report.methods);
    report.artifacts = {"trace_second_degree.csv", "trace_linear.csv",
                        "report.csv"};
  }
  if (want_svg(cfg)) {
    write_bar_svg(cfg.out_dir + "/mse.svg",
                  "Reconstruction error over nonideal channels", "MSE",
                  {{"second-degree", sd.trace.final_objective(), "#1f6fb2"},
                   {"linear", lin.trace.final_objective(), "#c44e52"}});
    report.artifacts.push_back("mse.svg");
  }
  report.wall_seconds = watch.seconds();
  return report;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.mode == RunMode::channel) return run_channel(cfg);
  switch (cfg.model_source) {
    case ModelSource::analytic_gaussian:
      return run_analytic_ideal(cfg);
    case ModelSource::sample_data:
      return run_sampled_ideal(cfg);
    case ModelSource::image:
      return run_image(cfg);
  }
  throw InvalidInput("run: unsupported configuration");
}

}  // namespace sdwsn
