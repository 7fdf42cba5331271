// Command line front end: config-driven experiment runs, direct fits from
// moment matrices, model application and second-degree-vs-linear comparison.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "sdwsn/experiments.hpp"
#include "sdwsn/model_io.hpp"
#include "sdwsn/svg.hpp"
#include "sdwsn/textio.hpp"

namespace {

using namespace sdwsn;

struct GlobalOpts {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string format;
};

void apply_overrides(ExperimentConfig& cfg, const GlobalOpts& g) {
  if (g.seed_set) cfg.seed = g.seed;
  if (!g.out.empty()) cfg.out_dir = g.out;
  if (!g.format.empty()) cfg.format = g.format;
}

void print_report(const RunReport& report, const std::string& out_dir) {
  for (const MethodReport& m : report.methods) {
    std::printf("%-16s mse=%.12g iterations=%d converged=%s\n", m.method.c_str(),
                m.mse, m.iterations, m.converged ? "true" : "false");
  }
  for (const std::string& a : report.artifacts) {
    std::printf("wrote %s/%s\n", out_dir.c_str(), a.c_str());
  }
  std::printf("wall time: %.3f s\n", report.wall_seconds);
}

CovariancePack pack_from_moment_files(const std::string& exx_path,
                                      const std::string& exz_path,
                                      const std::string& ezz_path,
                                      const ExperimentConfig& cfg) {
  CovariancePack pack;
  pack.part = cfg.partition();
  pack.e_xx = read_mat(exx_path);
  pack.e_xz = read_mat(exz_path);
  pack.e_zz = read_mat(ezz_path);
  pack.validate();
  return pack;
}

CovariancePack pack_from_config(const ExperimentConfig& cfg) {
  require(cfg.model_source == ModelSource::analytic_gaussian,
          "direct fits need analytic-gaussian moments; use `run` for the "
          "sampled pipelines");
  require(static_cast<int>(cfg.sigma.size()) == cfg.p,
          "config: noise.sigma must list one level per sensor");
  const Mat exx = cfg.exx.empty()
                      ? Mat{{1.0, 0.64, 0.08}, {0.64, 1.0, 0.08}, {0.08, 0.08, 1.0}}
                      : cfg.exx;
  return gaussian_analytic_covariances(exx, cfg.sigma, cfg.partition());
}

int cmd_run(const std::string& config_path, const GlobalOpts& g) {
  ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
  apply_overrides(cfg, g);
  RunReport report = run_experiment(cfg);
  print_report(report, cfg.out_dir);
  return 0;
}

int cmd_fit_ideal(const std::string& config_path, const std::string& exx,
                  const std::string& exz, const std::string& ezz,
                  const GlobalOpts& g) {
  ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
  apply_overrides(cfg, g);
  const bool from_files = !exx.empty();
  CovariancePack pack = from_files ? pack_from_moment_files(exx, exz, ezz, cfg)
                                   : pack_from_config(cfg);
  ReducedForm red = reduce(pack);
  FitConfig fc;
  fc.epsilon = cfg.epsilon;
  fc.max_iterations = cfg.max_iterations;
  FitResult fit = mbi_fit(red, pack, fc);
  NetworkModel model =
      extract_models(fit.blocks, red, FactorVariant::orthonormal_t, fit.g_pinv);

  std::filesystem::create_directories(cfg.out_dir);
  save_model(cfg.out_dir + "/model", model);
  write_ideal_trace_csv(cfg.out_dir + "/trace.csv", fit.trace);
  const double err = error_exact(assemble_blocks(fit.blocks, pack.part), red);
  write_report_csv(cfg.out_dir + "/report.csv",
                   {{"second-degree", err, fit.trace.iterations,
                     fit.trace.converged}});
  std::printf("second-degree mse=%.12g iterations=%d converged=%s\n", err,
              fit.trace.iterations, fit.trace.converged ? "true" : "false");
  std::printf("model saved to %s/model\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_fit_channel(const std::string& config_path, const GlobalOpts& g) {
  ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
  apply_overrides(cfg, g);
  require(cfg.mode == RunMode::channel,
          "fit-channel: config must set mode = channel");
  CovariancePack pack = pack_from_config(cfg);
  BlockPartition part = pack.part;
  ChannelSpec ch = ChannelSpec::white(part, cfg.gamma);
  for (int j = 0; j < part.p; ++j) ch.d[j] = cfg.channel_d[j];
  FitConfig fc;
  fc.epsilon = cfg.epsilon;
  fc.max_iterations = cfg.max_iterations;

  ReducedForm red = reduce(pack);
  ChannelFitState init = channel_init(pack, red, fc);
  ChannelFitState out = ai_fit(pack, ch, fc, init);

  std::filesystem::create_directories(cfg.out_dir);
  save_model(cfg.out_dir + "/model", channel_model(out, part));
  write_channel_trace_csv(cfg.out_dir + "/trace.csv", out.trace);
  write_report_csv(cfg.out_dir + "/report.csv",
                   {{"second-degree", out.trace.final_objective(),
                     out.trace.iterations, out.trace.converged}});
  std::printf("second-degree psi=%.12g iterations=%d converged=%s\n",
              out.trace.final_objective(), out.trace.iterations,
              out.trace.converged ? "true" : "false");
  std::printf("model saved to %s/model\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_apply(const std::string& model_dir,
              const std::vector<std::string>& y_paths,
              const std::string& out_file, const std::string& expected_path) {
  NetworkModel model = load_model(model_dir);
  require(static_cast<int>(y_paths.size()) == model.part.p,
          "apply: one observation file per sensor required");
  std::vector<Mat> ys;
  for (const std::string& path : y_paths) ys.push_back(read_mat(path));
  const Mat xhat = apply_network(model, ys);
  write_mat(out_file, xhat);
  std::printf("wrote %s (%d x %d)\n", out_file.c_str(), xhat.rows(), xhat.cols());
  if (!expected_path.empty()) {
    const Mat x = read_mat(expected_path);
    require(x.rows() == xhat.rows() && x.cols() == xhat.cols(),
            "apply: expected signal dimensions do not match");
    const double mse = (x - xhat).frob_sq() / x.cols();
    std::printf("empirical mse=%.12g over %d columns\n", mse, x.cols());
  }
  return 0;
}

int cmd_compare(const std::string& config_path, const GlobalOpts& g) {
  ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
  apply_overrides(cfg, g);
  RunReport report = cfg.mode == RunMode::channel ? run_channel(cfg)
                                                  : run_analytic_ideal(cfg);
  print_report(report, cfg.out_dir);

  if (cfg.mode == RunMode::ideal) {
    // Block-level second-degree advantage predicate at the fitted models.
    CovariancePack pack = pack_from_config(cfg);
    ReducedForm red = reduce(pack);
    FitConfig fc;
    fc.epsilon = cfg.epsilon;
    fc.max_iterations = cfg.max_iterations;
    FitResult sd = mbi_fit(red, pack, fc);
    LinearFitResult lin = linear_fit(pack, fc);
    for (int j = 0; j < pack.part.p; ++j) {
      const bool advantage = compare_condition(j, sd.blocks, lin.blocks, pack);
      std::printf("block %d advantage condition: %s\n", j,
                  advantage ? "true" : "false");
    }
  }
  const double sd_err = report.method("second-degree").mse;
  const double lin_err = report.method("linear").mse;
  std::printf("second-degree %s linear (%.12g vs %.12g)\n",
              sd_err <= lin_err ? "<=" : ">", sd_err, lin_err);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed second degree compression and recovery toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Override the config seed")
      ->each([&g](const std::string&) { g.seed_set = true; });
  app.add_option("--out", g.out, "Override the output directory");
  app.add_option("--format", g.format, "Output artifacts: csv, svg or both")
      ->check(CLI::IsMember({"csv", "svg", "both"}));

  std::string config_path, exx, exz, ezz;
  std::string model_dir, out_file = "xhat.txt", expected;
  std::vector<std::string> y_paths;

  CLI::App* run = app.add_subcommand("run", "Run a config-driven experiment");
  run->add_option("--config", config_path, "Experiment config file")->required();

  CLI::App* fit_ideal =
      app.add_subcommand("fit-ideal", "Fit the ideal-channel network");
  fit_ideal->add_option("--config", config_path, "Experiment config file")
      ->required();
  fit_ideal->add_option("--exx", exx, "E_xx matrix file (overrides the config)");
  fit_ideal->add_option("--exz", exz, "E_xz matrix file");
  fit_ideal->add_option("--ezz", ezz, "E_zz matrix file");

  CLI::App* fit_channel =
      app.add_subcommand("fit-channel", "Fit the nonideal-channel network");
  fit_channel->add_option("--config", config_path, "Experiment config file")
      ->required();

  CLI::App* apply = app.add_subcommand("apply", "Apply a saved model to data");
  apply->add_option("--model", model_dir, "Model directory")->required();
  apply->add_option("--y", y_paths, "Observation files, one per sensor")
      ->required();
  apply->add_option("--out-file", out_file, "Reconstruction output file");
  apply->add_option("--expected", expected,
                    "Reference signal file for an error printout");

  CLI::App* compare = app.add_subcommand(
      "compare", "Fit both models and report the error ordering");
  compare->add_option("--config", config_path, "Experiment config file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, g);
    if (fit_ideal->parsed()) return cmd_fit_ideal(config_path, exx, exz, ezz, g);
    if (fit_channel->parsed()) return cmd_fit_channel(config_path, g);
    if (apply->parsed()) return cmd_apply(model_dir, y_paths, out_file, expected);
    if (compare->parsed()) return cmd_compare(config_path, g);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
