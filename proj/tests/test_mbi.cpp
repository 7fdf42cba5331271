#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sdwsn/covmodel.hpp"
#include "sdwsn/mbi.hpp"
#include "sdwsn/rng.hpp"

using namespace sdwsn;

namespace {

const Mat kExampleExx = {{1.0, 0.64, 0.08}, {0.64, 1.0, 0.08}, {0.08, 0.08, 1.0}};

CovariancePack example1_pack(int r1 = 1, int r2 = 1) {
  BlockPartition part =
      BlockPartition::make(3, {3, 3}, {r1, r2}, Lifting::reduced);
  const std::vector<double> sd = {0.9, 0.65};
  return gaussian_analytic_covariances(kExampleExx, sd, part);
}

CovariancePack random_analytic_pack(Rng& rng, int m, int p) {
  Mat exx = rng.normal_mat(m, m + 2);
  exx = mul_a_bt(exx, exx);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) exx(i, j) /= std::sqrt(exx(i, i) * exx(j, j));
  for (int i = 0; i < m; ++i) exx(i, i) = 1.0;
  exx.symmetrize();
  std::vector<int> n(p, m), r(p);
  std::vector<double> sd(p);
  for (int j = 0; j < p; ++j) {
    r[j] = 1 + rng.uniform_int(m);
    sd[j] = rng.uniform(0.2, 1.0);
  }
  BlockPartition part = BlockPartition::make(m, n, r, Lifting::reduced);
  return gaussian_analytic_covariances(exx, sd, part);
}

void check_monotone(const FitTrace& trace) {
  for (std::size_t i = 0; i + 1 < trace.objectives.size(); ++i) {
    CHECK(trace.objectives[i + 1] <= trace.objectives[i] + 1e-10);
  }
}

// Cyclic-update reference run to its own fixed point: always update block
// (q mod p), no candidate competition. Shares the solver but not the
// acceptance rule.
double cyclic_fit_final_phi(const ReducedForm& red, const CovariancePack& pack) {
  std::vector<Mat> blocks = initial_iterations(pack);
  std::vector<Mat> right_projs, g_pinvs;
  for (int j = 0; j < red.part.p; ++j) {
    right_projs.push_back(right_proj(red.g[j]));
    g_pinvs.push_back(pinv(red.g[j]));
  }
  Mat resid = red.h;
  for (int j = 0; j < red.part.p; ++j) resid -= blocks[j] * red.g[j];
  double prev = resid.frob_sq();
  double phi = prev;
  for (int q = 0; q < 20000; ++q) {
    const int j = q % red.part.p;
    const Mat qj = resid + blocks[j] * red.g[j];
    RankSolve sol =
        rank_constrained_solve_pre(qj, right_projs[j], g_pinvs[j], red.part.r[j]);
    resid = qj - sol.p * red.g[j];
    blocks[j] = std::move(sol.p);
    phi = resid.frob_sq();
    if (j == red.part.p - 1) {
      if (std::abs(prev - phi) <= 1e-12) break;
      prev = phi;
    }
  }
  return phi;
}

}  // namespace

TEST_CASE("initial_iterations: single block equals the plain SDT") {
  BlockPartition part = BlockPartition::make(3, {3}, {2}, Lifting::reduced);
  const std::vector<double> sd = {0.5};
  CovariancePack pack = gaussian_analytic_covariances(kExampleExx, sd, part);
  std::vector<Mat> init = initial_iterations(pack);
  REQUIRE(init.size() == 1);
  CHECK(init[0].max_abs_diff(sdt_single(pack.e_xzj(0), pack.e_zizj(0, 0), 2)) <
        1e-12);
}

TEST_CASE("initial_iterations: uninformative moments give zero blocks") {
  CovariancePack pack;
  pack.part = BlockPartition::make(4, {3, 3}, {1, 2}, Lifting::linear);
  pack.e_xx = Mat::identity(4);
  pack.e_xz = Mat(4, 6);
  pack.e_zz = Mat::identity(6);
  for (const Mat& b : initial_iterations(pack)) CHECK(b.max_abs() == 0.0);
}

TEST_CASE("initial_iterations: starting objective dominates the fitted one") {
  CovariancePack pack = example1_pack();
  ReducedForm red = reduce(pack);
  std::vector<Mat> init = initial_iterations(pack);
  const double phi0 = phi_objective(init, red);
  CHECK(std::isfinite(phi0));
  FitConfig cfg;
  cfg.max_iterations = 50;
  FitResult fit = mbi_fit(red, pack, cfg);
  CHECK(fit.trace.objectives.front() == doctest::Approx(phi0).epsilon(1e-12));
  CHECK(fit.trace.final_objective() <= phi0 + 1e-12);
}

TEST_CASE("mbi_fit: single block converges immediately to the SDT") {
  BlockPartition part = BlockPartition::make(3, {3}, {1}, Lifting::reduced);
  const std::vector<double> sd = {0.4};
  CovariancePack pack = gaussian_analytic_covariances(kExampleExx, sd, part);
  ReducedForm red = reduce(pack);
  FitConfig cfg;
  FitResult fit = mbi_fit(red, pack, cfg);
  CHECK(fit.trace.converged);
  CHECK(fit.trace.iterations == 1);
  // phi and the exact error move together.
  CHECK(error_exact(assemble_blocks(fit.blocks, part), red) ==
        doctest::Approx(error_from_phi(fit.trace.final_objective(), red))
            .epsilon(1e-10));
}

TEST_CASE("mbi_fit: huge epsilon stops after one accepted update") {
  CovariancePack pack = example1_pack();
  ReducedForm red = reduce(pack);
  FitConfig cfg;
  cfg.epsilon = 1e9;
  FitResult fit = mbi_fit(red, pack, cfg);
  CHECK(fit.trace.iterations == 1);
  CHECK(fit.trace.converged);
  CHECK(fit.trace.chosen_block.size() == 1);
}

TEST_CASE("mbi_fit: Example-1 run is monotone and bounded") {
  CovariancePack pack = example1_pack();
  ReducedForm red = reduce(pack);
  FitConfig cfg;
  cfg.max_iterations = 50;
  cfg.epsilon = 0.0;  // run the full budget
  FitResult fit = mbi_fit(red, pack, cfg);
  check_monotone(fit.trace);
  CHECK(fit.trace.objectives.size() == 51);

  // Boundedness: ||P|| <= (||H|| + sqrt(phi_0) + 1) / sigma_min+(E_zz^{1/2}).
  SymEig eig = eig_sym(pack.e_zz);
  double lmin = 0.0;
  for (double v : eig.values)
    if (v > 1e-12) lmin = v;  // smallest positive (values are descending)
  const double sigma_min = std::sqrt(lmin);
  const double bound =
      (red.h.frob() + std::sqrt(fit.trace.objectives.front()) + 1.0) / sigma_min;
  for (double norm : fit.trace.p_norms) CHECK(norm <= bound);
}

TEST_CASE("mbi_fit: stationarity at the fixed point") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    CovariancePack pack = random_analytic_pack(rng, 3, 2);
    ReducedForm red = reduce(pack);
    FitConfig cfg;
    // The descent tail is geometric with a ratio that can sit close to one,
    // so the budget is generous relative to the problem size.
    cfg.epsilon = 1e-12;
    cfg.max_iterations = 20000;
    FitResult fit = mbi_fit(red, pack, cfg);
    REQUIRE(fit.trace.converged);
    const double phi_star = fit.trace.final_objective();
    for (int j = 0; j < pack.part.p; ++j) {
      Mat qj = red.h;
      for (int i = 0; i < pack.part.p; ++i)
        if (i != j) qj -= fit.blocks[i] * red.g[i];
      RankSolve sol = rank_constrained_solve(qj, red.g[j], pack.part.r[j]);
      std::vector<Mat> alt = fit.blocks;
      alt[j] = sol.p;
      CHECK(std::abs(phi_objective(alt, red) - phi_star) <= 1e-8);
    }
  }
}

TEST_CASE("mbi_fit: zero-rank blocks stay zero and the fit still runs") {
  BlockPartition part = BlockPartition::make(3, {3, 3}, {0, 1}, Lifting::reduced);
  const std::vector<double> sd = {0.9, 0.65};
  CovariancePack pack = gaussian_analytic_covariances(kExampleExx, sd, part);
  ReducedForm red = reduce(pack);
  FitConfig cfg;
  FitResult fit = mbi_fit(red, pack, cfg);
  CHECK(fit.blocks[0].max_abs() == 0.0);
  CHECK(fit.trace.converged);
  check_monotone(fit.trace);
}

TEST_CASE("mbi_fit dominates a cyclic-update variant at the fixed points") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    CovariancePack pack = random_analytic_pack(rng, 2 + trial % 3, 2);
    ReducedForm red = reduce(pack);
    FitConfig cfg;
    cfg.epsilon = 1e-12;
    cfg.max_iterations = 20000;
    FitResult fit = mbi_fit(red, pack, cfg);
    const double cyclic = cyclic_fit_final_phi(red, pack);
    CHECK(fit.trace.final_objective() <= cyclic + 1e-8);
  }
}

TEST_CASE("extract_models: reassembly, orthonormality, degenerate ranks") {
  CovariancePack pack = example1_pack(1, 2);
  ReducedForm red = reduce(pack);
  FitConfig cfg;
  cfg.max_iterations = 50;
  FitResult fit = mbi_fit(red, pack, cfg);
  NetworkModel model =
      extract_models(fit.blocks, red, FactorVariant::orthonormal_t, fit.g_pinv);
  for (int j = 0; j < pack.part.p; ++j) {
    CHECK(model.composite_block(j).max_abs_diff(fit.blocks[j]) < 1e-10);
    const Mat t = model.fusion.blocks[j];
    CHECK((mul_at_b(t, t) - Mat::identity(pack.part.r[j])).max_abs() < 1e-10);
  }

  // Weighted variant reproduces the same composite map.
  NetworkModel weighted =
      extract_models(fit.blocks, red, FactorVariant::weighted_t, fit.g_pinv);
  for (int j = 0; j < pack.part.p; ++j) {
    CHECK(weighted.composite_block(j).max_abs_diff(fit.blocks[j]) < 1e-10);
  }

  // Rank-0 block: empty factors.
  BlockPartition part0 = BlockPartition::make(3, {3, 3}, {0, 1}, Lifting::reduced);
  const std::vector<double> sd = {0.9, 0.65};
  CovariancePack pack0 = gaussian_analytic_covariances(kExampleExx, sd, part0);
  ReducedForm red0 = reduce(pack0);
  FitResult fit0 = mbi_fit(red0, pack0, cfg);
  NetworkModel model0 =
      extract_models(fit0.blocks, red0, FactorVariant::orthonormal_t, fit0.g_pinv);
  CHECK(model0.fusion.blocks[0].cols() == 0);
  CHECK(model0.sensors[0].s1.rows() == 0);
}

TEST_CASE("apply_network: constant output and pass-through models") {
  // Zero polynomial parts except S0: the output is the constant T * S0.
  BlockPartition part = BlockPartition::make(2, {2}, {1}, Lifting::full);
  NetworkModel model;
  model.part = part;
  SecondDegreeSensor sensor;
  sensor.s0 = {{3.0}};
  sensor.s1 = Mat(1, 2);
  sensor.s2 = Mat(1, 2);
  model.sensors.push_back(sensor);
  model.fusion.blocks.push_back(Mat{{1.0}, {2.0}});
  std::vector<Mat> ys = {Mat{{0.5, -1.0}, {2.0, 0.25}}};
  Mat xhat = apply_network(model, ys);
  for (int c = 0; c < 2; ++c) {
    CHECK(xhat(0, c) == doctest::Approx(3.0));
    CHECK(xhat(1, c) == doctest::Approx(6.0));
  }

  // T S = [0 I 0]: the network reproduces the observation.
  BlockPartition part2 = BlockPartition::make(2, {2}, {2}, Lifting::full);
  NetworkModel pass;
  pass.part = part2;
  SecondDegreeSensor s2;
  s2.s0 = Mat(2, 1);
  s2.s1 = Mat::identity(2);
  s2.s2 = Mat(2, 2);
  pass.sensors.push_back(s2);
  pass.fusion.blocks.push_back(Mat::identity(2));
  Mat got = apply_network(pass, ys);
  CHECK(got.max_abs_diff(ys[0]) == 0.0);
}

TEST_CASE("apply_network matches the composite map on lifted samples") {
  CovariancePack pack = example1_pack(2, 1);
  ReducedForm red = reduce(pack);
  FitConfig cfg;
  FitResult fit = mbi_fit(red, pack, cfg);
  NetworkModel model =
      extract_models(fit.blocks, red, FactorVariant::orthonormal_t, fit.g_pinv);

  Rng rng(41);
  std::vector<Mat> ys = {rng.normal_mat(3, 7), rng.normal_mat(3, 7)};
  const Mat direct = apply_network(model, ys);

  std::vector<Mat> lifted;
  for (const Mat& y : ys) lifted.push_back(lift_sample(y, pack.part.lifting));
  const Mat p_full = assemble_blocks(fit.blocks, pack.part);
  const Mat via_p = p_full * vstack(lifted);
  CHECK(direct.max_abs_diff(via_p) < 1e-12);
}
