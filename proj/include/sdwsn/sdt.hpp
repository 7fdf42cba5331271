#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sdwsn/covmodel.hpp"
#include "sdwsn/matalg.hpp"

// Single-block second degree transform, sensor/fusion factorization and the
// closed-form error evaluations for ideal channels.

namespace sdwsn {

/// How the truncated SVD of a fitted block is split between the fusion block
/// T_j and the sensor matrix S_j. Both give the same product T_j S_j.
enum class FactorVariant { orthonormal_t, weighted_t };

/// Per-sensor polynomial map u = S0 + S1 y + S2 y.^2 stored by coefficient
/// blocks. S0 stays zero under the reduced lifting, S0 and S2 under the
/// linear one.
struct SecondDegreeSensor {
  Mat s0;  // r x 1
  Mat s1;  // r x n
  Mat s2;  // r x n

  /// Column-block concatenation in the lifted layout.
  Mat full(Lifting lifting) const;
  static SecondDegreeSensor from_full(const Mat& s, int n, Lifting lifting);
};

struct FusionCenter {
  std::vector<Mat> blocks;  // T_j, each m x r_j
  Mat stacked() const;      // m x (r_1 + ... + r_p)
};

struct NetworkModel {
  std::vector<SecondDegreeSensor> sensors;
  FusionCenter fusion;
  BlockPartition part;
  FactorVariant variant = FactorVariant::orthonormal_t;

  /// Composite block P_j = T_j S_j (rank <= r_j).
  Mat composite_block(int j) const;
};

/// Rank-constrained single-sensor solve on raw moments:
/// P = [E_xz (E_zz^+)^{1/2}]_r (E_zz^+)^{1/2}. Singular E_zz is fine.
Mat sdt_single(const Mat& e_xjzj, const Mat& e_zjzj, int r);

struct SensorFactor {
  Mat t;  // m x r
  Mat s;  // r x L_j
};

/// Split a fitted block into (T_j, S_j) from the truncated SVD of its core
/// and the right factor (G_j^+ for fitted blocks).
SensorFactor factor_model(const TruncatedSvd& core, const Mat& g_j,
                          FactorVariant variant);
SensorFactor factor_model_pre(const TruncatedSvd& core, const Mat& right_factor,
                              FactorVariant variant);

/// Exact mean-square error of the composite map P (m x L):
/// tr(E_xx) - ||H||^2 + ||H - P E_zz^{1/2}||^2, clamped at zero.
double error_exact(const Mat& p, const ReducedForm& red);
double error_exact(const Mat& p, const CovariancePack& pack);

/// phi(P) = ||H - sum_j P_j G_j||^2, the fit objective.
double phi_objective(std::span<const Mat> p_blocks, const ReducedForm& red);

/// error = tr(E_xx) - ||H||^2 + phi.
double error_from_phi(double phi, const ReducedForm& red);

/// Concatenate per-sensor blocks into the full m x L map.
Mat assemble_blocks(std::span<const Mat> p_blocks, const BlockPartition& part);

/// Closed-form error of the tuple with block j replaced by its optimum,
/// assembled purely from second moments: tr(E_xx) - sum_{i<=r_j} delta_i
/// - sum_i mu_{j,i} - beta_j. Requires a lifting with squared coordinates.
double error_block_formula(int j, std::span<const Mat> p_all,
                           const CovariancePack& pack);

/// The delta/mu/beta ingredients of the block error formula, exposed for the
/// model comparison predicate.
struct BlockErrorTerms {
  std::vector<double> delta;  // eigenvalues of the lifted-block gain, descending
  double sum_delta_top_r = 0.0;
  double sum_mu = 0.0;  // tr(C_j H_j^+ C_j^T)
  double beta = 0.0;    // tr(2 E_{w_j x} - E_{w_j w_j})
};
BlockErrorTerms block_error_terms(int j, std::span<const Mat> p_all,
                                  const CovariancePack& pack);

}  // namespace sdwsn
