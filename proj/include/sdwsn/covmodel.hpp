#pragma once

#include <span>
#include <vector>

#include "sdwsn/mat.hpp"

// Second-moment inputs for the fitting algorithms: block partition metadata,
// the lifted covariance pack (E_xx, E_xz, E_zz), and its reduced form
// (H, G_1..G_p) built from the PSD square root of E_zz.

namespace sdwsn {

/// Which coordinates the per-sensor lifting carries.
///   full:    [1, y, y^2]   (block size 2*n_j + 1)
///   reduced: [y, y^2]      (block size 2*n_j, constant term fixed to zero)
///   linear:  [y]           (block size n_j, the linear-network restriction)
enum class Lifting { full, reduced, linear };

struct BlockPartition {
  int p = 0;                 // number of sensors
  int m = 0;                 // signal dimension
  std::vector<int> n;        // observation dimension per sensor
  std::vector<int> r;        // compression rank per sensor
  std::vector<int> m_split;  // signal block sizes for initialization
  Lifting lifting = Lifting::full;

  static BlockPartition make(int m, std::vector<int> n, std::vector<int> r,
                             Lifting lifting = Lifting::full);
  /// Signal block sizes as even as possible, sum m.
  static std::vector<int> even_split(int m, int p);

  void validate() const;

  int lift_size(int j) const;
  int lift_offset(int j) const;
  int total_lift() const;
  int total_rank() const;

  // Coordinate layout inside the global lifted space.
  bool has_const() const { return lifting == Lifting::full; }
  bool has_square() const { return lifting != Lifting::linear; }
  int const_coord(int j) const;  // -1 when the lifting has no constant
  int y_offset(int j) const;
  int ysq_offset(int j) const;  // -1 in linear mode
  int x_offset(int j) const;    // start of signal block j per m_split
};

struct CovariancePack {
  Mat e_xx;  // m x m
  Mat e_xz;  // m x L
  Mat e_zz;  // L x L
  BlockPartition part;

  void validate() const;
  Mat e_xzj(int j) const;          // m x L_j
  Mat e_zizj(int i, int j) const;  // L_i x L_j
};

struct ReducedForm {
  Mat h;             // m x L,  H = E_xz (E_zz^{1/2})^+
  std::vector<Mat> g;     // G_j = sensor-j row block of E_zz^{1/2}
  Mat sqrt_ezz;      // L x L
  Mat pinv_sqrt_ezz; // L x L
  double trace_exx = 0.0;
  BlockPartition part;
};

/// Per-column lifting of raw observations: [1; y; y.*y] (or the reduced /
/// linear subsets).
Mat lift_sample(const Mat& y, Lifting lifting);

/// Raw second moments (1/s) A B^T from training samples. No mean subtraction;
/// with the full lifting the constant coordinate absorbs means.
CovariancePack sample_covariances(const Mat& x, std::span<const Mat> ylist,
                                  const BlockPartition& part);

/// Analytic moments for the Gaussian observation model y_j = x + sigma_j xi_j
/// with correlation-form E_xx (unit diagonal). Squared coordinates follow the
/// zero-mean Gaussian moment rules E_{a^2 b^2} = 2 rho^2, E_{a^2 a^2} = 2,
/// noise blocks 2 sigma_j^4 I; all odd cross moments vanish.
CovariancePack gaussian_analytic_covariances(const Mat& e_xx,
                                             std::span<const double> noise_sd,
                                             const BlockPartition& part);

/// sqrt_ezz = PSD-repaired square root of E_zz; H = E_xz * pinv(sqrt_ezz);
/// G_j = sensor row blocks of sqrt_ezz. The square root and its
/// pseudo-inverse come from one shared eigendecomposition.
ReducedForm reduce(const CovariancePack& pack);

/// Drop constant and squared coordinates: the pack the linear WSN fits on.
CovariancePack restrict_linear(const CovariancePack& pack);

/// Place an m x L_j block into the m x L layout (zero elsewhere).
Mat embed_block_cols(const Mat& block, int j, const BlockPartition& part);

}  // namespace sdwsn
