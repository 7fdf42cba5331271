#pragma once

#include <vector>

#include "sdwsn/mat.hpp"

// Dense decomposition kernel: one-sided Jacobi SVD and everything the upper
// layers derive from it (pseudo-inverse, PSD square root, truncation,
// orthogonal projections, the generalized rank-constrained solve).

namespace sdwsn {

struct SvdFactors {
  Mat U;                  // left singular vectors, one column per value
  std::vector<double> S;  // singular values, descending, nonnegative
  Mat V;                  // right singular vectors, one column per value
};

/// Full SVD: U is rows x rows, V is cols x cols, both orthogonal.
/// Column signs follow the convention that the first nonzero entry of each
/// left singular vector is nonnegative.
SvdFactors svd(const Mat& c);

/// Economy SVD: U is rows x k, V is cols x k with k = min(rows, cols).
/// Columns belonging to zero singular values are completed to an orthonormal
/// set, so U^T U = I_k always holds.
SvdFactors svd_econ(const Mat& c);

/// Numerical rank with the standard cutoff max(rows, cols) * eps * sigma_max.
int numerical_rank(const Mat& c);
int numerical_rank(const std::vector<double>& s, int rows, int cols);

/// Moore-Penrose pseudo-inverse. tol <= 0 selects the default cutoff
/// max(rows, cols) * eps; singular values below tol * sigma_max are zeroed.
Mat pinv(const Mat& c, double tol = 0.0);

/// Symmetric PSD square root. Eigenvalues in [-n*eps*|lambda|_max, 0] are
/// clamped to zero; anything more negative raises NotPsdError. Asymmetric
/// input raises InvalidInput.
Mat sqrt_psd(const Mat& m);

/// Square root with unconditional repair: every negative eigenvalue is
/// clamped to zero. For sample covariances that are PSD only up to rounding.
Mat sqrt_psd_clamped(const Mat& m);

/// Eigendecomposition for symmetric matrices with (near-)nonnegative spectra,
/// computed through the one-sided Jacobi SVD. Eigenvalues are returned in
/// decreasing |lambda| order with signs recovered from the U/V alignment.
struct SymEig {
  std::vector<double> values;
  Mat vectors;  // one column per eigenvalue
};
SymEig eig_sym(const Mat& m);

/// M^{1/2} and (M^{1/2})^+ from one shared eigendecomposition of a symmetric
/// (near-)PSD matrix. Negative eigenvalues are repaired to zero.
struct PsdSqrtPair {
  Mat sqrt;
  Mat pinv_sqrt;
};
PsdSqrtPair psd_sqrt_pair(const Mat& m);

struct TruncatedSvd {
  Mat value;              // the rank-r approximation itself
  Mat u;                  // rows x kept
  std::vector<double> s;  // kept singular values (zeros past the rank)
  Mat v;                  // cols x kept
  bool nonunique = false; // sigma_r ~ sigma_{r+1}: truncation not unique
  int rank = 0;           // numerical rank of the input
};

/// Best rank-r approximation [C]_r. For r >= rank(C) the input itself is
/// returned (value == C). Ties at the cut keep the first r columns of the
/// computed SVD and set the nonunique flag.
TruncatedSvd truncate_svd(const Mat& c, int r);
Mat truncate(const Mat& c, int r);

/// Orthogonal projections onto the range of C and of C^T.
Mat left_proj(const Mat& c);
Mat right_proj(const Mat& c);

struct RankSolve {
  Mat p;              // the minimizer
  TruncatedSvd core;  // factors of [Q R_G]_r, reused for model extraction
};

/// Minimize ||Q - P*G||_F over matrices P of rank at most r:
/// P = [Q R_G]_r G^+, the minimum-norm member of the solution family.
/// Q is m x k, G is n x k, P is m x n. Singular G is fine.
RankSolve rank_constrained_solve(const Mat& q, const Mat& g, int r);

/// Same solve with the G-derived operators precomputed (fit loops).
RankSolve rank_constrained_solve_pre(const Mat& q, const Mat& right_proj_g,
                                     const Mat& g_pinv, int r);

}  // namespace sdwsn
