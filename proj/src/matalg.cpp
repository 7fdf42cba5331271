#include "sdwsn/matalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sdwsn/kernels.hpp"

namespace sdwsn {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 100;
constexpr double kJacobiTol = 1e-14;
// Relative gap under which a truncation cut is reported as non-unique.
constexpr double kTieTol = 1e-10;

// One-sided Jacobi on the columns of C (given row-wise in `work`, one row per
// column of C, each of length `len`). Rotations are accumulated into vt
// (k x k, row i tracks right singular vector i).
void jacobi_orthogonalize(std::vector<double*>& work, int k, std::size_t len,
                          Mat& vt) {
  std::vector<double> norms(k);
  // Columns whose norm falls below the numerical-rank cutoff are deflated:
  // they correspond to singular values every consumer treats as zero, and
  // rotating them against roundoff noise never settles.
  const double dim = static_cast<double>(std::max<std::size_t>(len, k));
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double max_norm = 0.0;
    for (int i = 0; i < k; ++i) {
      norms[i] = kernels::nrm2sq(len, work[i]);
      max_norm = std::max(max_norm, norms[i]);
    }
    const double deflate = max_norm * (dim * kEps) * (dim * kEps);
    bool rotated = false;
    for (int p = 0; p < k; ++p) {
      for (int q = p + 1; q < k; ++q) {
        const double app = norms[p];
        const double aqq = norms[q];
        if (app <= deflate || aqq <= deflate) continue;
        const double apq = kernels::dot(len, work[p], work[q]);
        if (apq * apq <= kJacobiTol * kJacobiTol * app * aqq) continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        kernels::rot(len, work[p], work[q], c, s);
        kernels::rot(static_cast<std::size_t>(vt.cols()), vt.row_ptr(p),
                     vt.row_ptr(q), c, s);
        norms[p] = c * c * app - 2.0 * c * s * apq + s * s * aqq;
        norms[q] = s * s * app + 2.0 * c * s * apq + c * c * aqq;
      }
    }
    if (!rotated) return;
  }
  throw NumericalError("svd: Jacobi sweeps did not converge");
}

// Fill columns [filled, U.cols()) of U with vectors orthonormal to the
// existing ones. Coordinate directions are taken in order, orthogonalized
// twice and accepted above a residual threshold; since the residual mass
// over the remaining coordinates always sums to the missing dimension, a
// pass over all candidates is guaranteed to make progress. Deterministic.
void complete_orthonormal(Mat& u, int filled) {
  const int m = u.rows();
  const int want = u.cols();
  if (filled >= want) return;
  std::vector<char> used(m, 0);
  std::vector<double> resid(m);
  int col = filled;
  while (col < want) {
    const int col_at_pass_start = col;
    for (int cand = 0; cand < m && col < want; ++cand) {
      if (used[cand]) continue;
      std::fill(resid.begin(), resid.end(), 0.0);
      resid[cand] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < col; ++j) {
          double proj = 0.0;
          for (int i = 0; i < m; ++i) proj += u(i, j) * resid[i];
          for (int i = 0; i < m; ++i) resid[i] -= proj * u(i, j);
        }
      }
      const double nrm = kernels::nrm2sq(resid.size(), resid.data());
      if (nrm < 1.0 / (16.0 * m)) continue;  // mostly inside the span already
      used[cand] = 1;
      const double inv = 1.0 / std::sqrt(nrm);
      for (int i = 0; i < m; ++i) u(i, col) = resid[i] * inv;
      ++col;
    }
    require(col > col_at_pass_start, "svd: orthonormal completion stalled");
  }
}

void apply_sign_convention(Mat& u, Mat* v, int col, int vcol) {
  bool flip = false;
  for (int i = 0; i < u.rows(); ++i) {
    const double e = u(i, col);
    if (e != 0.0) {
      flip = e < 0.0;
      break;
    }
  }
  if (!flip) return;
  for (int i = 0; i < u.rows(); ++i) u(i, col) = -u(i, col);
  if (v) {
    for (int i = 0; i < v->rows(); ++i) (*v)(i, vcol) = -(*v)(i, vcol);
  }
}

// Economy SVD of C with m >= n assumed handled by the caller via transposition.
SvdFactors svd_econ_tall(const Mat& c) {
  const int m = c.rows();
  const int n = c.cols();
  // Column-contiguous working copy: row i of `buf` is column i of C.
  std::vector<double> buf(static_cast<std::size_t>(m) * n);
  std::vector<double*> work(n);
  for (int j = 0; j < n; ++j) {
    work[j] = buf.data() + static_cast<std::size_t>(j) * m;
    for (int i = 0; i < m; ++i) work[j][i] = c(i, j);
  }
  Mat vt = Mat::identity(n);
  jacobi_orthogonalize(work, n, static_cast<std::size_t>(m), vt);

  std::vector<double> sigma(n);
  double smax = 0.0;
  for (int j = 0; j < n; ++j) {
    sigma[j] = std::sqrt(kernels::nrm2sq(static_cast<std::size_t>(m), work[j]));
    smax = std::max(smax, sigma[j]);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sigma[a] > sigma[b]; });

  // Columns deflated during the sweeps were never orthogonalized; keep them
  // out of U (completion fills the gap). The margin sits above the deflation
  // threshold used inside the sweeps.
  const double zero_cut =
      smax * 2.0 * kEps * static_cast<double>(std::max(m, n));

  SvdFactors f;
  f.U = Mat(m, n);
  f.V = Mat(n, n);
  f.S.resize(n);
  int filled = 0;
  for (int jj = 0; jj < n; ++jj) {
    const int src = order[jj];
    f.S[jj] = sigma[src];
    for (int i = 0; i < n; ++i) f.V(i, jj) = vt(src, i);
    if (sigma[src] > zero_cut) {
      const double inv = 1.0 / sigma[src];
      for (int i = 0; i < m; ++i) f.U(i, jj) = work[src][i] * inv;
      filled = jj + 1;
    }
  }
  complete_orthonormal(f.U, filled);
  for (int j = 0; j < n; ++j) apply_sign_convention(f.U, &f.V, j, j);
  return f;
}

double rank_cutoff(const std::vector<double>& s, int rows, int cols) {
  const double smax = s.empty() ? 0.0 : s[0];
  return std::max(rows, cols) * kEps * smax;
}

Mat assemble_from_factors(const Mat& u, const std::vector<double>& s,
                          const Mat& v, int terms) {
  Mat out(u.rows(), v.rows());
  for (int t = 0; t < terms; ++t) {
    if (s[t] == 0.0) continue;
    for (int i = 0; i < u.rows(); ++i) {
      const double w = s[t] * u(i, t);
      for (int j = 0; j < v.rows(); ++j) out(i, j) += w * v(j, t);
    }
  }
  return out;
}

}  // namespace

SvdFactors svd_econ(const Mat& c) {
  require(!c.empty(), "svd: empty matrix");
  require(c.is_finite(), "svd: input has non-finite entries");
  if (c.rows() >= c.cols()) return svd_econ_tall(c);
  SvdFactors t = svd_econ_tall(c.transposed());
  SvdFactors f;
  f.U = std::move(t.V);
  f.S = std::move(t.S);
  f.V = std::move(t.U);
  // Keep the sign convention anchored to the left factor.
  for (int j = 0; j < f.U.cols(); ++j) apply_sign_convention(f.U, &f.V, j, j);
  return f;
}

SvdFactors svd(const Mat& c) {
  SvdFactors f = svd_econ(c);
  const int m = c.rows();
  const int n = c.cols();
  const int k = static_cast<int>(f.S.size());
  if (f.U.cols() < m) {
    Mat u(m, m);
    u.set_block(0, 0, f.U);
    complete_orthonormal(u, k);
    for (int j = k; j < m; ++j) apply_sign_convention(u, nullptr, j, 0);
    f.U = std::move(u);
  }
  if (f.V.cols() < n) {
    Mat v(n, n);
    v.set_block(0, 0, f.V);
    complete_orthonormal(v, k);
    for (int j = k; j < n; ++j) apply_sign_convention(v, nullptr, j, 0);
    f.V = std::move(v);
  }
  return f;
}

int numerical_rank(const std::vector<double>& s, int rows, int cols) {
  const double cut = rank_cutoff(s, rows, cols);
  int r = 0;
  for (double v : s)
    if (v > cut) ++r;
  return r;
}

int numerical_rank(const Mat& c) {
  SvdFactors f = svd_econ(c);
  return numerical_rank(f.S, c.rows(), c.cols());
}

Mat pinv(const Mat& c, double tol) {
  SvdFactors f = svd_econ(c);
  const double smax = f.S.empty() ? 0.0 : f.S[0];
  const double cut =
      (tol > 0.0 ? tol : std::max(c.rows(), c.cols()) * kEps) * smax;
  // C^+ = V diag(1/sigma) U^T over sigma above the cutoff.
  Mat out(c.cols(), c.rows());
  for (std::size_t t = 0; t < f.S.size(); ++t) {
    if (f.S[t] <= cut) continue;
    const double inv = 1.0 / f.S[t];
    for (int i = 0; i < c.cols(); ++i) {
      const double w = inv * f.V(i, static_cast<int>(t));
      for (int j = 0; j < c.rows(); ++j) out(i, j) += w * f.U(j, static_cast<int>(t));
    }
  }
  return out;
}

SymEig eig_sym(const Mat& m) {
  require(m.rows() == m.cols(), "eig_sym: square matrix required");
  Mat sym = m;
  sym.symmetrize();
  SvdFactors f = svd_econ(sym);
  SymEig e;
  e.values.resize(f.S.size());
  const int n = m.rows();
  for (int t = 0; t < n; ++t) {
    double align = 0.0;
    for (int i = 0; i < n; ++i) align += f.U(i, t) * f.V(i, t);
    e.values[t] = align >= 0.0 ? f.S[t] : -f.S[t];
    // |align| well inside (0,1) can only come from a degenerate +/- pair,
    // which the callers below treat through the eigenvalue signs anyway.
  }
  e.vectors = std::move(f.V);
  return e;
}

namespace {

Mat psd_sqrt_impl(const Mat& m, bool strict) {
  require(m.rows() == m.cols(), "sqrt_psd: square matrix required");
  require(m.is_finite(), "sqrt_psd: input has non-finite entries");
  const double scale = std::max(1.0, m.max_abs());
  if (m.max_abs_diff(m.transposed()) > 1e-9 * scale)
    throw InvalidInput("sqrt_psd: input is not symmetric");
  SymEig e = eig_sym(m);
  const int n = m.rows();
  const double lmax = e.values.empty() ? 0.0 : std::abs(e.values[0]);
  const double clamp = n * kEps * lmax;
  Mat out(n, n);
  for (int t = 0; t < n; ++t) {
    double lambda = e.values[t];
    if (lambda < -clamp) {
      if (strict)
        throw NotPsdError("sqrt_psd: eigenvalue below the PSD clamp threshold");
      lambda = 0.0;
    }
    if (lambda <= clamp) continue;  // clamped to zero, contributes nothing
    const double root = std::sqrt(lambda);
    for (int i = 0; i < n; ++i) {
      const double w = root * e.vectors(i, t);
      for (int j = 0; j <= i; ++j) {
        out(i, j) += w * e.vectors(j, t);
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out(i, j) = out(j, i);
  return out;
}

}  // namespace

Mat sqrt_psd(const Mat& m) { return psd_sqrt_impl(m, true); }

Mat sqrt_psd_clamped(const Mat& m) { return psd_sqrt_impl(m, false); }

PsdSqrtPair psd_sqrt_pair(const Mat& m) {
  require(m.rows() == m.cols(), "psd_sqrt_pair: square matrix required");
  Mat sym = m;
  sym.symmetrize();
  SymEig eig = eig_sym(sym);
  const int n = m.rows();
  const double lmax = eig.values.empty() ? 0.0 : std::abs(eig.values[0]);
  const double clamp = n * kEps * lmax;
  PsdSqrtPair out{Mat(n, n), Mat(n, n)};
  for (int t = 0; t < n; ++t) {
    const double lambda = eig.values[t];
    if (lambda <= clamp) continue;
    const double root = std::sqrt(lambda);
    const double inv_root = 1.0 / root;
    for (int i = 0; i < n; ++i) {
      const double vi = eig.vectors(i, t);
      if (vi == 0.0) continue;
      for (int j = 0; j <= i; ++j) {
        const double w = vi * eig.vectors(j, t);
        out.sqrt(i, j) += root * w;
        out.pinv_sqrt(i, j) += inv_root * w;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out.sqrt(i, j) = out.sqrt(j, i);
      out.pinv_sqrt(i, j) = out.pinv_sqrt(j, i);
    }
  return out;
}

TruncatedSvd truncate_svd(const Mat& c, int r) {
  require(r >= 0, "truncate: negative rank");
  SvdFactors f = svd_econ(c);
  const int k = static_cast<int>(f.S.size());
  TruncatedSvd out;
  out.rank = numerical_rank(f.S, c.rows(), c.cols());
  const int kept = std::min(r, k);
  out.u = f.U.block(0, 0, c.rows(), kept);
  out.v = f.V.block(0, 0, c.cols(), kept);
  out.s.assign(f.S.begin(), f.S.begin() + kept);
  for (int t = out.rank; t < kept; ++t) out.s[t] = 0.0;
  if (r >= 1 && r < out.rank) {
    const double gap = f.S[r - 1] - f.S[r];
    out.nonunique = gap <= kTieTol * f.S[0];
  }
  if (r >= out.rank) {
    out.value = c;  // [C]_r = C once r reaches the rank
  } else {
    out.value = assemble_from_factors(out.u, out.s, out.v, kept);
  }
  return out;
}

Mat truncate(const Mat& c, int r) { return truncate_svd(c, r).value; }

Mat left_proj(const Mat& c) {
  SvdFactors f = svd_econ(c);
  const int rank = numerical_rank(f.S, c.rows(), c.cols());
  Mat out(c.rows(), c.rows());
  for (int t = 0; t < rank; ++t)
    for (int i = 0; i < c.rows(); ++i) {
      const double w = f.U(i, t);
      for (int j = 0; j < c.rows(); ++j) out(i, j) += w * f.U(j, t);
    }
  return out;
}

Mat right_proj(const Mat& c) {
  SvdFactors f = svd_econ(c);
  const int rank = numerical_rank(f.S, c.rows(), c.cols());
  Mat out(c.cols(), c.cols());
  for (int t = 0; t < rank; ++t)
    for (int i = 0; i < c.cols(); ++i) {
      const double w = f.V(i, t);
      for (int j = 0; j < c.cols(); ++j) out(i, j) += w * f.V(j, t);
    }
  return out;
}

RankSolve rank_constrained_solve_pre(const Mat& q, const Mat& right_proj_g,
                                     const Mat& g_pinv, int r) {
  RankSolve sol;
  sol.core = truncate_svd(q * right_proj_g, r);
  sol.p = sol.core.value * g_pinv;
  return sol;
}

RankSolve rank_constrained_solve(const Mat& q, const Mat& g, int r) {
  require(q.cols() == g.cols(),
          "rank_constrained_solve: Q and G must share the column dimension");
  return rank_constrained_solve_pre(q, right_proj(g), pinv(g), r);
}

}  // namespace sdwsn
