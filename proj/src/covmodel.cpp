#include "sdwsn/covmodel.hpp"

#include <cmath>
#include <limits>

#include "sdwsn/matalg.hpp"

namespace sdwsn {

BlockPartition BlockPartition::make(int m, std::vector<int> n,
                                    std::vector<int> r, Lifting lifting) {
  BlockPartition part;
  part.p = static_cast<int>(n.size());
  part.m = m;
  part.n = std::move(n);
  part.r = std::move(r);
  part.m_split = even_split(m, part.p);
  part.lifting = lifting;
  part.validate();
  return part;
}

std::vector<int> BlockPartition::even_split(int m, int p) {
  std::vector<int> split(p, m / p);
  for (int j = 0; j < m % p; ++j) ++split[j];
  return split;
}

void BlockPartition::validate() const {
  require(p >= 1, "partition: at least one sensor required");
  require(m >= 1, "partition: positive signal dimension required");
  require(static_cast<int>(n.size()) == p && static_cast<int>(r.size()) == p &&
              static_cast<int>(m_split.size()) == p,
          "partition: per-sensor vectors must have length p");
  int msum = 0;
  for (int j = 0; j < p; ++j) {
    require(n[j] >= 1, "partition: observation dimensions must be positive");
    require(r[j] >= 0 && r[j] <= std::min(m, n[j]),
            "partition: ranks must satisfy r_j <= min(m, n_j)");
    require(m_split[j] >= 0, "partition: negative signal block");
    msum += m_split[j];
  }
  require(msum == m, "partition: signal blocks must sum to m");
}

int BlockPartition::lift_size(int j) const {
  switch (lifting) {
    case Lifting::full:
      return 2 * n[j] + 1;
    case Lifting::reduced:
      return 2 * n[j];
    case Lifting::linear:
      return n[j];
  }
  return 0;
}

int BlockPartition::lift_offset(int j) const {
  int off = 0;
  for (int i = 0; i < j; ++i) off += lift_size(i);
  return off;
}

int BlockPartition::total_lift() const { return lift_offset(p); }

int BlockPartition::total_rank() const {
  int total = 0;
  for (int rj : r) total += rj;
  return total;
}

int BlockPartition::const_coord(int j) const {
  return has_const() ? lift_offset(j) : -1;
}

int BlockPartition::y_offset(int j) const {
  return lift_offset(j) + (has_const() ? 1 : 0);
}

int BlockPartition::ysq_offset(int j) const {
  return has_square() ? y_offset(j) + n[j] : -1;
}

int BlockPartition::x_offset(int j) const {
  int off = 0;
  for (int i = 0; i < j; ++i) off += m_split[i];
  return off;
}

void CovariancePack::validate() const {
  part.validate();
  const int L = part.total_lift();
  require(e_xx.rows() == part.m && e_xx.cols() == part.m,
          "pack: E_xx must be m x m");
  require(e_xz.rows() == part.m && e_xz.cols() == L, "pack: E_xz must be m x L");
  require(e_zz.rows() == L && e_zz.cols() == L, "pack: E_zz must be L x L");
  require(e_xx.is_finite() && e_xz.is_finite() && e_zz.is_finite(),
          "pack: moments must be finite");
}

Mat CovariancePack::e_xzj(int j) const {
  return e_xz.block(0, part.lift_offset(j), part.m, part.lift_size(j));
}

Mat CovariancePack::e_zizj(int i, int j) const {
  return e_zz.block(part.lift_offset(i), part.lift_offset(j), part.lift_size(i),
                    part.lift_size(j));
}

Mat lift_sample(const Mat& y, Lifting lifting) {
  const int n = y.rows();
  const int s = y.cols();
  if (lifting == Lifting::linear) return y;
  const int extra = lifting == Lifting::full ? 1 : 0;
  Mat z(2 * n + extra, s);
  if (extra) {
    for (int c = 0; c < s; ++c) z(0, c) = 1.0;
  }
  z.set_block(extra, 0, y);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < s; ++c) {
      const double v = y(i, c);
      z(extra + n + i, c) = v * v;
    }
  }
  return z;
}

CovariancePack sample_covariances(const Mat& x, std::span<const Mat> ylist,
                                  const BlockPartition& part) {
  require(static_cast<int>(ylist.size()) == part.p,
          "sample_covariances: one observation matrix per sensor required");
  require(x.rows() == part.m, "sample_covariances: X row count must equal m");
  const int s = x.cols();
  require(s >= 1, "sample_covariances: at least one sample required");
  std::vector<Mat> lifted;
  lifted.reserve(part.p);
  for (int j = 0; j < part.p; ++j) {
    require(ylist[j].rows() == part.n[j] && ylist[j].cols() == s,
            "sample_covariances: observation dimensions must match the partition");
    lifted.push_back(lift_sample(ylist[j], part.lifting));
  }
  const Mat z = vstack(lifted);
  const double inv_s = 1.0 / s;
  CovariancePack pack;
  pack.part = part;
  pack.e_xx = mul_a_bt(x, x).scaled(inv_s);
  pack.e_xz = mul_a_bt(x, z).scaled(inv_s);
  pack.e_zz = mul_a_bt(z, z).scaled(inv_s);
  pack.e_xx.symmetrize();
  pack.e_zz.symmetrize();
  pack.validate();
  return pack;
}

CovariancePack gaussian_analytic_covariances(const Mat& e_xx,
                                             std::span<const double> noise_sd,
                                             const BlockPartition& part) {
  require(e_xx.rows() == e_xx.cols(), "analytic moments: E_xx must be square");
  require(e_xx.rows() == part.m, "analytic moments: E_xx must be m x m");
  require(e_xx.max_abs_diff(e_xx.transposed()) <=
              1e-9 * std::max(1.0, e_xx.max_abs()),
          "analytic moments: E_xx must be symmetric");
  for (int i = 0; i < part.m; ++i) {
    require(std::abs(e_xx(i, i) - 1.0) <= 1e-9,
            "analytic moments: correlation-form E_xx (unit diagonal) required");
  }
  require(static_cast<int>(noise_sd.size()) == part.p,
          "analytic moments: one noise level per sensor required");
  for (int j = 0; j < part.p; ++j) {
    require(part.n[j] == part.m,
            "analytic moments: observation model y_j = x + noise needs n_j = m");
  }

  const int m = part.m;
  // Signal fourth moments: E_{x^2 x^2}[a, b] = 2 E_xx[a, b]^2; the unit
  // diagonal makes this cover E_{a^2 a^2} = 2 sigma^4 as well.
  Mat exx2(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) exx2(a, b) = 2.0 * e_xx(a, b) * e_xx(a, b);

  CovariancePack pack;
  pack.part = part;
  pack.e_xx = e_xx;
  pack.e_xz = Mat(m, part.total_lift());
  pack.e_zz = Mat(part.total_lift(), part.total_lift());

  for (int j = 0; j < part.p; ++j) {
    // Odd cross moments vanish, so E_xz carries only the linear blocks.
    pack.e_xz.set_block(0, part.y_offset(j), e_xx);
    if (int cj = part.const_coord(j); cj >= 0) {
      for (int i = 0; i < part.p; ++i) {
        pack.e_zz(part.const_coord(i), cj) = 1.0;
      }
    }
    for (int i = 0; i < part.p; ++i) {
      Mat lin = e_xx;
      Mat quad = exx2;
      if (i == j) {
        const double s2 = noise_sd[j] * noise_sd[j];
        for (int a = 0; a < m; ++a) {
          lin(a, a) += s2;
          quad(a, a) += 2.0 * s2 * s2;
        }
      }
      pack.e_zz.set_block(part.y_offset(i), part.y_offset(j), lin);
      if (part.has_square()) {
        pack.e_zz.set_block(part.ysq_offset(i), part.ysq_offset(j), quad);
      }
    }
  }
  pack.validate();
  return pack;
}

ReducedForm reduce(const CovariancePack& pack) {
  pack.validate();
  const int L = pack.part.total_lift();
  // One eigendecomposition yields both the square root and its pseudo-inverse,
  // keeping the two on an identical eigenbasis. Negative eigenvalues from
  // sampling noise are repaired to zero.
  PsdSqrtPair pair = psd_sqrt_pair(pack.e_zz);

  ReducedForm red;
  red.part = pack.part;
  red.sqrt_ezz = std::move(pair.sqrt);
  red.pinv_sqrt_ezz = std::move(pair.pinv_sqrt);
  red.h = pack.e_xz * red.pinv_sqrt_ezz;
  red.trace_exx = pack.e_xx.trace();
  red.g.reserve(pack.part.p);
  for (int j = 0; j < pack.part.p; ++j) {
    red.g.push_back(red.sqrt_ezz.block(pack.part.lift_offset(j), 0,
                                       pack.part.lift_size(j), L));
  }
  return red;
}

CovariancePack restrict_linear(const CovariancePack& pack) {
  BlockPartition lin = pack.part;
  lin.lifting = Lifting::linear;
  CovariancePack out;
  out.part = lin;
  out.e_xx = pack.e_xx;
  out.e_xz = Mat(pack.part.m, lin.total_lift());
  out.e_zz = Mat(lin.total_lift(), lin.total_lift());
  for (int j = 0; j < pack.part.p; ++j) {
    out.e_xz.set_block(0, lin.lift_offset(j),
                       pack.e_xz.block(0, pack.part.y_offset(j), pack.part.m,
                                       pack.part.n[j]));
    for (int i = 0; i < pack.part.p; ++i) {
      out.e_zz.set_block(lin.lift_offset(i), lin.lift_offset(j),
                         pack.e_zz.block(pack.part.y_offset(i),
                                         pack.part.y_offset(j), pack.part.n[i],
                                         pack.part.n[j]));
    }
  }
  out.validate();
  return out;
}

Mat embed_block_cols(const Mat& block, int j, const BlockPartition& part) {
  require(block.cols() == part.lift_size(j),
          "embed_block_cols: block width must match the lifted size");
  Mat out(block.rows(), part.total_lift());
  out.set_block(0, part.lift_offset(j), block);
  return out;
}

}  // namespace sdwsn
