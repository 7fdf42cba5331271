#include "sdwsn/sdt.hpp"

#include <algorithm>
#include <cmath>

#include "sdwsn/kernels.hpp"

namespace sdwsn {
namespace {

// tr(A * B^T) for same-shaped A, B.
double trace_abt(const Mat& a, const Mat& b) {
  return kernels::dot(a.data().size(), a.data().data(), b.data().data());
}

}  // namespace

Mat SecondDegreeSensor::full(Lifting lifting) const {
  switch (lifting) {
    case Lifting::full: {
      const Mat parts[] = {s0, s1, s2};
      return hstack(parts);
    }
    case Lifting::reduced: {
      const Mat parts[] = {s1, s2};
      return hstack(parts);
    }
    case Lifting::linear:
      return s1;
  }
  return Mat();
}

SecondDegreeSensor SecondDegreeSensor::from_full(const Mat& s, int n,
                                                 Lifting lifting) {
  SecondDegreeSensor out;
  const int r = s.rows();
  switch (lifting) {
    case Lifting::full:
      require(s.cols() == 2 * n + 1, "sensor split: width must be 2n+1");
      out.s0 = s.block(0, 0, r, 1);
      out.s1 = s.block(0, 1, r, n);
      out.s2 = s.block(0, 1 + n, r, n);
      break;
    case Lifting::reduced:
      require(s.cols() == 2 * n, "sensor split: width must be 2n");
      out.s0 = Mat(r, 1);
      out.s1 = s.block(0, 0, r, n);
      out.s2 = s.block(0, n, r, n);
      break;
    case Lifting::linear:
      require(s.cols() == n, "sensor split: width must be n");
      out.s0 = Mat(r, 1);
      out.s1 = s;
      out.s2 = Mat(r, n);
      break;
  }
  return out;
}

Mat FusionCenter::stacked() const { return hstack(blocks); }

Mat NetworkModel::composite_block(int j) const {
  return fusion.blocks[j] * sensors[j].full(part.lifting);
}

Mat sdt_single(const Mat& e_xjzj, const Mat& e_zjzj, int r) {
  require(e_xjzj.cols() == e_zjzj.rows() && e_zjzj.rows() == e_zjzj.cols(),
          "sdt_single: moment dimensions are inconsistent");
  const Mat root_pinv = psd_sqrt_pair(e_zjzj).pinv_sqrt;
  const TruncatedSvd core = truncate_svd(e_xjzj * root_pinv, r);
  return core.value * root_pinv;
}

SensorFactor factor_model_pre(const TruncatedSvd& core, const Mat& right_factor,
                              FactorVariant variant) {
  const int kept = static_cast<int>(core.s.size());
  SensorFactor out;
  if (kept == 0) {
    out.t = Mat(core.u.rows(), 0);
    out.s = Mat(0, right_factor.cols());
    return out;
  }
  Mat vt_rf = mul_at_b(core.v, right_factor);  // kept x L_j
  if (variant == FactorVariant::orthonormal_t) {
    out.t = core.u;
    for (int i = 0; i < kept; ++i)
      kernels::scal(static_cast<std::size_t>(vt_rf.cols()), core.s[i],
                    vt_rf.row_ptr(i));
    out.s = std::move(vt_rf);
  } else {
    out.t = core.u;
    for (int j = 0; j < kept; ++j)
      for (int i = 0; i < out.t.rows(); ++i) out.t(i, j) *= core.s[j];
    out.s = std::move(vt_rf);
  }
  return out;
}

SensorFactor factor_model(const TruncatedSvd& core, const Mat& g_j,
                          FactorVariant variant) {
  return factor_model_pre(core, pinv(g_j), variant);
}

double error_exact(const Mat& p, const ReducedForm& red) {
  const double v = red.trace_exx - red.h.frob_sq() + (red.h - p * red.sqrt_ezz).frob_sq();
  return std::max(v, 0.0);
}

double error_exact(const Mat& p, const CovariancePack& pack) {
  return error_exact(p, reduce(pack));
}

Mat assemble_blocks(std::span<const Mat> p_blocks, const BlockPartition& part) {
  require(static_cast<int>(p_blocks.size()) == part.p,
          "assemble_blocks: one block per sensor required");
  Mat out(part.m, part.total_lift());
  for (int j = 0; j < part.p; ++j) {
    out.set_block(0, part.lift_offset(j), p_blocks[j]);
  }
  return out;
}

double phi_objective(std::span<const Mat> p_blocks, const ReducedForm& red) {
  Mat resid = red.h;
  for (int j = 0; j < red.part.p; ++j) {
    resid -= p_blocks[j] * red.g[j];
  }
  return resid.frob_sq();
}

double error_from_phi(double phi, const ReducedForm& red) {
  return std::max(red.trace_exx - red.h.frob_sq() + phi, 0.0);
}

BlockErrorTerms block_error_terms(int j, std::span<const Mat> p_all,
                                  const CovariancePack& pack) {
  const BlockPartition& part = pack.part;
  require(j >= 0 && j < part.p, "block_error_terms: block index out of range");

  // Residual cross moments E_{xbar z_j} with xbar = x - sum_{i != j} P_i z_i.
  Mat e_xbar_zj = pack.e_xzj(j);
  for (int i = 0; i < part.p; ++i) {
    if (i == j) continue;
    e_xbar_zj -= p_all[i] * pack.e_zizj(i, j);
  }

  BlockErrorTerms out;

  // delta: eigenvalues of E_{xbar z_j} E_{z_j z_j}^+ E_{z_j xbar}, computed
  // through the PSD form W W^T with W = E_{xbar z_j} (E_{z_j z_j}^+)^{1/2}.
  const Mat e_zjzj = pack.e_zizj(j, j);
  const Mat w = e_xbar_zj * psd_sqrt_pair(e_zjzj).pinv_sqrt;
  SvdFactors wf = svd_econ(w);
  out.delta.resize(wf.S.size());
  for (std::size_t t = 0; t < wf.S.size(); ++t) out.delta[t] = wf.S[t] * wf.S[t];
  const int top = std::min<int>(part.r[j], static_cast<int>(out.delta.size()));
  for (int t = 0; t < top; ++t) out.sum_delta_top_r += out.delta[t];

  // mu: tr(C_j H_j^+ C_j^T) with C_j, H_j the quadratic innovations after the
  // linear part of block j has been removed. Zero when the lifting carries no
  // squared coordinates (the linear-network formula).
  if (part.has_square()) {
    const int n = part.n[j];
    const int yc = part.y_offset(j) - part.lift_offset(j);
    const int qc = part.ysq_offset(j) - part.lift_offset(j);
    const Mat e_xbar_y = e_xbar_zj.block(0, yc, part.m, n);
    const Mat e_xbar_y2 = e_xbar_zj.block(0, qc, part.m, n);
    const Mat e_yy = e_zjzj.block(yc, yc, n, n);
    const Mat e_yy2 = e_zjzj.block(yc, qc, n, n);
    const Mat e_y2y2 = e_zjzj.block(qc, qc, n, n);
    const Mat e_yy_pinv = pinv(e_yy);
    const Mat c = e_xbar_y2 - e_xbar_y * e_yy_pinv * e_yy2;
    Mat h = e_y2y2 - mul_at_b(e_yy2, e_yy_pinv * e_yy2);
    h.symmetrize();
    const Mat w2 = c * psd_sqrt_pair(h).pinv_sqrt;
    out.sum_mu = w2.frob_sq();
  }

  // beta: tr(2 E_{w_j x} - E_{w_j w_j}) for w_j = sum_{i != j} P_i z_i.
  double tr_wx = 0.0;
  double tr_ww = 0.0;
  for (int i = 0; i < part.p; ++i) {
    if (i == j) continue;
    tr_wx += trace_abt(p_all[i], pack.e_xzj(i));
    for (int k = 0; k < part.p; ++k) {
      if (k == j) continue;
      tr_ww += trace_abt(p_all[i] * pack.e_zizj(i, k), p_all[k]);
    }
  }
  out.beta = 2.0 * tr_wx - tr_ww;
  return out;
}

double error_block_formula(int j, std::span<const Mat> p_all,
                           const CovariancePack& pack) {
  const BlockErrorTerms terms = block_error_terms(j, p_all, pack);
  const double v =
      pack.e_xx.trace() - terms.sum_delta_top_r - terms.sum_mu - terms.beta;
  return std::max(v, 0.0);
}

}  // namespace sdwsn
