#include "sdwsn/mbi.hpp"

#include <cmath>
#include <limits>

namespace sdwsn {

void FitConfig::validate() const {
  require(epsilon >= 0.0, "fit config: epsilon must be nonnegative");
  require(max_iterations >= 1, "fit config: at least one iteration required");
}

std::vector<Mat> initial_iterations(const CovariancePack& pack) {
  const BlockPartition& part = pack.part;
  std::vector<Mat> blocks;
  blocks.reserve(part.p);
  for (int j = 0; j < part.p; ++j) {
    const Mat e_xj_zj = pack.e_xz.block(part.x_offset(j), part.lift_offset(j),
                                        part.m_split[j], part.lift_size(j));
    const Mat p_local = sdt_single(e_xj_zj, pack.e_zizj(j, j), part.r[j]);
    Mat embedded(part.m, part.lift_size(j));
    embedded.set_block(part.x_offset(j), 0, p_local);
    blocks.push_back(std::move(embedded));
  }
  return blocks;
}

FitResult mbi_fit(const ReducedForm& red, const CovariancePack& pack,
                  const FitConfig& cfg) {
  cfg.validate();
  const BlockPartition& part = red.part;
  const int p = part.p;

  FitResult res;
  switch (cfg.init) {
    case InitMode::per_block_sdt:
      res.blocks = initial_iterations(pack);
      break;
    case InitMode::zero:
      res.blocks.reserve(p);
      for (int j = 0; j < p; ++j)
        res.blocks.emplace_back(part.m, part.lift_size(j));
      break;
    case InitMode::user_supplied:
      require(static_cast<int>(cfg.user_init.size()) == p,
              "fit: user init must supply one block per sensor");
      res.blocks = cfg.user_init;
      break;
  }
  for (int j = 0; j < p; ++j) {
    require(res.blocks[j].rows() == part.m &&
                res.blocks[j].cols() == part.lift_size(j),
            "fit: init block dimensions do not match the partition");
  }

  // G_j-derived operators are fixed across iterations. One SVD per block
  // provides the pseudo-inverse together with an orthonormal basis W_j of
  // range(G_j^T); every candidate solve then happens in that basis, whose
  // dimension is the rank of G_j (far below the lifted dimension for
  // sample-built packs).
  std::vector<Mat> basis(p);     // W_j: L x k_j
  std::vector<Mat> basis_np(p);  // N_j = W_j^T G_j^+ : k_j x L_j
  res.g_pinv.reserve(p);
  for (int j = 0; j < p; ++j) {
    const Mat& g = red.g[j];
    SvdFactors f = svd_econ(g);
    const int rank = numerical_rank(f.S, g.rows(), g.cols());
    basis[j] = f.V.block(0, 0, g.cols(), rank);
    // N_j = diag(1/sigma) U^T over the retained part.
    Mat nj(rank, g.rows());
    for (int t = 0; t < rank; ++t)
      for (int i = 0; i < g.rows(); ++i) nj(t, i) = f.U(i, t) / f.S[t];
    res.g_pinv.push_back(basis[j] * nj);  // G_j^+ = W_j N_j
    basis_np[j] = std::move(nj);
  }

  // Cached products P_j G_j keep the candidate objectives GEMM-free.
  std::vector<Mat> pg(p);
  for (int j = 0; j < p; ++j) pg[j] = res.blocks[j] * red.g[j];
  Mat resid = red.h;
  for (int j = 0; j < p; ++j) resid -= pg[j];
  double phi = resid.frob_sq();

  FitTrace& trace = res.trace;
  trace.objectives.push_back(phi);
  trace.p_norms.push_back(assemble_blocks(res.blocks, part).frob());

  for (int q = 0; q < cfg.max_iterations; ++q) {
    int best_j = -1;
    double best_phi = std::numeric_limits<double>::infinity();
    TruncatedSvd best_core;
    Mat best_q;
    for (int j = 0; j < p; ++j) {
      const Mat qj = resid + pg[j];
      // sigma_i(Q_j R_{G_j}) through the projected matrix Q_j W_j. A zero
      // G_j (k_j = 0) only admits the zero block.
      TruncatedSvd core;
      if (basis[j].cols() > 0) core = truncate_svd(qj * basis[j], part.r[j]);
      double cand_phi = qj.frob_sq();
      for (double s : core.s) cand_phi -= s * s;
      cand_phi = std::max(cand_phi, 0.0);
      if (cand_phi < best_phi) {
        best_phi = cand_phi;
        best_j = j;
        best_core = std::move(core);
        best_q = qj;
      }
    }

    // Accepted update, assembled from the truncated factors:
    //   P_j = U_r diag(s) V_r^T N_j,  P_j G_j = Q_j - new residual.
    if (best_core.u.cols() == 0) {
      res.blocks[best_j] = Mat(part.m, part.lift_size(best_j));
    } else {
      Mat vt_n(best_core.u.cols(), part.lift_size(best_j));
      for (int t = 0; t < best_core.u.cols(); ++t) {
        if (best_core.s[t] == 0.0) continue;
        for (int i = 0; i < basis_np[best_j].cols(); ++i) {
          double acc = 0.0;
          for (int w = 0; w < best_core.v.rows(); ++w)
            acc += best_core.v(w, t) * basis_np[best_j](w, i);
          vt_n(t, i) = best_core.s[t] * acc;
        }
      }
      res.blocks[best_j] = best_core.u * vt_n;
    }
    Mat new_pg = res.blocks[best_j] * red.g[best_j];
    resid = best_q - new_pg;
    pg[best_j] = std::move(new_pg);
    // The trace records the defining objective of the accepted state.
    const double accepted_phi = resid.frob_sq();
    trace.objectives.push_back(accepted_phi);
    trace.chosen_block.push_back(best_j);
    trace.nonunique_flags.push_back(best_core.nonunique ? 1 : 0);
    trace.p_norms.push_back(assemble_blocks(res.blocks, part).frob());
    trace.iterations = q + 1;
    if (std::abs(accepted_phi - phi) <= cfg.epsilon) {
      trace.converged = true;
      phi = accepted_phi;
      break;
    }
    phi = accepted_phi;
  }
  return res;
}

NetworkModel extract_models(std::span<const Mat> p_final, const ReducedForm& red,
                            FactorVariant variant,
                            std::span<const Mat> g_pinv) {
  const BlockPartition& part = red.part;
  require(static_cast<int>(p_final.size()) == part.p,
          "extract_models: one block per sensor required");
  NetworkModel model;
  model.part = part;
  model.variant = variant;
  model.sensors.reserve(part.p);
  model.fusion.blocks.reserve(part.p);
  for (int j = 0; j < part.p; ++j) {
    // P_j G_j recovers the truncated core of the fitted block exactly, since
    // the solver's P_j has row space inside range(G_j^T).
    const TruncatedSvd core = truncate_svd(p_final[j] * red.g[j], part.r[j]);
    const Mat gp = g_pinv.empty() ? pinv(red.g[j]) : g_pinv[j];
    SensorFactor factor = factor_model_pre(core, gp, variant);
    if (factor.t.cols() < part.r[j]) {
      // Degenerate rank: keep the declared width, padding with zero rows of S.
      Mat t(part.m, part.r[j]);
      t.set_block(0, 0, factor.t);
      Mat s(part.r[j], part.lift_size(j));
      s.set_block(0, 0, factor.s);
      factor.t = std::move(t);
      factor.s = std::move(s);
    }
    model.fusion.blocks.push_back(factor.t);
    model.sensors.push_back(
        SecondDegreeSensor::from_full(factor.s, part.n[j], part.lifting));
  }
  return model;
}

Mat apply_network(const NetworkModel& model, std::span<const Mat> ysamples) {
  const BlockPartition& part = model.part;
  require(static_cast<int>(ysamples.size()) == part.p,
          "apply_network: one observation matrix per sensor required");
  const int s = ysamples.empty() ? 0 : ysamples[0].cols();
  Mat xhat(part.m, s);
  for (int j = 0; j < part.p; ++j) {
    const Mat& y = ysamples[j];
    require(y.rows() == part.n[j] && y.cols() == s,
            "apply_network: observation dimensions must match the partition");
    const SecondDegreeSensor& sensor = model.sensors[j];
    Mat u = sensor.s1 * y;
    Mat ysq(y.rows(), y.cols());
    for (int i = 0; i < y.rows(); ++i)
      for (int c = 0; c < s; ++c) ysq(i, c) = y(i, c) * y(i, c);
    u += sensor.s2 * ysq;
    for (int i = 0; i < u.rows(); ++i)
      for (int c = 0; c < s; ++c) u(i, c) += sensor.s0(i, 0);
    xhat += model.fusion.blocks[j] * u;
  }
  return xhat;
}

}  // namespace sdwsn
