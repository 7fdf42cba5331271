#include "sdwsn/channel.hpp"

#include <cmath>
#include <limits>

namespace sdwsn {

void ChannelSpec::validate(const BlockPartition& part) const {
  require(static_cast<int>(d.size()) == part.p &&
              static_cast<int>(e_eta.size()) == part.p,
          "channel spec: one D_j and one E_eta_j per sensor required");
  for (int j = 0; j < part.p; ++j) {
    require(d[j].rows() == part.r[j] && d[j].cols() == part.r[j],
            "channel spec: D_j must be r_j x r_j");
    require(e_eta[j].rows() == part.r[j] && e_eta[j].cols() == part.r[j],
            "channel spec: E_eta_j must be r_j x r_j");
    require(d[j].is_finite() && e_eta[j].is_finite(),
            "channel spec: matrices must be finite");
  }
}

ChannelSpec ChannelSpec::ideal(const BlockPartition& part) {
  ChannelSpec ch;
  for (int j = 0; j < part.p; ++j) {
    ch.d.push_back(Mat::identity(part.r[j]));
    ch.e_eta.push_back(Mat(part.r[j], part.r[j]));
  }
  return ch;
}

ChannelSpec ChannelSpec::white(const BlockPartition& part,
                               std::span<const double> gamma) {
  require(static_cast<int>(gamma.size()) == part.p,
          "channel spec: one gamma per sensor required");
  ChannelSpec ch = ideal(part);
  for (int j = 0; j < part.p; ++j) {
    ch.e_eta[j] = Mat::identity(part.r[j]).scaled(gamma[j] * gamma[j]);
  }
  return ch;
}

Mat ChannelFitState::t_block(int j, const BlockPartition& part) const {
  int off = 0;
  for (int i = 0; i < j; ++i) off += part.r[i];
  return t.block(0, off, part.m, part.r[j]);
}

std::vector<Mat> ChannelFitState::composite_blocks(
    const BlockPartition& part) const {
  std::vector<Mat> blocks;
  blocks.reserve(part.p);
  for (int j = 0; j < part.p; ++j) blocks.push_back(t_block(j, part) * s[j]);
  return blocks;
}

ChannelMoments propagate_channel_cov(std::span<const Mat> s,
                                     const ChannelSpec& ch,
                                     const CovariancePack& pack) {
  const BlockPartition& part = pack.part;
  const int r = part.total_rank();
  ChannelMoments mom{Mat(part.m, r), Mat(r, r)};
  std::vector<Mat> ds(part.p);  // D_j S_j
  std::vector<int> off(part.p + 1, 0);
  for (int j = 0; j < part.p; ++j) {
    require(s[j].rows() == part.r[j] && s[j].cols() == part.lift_size(j),
            "propagate_channel_cov: S_j must be r_j x L_j");
    ds[j] = ch.d[j] * s[j];
    off[j + 1] = off[j] + part.r[j];
  }
  for (int j = 0; j < part.p; ++j) {
    // E_{x w_j} = E_{x z_j} S_j^T D_j^T
    mom.e_xw.set_block(0, off[j], mul_a_bt(pack.e_xzj(j), ds[j]));
    for (int i = 0; i < part.p; ++i) {
      // E_{w_i w_j} = D_i S_i E_{z_i z_j} S_j^T D_j^T  (+ E_eta on the diagonal)
      Mat blk = mul_a_bt(ds[i] * pack.e_zizj(i, j), ds[j]);
      if (i == j) blk += ch.e_eta[j];
      mom.e_ww.set_block(off[i], off[j], blk);
    }
  }
  mom.e_ww.symmetrize();
  return mom;
}

FusionUpdate fusion_update(const Mat& e_xw, const Mat& e_ww, double trace_exx) {
  require(e_ww.rows() == e_ww.cols() && e_xw.cols() == e_ww.rows(),
          "fusion_update: moment dimensions are inconsistent");
  FusionUpdate out;
  out.t = e_xw * pinv(e_ww);
  const Mat h = e_xw * psd_sqrt_pair(e_ww).pinv_sqrt;
  out.minimum = std::max(trace_exx - h.frob_sq(), 0.0);
  return out;
}

Mat sensor_update(int j, const Mat& t, std::span<const Mat> s,
                  const ChannelSpec& ch, const CovariancePack& pack) {
  const BlockPartition& part = pack.part;
  int off = 0;
  for (int i = 0; i < j; ++i) off += part.r[i];
  const Mat tj = t.block(0, off, part.m, part.r[j]);

  Mat e_xj_zj = pack.e_xzj(j);
  int off_i = 0;
  for (int i = 0; i < part.p; ++i) {
    if (i != j) {
      const Mat ti = t.block(0, off_i, part.m, part.r[i]);
      e_xj_zj -= ti * ch.d[i] * s[i] * pack.e_zizj(i, j);
    }
    off_i += part.r[i];
  }
  return pinv(tj * ch.d[j]) * e_xj_zj * pinv(pack.e_zizj(j, j));
}

double psi_objective(const Mat& t, std::span<const Mat> s, const ChannelSpec& ch,
                     const CovariancePack& pack) {
  const ChannelMoments mom = propagate_channel_cov(s, ch, pack);
  const PsdSqrtPair pair = psd_sqrt_pair(mom.e_ww);
  const Mat h = mom.e_xw * pair.pinv_sqrt;
  const double v = pack.e_xx.trace() - h.frob_sq() + (h - t * pair.sqrt).frob_sq();
  return std::max(v, 0.0);
}

ChannelFitState channel_init(const CovariancePack& pack, const ReducedForm& red,
                             const FitConfig& cfg) {
  FitResult fit = mbi_fit(red, pack, cfg);
  NetworkModel model =
      extract_models(fit.blocks, red, FactorVariant::orthonormal_t, fit.g_pinv);
  ChannelFitState init;
  init.t = model.fusion.stacked();
  init.s.reserve(pack.part.p);
  for (int j = 0; j < pack.part.p; ++j) {
    init.s.push_back(model.sensors[j].full(pack.part.lifting));
  }
  return init;
}

ChannelFitState ai_fit(const CovariancePack& pack, const ChannelSpec& ch,
                       const FitConfig& cfg, const ChannelFitState& init) {
  cfg.validate();
  ch.validate(pack.part);
  const BlockPartition& part = pack.part;
  const int p = part.p;
  require(init.t.rows() == part.m && init.t.cols() == part.total_rank(),
          "ai_fit: init fusion map must be m x r");
  require(static_cast<int>(init.s.size()) == p,
          "ai_fit: init must supply one sensor map per block");

  ChannelFitState state;
  state.t = init.t;
  state.s = init.s;
  FitTrace& trace = state.trace;

  // Moment blocks and the per-block pseudo-inverses are loop constants.
  std::vector<Mat> exzj(p), ezz_pinv(p);
  std::vector<std::vector<Mat>> ezz_blocks(p, std::vector<Mat>(p));
  std::vector<int> off(p + 1, 0);
  for (int j = 0; j < p; ++j) {
    exzj[j] = pack.e_xzj(j);
    ezz_pinv[j] = pinv(pack.e_zizj(j, j));
    for (int i = 0; i < p; ++i) ezz_blocks[i][j] = pack.e_zizj(i, j);
    off[j + 1] = off[j] + part.r[j];
  }
  const double trace_exx = pack.e_xx.trace();

  auto sensor_update_cached = [&](int j, const Mat& t,
                                  const std::vector<Mat>& s) {
    Mat e_xj_zj = exzj[j];
    for (int i = 0; i < p; ++i) {
      if (i == j) continue;
      const Mat ti = t.block(0, off[i], part.m, part.r[i]);
      e_xj_zj -= ti * ch.d[i] * s[i] * ezz_blocks[i][j];
    }
    return pinv(t.block(0, off[j], part.m, part.r[j]) * ch.d[j]) * e_xj_zj *
           ezz_pinv[j];
  };

  double psi = psi_objective(state.t, state.s, ch, pack);
  trace.objectives.push_back(psi);
  trace.p_norms.push_back(
      assemble_blocks(state.composite_blocks(part), part).frob());

  for (int q = 0; q < cfg.max_iterations; ++q) {
    // Candidate 0: fusion update against the current sensors.
    const ChannelMoments mom = propagate_channel_cov(state.s, ch, pack);
    const FusionUpdate fu = fusion_update(mom.e_xw, mom.e_ww, trace_exx);
    int best_cand = 0;
    double best_psi = psi_objective(fu.t, state.s, ch, pack);
    Mat best_t = fu.t;
    std::vector<Mat> best_s = state.s;

    // Candidates 1..p: sensor j refitted against the updated fusion map,
    // evaluated with the not-yet-updated fusion map per the candidate rule.
    for (int j = 0; j < p; ++j) {
      Mat s_hat = sensor_update_cached(j, fu.t, state.s);
      std::vector<Mat> s_cand = state.s;
      s_cand[j] = std::move(s_hat);
      const double cand_psi = psi_objective(state.t, s_cand, ch, pack);
      if (cand_psi < best_psi) {
        best_psi = cand_psi;
        best_cand = j + 1;
        best_t = state.t;
        best_s = std::move(s_cand);
      }
    }

    state.t = std::move(best_t);
    state.s = std::move(best_s);
    trace.objectives.push_back(best_psi);
    trace.chosen_block.push_back(best_cand);
    trace.nonunique_flags.push_back(0);
    trace.p_norms.push_back(
        assemble_blocks(state.composite_blocks(part), part).frob());
    trace.iterations = q + 1;
    if (std::abs(best_psi - psi) <= cfg.epsilon) {
      trace.converged = true;
      psi = best_psi;
      break;
    }
    psi = best_psi;
  }
  return state;
}

NetworkModel channel_model(const ChannelFitState& state,
                           const BlockPartition& part) {
  NetworkModel model;
  model.part = part;
  model.sensors.reserve(part.p);
  model.fusion.blocks.reserve(part.p);
  for (int j = 0; j < part.p; ++j) {
    model.fusion.blocks.push_back(state.t_block(j, part));
    model.sensors.push_back(
        SecondDegreeSensor::from_full(state.s[j], part.n[j], part.lifting));
  }
  return model;
}

}  // namespace sdwsn
