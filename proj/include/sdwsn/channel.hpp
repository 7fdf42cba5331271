#pragma once

#include "sdwsn/mbi.hpp"

// Alternating-iterative fit for nonideal channels: each transmitted block is
// corrupted as u -> D_j u + eta_j before fusion. The fusion map and the
// sensor maps are updated in turn, with maximum-block-improvement acceptance
// over the p+1 candidates per iteration.

namespace sdwsn {

struct ChannelSpec {
  std::vector<Mat> d;      // fading matrices D_j (r_j x r_j), not necessarily invertible
  std::vector<Mat> e_eta;  // channel noise second moments (r_j x r_j, PSD)

  void validate(const BlockPartition& part) const;
  static ChannelSpec ideal(const BlockPartition& part);  // D_j = I, eta = 0
  static ChannelSpec white(const BlockPartition& part,
                           std::span<const double> gamma);  // eta ~ gamma_j^2 I
};

struct ChannelFitState {
  Mat t;              // fusion map, m x (r_1 + ... + r_p)
  std::vector<Mat> s; // sensor maps S_j, r_j x L_j
  FitTrace trace;     // objectives are psi values; chosen_block holds the
                      // accepted candidate (0 = fusion update, j = sensor j)

  Mat t_block(int j, const BlockPartition& part) const;
  /// Composite ideal-channel map with blocks T_j S_j.
  std::vector<Mat> composite_blocks(const BlockPartition& part) const;
};

/// Second moments of the received vector w with w_j = D_j S_j z_j + eta_j:
/// E_xw and E_ww assembled block-wise.
struct ChannelMoments {
  Mat e_xw;  // m x r
  Mat e_ww;  // r x r
};
ChannelMoments propagate_channel_cov(std::span<const Mat> s,
                                     const ChannelSpec& ch,
                                     const CovariancePack& pack);

/// Optimal fusion map for fixed sensors: T = E_xw E_ww^+, together with the
/// attained minimum tr(E_xx) - ||E_xw (E_ww^{1/2})^+||^2.
struct FusionUpdate {
  Mat t;
  double minimum = 0.0;
};
FusionUpdate fusion_update(const Mat& e_xw, const Mat& e_ww, double trace_exx);

/// Optimal sensor map for block j given the fusion map and the other sensors:
/// S_j = (T_j D_j)^+ E_{x_(j) z_j} E_{z_j z_j}^+.
Mat sensor_update(int j, const Mat& t, std::span<const Mat> s,
                  const ChannelSpec& ch, const CovariancePack& pack);

/// psi(T, S) = tr(E_xx) - ||E_xw (E_ww^{1/2})^+||^2
///           + ||E_xw (E_ww^{1/2})^+ - T E_ww^{1/2}||^2.
double psi_objective(const Mat& t, std::span<const Mat> s, const ChannelSpec& ch,
                     const CovariancePack& pack);

/// Alternating-iterative fit. init supplies T^(0), S^(0) (normally the
/// factored output of the ideal-channel fit).
ChannelFitState ai_fit(const CovariancePack& pack, const ChannelSpec& ch,
                       const FitConfig& cfg, const ChannelFitState& init);

/// Starting state from the ideal-channel machinery.
ChannelFitState channel_init(const CovariancePack& pack, const ReducedForm& red,
                             const FitConfig& cfg);

/// The fitted state as a network model (T and S are already factored).
NetworkModel channel_model(const ChannelFitState& state,
                           const BlockPartition& part);

}  // namespace sdwsn
