#include "sdwsn/linear.hpp"

#include <algorithm>
#include <cmath>

namespace sdwsn {

LinearFitResult linear_fit(const CovariancePack& pack, const FitConfig& cfg) {
  LinearFitResult res;
  res.pack = pack.part.lifting == Lifting::linear ? pack : restrict_linear(pack);
  res.red = reduce(res.pack);
  FitResult fit = mbi_fit(res.red, res.pack, cfg);
  res.blocks = std::move(fit.blocks);
  res.trace = std::move(fit.trace);
  res.model = extract_models(res.blocks, res.red, FactorVariant::orthonormal_t,
                             fit.g_pinv);
  return res;
}

double error_linear_formula(int j, std::span<const Mat> f_all,
                            const CovariancePack& pack_lin) {
  require(pack_lin.part.lifting == Lifting::linear,
          "error_linear_formula: linear-layout pack required");
  const BlockErrorTerms terms = block_error_terms(j, f_all, pack_lin);
  const double v = pack_lin.e_xx.trace() - terms.sum_delta_top_r - terms.beta;
  return std::max(v, 0.0);
}

bool compare_condition(int j, std::span<const Mat> p_all,
                       std::span<const Mat> f_all, const CovariancePack& pack) {
  require(pack.part.has_square(),
          "compare_condition: lifted pack with squared coordinates required");
  const BlockErrorTerms sd = block_error_terms(j, p_all, pack);
  const CovariancePack pack_lin = restrict_linear(pack);
  const BlockErrorTerms lin = block_error_terms(j, f_all, pack_lin);
  const int top = std::min<int>(
      pack.part.r[j],
      static_cast<int>(std::min(sd.delta.size(), lin.delta.size())));
  double gain = sd.sum_mu;
  for (int i = 0; i < top; ++i) gain += sd.delta[i] - lin.delta[i];
  // Ranks cap at different list lengths only in degenerate setups; the sums
  // above already hold the top-r_j values of each side.
  return lin.beta - sd.beta < gain;
}

}  // namespace sdwsn
