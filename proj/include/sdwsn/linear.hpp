#pragma once

#include "sdwsn/mbi.hpp"

// The linear network baseline: the same greedy machinery run on the unlifted
// observations (block maps F_j of rank at most r_j acting on y_j alone),
// plus its closed-form block error and the second-degree-vs-linear
// comparison predicate.

namespace sdwsn {

struct LinearFitResult {
  std::vector<Mat> blocks;  // F_j, each m x n_j
  FitTrace trace;
  CovariancePack pack;  // the y-moment restriction the fit ran on
  ReducedForm red;
  NetworkModel model;  // factored form; S0 and S2 are zero by construction
};

/// Fit the linear network. A lifted pack is restricted to its y moments
/// first; a pack already in linear form is used as is.
LinearFitResult linear_fit(const CovariancePack& pack, const FitConfig& cfg);

/// Closed-form error of the linear tuple with block j replaced by its
/// optimum: tr(E_xx) - sum_{i<=r_j} sigma_i - alpha_j.
double error_linear_formula(int j, std::span<const Mat> f_all,
                            const CovariancePack& pack_lin);

/// Second-degree advantage condition at block j:
///   alpha_j - beta_j < sum_{i<=r_j} (delta_i - sigma_i) + sum_i mu_{j,i}.
/// When true, the closed-form second degree block error is strictly below
/// the linear one. p_all are lifted blocks, f_all linear blocks, pack the
/// lifted moment pack.
bool compare_condition(int j, std::span<const Mat> p_all,
                       std::span<const Mat> f_all, const CovariancePack& pack);

}  // namespace sdwsn
