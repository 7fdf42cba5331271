#pragma once

#include <span>
#include <vector>

#include "sdwsn/sdt.hpp"

// Maximum block improvement fit of the second degree network for ideal
// channels: per iteration every single-block optimal update is computed and
// only the one with the smallest objective is accepted.

namespace sdwsn {

struct FitTrace {
  // objectives[0] is the initial value; one more entry per accepted iteration.
  std::vector<double> objectives;
  std::vector<int> chosen_block;      // accepted block per iteration, 0-based
  std::vector<char> nonunique_flags;  // truncation tie inside the accepted update
  std::vector<double> p_norms;        // ||P|| after each accepted iteration
  int iterations = 0;
  bool converged = false;

  double final_objective() const { return objectives.back(); }
};

enum class InitMode { per_block_sdt, zero, user_supplied };

struct FitConfig {
  double epsilon = 1e-9;
  int max_iterations = 100;
  InitMode init = InitMode::per_block_sdt;
  std::vector<Mat> user_init;  // per-sensor blocks when init == user_supplied

  void validate() const;
};

/// Decoupled per-block starting point: each signal block x_j is fitted from
/// its own lifted observation z_j alone, then embedded into the full layout
/// (zero rows outside the x_j block).
std::vector<Mat> initial_iterations(const CovariancePack& pack);

struct FitResult {
  std::vector<Mat> blocks;  // P_j, each m x L_j
  FitTrace trace;
  std::vector<Mat> g_pinv;  // cached G_j^+, reusable for model extraction
};

/// Greedy fit: per iteration compute all p block-optimal candidates, accept
/// the phi-minimal one (ties to the smallest index), stop when the objective
/// improvement falls to epsilon or the iteration budget runs out.
FitResult mbi_fit(const ReducedForm& red, const CovariancePack& pack,
                  const FitConfig& cfg);

/// Factor fitted blocks into the sensor polynomials and the fusion center.
/// g_pinv may carry the cached pseudo-inverses from the fit.
NetworkModel extract_models(std::span<const Mat> p_final, const ReducedForm& red,
                            FactorVariant variant,
                            std::span<const Mat> g_pinv = {});

/// Forward evaluation per sample column: x_hat = sum_j T_j (S_{j,0} +
/// S_{j,1} y_j + S_{j,2} y_j.^2).
Mat apply_network(const NetworkModel& model, std::span<const Mat> ysamples);

}  // namespace sdwsn
