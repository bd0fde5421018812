// Batch experiment driver: orchestrates trajectory ensembles, the shared
// Metropolis-Hastings pre-estimation chain, Fisher-information reduction, the
// benchmark curve, and CSV artifact emission.
#pragma once

#include <string>
#include <vector>

#include "qtraj/config.hpp"
#include "qtraj/fisher.hpp"
#include "qtraj/grid.hpp"
#include "qtraj/mh.hpp"

namespace qtraj {

/// Standard-normal pre-estimation chain keyed by (seed, "mh").
MHChain run_pre_estimation(const ExperimentConfig& cfg);

/// Map retained chain samples to derivative-matrix rows: theta_hat_j =
/// omega + prior_scale * delta_j, snapped to the nearest grid point (index
/// >= 1) and shifted by -1 into derivative-row numbering.
std::vector<int> derivative_rows(const MHChain& chain, const ExperimentConfig& cfg,
                                 const ParameterGrid& grid);

/// Full single-trajectory pipeline: simulate -> filter bank -> derivative ->
/// Monte-Carlo average of squared derivatives.
FisherSeries fisher_series_for_trajectory(const ExperimentConfig& cfg, const ParameterGrid& grid,
                                          const std::vector<int>& rows,
                                          std::uint64_t trajectory_index);

/// Benchmark curve on the given time axis from the configured pure initial
/// state.
std::vector<double> benchmark_curve(const ExperimentConfig& cfg, const std::vector<double>& times);

/// Emit trajectory.csv: Bloch components, record, and log-likelihood at the
/// true parameter, one row per step.
void run_trajectory_demo(const ExperimentConfig& cfg);

/// Emit fisher_single.csv, fisher_ensemble.csv, qfi.csv, mh_chain.csv.
void run_fisher_experiment(const ExperimentConfig& cfg);

/// Emit sweep_sigma_{x,y,z}.csv plus the shared qfi.csv and mh_chain.csv.
void run_operator_sweep(const ExperimentConfig& cfg);

/// Emit qfi.csv only.
void run_qfi_curve(const ExperimentConfig& cfg);

}  // namespace qtraj
