// Classical Fisher-information pipeline: log-likelihood derivatives over the
// candidate grid, Monte-Carlo averaging over a sampled parameter cloud, and
// ensemble statistics.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "qtraj/sme.hpp"

namespace qtraj {

/// Fisher information against time, with ensemble bookkeeping.
/// stderr_ is 0 when n_ensemble == 1 (single-series marker).
struct FisherSeries {
    std::vector<double> t;
    std::vector<double> fisher_info;
    std::vector<double> stderr_;
    int n_ensemble = 1;
};

/// Finite-difference derivative of the log-likelihood surface in the grid
/// parameter. Output row r (r = 0..n_p-1) holds d l / d theta at grid index
/// r+1: backward differences by default; the central option uses
/// (l[i+1]-l[i-1])/(2 d_theta) where both neighbours exist and falls back to
/// backward at the top edge.
Eigen::MatrixXd loglik_derivative(const LogLikSurface& surface, double d_theta,
                                  bool central = false);

/// Monte-Carlo average of squared derivatives: rows picks (possibly
/// repeating) rows of derivs; I[k] = mean_j derivs(rows[j], k)^2.
FisherSeries fisher_series(const Eigen::MatrixXd& derivs, const std::vector<int>& rows,
                           const std::vector<double>& t);

/// Pointwise mean and standard error over an ensemble of series.
FisherSeries ensemble_average(const std::vector<FisherSeries>& members);

/// 1/(N I); +infinity when I <= 0.
double cramer_rao_bound(double fisher_info, int n_ensemble);

/// Plain Monte-Carlo estimate of E[f] over a sample set.
double mc_integrate(std::span<const double> samples, const std::function<double(double)>& f);

/// Standard error of the mean of a (possibly autocorrelated) sequence via
/// batch means; the honest uncertainty for Markov-chain averages.
double batch_means_stderr(std::span<const double> values, int n_batches = 50);

}  // namespace qtraj
