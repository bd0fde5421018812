// Stochastic-master-equation engine: true-state trajectories driven by Wiener
// noise, and likelihood filters replaying a shared measurement record under
// candidate parameters.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qtraj/errors.hpp"
#include "qtraj/grid.hpp"
#include "qtraj/qubit.hpp"
#include "qtraj/types.hpp"

namespace qtraj {

/// How the filter propagates its state and accumulates likelihood.
///  - UnnormalizedWithLikelihood: advance the unnormalized state, absorb the
///    trace into log L each step, then rescale. Internally consistent: the
///    discrete Ito correction to log L emerges from log of the trace.
///  - RenormalizeEachStep: accumulate d(log L) = sqrt(eta) Tr(M) dY literally
///    and propagate the normalized state with the innovation noise. Kept for
///    comparison; omits the -(eta/2) Tr(M)^2 dt correction.
enum class NormalizationMode { UnnormalizedWithLikelihood, RenormalizeEachStep };

/// State-propagation scheme.
///  - SplitStep (default): exact one-step unitary times first-order
///    measurement factor, applied in sandwich form and renormalized. Preserves
///    positivity, keeps states exactly inside the Bloch ball, and reduces to
///    the exact rotation when eta = 0.
///  - EulerMaruyama: the literal first-order scheme. Useful for discretization
///    studies; its Bloch radius drifts O(dt) outside the ball, so runs need a
///    loose bloch_ball_tolerance.
enum class Integrator { SplitStep, EulerMaruyama };

struct StepOptions {
    Integrator integrator = Integrator::SplitStep;
    double bloch_ball_tolerance = 1e-6;
};

struct SimConfig {
    ModelParams params;
    BlochVector initial_bloch{0.0, 0.0, 1.0};
    double dt = 1e-3;
    double t_max = 10.0;
    std::uint64_t seed = 0;
    std::uint64_t trajectory_index = 0;  // selects the noise stream
    StepOptions step;

    std::size_t steps() const { return static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)); }
    void validate() const;
};

/// One simulated trajectory: state samples and the measurement record.
/// Arrays have length steps()+1 with index 0 holding the initial state and
/// dW[0] = dY[0] = Y[0] = 0.
struct TrajectoryRecord {
    std::vector<double> t;
    std::vector<double> x, y, z;
    std::vector<double> dW, dY, Y;

    std::size_t steps() const { return t.empty() ? 0 : t.size() - 1; }
};

struct StepResult {
    Matrix2c rho;
    double dY;
};

struct FilterStepResult {
    Matrix2c rho;
    double log_l;
};

/// Advance the true state by one step; dW is the Wiener increment (variance
/// dt). The record increment dY = sqrt(eta) Tr(M(rho)) dt + dW is evaluated at
/// the pre-step state.
StepResult step_true(const Matrix2c& rho, const ModelParams& params, double dt, double dW,
                     const StepOptions& opt = {}, std::size_t step_index = 0);

/// Advance a candidate filter one step against an observed record increment.
FilterStepResult step_filter(const Matrix2c& rho, double log_l, const ModelParams& candidate,
                             double dt, double dY, NormalizationMode mode,
                             const StepOptions& opt = {}, std::size_t step_index = 0);

TrajectoryRecord simulate_trajectory(const SimConfig& cfg);

/// Log-likelihood surface over a candidate grid: l(i, k) is the running
/// log-likelihood of candidate i at time index k; l(i, 0) = 0.
struct LogLikSurface {
    std::vector<double> t;
    Eigen::MatrixXd l;  // (n_p+1) rows x (steps+1) cols
};

/// Replay one shared record through a bank of candidate filters differing in
/// the unknown parameter (omega = grid value); all other parameters from base.
LogLikSurface run_filter_bank(const TrajectoryRecord& record, const ParameterGrid& grid,
                              const ModelParams& base, NormalizationMode mode,
                              const StepOptions& opt = {});

}  // namespace qtraj
