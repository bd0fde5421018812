#include "qtraj/sme.hpp"

#include <cmath>

#include "qtraj/log.hpp"
#include "qtraj/rng.hpp"

namespace qtraj {

namespace {

// Tr(M[F]rho) for Hermitian F; used everywhere the record drift is needed so
// the arithmetic is identical across the engine.
inline double record_drift_trace(const Matrix2c& f, const Matrix2c& rho) {
    return 2.0 * (f * rho).trace().real();
}

inline void check_finite(const Matrix2c& rho, std::size_t step_index) {
    if (!rho.allFinite()) throw NumericalError("state became non-finite", step_index);
}

inline void check_ball(const Matrix2c& rho, double tol, std::size_t step_index) {
    BlochVector b;
    b.x = 2.0 * rho(1, 0).real();
    b.y = 2.0 * rho(1, 0).imag();
    b.z = rho(0, 0).real() - rho(1, 1).real();
    if (b.norm_squared() > (1.0 + tol) * (1.0 + tol))
        throw NumericalError("state left the Bloch ball (step size too large)", step_index);
}

// Measurement factor of the split-step update: I - (eta dt/2) F^2 + sqrt(eta) F dY.
inline Matrix2c measurement_factor(const Matrix2c& f, double eta, double dt, double dY) {
    return Matrix2c::Identity() - Complex(0.5 * eta * dt, 0.0) * (f * f) +
           Complex(std::sqrt(eta) * dY, 0.0) * f;
}

// Sandwich update rho -> A rho A^dag; returns the unnormalized result.
inline Matrix2c sandwich(const Matrix2c& a, const Matrix2c& rho) { return a * rho * a.adjoint(); }

// First-order drift of the normalized equation: -i[H,rho] + eta D[F]rho.
inline Matrix2c em_drift(const Matrix2c& h, const Matrix2c& f, double eta, const Matrix2c& rho) {
    const Matrix2c comm = h * rho - rho * h;
    return Complex(0.0, -1.0) * comm + eta * dissipator(f, rho);
}

}  // namespace

void SimConfig::validate() const {
    params.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("SimConfig: dt must be positive");
    if (!(t_max >= dt)) throw ConfigError("SimConfig: t_max must be at least dt");
    if (!initial_bloch.physical(1e-9))
        throw ConfigError("SimConfig: initial Bloch vector lies outside the unit ball");
    if (step.bloch_ball_tolerance < 0.0)
        throw ConfigError("SimConfig: bloch_ball_tolerance must be nonnegative");
    if (params.eta * dt > 0.01)
        logf(LogLevel::warn, "eta*dt = %g is large; the first-order record update degrades",
             params.eta * dt);
}

StepResult step_true(const Matrix2c& rho, const ModelParams& params, double dt, double dW,
                     const StepOptions& opt, std::size_t step_index) {
    check_finite(rho, step_index);
    if (!std::isfinite(dW)) throw NumericalError("non-finite noise increment", step_index);
    const Matrix2c& f = params.meas_op;
    const double sqeta = std::sqrt(params.eta);
    const double trm = record_drift_trace(f, rho);
    const double dY = sqeta * trm * dt + dW;

    Matrix2c next;
    if (opt.integrator == Integrator::SplitStep) {
        const Matrix2c u = propagator(hamiltonian(params), dt);
        const Matrix2c a = u * measurement_factor(f, params.eta, dt, dY);
        next = sandwich(a, rho);
    } else {
        const Matrix2c innov = measurement_superop(f, rho) - trm * rho;
        next = rho + em_drift(hamiltonian(params), f, params.eta, rho) * dt + sqeta * dW * innov;
    }
    check_finite(next, step_index);
    const double tr = next.trace().real();
    if (!(tr > 1e-300)) throw NumericalError("state trace collapsed", step_index);
    Matrix2c out = renormalize(next);
    check_ball(out, opt.bloch_ball_tolerance, step_index);
    return {out, dY};
}

FilterStepResult step_filter(const Matrix2c& rho, double log_l, const ModelParams& candidate,
                             double dt, double dY, NormalizationMode mode, const StepOptions& opt,
                             std::size_t step_index) {
    check_finite(rho, step_index);
    if (!std::isfinite(dY)) throw NumericalError("non-finite record increment", step_index);
    const Matrix2c& f = candidate.meas_op;
    const double sqeta = std::sqrt(candidate.eta);

    Matrix2c next;
    double log_next = log_l;
    if (mode == NormalizationMode::UnnormalizedWithLikelihood) {
        Matrix2c unnorm;
        if (opt.integrator == Integrator::SplitStep) {
            const Matrix2c u = propagator(hamiltonian(candidate), dt);
            const Matrix2c a = u * measurement_factor(f, candidate.eta, dt, dY);
            unnorm = sandwich(a, rho);
        } else {
            unnorm = rho + em_drift(hamiltonian(candidate), f, candidate.eta, rho) * dt +
                     sqeta * dY * measurement_superop(f, rho);
        }
        check_finite(unnorm, step_index);
        const double tr = unnorm.trace().real();
        if (!(tr > 0.0))
            throw NumericalError("filter trace became non-positive (step size too large)",
                                 step_index);
        // With eta = 0 the update is exactly unitary and the likelihood is
        // identically 1; keep rounding noise in tr out of the accumulator.
        if (candidate.eta != 0.0) log_next += std::log(tr);
        next = renormalize(unnorm);
    } else {
        const double trm = record_drift_trace(f, rho);
        log_next += sqeta * trm * dY;
        if (opt.integrator == Integrator::SplitStep) {
            const Matrix2c u = propagator(hamiltonian(candidate), dt);
            const Matrix2c a = u * measurement_factor(f, candidate.eta, dt, dY);
            next = renormalize(sandwich(a, rho));
        } else {
            const double dw = dY - sqeta * trm * dt;  // innovation noise
            const Matrix2c innov = measurement_superop(f, rho) - trm * rho;
            next = renormalize(rho + em_drift(hamiltonian(candidate), f, candidate.eta, rho) * dt +
                               sqeta * dw * innov);
        }
        check_finite(next, step_index);
    }
    if (!std::isfinite(log_next))
        throw NumericalError("log-likelihood became non-finite", step_index);
    check_ball(next, opt.bloch_ball_tolerance, step_index);
    return {next, log_next};
}

TrajectoryRecord simulate_trajectory(const SimConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.steps();
    const double sqdt = std::sqrt(cfg.dt);
    const CounterRng rng = CounterRng::for_trajectory(cfg.seed, cfg.trajectory_index);

    TrajectoryRecord rec;
    rec.t.resize(n + 1);
    rec.x.resize(n + 1);
    rec.y.resize(n + 1);
    rec.z.resize(n + 1);
    rec.dW.assign(n + 1, 0.0);
    rec.dY.assign(n + 1, 0.0);
    rec.Y.assign(n + 1, 0.0);

    Matrix2c rho = bloch_compose(cfg.initial_bloch);
    rec.t[0] = 0.0;
    rec.x[0] = cfg.initial_bloch.x;
    rec.y[0] = cfg.initial_bloch.y;
    rec.z[0] = cfg.initial_bloch.z;

    for (std::size_t k = 1; k <= n; ++k) {
        const double dW = rng.normal(k) * sqdt;
        const StepResult r = step_true(rho, cfg.params, cfg.dt, dW, cfg.step, k);
        rho = r.rho;
        const BlochVector b = bloch_decompose(rho);
        rec.t[k] = static_cast<double>(k) * cfg.dt;
        rec.x[k] = b.x;
        rec.y[k] = b.y;
        rec.z[k] = b.z;
        rec.dW[k] = dW;
        rec.dY[k] = r.dY;
        rec.Y[k] = rec.Y[k - 1] + r.dY;
    }
    return rec;
}

LogLikSurface run_filter_bank(const TrajectoryRecord& record, const ParameterGrid& grid,
                              const ModelParams& base, NormalizationMode mode,
                              const StepOptions& opt) {
    base.validate();
    const std::size_t n = record.steps();
    if (n == 0) throw ConfigError("run_filter_bank: record holds no steps");
    const std::size_t len = n + 1;
    if (record.t.size() != len || record.x.size() != len || record.y.size() != len ||
        record.z.size() != len || record.dW.size() != len || record.dY.size() != len ||
        record.Y.size() != len)
        throw ConfigError("run_filter_bank: record arrays have inconsistent lengths");
    const double dt = record.t[1] - record.t[0];
    if (!(dt > 0.0)) throw ConfigError("run_filter_bank: record time axis is not increasing");

    const int n_cand = grid.size();
    LogLikSurface surf;
    surf.t = record.t;
    surf.l = Eigen::MatrixXd::Zero(n_cand, static_cast<Eigen::Index>(len));

    const Matrix2c rho0 = bloch_compose(BlochVector{record.x[0], record.y[0], record.z[0]});
    std::vector<Matrix2c> rho(static_cast<std::size_t>(n_cand), rho0);
    std::vector<ModelParams> cand(static_cast<std::size_t>(n_cand), base);
    std::vector<Matrix2c> u(static_cast<std::size_t>(n_cand));
    for (int i = 0; i < n_cand; ++i) {
        cand[static_cast<std::size_t>(i)].omega = grid.value(i);
        u[static_cast<std::size_t>(i)] =
            propagator(hamiltonian(cand[static_cast<std::size_t>(i)]), dt);
    }

    const Matrix2c& f = base.meas_op;
    const double eta = base.eta;
    const double sqeta = std::sqrt(eta);

    if (mode == NormalizationMode::UnnormalizedWithLikelihood &&
        opt.integrator == Integrator::SplitStep) {
        // hot path: shared measurement factor per step, per-candidate sandwich
        for (std::size_t k = 1; k <= n; ++k) {
            const double dY = record.dY[k];
            const Matrix2c b = measurement_factor(f, eta, dt, dY);
            for (int i = 0; i < n_cand; ++i) {
                const std::size_t ii = static_cast<std::size_t>(i);
                const Matrix2c a = u[ii] * b;
                const Matrix2c num = sandwich(a, rho[ii]);
                const double tr = num.trace().real();
                if (!(tr > 0.0) || !std::isfinite(tr))
                    throw NumericalError(
                        "candidate " + std::to_string(i) + ": filter trace became non-positive",
                        k);
                // eta = 0 is exactly unitary: likelihood identically 1.
                surf.l(i, static_cast<Eigen::Index>(k)) =
                    surf.l(i, static_cast<Eigen::Index>(k - 1)) + (eta != 0.0 ? std::log(tr) : 0.0);
                rho[ii] = renormalize(num);
            }
        }
        return surf;
    }

    for (std::size_t k = 1; k <= n; ++k) {
        const double dY = record.dY[k];
        for (int i = 0; i < n_cand; ++i) {
            const std::size_t ii = static_cast<std::size_t>(i);
            try {
                const FilterStepResult r =
                    step_filter(rho[ii], surf.l(i, static_cast<Eigen::Index>(k - 1)), cand[ii], dt,
                                dY, mode, opt, k);
                rho[ii] = r.rho;
                surf.l(i, static_cast<Eigen::Index>(k)) = r.log_l;
            } catch (const NumericalError& e) {
                throw NumericalError("candidate " + std::to_string(i) + ": " + e.detail, e.step);
            }
        }
    }
    return surf;
}

}  // namespace qtraj
