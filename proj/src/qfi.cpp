#include "qtraj/qfi.hpp"

#include <cmath>
#include <complex>

#include "qtraj/errors.hpp"
#include "qtraj/qubit.hpp"

namespace qtraj {

namespace {

/// Remove the global phase of psi relative to ref: multiply psi by
/// exp(-i arg<ref|psi>) so the overlap with ref becomes real non-negative.
Vector2c phase_align(const Vector2c& psi, const Vector2c& ref) {
    const Complex overlap = ref.dot(psi);  // Eigen dot conjugates the left argument
    const double mag = std::abs(overlap);
    if (mag < 1e-300) return psi;  // orthogonal: phase undefined, leave as is
    return psi * (std::conj(overlap) / mag);
}

}  // namespace

Vector2c evolve_pure(const ModelParams& params, const Vector2c& psi0, double t) {
    params.validate();
    if (std::abs(psi0.norm() - 1.0) > 1e-12)
        throw ConfigError("evolve_pure: initial state must be normalized");
    return propagator(hamiltonian(params), t) * psi0;
}

double qfi(const ModelParams& params, const Vector2c& psi0, double t, double delta_theta) {
    if (!(delta_theta >= 1e-8))
        throw ConfigError("qfi: delta_theta below finite-difference noise floor");
    ModelParams plus = params;
    ModelParams minus = params;
    plus.omega = params.omega + delta_theta;
    minus.omega = params.omega - delta_theta;

    const Vector2c psi_t = evolve_pure(params, psi0, t);
    const Vector2c psi_p = phase_align(evolve_pure(plus, psi0, t), psi_t);
    const Vector2c psi_m = phase_align(evolve_pure(minus, psi0, t), psi_t);

    const Vector2c dpsi = (psi_p - psi_m) / (2.0 * delta_theta);
    const double grad_sq = dpsi.squaredNorm();
    const Complex overlap = psi_t.dot(dpsi);
    const double info = 4.0 * (grad_sq - std::norm(overlap));
    // Finite differencing can undershoot zero by rounding; clamp the
    // mathematically non-negative quantity.
    return info > 0.0 ? info : 0.0;
}

std::vector<double> qfi_curve(const ModelParams& params, const Vector2c& psi0,
                              const std::vector<double>& times, double delta_theta) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(qfi(params, psi0, t, delta_theta));
    return out;
}

}  // namespace qtraj
