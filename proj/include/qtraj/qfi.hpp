// Closed-system quantum Fisher information for the qubit Hamiltonian family
// H(omega) = (delta/2) sigma_x + (omega/2) sigma_z, computed from
// phase-aligned finite-difference state derivatives:
//   I_Q(t) = 4 [ <d psi|d psi> - |<psi|d psi>|^2 ].
#pragma once

#include <vector>

#include "qtraj/types.hpp"

namespace qtraj {

/// Evolve a normalized pure state for time t under H(params).
Vector2c evolve_pure(const ModelParams& params, const Vector2c& psi0, double t);

/// Quantum Fisher information of the drive amplitude omega at time t, via a
/// central difference of step delta_theta in omega. States at omega +/-
/// delta_theta are phase-aligned to the central state before differencing.
double qfi(const ModelParams& params, const Vector2c& psi0, double t,
           double delta_theta = 1e-5);

/// qfi evaluated on a time axis.
std::vector<double> qfi_curve(const ModelParams& params, const Vector2c& psi0,
                              const std::vector<double>& times, double delta_theta = 1e-5);

}  // namespace qtraj
