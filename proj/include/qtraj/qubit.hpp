// Qubit algebra: Hamiltonian, measurement superoperators, Bloch maps.
// All functions are pure and allocation-free on fixed-size Eigen types.
#pragma once

#include "qtraj/types.hpp"

namespace qtraj {

/// H = (delta/2) sigma_x + (omega/2) sigma_z
inline Matrix2c hamiltonian(double delta, double omega) {
    Matrix2c h;
    h << 0.5 * omega, 0.5 * delta, 0.5 * delta, -0.5 * omega;
    return h;
}

inline Matrix2c hamiltonian(const ModelParams& p) { return hamiltonian(p.delta, p.omega); }

/// D[A]rho = A rho A^dag - (A^dag A rho + rho A^dag A)/2
inline Matrix2c dissipator(const Matrix2c& a, const Matrix2c& rho) {
    const Matrix2c ada = a.adjoint() * a;
    return a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
}

/// M[A]rho = A rho + rho A^dag  (trace of this drives the measurement record)
inline Matrix2c measurement_superop(const Matrix2c& a, const Matrix2c& rho) {
    return a * rho + rho * a.adjoint();
}

/// H[A]rho = M[A]rho - Tr(M[A]rho) rho; defined for unit-trace states only.
inline Matrix2c innovation_superop(const Matrix2c& a, const Matrix2c& rho) {
    const double tr = rho.trace().real();
    if (std::abs(rho.trace().imag()) > 1e-10 || std::abs(tr - 1.0) > 1e-10)
        throw std::invalid_argument("innovation_superop: state must have unit trace");
    const Matrix2c m = measurement_superop(a, rho);
    return m - m.trace().real() * rho;
}

/// rho = (I + x sigma_x + y sigma_y + z sigma_z)/2, with the diagonal built so
/// that the floating-point trace is exactly 1 (the smaller entry is the exact
/// complement of the larger one).
inline Matrix2c bloch_compose(const BlochVector& b) {
    Matrix2c rho;
    if (b.z >= 0.0) {
        const double d0 = 0.5 * (1.0 + b.z);
        rho(0, 0) = d0;
        rho(1, 1) = 1.0 - d0;
    } else {
        const double d1 = 0.5 * (1.0 - b.z);
        rho(1, 1) = d1;
        rho(0, 0) = 1.0 - d1;
    }
    rho(0, 1) = Complex(0.5 * b.x, -0.5 * b.y);
    rho(1, 0) = Complex(0.5 * b.x, 0.5 * b.y);
    return rho;
}

/// Inverse of bloch_compose; requires unit trace.
inline BlochVector bloch_decompose(const Matrix2c& rho) {
    const Complex tr = rho.trace();
    if (std::abs(tr.imag()) > 1e-10 || std::abs(tr.real() - 1.0) > 1e-10)
        throw std::invalid_argument("bloch_decompose: state must have unit trace");
    BlochVector b;
    b.x = 2.0 * rho(1, 0).real();
    b.y = 2.0 * rho(1, 0).imag();
    b.z = rho(0, 0).real() - rho(1, 1).real();
    return b;
}

inline double purity(const Matrix2c& rho) { return (rho * rho).trace().real(); }

/// Divide by the trace and rebuild through Bloch coordinates so the result has
/// floating-point trace exactly 1 and is exactly Hermitian.
inline Matrix2c renormalize(const Matrix2c& rho) {
    const double tr = rho.trace().real();
    if (!(tr > 0.0) || !std::isfinite(tr))
        throw std::invalid_argument("renormalize: trace must be positive and finite");
    BlochVector b;
    b.x = (rho(1, 0).real() + rho(0, 1).real()) / tr;
    b.y = (rho(1, 0).imag() - rho(0, 1).imag()) / tr;
    b.z = (rho(0, 0).real() - rho(1, 1).real()) / tr;
    return bloch_compose(b);
}

/// Pure state |psi> with the given Bloch direction; requires |b| = 1 within
/// tolerance. Convention: psi = (cos(theta/2), e^{i phi} sin(theta/2)) with
/// z = cos(theta), x + i y = sin(theta) e^{i phi}.
inline Vector2c pure_state_from_bloch(const BlochVector& b, double tol = 1e-9) {
    if (std::abs(b.norm_squared() - 1.0) > 2.0 * tol)
        throw std::invalid_argument("pure_state_from_bloch: Bloch vector must lie on the sphere");
    const double c = std::sqrt(std::max(0.0, 0.5 * (1.0 + b.z)));
    const double s = std::sqrt(std::max(0.0, 0.5 * (1.0 - b.z)));
    const double phi = std::atan2(b.y, b.x);
    Vector2c psi;
    psi << Complex(c, 0.0), std::polar(s, phi);
    return psi;
}

/// Exact 2x2 propagator exp(-i H t) for Hermitian H via spectral form.
inline Matrix2c propagator(const Matrix2c& h, double t) {
    const double a = 0.5 * h.trace().real();
    const Matrix2c h0 = h - a * Matrix2c::Identity();
    // h0 is traceless Hermitian: h0^2 = w^2 I
    const double w2 = (h0 * h0)(0, 0).real();
    const double w = std::sqrt(std::max(w2, 0.0));
    const Complex phase = std::exp(Complex(0.0, -a * t));
    if (w * t == 0.0 || w < 1e-300)
        return phase * (Matrix2c::Identity() - Complex(0.0, t) * h0);
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    return phase * (c * Matrix2c::Identity() - Complex(0.0, s / w) * h0);
}

}  // namespace qtraj
