// Core dense types and model parameters for the monitored-qubit toolkit.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace qtraj {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

inline Matrix2c identity2() { return Matrix2c::Identity(); }

inline Matrix2c pauli_x() {
    Matrix2c m;
    m << 0, 1, 1, 0;
    return m;
}

// convention: sigma_y = [[0, -i], [i, 0]]
inline Matrix2c pauli_y() {
    Matrix2c m;
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline Matrix2c pauli_z() {
    Matrix2c m;
    m << 1, 0, 0, -1;
    return m;
}

enum class PauliAxis { x, y, z };

inline Matrix2c pauli(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::x: return pauli_x();
        case PauliAxis::y: return pauli_y();
        default: return pauli_z();
    }
}

inline const char* pauli_name(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::x: return "sigma_x";
        case PauliAxis::y: return "sigma_y";
        default: return "sigma_z";
    }
}

/// State of a qubit as coordinates on (or inside) the unit ball.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    double norm_squared() const { return x * x + y * y + z * z; }
    bool physical(double tol = 1e-9) const { return norm_squared() <= 1.0 + tol; }
};

inline bool is_hermitian(const Matrix2c& a, double tol = 1e-12) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Qubit model: detuning-like drive `delta`, unknown parameter `omega`,
/// measurement efficiency `eta`, and measurement operator `meas_op`.
struct ModelParams {
    double delta = 1.73;
    double omega = 1.0;
    double eta = 0.01;
    Matrix2c meas_op = pauli_y();

    void validate() const;
};

}  // namespace qtraj
