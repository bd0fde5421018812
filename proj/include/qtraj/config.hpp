// Experiment configuration: every knob of the simulator, filter bank,
// Metropolis-Hastings sampler, and benchmark in one flat structure. Parsed
// from `key = value` text (# comments) or an equivalent JSON object.
#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "qtraj/sme.hpp"
#include "qtraj/types.hpp"

namespace qtraj {

struct ExperimentConfig {
    // Model
    double delta = 1.73;
    double omega = 1.0;
    double eta = 0.01;
    std::string measurement_operator = "sigma_y";  // sigma_x | sigma_y | sigma_z
    double initial_x = 0.0;
    double initial_y = 0.0;
    double initial_z = 1.0;

    // Integration
    double dt = 1e-3;
    double t_max = 10.0;
    std::string integrator = "split_step";  // split_step | euler_maruyama
    std::string normalization_mode =
        "unnormalized_with_likelihood";  // or renormalize_each_step
    double bloch_ball_tolerance = 1e-6;

    // Ensemble
    std::uint64_t seed = 0;
    int n_trajectories = 500;
    int workers = 1;

    // Candidate grid; theta0 left unset (NaN) centers the grid on omega.
    double theta0 = kAuto;
    double d_theta = 0.01;
    int n_p = 100;

    // Metropolis-Hastings pre-estimation; burn_in < 0 means 20% of n_a.
    int n_a = 5000;
    int burn_in = -1;
    int n_m = 1000;
    double proposal_sigma = 0.5;
    double mh_x0 = 0.0;
    double prior_scale = kAuto;  // NaN sentinel: d_theta * n_p / 6

    // Benchmark & derivatives
    double qfi_delta_theta = 1e-5;
    std::string derivative_scheme = "backward";  // backward | central
    bool average_derivatives_first = false;      // experimental: mean before squaring

    std::string out_dir = "out";

    /// "Derive from other fields" marker for theta0 / prior_scale.
    static constexpr double kAuto = std::numeric_limits<double>::quiet_NaN();

    /// Resolve dependent defaults (theta0, burn_in, prior_scale).
    void finalize_defaults();
    /// Full cross-field validation; throws ConfigError.
    void validate() const;

    PauliAxis measurement_axis() const;
    Integrator integrator_kind() const;
    NormalizationMode normalization() const;
    bool central_differences() const;
    ModelParams to_model_params() const;
    SimConfig to_sim_config(std::uint64_t trajectory_index) const;
};

/// Parse a config file; format inferred from content (leading '{' means
/// JSON, otherwise flat key=value lines). Unknown keys are errors.
/// finalize_defaults() is applied; validate() is not.
ExperimentConfig load_config(const std::string& path);

/// Parse from an in-memory string (same rules as load_config).
ExperimentConfig parse_config(const std::string& text);

}  // namespace qtraj
