#include "qtraj/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

#include "qtraj/errors.hpp"

namespace qtraj {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
    const char* s = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    const double r = std::nearbyint(v);
    if (!(std::abs(v - r) < 1e-9) || std::abs(r) > 2e9)
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
    return static_cast<int>(r);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    const char* s = value.c_str();
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0' || value.find('-') != std::string::npos)
        throw ConfigError("config: key '" + key + "' expects an unsigned integer, got '" + value +
                          "'");
    return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config: key '" + key + "' expects true/false, got '" + value + "'");
}

/// Assign one key from its text form; shared by the flat and JSON parsers.
void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    static const std::map<std::string, std::function<void(ExperimentConfig&, const std::string&,
                                                          const std::string&)>>
        setters = {
            {"delta", [](auto& c, auto& k, auto& v) { c.delta = parse_double(k, v); }},
            {"omega", [](auto& c, auto& k, auto& v) { c.omega = parse_double(k, v); }},
            {"eta", [](auto& c, auto& k, auto& v) { c.eta = parse_double(k, v); }},
            {"measurement_operator", [](auto& c, auto&, auto& v) { c.measurement_operator = v; }},
            {"initial_x", [](auto& c, auto& k, auto& v) { c.initial_x = parse_double(k, v); }},
            {"initial_y", [](auto& c, auto& k, auto& v) { c.initial_y = parse_double(k, v); }},
            {"initial_z", [](auto& c, auto& k, auto& v) { c.initial_z = parse_double(k, v); }},
            {"dt", [](auto& c, auto& k, auto& v) { c.dt = parse_double(k, v); }},
            {"t_max", [](auto& c, auto& k, auto& v) { c.t_max = parse_double(k, v); }},
            {"integrator", [](auto& c, auto&, auto& v) { c.integrator = v; }},
            {"normalization_mode", [](auto& c, auto&, auto& v) { c.normalization_mode = v; }},
            {"bloch_ball_tolerance",
             [](auto& c, auto& k, auto& v) { c.bloch_ball_tolerance = parse_double(k, v); }},
            {"seed", [](auto& c, auto& k, auto& v) { c.seed = parse_u64(k, v); }},
            {"n_trajectories", [](auto& c, auto& k, auto& v) { c.n_trajectories = parse_int(k, v); }},
            {"workers", [](auto& c, auto& k, auto& v) { c.workers = parse_int(k, v); }},
            {"theta0", [](auto& c, auto& k, auto& v) { c.theta0 = parse_double(k, v); }},
            {"d_theta", [](auto& c, auto& k, auto& v) { c.d_theta = parse_double(k, v); }},
            {"n_p", [](auto& c, auto& k, auto& v) { c.n_p = parse_int(k, v); }},
            {"n_a", [](auto& c, auto& k, auto& v) { c.n_a = parse_int(k, v); }},
            {"burn_in", [](auto& c, auto& k, auto& v) { c.burn_in = parse_int(k, v); }},
            {"n_m", [](auto& c, auto& k, auto& v) { c.n_m = parse_int(k, v); }},
            {"proposal_sigma",
             [](auto& c, auto& k, auto& v) { c.proposal_sigma = parse_double(k, v); }},
            {"mh_x0", [](auto& c, auto& k, auto& v) { c.mh_x0 = parse_double(k, v); }},
            {"prior_scale", [](auto& c, auto& k, auto& v) { c.prior_scale = parse_double(k, v); }},
            {"qfi_delta_theta",
             [](auto& c, auto& k, auto& v) { c.qfi_delta_theta = parse_double(k, v); }},
            {"derivative_scheme", [](auto& c, auto&, auto& v) { c.derivative_scheme = v; }},
            {"average_derivatives_first",
             [](auto& c, auto& k, auto& v) { c.average_derivatives_first = parse_bool(k, v); }},
            {"out_dir", [](auto& c, auto&, auto& v) { c.out_dir = v; }},
        };
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("config: unknown key '" + key + "'");
    it->second(cfg, key, value);
}

ExperimentConfig parse_flat(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected 'key = value' at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: empty key or value at line " + std::to_string(line_no));
        try {
            apply_key(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
        }
    }
    return cfg;
}

std::string json_scalar_to_string(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
        return buf;
    }
    throw ConfigError("config: key '" + key + "' has unsupported JSON type");
}

ExperimentConfig parse_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: JSON root must be an object");
    ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "seed" && value.is_number_unsigned()) {
            cfg.seed = value.get<std::uint64_t>();
            continue;
        }
        apply_key(cfg, key, json_scalar_to_string(value, key));
    }
    return cfg;
}

}  // namespace

void ExperimentConfig::finalize_defaults() {
    if (std::isnan(theta0)) theta0 = omega - static_cast<double>(n_p) * d_theta / 2.0;
    if (burn_in < 0) burn_in = n_a / 5;
    if (std::isnan(prior_scale)) prior_scale = d_theta * static_cast<double>(n_p) / 6.0;
}

void ExperimentConfig::validate() const {
    to_model_params().validate();            // delta/omega/eta/operator
    to_sim_config(0).validate();             // dt/t_max/initial state/tolerance
    if (std::isnan(theta0) || std::isnan(prior_scale))
        throw ConfigError("config: call finalize_defaults before validate");
    if (n_trajectories < 1) throw ConfigError("config: n_trajectories must be >= 1");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
    if (!(d_theta > 0.0)) throw ConfigError("config: d_theta must be positive");
    if (n_p < 1) throw ConfigError("config: n_p must be >= 1");
    if (n_a < 2) throw ConfigError("config: n_a must be >= 2");
    if (burn_in < 0 || burn_in >= n_a) throw ConfigError("config: burn_in must be in [0, n_a)");
    if (n_m < 1 || n_m > n_a - burn_in)
        throw ConfigError("config: n_m must be in [1, n_a - burn_in]");
    if (!(proposal_sigma > 0.0)) throw ConfigError("config: proposal_sigma must be positive");
    if (!(prior_scale > 0.0)) throw ConfigError("config: prior_scale must be positive");
    if (!(qfi_delta_theta >= 1e-8))
        throw ConfigError("config: qfi_delta_theta must be >= 1e-8");
    if (derivative_scheme != "backward" && derivative_scheme != "central")
        throw ConfigError("config: derivative_scheme must be backward or central");
    if (out_dir.empty()) throw ConfigError("config: out_dir must be nonempty");
    measurement_axis();
    integrator_kind();
    normalization();
}

PauliAxis ExperimentConfig::measurement_axis() const {
    if (measurement_operator == "sigma_x") return PauliAxis::x;
    if (measurement_operator == "sigma_y") return PauliAxis::y;
    if (measurement_operator == "sigma_z") return PauliAxis::z;
    throw ConfigError("config: measurement_operator must be sigma_x, sigma_y or sigma_z");
}

Integrator ExperimentConfig::integrator_kind() const {
    if (integrator == "split_step") return Integrator::SplitStep;
    if (integrator == "euler_maruyama") return Integrator::EulerMaruyama;
    throw ConfigError("config: integrator must be split_step or euler_maruyama");
}

NormalizationMode ExperimentConfig::normalization() const {
    if (normalization_mode == "unnormalized_with_likelihood")
        return NormalizationMode::UnnormalizedWithLikelihood;
    if (normalization_mode == "renormalize_each_step")
        return NormalizationMode::RenormalizeEachStep;
    throw ConfigError(
        "config: normalization_mode must be unnormalized_with_likelihood or "
        "renormalize_each_step");
}

bool ExperimentConfig::central_differences() const {
    if (derivative_scheme == "central") return true;
    if (derivative_scheme == "backward") return false;
    throw ConfigError("config: derivative_scheme must be backward or central");
}

ModelParams ExperimentConfig::to_model_params() const {
    ModelParams p;
    p.delta = delta;
    p.omega = omega;
    p.eta = eta;
    p.meas_op = pauli(measurement_axis());
    return p;
}

SimConfig ExperimentConfig::to_sim_config(std::uint64_t trajectory_index) const {
    SimConfig sim;
    sim.params = to_model_params();
    sim.initial_bloch = BlochVector{initial_x, initial_y, initial_z};
    sim.dt = dt;
    sim.t_max = t_max;
    sim.seed = seed;
    sim.trajectory_index = trajectory_index;
    sim.step.integrator = integrator_kind();
    sim.step.bloch_ball_tolerance = bloch_ball_tolerance;
    return sim;
}

ExperimentConfig parse_config(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    ExperimentConfig cfg =
        (i < text.size() && text[i] == '{') ? parse_json(text) : parse_flat(text);
    cfg.finalize_defaults();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("config: cannot open: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

}  // namespace qtraj
