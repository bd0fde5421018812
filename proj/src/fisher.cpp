#include "qtraj/fisher.hpp"

#include <cmath>
#include <limits>

#include "qtraj/errors.hpp"

namespace qtraj {

Eigen::MatrixXd loglik_derivative(const LogLikSurface& surface, double d_theta, bool central) {
    const Eigen::Index n_rows = surface.l.rows();
    const Eigen::Index n_cols = surface.l.cols();
    if (n_rows < 2) throw ConfigError("loglik_derivative: need at least two candidate rows");
    if (!(d_theta > 0.0)) throw ConfigError("loglik_derivative: d_theta must be positive");

    Eigen::MatrixXd d(n_rows - 1, n_cols);
    for (Eigen::Index r = 0; r + 1 < n_rows; ++r) {
        if (central && r + 2 < n_rows) {
            // Central difference at grid index r+1 uses neighbours r and r+2;
            // the last row has no upper neighbour and falls back to backward.
            d.row(r) = (surface.l.row(r + 2) - surface.l.row(r)) / (2.0 * d_theta);
        } else {
            d.row(r) = (surface.l.row(r + 1) - surface.l.row(r)) / d_theta;
        }
    }
    return d;
}

FisherSeries fisher_series(const Eigen::MatrixXd& derivs, const std::vector<int>& rows,
                           const std::vector<double>& t) {
    if (rows.empty()) throw ConfigError("fisher_series: empty row selection");
    if (static_cast<Eigen::Index>(t.size()) != derivs.cols())
        throw ConfigError("fisher_series: time axis length does not match derivative columns");
    for (int r : rows)
        if (r < 0 || r >= derivs.rows())
            throw ConfigError("fisher_series: row index out of range");

    FisherSeries out;
    out.t = t;
    out.fisher_info.assign(t.size(), 0.0);
    out.stderr_.assign(t.size(), 0.0);
    out.n_ensemble = 1;
    const double inv_m = 1.0 / static_cast<double>(rows.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        double acc = 0.0;
        for (int r : rows) {
            const double g = derivs(r, static_cast<Eigen::Index>(k));
            acc += g * g;
        }
        out.fisher_info[k] = acc * inv_m;
    }
    return out;
}

FisherSeries ensemble_average(const std::vector<FisherSeries>& members) {
    if (members.empty()) throw ConfigError("ensemble_average: empty ensemble");
    const std::size_t n_t = members.front().t.size();
    for (const auto& m : members) {
        if (m.t.size() != n_t || m.fisher_info.size() != n_t)
            throw ConfigError("ensemble_average: inconsistent series lengths");
        if (m.t != members.front().t)
            throw ConfigError("ensemble_average: mismatched time axes");
    }

    const int n = static_cast<int>(members.size());
    FisherSeries out;
    out.t = members.front().t;
    out.fisher_info.assign(n_t, 0.0);
    out.stderr_.assign(n_t, 0.0);
    out.n_ensemble = n;
    for (std::size_t k = 0; k < n_t; ++k) {
        double mean = 0.0;
        for (const auto& m : members) mean += m.fisher_info[k];
        mean /= n;
        double var = 0.0;
        for (const auto& m : members) {
            const double d = m.fisher_info[k] - mean;
            var += d * d;
        }
        out.fisher_info[k] = mean;
        out.stderr_[k] = (n > 1) ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    }
    return out;
}

double cramer_rao_bound(double fisher_info, int n_ensemble) {
    if (n_ensemble < 1) throw ConfigError("cramer_rao_bound: n_ensemble must be >= 1");
    if (!(fisher_info > 0.0)) return std::numeric_limits<double>::infinity();
    return 1.0 / (static_cast<double>(n_ensemble) * fisher_info);
}

double mc_integrate(std::span<const double> samples, const std::function<double(double)>& f) {
    if (samples.empty()) throw ConfigError("mc_integrate: empty sample set");
    double acc = 0.0;
    for (double x : samples) acc += f(x);
    return acc / static_cast<double>(samples.size());
}

double batch_means_stderr(std::span<const double> values, int n_batches) {
    if (n_batches < 2) throw ConfigError("batch_means_stderr: need at least two batches");
    const std::size_t n = values.size();
    if (n < static_cast<std::size_t>(2 * n_batches))
        throw ConfigError("batch_means_stderr: too few values for requested batch count");
    const std::size_t batch = n / static_cast<std::size_t>(n_batches);
    const std::size_t used = batch * static_cast<std::size_t>(n_batches);
    // Drop the oldest remainder so batches are equal-sized and end-aligned.
    const std::size_t start = n - used;

    std::vector<double> means(static_cast<std::size_t>(n_batches), 0.0);
    for (int b = 0; b < n_batches; ++b) {
        double acc = 0.0;
        const std::size_t lo = start + static_cast<std::size_t>(b) * batch;
        for (std::size_t i = lo; i < lo + batch; ++i) acc += values[i];
        means[static_cast<std::size_t>(b)] = acc / static_cast<double>(batch);
    }
    double grand = 0.0;
    for (double m : means) grand += m;
    grand /= n_batches;
    double var = 0.0;
    for (double m : means) {
        const double d = m - grand;
        var += d * d;
    }
    var /= (n_batches - 1.0);
    return std::sqrt(var / n_batches);
}

}  // namespace qtraj
