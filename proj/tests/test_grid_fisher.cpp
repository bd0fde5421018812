#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "qtraj/errors.hpp"
#include "qtraj/fisher.hpp"
#include "qtraj/grid.hpp"
#include "qtraj/rng.hpp"

using namespace qtraj;

namespace {

/// Brute-force nearest grid point with the same tie/clamp contract, used as
/// an oracle for nearest_grid_index.
int nearest_by_scan(double theta_hat, const ParameterGrid& grid) {
    int best = 1;
    double best_dist = std::abs(theta_hat - grid.value(1));
    for (int i = 2; i <= grid.n_p; ++i) {
        const double dist = std::abs(theta_hat - grid.value(i));
        if (dist < best_dist || (dist == best_dist)) {  // ties go to the larger index
            best = i;
            best_dist = dist;
        }
    }
    return best;
}

LogLikSurface surface_from(const std::vector<double>& thetas,
                           const std::vector<double>& t,
                           const std::function<double(double, double)>& l_of) {
    LogLikSurface s;
    s.t = t;
    s.l.resize(static_cast<Eigen::Index>(thetas.size()), static_cast<Eigen::Index>(t.size()));
    for (std::size_t i = 0; i < thetas.size(); ++i)
        for (std::size_t k = 0; k < t.size(); ++k)
            s.l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                l_of(thetas[i], t[k]);
    return s;
}

}  // namespace

TEST_CASE("build_grid: values and rejection of bad shapes") {
    const ParameterGrid g = build_grid(1.00, 0.01, 3);
    CHECK(g.size() == 4);
    const std::vector<double> v = g.values();
    REQUIRE(v.size() == 4);
    CHECK(v[0] == 1.00);
    CHECK(v[1] == doctest::Approx(1.01).epsilon(1e-15));
    CHECK(v[3] == doctest::Approx(1.03).epsilon(1e-15));

    const ParameterGrid unit = build_grid(0.0, 1.0, 1);
    CHECK(unit.values() == std::vector<double>{0.0, 1.0});

    CHECK_NOTHROW(build_grid(0.0, 1e-15, 2));  // tiny but positive spacing is legal
    CHECK_THROWS_AS(build_grid(0.0, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(0.0, -0.1, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(0.0, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(std::nan(""), 0.1, 2), std::invalid_argument);
}

TEST_CASE("nearest_grid_index: clamping, ties, and agreement with a linear scan") {
    const ParameterGrid g = build_grid(0.5, 0.01, 100);  // 0.5 .. 1.5

    CHECK(nearest_grid_index(-5.0, g) == 1);    // clamps below
    CHECK(nearest_grid_index(0.5, g) == 1);     // index 0 is promoted to 1
    CHECK(nearest_grid_index(100.0, g) == 100); // clamps above
    CHECK(nearest_grid_index(g.value(37), g) == 37);
    CHECK(nearest_grid_index(0.515, g) == 2);   // exact midpoint resolves upward

    CounterRng rng(123, 0);
    for (std::uint64_t k = 0; k < 2000; ++k) {
        const double theta = 0.4 + 1.2 * rng.uniform(k);
        CHECK(nearest_grid_index(theta, g) == nearest_by_scan(theta, g));
    }

    CHECK_THROWS_AS(nearest_grid_index(std::nan(""), g), std::invalid_argument);
    const ParameterGrid degenerate{1.0, 0.01, 0};
    CHECK_THROWS_AS(nearest_grid_index(1.0, degenerate), std::invalid_argument);
}

TEST_CASE("loglik_derivative: polynomial surfaces recover exact differences") {
    const std::vector<double> t{0.0, 0.5, 1.0};
    const ParameterGrid g = build_grid(1.0, 0.01, 4);

    SUBCASE("constant in theta -> zero") {
        const LogLikSurface s = surface_from(g.values(), t, [](double, double tt) { return 3.0 * tt; });
        const Eigen::MatrixXd d = loglik_derivative(s, g.d_theta);
        CHECK(d.rows() == 4);
        CHECK(d.cols() == 3);
        CHECK(d.cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("linear in theta -> the slope, at every time") {
        const LogLikSurface s =
            surface_from(g.values(), t, [](double th, double tt) { return 7.0 * th * tt; });
        const Eigen::MatrixXd d = loglik_derivative(s, g.d_theta);
        for (Eigen::Index r = 0; r < d.rows(); ++r) {
            CHECK(d(r, 0) == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(d(r, 2) == doctest::Approx(7.0).epsilon(1e-9));
        }
    }

    SUBCASE("quadratic: backward difference lands between nodes, central on the node") {
        const LogLikSurface s =
            surface_from(g.values(), t, [](double th, double) { return th * th; });
        const Eigen::MatrixXd back = loglik_derivative(s, g.d_theta);
        // row r = (theta_{r+1}^2 - theta_r^2)/d = theta_{r+1} + theta_r
        CHECK(back(0, 0) == doctest::Approx(2.01).epsilon(1e-9));
        CHECK(back(3, 0) == doctest::Approx(2.07).epsilon(1e-9));

        const Eigen::MatrixXd cen = loglik_derivative(s, g.d_theta, true);
        CHECK(cen.rows() == 4);
        // central difference of theta^2 is exact: 2*theta_{r+1}
        CHECK(cen(0, 0) == doctest::Approx(2.02).epsilon(1e-9));
        CHECK(cen(2, 0) == doctest::Approx(2.06).epsilon(1e-9));
        // the top row has no upper neighbour and falls back to backward
        CHECK(cen(3, 0) == doctest::Approx(2.07).epsilon(1e-9));
    }

    SUBCASE("rejects degenerate input") {
        LogLikSurface one;
        one.t = t;
        one.l = Eigen::MatrixXd::Zero(1, 3);
        CHECK_THROWS_AS(loglik_derivative(one, 0.01), ConfigError);
        const LogLikSurface s =
            surface_from(g.values(), t, [](double th, double) { return th; });
        CHECK_THROWS_AS(loglik_derivative(s, 0.0), ConfigError);
        CHECK_THROWS_AS(loglik_derivative(s, -1.0), ConfigError);
    }
}

TEST_CASE("fisher_series: mean of squared derivatives over selected rows") {
    Eigen::MatrixXd d(3, 2);
    d << 1.0, -1.0, 2.0, 0.0, 3.0, 2.0;
    const std::vector<double> t{0.0, 1.0};

    const FisherSeries all = fisher_series(d, {0, 1, 2}, t);
    CHECK(all.fisher_info[0] == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
    CHECK(all.fisher_info[1] == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(all.stderr_[0] == 0.0);
    CHECK(all.n_ensemble == 1);
    CHECK(all.t == t);

    // repeated rows weight the average
    const FisherSeries weighted = fisher_series(d, {2, 2, 0, 2}, t);
    CHECK(weighted.fisher_info[0] == doctest::Approx((9.0 * 3 + 1.0) / 4.0).epsilon(1e-15));

    const FisherSeries single = fisher_series(d, {1}, t);
    CHECK(single.fisher_info[0] == 4.0);
    CHECK(single.fisher_info[1] == 0.0);

    CHECK_THROWS_AS(fisher_series(d, {}, t), ConfigError);
    CHECK_THROWS_AS(fisher_series(d, {3}, t), ConfigError);
    CHECK_THROWS_AS(fisher_series(d, {-1}, t), ConfigError);
    CHECK_THROWS_AS(fisher_series(d, {0}, std::vector<double>{0.0}), ConfigError);
}

TEST_CASE("ensemble_average: pointwise mean and standard error") {
    FisherSeries a;
    a.t = {0.0, 1.0};
    a.fisher_info = {1.0, 4.0};
    a.stderr_ = {0.0, 0.0};

    SUBCASE("single member: mean is the member, stderr is zero") {
        const FisherSeries avg = ensemble_average({a});
        CHECK(avg.fisher_info == a.fisher_info);
        CHECK(avg.stderr_ == std::vector<double>{0.0, 0.0});
        CHECK(avg.n_ensemble == 1);
    }

    SUBCASE("identical members collapse to zero spread") {
        const FisherSeries avg = ensemble_average({a, a, a, a});
        CHECK(avg.fisher_info == a.fisher_info);
        CHECK(avg.stderr_[0] == 0.0);
        CHECK(avg.stderr_[1] == 0.0);
        CHECK(avg.n_ensemble == 4);
    }

    SUBCASE("two members: frozen hand computation") {
        FisherSeries b = a;
        b.fisher_info = {3.0, 0.0};
        const FisherSeries avg = ensemble_average({a, b});
        CHECK(avg.fisher_info[0] == 2.0);
        CHECK(avg.fisher_info[1] == 2.0);
        // sample sd = sqrt(2)/... : var = ((1-2)^2+(3-2)^2)/1 = 2; se = sqrt(2/2) = 1
        CHECK(avg.stderr_[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(avg.stderr_[1] == doctest::Approx(2.0).epsilon(1e-15));
    }

    SUBCASE("standard error shrinks as 1/sqrt(n) on synthetic noise") {
        CounterRng rng(7, 0);
        std::vector<FisherSeries> members;
        const int n = 500;
        for (int j = 0; j < n; ++j) {
            FisherSeries m;
            m.t = {0.0, 1.0, 2.0};
            m.fisher_info = {0.0, 0.0, 0.0};
            m.stderr_ = {0.0, 0.0, 0.0};
            for (std::size_t k = 0; k < 3; ++k)
                m.fisher_info[k] =
                    5.0 + 0.3 * rng.normal(static_cast<std::uint64_t>(j) * 8 + k);
            members.push_back(m);
        }
        const FisherSeries avg = ensemble_average(members);
        const double expected_se = 0.3 / std::sqrt(static_cast<double>(n));
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(std::abs(avg.fisher_info[k] - 5.0) < 4.0 * expected_se);
            CHECK(avg.stderr_[k] == doctest::Approx(expected_se).epsilon(0.15));
        }
    }

    SUBCASE("rejects mismatched ensembles") {
        FisherSeries shorter;
        shorter.t = {0.0};
        shorter.fisher_info = {1.0};
        shorter.stderr_ = {0.0};
        CHECK_THROWS_AS(ensemble_average({a, shorter}), ConfigError);

        FisherSeries shifted = a;
        shifted.t = {0.0, 1.5};
        CHECK_THROWS_AS(ensemble_average({a, shifted}), ConfigError);
        CHECK_THROWS_AS(ensemble_average({}), ConfigError);
    }
}

TEST_CASE("cramer_rao_bound") {
    CHECK(cramer_rao_bound(0.01, 1) == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(cramer_rao_bound(0.01, 25) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(cramer_rao_bound(0.0, 10) == std::numeric_limits<double>::infinity());
    CHECK(cramer_rao_bound(-1.0, 10) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(cramer_rao_bound(1.0, 0), ConfigError);
}

TEST_CASE("mc_integrate: exact small cases and 1/sqrt(N) convergence") {
    const std::vector<double> xs{1.0, 2.0, 3.0};
    CHECK(mc_integrate(xs, [](double x) { return x; }) == 2.0);
    CHECK(mc_integrate(xs, [](double x) { return x * x; }) ==
          doctest::Approx(14.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(mc_integrate(std::vector<double>{}, [](double x) { return x; }), ConfigError);

    // E[x^2] = 1 for standard normal samples; RMS error over replicates
    // should drop by ~10x from N = 100 to N = 10000.
    const auto rms_error = [](std::size_t n_samples, int n_reps) {
        double acc = 0.0;
        for (int rep = 0; rep < n_reps; ++rep) {
            CounterRng rng(42, static_cast<std::uint64_t>(rep));
            std::vector<double> draws(n_samples);
            for (std::size_t i = 0; i < n_samples; ++i)
                draws[i] = rng.normal(static_cast<std::uint64_t>(i));
            const double est = mc_integrate(draws, [](double x) { return x * x; });
            acc += (est - 1.0) * (est - 1.0);
        }
        return std::sqrt(acc / n_reps);
    };
    const double err_small = rms_error(100, 40);
    const double err_large = rms_error(10000, 40);
    const double ratio = err_small / err_large;
    CHECK(ratio > 5.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("batch_means_stderr: iid case matches the naive standard error") {
    CounterRng rng(9, 0);
    const std::size_t n = 20000;
    std::vector<double> values(n);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = 2.0 + 0.7 * rng.normal(static_cast<std::uint64_t>(i));
        sum += values[i];
        sum2 += values[i] * values[i];
    }
    const double mean = sum / static_cast<double>(n);
    const double naive_se =
        std::sqrt((sum2 / static_cast<double>(n) - mean * mean) / static_cast<double>(n - 1));
    const double batched = batch_means_stderr(values, 50);
    // For iid data batch means reproduce the naive estimate up to batch noise.
    CHECK(batched == doctest::Approx(naive_se).epsilon(0.35));

    // correlated sequence: batch means must report a larger uncertainty
    std::vector<double> corr(n);
    double state = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        state = 0.99 * state + 0.1 * rng.normal(static_cast<std::uint64_t>(n + i));
        corr[i] = state;
    }
    double csum = 0.0, csum2 = 0.0;
    for (double v : corr) {
        csum += v;
        csum2 += v * v;
    }
    const double cmean = csum / static_cast<double>(n);
    const double cnaive =
        std::sqrt((csum2 / static_cast<double>(n) - cmean * cmean) / static_cast<double>(n - 1));
    CHECK(batch_means_stderr(corr, 50) > 3.0 * cnaive);

    CHECK_THROWS_AS(batch_means_stderr(std::vector<double>(10, 1.0), 50), ConfigError);
    CHECK_THROWS_AS(batch_means_stderr(values, 1), ConfigError);

    // remainder handling: end-aligned batches drop the oldest values
    std::vector<double> tail(101, 0.0);
    tail[0] = 1e6;  // the one dropped value must not affect the estimate
    CHECK(batch_means_stderr(tail, 50) == 0.0);
}
