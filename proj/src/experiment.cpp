#include "qtraj/experiment.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <functional>
#include <thread>

#include "qtraj/csv.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/log.hpp"
#include "qtraj/qfi.hpp"
#include "qtraj/qubit.hpp"
#include "qtraj/rng.hpp"

namespace qtraj {

namespace {

/// Run fn(0..n-1) across up to `workers` threads with strided index
/// assignment. Callers aggregate by index, so results are independent of
/// scheduling; the first worker exception (by worker rank) is rethrown.
void parallel_over(int n, int workers, const std::function<void(int)>& fn) {
    const int w = std::clamp(workers, 1, std::max(n, 1));
    if (w == 1) {
        for (int k = 0; k < n; ++k) fn(k);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(w));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int rank = 0; rank < w; ++rank) {
        pool.emplace_back([&, rank] {
            try {
                for (int k = rank; k < n; k += w) fn(k);
            } catch (...) {
                errors[static_cast<std::size_t>(rank)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void ensure_out_dir(const ExperimentConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
}

std::string artifact_path(const ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

ParameterGrid grid_from(const ExperimentConfig& cfg) {
    return build_grid(cfg.theta0, cfg.d_theta, cfg.n_p);
}

/// Ensemble reduction shared by the fisher experiment and the operator
/// sweep. Returns {single (trajectory 0), ensemble}.
std::pair<FisherSeries, FisherSeries> fisher_ensemble(const ExperimentConfig& cfg,
                                                      const ParameterGrid& grid,
                                                      const std::vector<int>& rows) {
    const int n_traj = cfg.n_trajectories;

    if (cfg.average_derivatives_first) {
        // Experimental reduction: average dl/dtheta across the ensemble
        // before squaring. Sequential so the accumulation order is fixed.
        logf(LogLevel::info,
             "average_derivatives_first=true: running %d trajectories sequentially", n_traj);
        Eigen::MatrixXd acc;
        FisherSeries single;
        std::vector<double> times;
        for (int k = 0; k < n_traj; ++k) {
            const TrajectoryRecord rec =
                simulate_trajectory(cfg.to_sim_config(static_cast<std::uint64_t>(k)));
            const LogLikSurface surf = run_filter_bank(rec, grid, cfg.to_model_params(),
                                                       cfg.normalization(), cfg.to_sim_config(0).step);
            const Eigen::MatrixXd d =
                loglik_derivative(surf, cfg.d_theta, cfg.central_differences());
            if (k == 0) {
                acc = d;
                times = surf.t;
                single = fisher_series(d, rows, surf.t);
            } else {
                acc += d;
            }
        }
        acc /= static_cast<double>(n_traj);
        FisherSeries ensemble = fisher_series(acc, rows, times);
        ensemble.n_ensemble = n_traj;
        return {std::move(single), std::move(ensemble)};
    }

    std::vector<FisherSeries> members(static_cast<std::size_t>(n_traj));
    parallel_over(n_traj, cfg.workers, [&](int k) {
        members[static_cast<std::size_t>(k)] =
            fisher_series_for_trajectory(cfg, grid, rows, static_cast<std::uint64_t>(k));
    });
    FisherSeries ensemble = ensemble_average(members);
    return {std::move(members.front()), std::move(ensemble)};
}

}  // namespace

MHChain run_pre_estimation(const ExperimentConfig& cfg) {
    const auto standard_normal_log = [](double x) { return -0.5 * x * x; };
    const CounterRng rng = CounterRng::for_label(cfg.seed, "mh");
    return mh_sample(standard_normal_log, cfg.proposal_sigma, cfg.mh_x0, cfg.n_a, cfg.burn_in,
                     cfg.n_m, rng);
}

std::vector<int> derivative_rows(const MHChain& chain, const ExperimentConfig& cfg,
                                 const ParameterGrid& grid) {
    const std::vector<double> retained = chain.retained();
    if (retained.empty()) throw ConfigError("derivative_rows: chain retained no samples");
    std::vector<int> rows;
    rows.reserve(retained.size());
    for (double delta : retained) {
        const double theta_hat = cfg.omega + cfg.prior_scale * delta;
        rows.push_back(nearest_grid_index(theta_hat, grid) - 1);
    }
    return rows;
}

FisherSeries fisher_series_for_trajectory(const ExperimentConfig& cfg, const ParameterGrid& grid,
                                          const std::vector<int>& rows,
                                          std::uint64_t trajectory_index) {
    const SimConfig sim = cfg.to_sim_config(trajectory_index);
    const TrajectoryRecord rec = simulate_trajectory(sim);
    const LogLikSurface surf =
        run_filter_bank(rec, grid, cfg.to_model_params(), cfg.normalization(), sim.step);
    const Eigen::MatrixXd d = loglik_derivative(surf, cfg.d_theta, cfg.central_differences());
    return fisher_series(d, rows, surf.t);
}

std::vector<double> benchmark_curve(const ExperimentConfig& cfg,
                                    const std::vector<double>& times) {
    const Vector2c psi0 =
        pure_state_from_bloch(BlochVector{cfg.initial_x, cfg.initial_y, cfg.initial_z});
    return qfi_curve(cfg.to_model_params(), psi0, times, cfg.qfi_delta_theta);
}

void run_trajectory_demo(const ExperimentConfig& cfg) {
    cfg.validate();
    ensure_out_dir(cfg);
    const SimConfig sim = cfg.to_sim_config(0);
    const TrajectoryRecord rec = simulate_trajectory(sim);
    // Log-likelihood at the true parameter: a single-point candidate "grid".
    const ParameterGrid self{cfg.omega, cfg.d_theta, 0};
    const LogLikSurface surf =
        run_filter_bank(rec, self, cfg.to_model_params(), cfg.normalization(), sim.step);
    std::vector<double> loglik(surf.l.cols());
    for (Eigen::Index k = 0; k < surf.l.cols(); ++k) loglik[static_cast<std::size_t>(k)] = surf.l(0, k);
    write_csv(artifact_path(cfg, "trajectory.csv"), trajectory_table(rec, &loglik));
    logf(LogLevel::info, "wrote %s (%zu steps)", artifact_path(cfg, "trajectory.csv").c_str(),
         rec.steps());
}

void run_fisher_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ensure_out_dir(cfg);
    const ParameterGrid grid = grid_from(cfg);
    const MHChain chain = run_pre_estimation(cfg);
    logf(LogLevel::info, "pre-estimation chain: %d samples, acceptance rate %.3f", cfg.n_a,
         chain.acceptance_rate());
    const std::vector<int> rows = derivative_rows(chain, cfg, grid);

    const auto [single, ensemble] = fisher_ensemble(cfg, grid, rows);
    const std::vector<double> bench = benchmark_curve(cfg, ensemble.t);

    write_csv(artifact_path(cfg, "mh_chain.csv"), mh_table(chain));
    write_csv(artifact_path(cfg, "fisher_single.csv"), fisher_table(single));
    write_csv(artifact_path(cfg, "fisher_ensemble.csv"), fisher_table(ensemble));
    write_csv(artifact_path(cfg, "qfi.csv"), qfi_table(ensemble.t, bench));

    const double i_end = ensemble.fisher_info.back();
    logf(LogLevel::info, "final-time Fisher information %.6g; Cramer-Rao bound %.6g for N=%d",
         i_end, cramer_rao_bound(i_end, cfg.n_trajectories), cfg.n_trajectories);
}

void run_operator_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    ensure_out_dir(cfg);
    const ParameterGrid grid = grid_from(cfg);
    const MHChain chain = run_pre_estimation(cfg);
    const std::vector<int> rows = derivative_rows(chain, cfg, grid);
    write_csv(artifact_path(cfg, "mh_chain.csv"), mh_table(chain));

    std::vector<double> times;
    for (const char* op : {"sigma_x", "sigma_y", "sigma_z"}) {
        ExperimentConfig sub = cfg;
        sub.measurement_operator = op;
        sub.validate();
        const auto [single, ensemble] = fisher_ensemble(sub, grid, rows);
        (void)single;
        times = ensemble.t;
        const std::string name = std::string("sweep_") + op + ".csv";
        write_csv(artifact_path(cfg, name), fisher_table(ensemble));
        logf(LogLevel::info, "wrote %s", artifact_path(cfg, name).c_str());
    }
    write_csv(artifact_path(cfg, "qfi.csv"), qfi_table(times, benchmark_curve(cfg, times)));
}

void run_qfi_curve(const ExperimentConfig& cfg) {
    cfg.validate();
    ensure_out_dir(cfg);
    const std::size_t n = cfg.to_sim_config(0).steps();
    std::vector<double> times(n + 1);
    for (std::size_t k = 0; k <= n; ++k) times[k] = static_cast<double>(k) * cfg.dt;
    write_csv(artifact_path(cfg, "qfi.csv"), qfi_table(times, benchmark_curve(cfg, times)));
}

}  // namespace qtraj
