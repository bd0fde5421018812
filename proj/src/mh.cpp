#include "qtraj/mh.hpp"

#include <cmath>

#include "qtraj/errors.hpp"

namespace qtraj {

std::vector<double> MHChain::retained() const {
    if (n_retained <= 0 || samples.size() < static_cast<std::size_t>(n_retained)) return {};
    return std::vector<double>(samples.end() - n_retained, samples.end());
}

double MHChain::acceptance_rate() const {
    if (accepted.size() < 2) return 0.0;
    std::size_t n_acc = 0;
    for (std::size_t k = 1; k < accepted.size(); ++k) n_acc += accepted[k] ? 1u : 0u;
    return static_cast<double>(n_acc) / static_cast<double>(accepted.size() - 1);
}

MHChain mh_sample(const std::function<double(double)>& target_logdensity, double proposal_sigma,
                  double x0, int n_samples, int burn_in, int n_retained, const CounterRng& rng) {
    if (!(proposal_sigma > 0.0)) throw ConfigError("mh_sample: proposal_sigma must be positive");
    if (n_samples < 1) throw ConfigError("mh_sample: n_samples must be >= 1");
    if (burn_in < 0 || burn_in >= n_samples)
        throw ConfigError("mh_sample: burn_in must be in [0, n_samples)");
    if (n_retained < 1 || n_retained > n_samples - burn_in)
        throw ConfigError("mh_sample: n_retained must be in [1, n_samples - burn_in]");

    double x = x0;
    double lp = target_logdensity(x);
    if (!std::isfinite(lp)) throw ConfigError("mh_sample: log-density not finite at x0");

    MHChain chain;
    chain.burn_in = burn_in;
    chain.n_retained = n_retained;
    chain.samples.reserve(static_cast<std::size_t>(n_samples));
    chain.accepted.reserve(static_cast<std::size_t>(n_samples));
    chain.samples.push_back(x);
    chain.accepted.push_back(true);  // the chain occupies x0 by construction

    for (int k = 1; k < n_samples; ++k) {
        const std::uint64_t counter = static_cast<std::uint64_t>(k);
        const double y = x + proposal_sigma * rng.normal(counter);
        const double lpy = target_logdensity(y);
        // ln U < lpy - lp; a -inf proposal density is always rejected.
        const double u = rng.uniform(counter);
        const bool accept = std::isfinite(lpy) && std::log(u) < lpy - lp;
        if (accept) {
            x = y;
            lp = lpy;
        }
        chain.samples.push_back(x);
        chain.accepted.push_back(accept);
    }
    return chain;
}

}  // namespace qtraj
