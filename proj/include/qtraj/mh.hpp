// Random-walk Metropolis-Hastings sampler with a Gaussian proposal, driven by
// the deterministic counter RNG so chains are reproducible by (seed, stream).
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qtraj/rng.hpp"

namespace qtraj {

struct MHChain {
    std::vector<double> samples;   ///< length n_samples; samples[0] == x0
    std::vector<bool> accepted;    ///< accepted[k]: move into samples[k] accepted (index 0 true)
    int burn_in = 0;
    int n_retained = 0;

    /// The last n_retained samples (post burn-in working set).
    std::vector<double> retained() const;
    /// Fraction of proposals accepted, over the n_samples-1 transitions.
    double acceptance_rate() const;
};

/// Run a random-walk chain on an unnormalized log-density. The chain holds
/// n_samples states: x0 followed by n_samples-1 transitions. Transition k
/// draws proposal = x + proposal_sigma * N(0,1) and accepts iff
/// ln U(0,1) < logdensity(proposal) - logdensity(x); rejected moves repeat the
/// current state. Requires n_retained <= n_samples - burn_in and a finite
/// log-density at x0.
MHChain mh_sample(const std::function<double(double)>& target_logdensity, double proposal_sigma,
                  double x0, int n_samples, int burn_in, int n_retained, const CounterRng& rng);

}  // namespace qtraj
