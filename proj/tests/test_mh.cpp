#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "qtraj/errors.hpp"
#include "qtraj/mh.hpp"

using namespace qtraj;

namespace {

double std_normal_logdensity(double x) { return -0.5 * x * x; }

struct Moments {
    double mean;
    double var;
};

Moments moments_of(const std::vector<double>& xs) {
    double s = 0.0, s2 = 0.0;
    for (double x : xs) {
        s += x;
        s2 += x * x;
    }
    const double n = static_cast<double>(xs.size());
    const double mean = s / n;
    return {mean, s2 / n - mean * mean};
}

}  // namespace

TEST_CASE("mh_sample: chain layout and retained() contract") {
    const CounterRng rng = CounterRng::for_label(1, "mh");
    const MHChain chain = mh_sample(std_normal_logdensity, 0.5, 0.3, 100, 20, 50, rng);

    REQUIRE(chain.samples.size() == 100);
    REQUIRE(chain.accepted.size() == 100);
    CHECK(chain.samples[0] == 0.3);
    CHECK(chain.accepted[0] == true);
    CHECK(chain.burn_in == 20);
    CHECK(chain.n_retained == 50);

    const std::vector<double> kept = chain.retained();
    REQUIRE(kept.size() == 50);
    for (std::size_t i = 0; i < kept.size(); ++i) CHECK(kept[i] == chain.samples[50 + i]);

    // every rejected transition repeats the previous state exactly
    for (std::size_t k = 1; k < chain.samples.size(); ++k) {
        if (!chain.accepted[k])
            CHECK(chain.samples[k] == chain.samples[k - 1]);
        else
            CHECK(chain.samples[k] != chain.samples[k - 1]);
    }

    // acceptance rate counts transitions only
    int n_acc = 0;
    for (std::size_t k = 1; k < chain.accepted.size(); ++k) n_acc += chain.accepted[k] ? 1 : 0;
    CHECK(chain.acceptance_rate() == doctest::Approx(n_acc / 99.0).epsilon(1e-15));
}

TEST_CASE("mh_sample: determinism and stream separation") {
    const CounterRng rng = CounterRng::for_label(7, "mh");
    const MHChain a = mh_sample(std_normal_logdensity, 0.5, 0.0, 2000, 100, 1000, rng);
    const MHChain b = mh_sample(std_normal_logdensity, 0.5, 0.0, 2000, 100, 1000, rng);
    CHECK(a.samples == b.samples);

    const MHChain c =
        mh_sample(std_normal_logdensity, 0.5, 0.0, 2000, 100, 1000, CounterRng::for_label(8, "mh"));
    CHECK(a.samples != c.samples);
}

TEST_CASE("mh_sample: shifting the log-density by a constant changes nothing") {
    // Only density ratios matter, so unnormalized targets are fine.
    const CounterRng rng = CounterRng::for_label(3, "mh");
    const MHChain base = mh_sample(std_normal_logdensity, 0.7, 0.1, 3000, 0, 3000, rng);
    const MHChain shifted = mh_sample([](double x) { return -0.5 * x * x + 123.456; }, 0.7, 0.1,
                                      3000, 0, 3000, rng);
    CHECK(base.samples == shifted.samples);
    CHECK(base.accepted == shifted.accepted);
}

TEST_CASE("mh_sample: uphill proposals are always accepted") {
    // With a monotone target and a start far in the tail, any proposal toward
    // the mode has logdensity(y) > logdensity(x) and must be accepted.
    const CounterRng rng = CounterRng::for_label(11, "mh");
    const MHChain chain =
        mh_sample([](double x) { return x; }, 0.5, 0.0, 500, 0, 500, rng);  // density e^x
    for (std::size_t k = 1; k < chain.samples.size(); ++k) {
        if (chain.samples[k] > chain.samples[k - 1]) CHECK(chain.accepted[k] == true);
    }
    // and the chain must drift upward overall
    CHECK(chain.samples.back() > chain.samples.front() + 10.0);
}

TEST_CASE("mh_sample: standard normal target has the right moments") {
    const CounterRng rng = CounterRng::for_label(2, "mh");
    const int n = 100000, burn = 10000;
    const MHChain chain = mh_sample(std_normal_logdensity, 0.5, 0.0, n, burn, n - burn, rng);
    const Moments m = moments_of(chain.retained());
    // autocorrelated chain: allow generous but non-vacuous bands
    CHECK(std::abs(m.mean) < 0.05);
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.05));
    const double rate = chain.acceptance_rate();
    CHECK(rate > 0.5);  // sigma = 0.5 proposals on a unit-width target
    CHECK(rate < 0.95);
}

TEST_CASE("mh_sample: a chain started far out climbs back to the mode") {
    const CounterRng rng = CounterRng::for_label(5, "mh");
    const MHChain chain = mh_sample(std_normal_logdensity, 0.5, -10.0, 5000, 1000, 4000, rng);
    CHECK(chain.samples[0] == -10.0);
    const Moments m = moments_of(chain.retained());
    CHECK(std::abs(m.mean) < 0.2);  // transient gone after burn-in
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("mh_sample: proposals into zero-density regions are rejected") {
    // Half-line target: density 0 (log-density -inf) for x < 0.
    const CounterRng rng = CounterRng::for_label(6, "mh");
    const MHChain chain = mh_sample(
        [](double x) {
            return x < 0.0 ? -std::numeric_limits<double>::infinity() : -x;
        },
        0.8, 0.5, 20000, 2000, 18000, rng);
    for (double x : chain.samples) CHECK(x >= 0.0);
    const Moments m = moments_of(chain.retained());  // Exp(1): mean 1, var 1
    CHECK(m.mean == doctest::Approx(1.0).epsilon(0.1));
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("mh_sample: precondition violations throw ConfigError") {
    const CounterRng rng = CounterRng::for_label(1, "mh");
    const auto lp = std_normal_logdensity;
    CHECK_THROWS_AS(mh_sample(lp, 0.0, 0.0, 100, 10, 50, rng), ConfigError);   // sigma
    CHECK_THROWS_AS(mh_sample(lp, -1.0, 0.0, 100, 10, 50, rng), ConfigError);  // sigma
    CHECK_THROWS_AS(mh_sample(lp, 0.5, 0.0, 0, 0, 1, rng), ConfigError);       // n_samples
    CHECK_THROWS_AS(mh_sample(lp, 0.5, 0.0, 100, -1, 50, rng), ConfigError);   // burn_in
    CHECK_THROWS_AS(mh_sample(lp, 0.5, 0.0, 100, 100, 1, rng), ConfigError);   // burn_in == n
    CHECK_THROWS_AS(mh_sample(lp, 0.5, 0.0, 100, 10, 91, rng), ConfigError);   // retained too big
    CHECK_THROWS_AS(mh_sample(lp, 0.5, 0.0, 100, 10, 0, rng), ConfigError);    // retained empty
    // the chain must start inside the support
    CHECK_THROWS_AS(mh_sample([](double) { return -std::numeric_limits<double>::infinity(); },
                              0.5, 0.0, 100, 10, 50, rng),
                    ConfigError);
    CHECK_NOTHROW(mh_sample(lp, 0.5, 0.0, 100, 10, 90, rng));
}
