#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "udn/analytic.hpp"
#include "udn/channel_models.hpp"
#include "udn/montecarlo.hpp"
#include "udn/units.hpp"

using namespace udn;

namespace {

SimConfig case1_sim() {
    AnalysisConfig cfg(build_3gpp_case1(Case1Params{}));
    return SimConfig(cfg);
}

SimConfig flat_sim(double height_m, bool noiseless) {
    SingleSlopeParams p;
    p.height_m = height_m;
    AnalysisConfig cfg(build_single_slope(p));
    if (noiseless) cfg.noise_power_w = 0.0;
    return SimConfig(cfg);
}

} // namespace

TEST_CASE("two stations, no noise: SIR is the exact gain ratio") {
    SimConfig sim = flat_sim(0.0, true);
    const double alpha = 3.75;
    for (double tau : {2.0, 10.0}) {
        std::vector<Station> st = {{0.1, 0.0, true, 1.0}, {0.1 * tau, 0.0, true, 1.0}};
        const LinkOutcome lk = evaluate_links(sim, 0.0, st);
        CHECK(lk.serving_index == 0);
        CHECK(lk.sinr == doctest::Approx(std::pow(tau, alpha)).epsilon(1e-12));
    }
    // explicit fades scale the ratio linearly
    std::vector<Station> st = {{0.1, 0.0, true, 0.5}, {0.2, 0.0, true, 2.0}};
    const double base = std::pow(2.0, alpha);
    CHECK(evaluate_links(sim, 0.0, st).sinr == doctest::Approx(base * 0.25).epsilon(1e-12));
}

TEST_CASE("association ties break to the lowest index and ignore fading") {
    SimConfig sim = flat_sim(0.0, true);
    std::vector<Station> st = {
        {0.5, 0.0, true, 0.01}, // same distance, tiny fade: still the server
        {0.0, 0.5, true, 100.0},
        {0.3, 0.0, true, 1.0}, // closer: wins regardless of order
    };
    CHECK(evaluate_links(sim, 0.0, st).serving_index == 2);
    st.pop_back();
    CHECK(evaluate_links(sim, 0.0, st).serving_index == 0);
}

TEST_CASE("co-located elevated stations push the SIR to one") {
    SimConfig sim = flat_sim(8.5, true);
    std::vector<Station> st = {{1e-9, 0.0, true, 1.0}, {2e-9, 0.0, true, 1.0}};
    CHECK(evaluate_links(sim, 0.0, st).sinr == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empty station list is rejected") {
    SimConfig sim = flat_sim(0.0, true);
    CHECK_THROWS_AS(evaluate_links(sim, 0.0, {}), std::invalid_argument);
}

TEST_CASE("isolated station with zero noise yields the infinite-SINR sentinel") {
    SimConfig sim = flat_sim(8.5, true);
    std::vector<Station> st = {{0.05, 0.0, true, 1.0}};
    const LinkOutcome lk = evaluate_links(sim, 0.0, st);
    CHECK(std::isinf(lk.sinr));
    CHECK(lk.sinr > 0.0);
}

TEST_CASE("snapshots are bit-reproducible in (seed, trial) and differ across trials") {
    SimConfig sim = case1_sim();
    sim.seed = 99;
    const Snapshot a = simulate_snapshot(sim, 200.0, 5);
    const Snapshot b = simulate_snapshot(sim, 200.0, 5);
    REQUIRE(a.stations.size() == b.stations.size());
    for (std::size_t i = 0; i < a.stations.size(); ++i) {
        CHECK(a.stations[i].x_km == b.stations[i].x_km);
        CHECK(a.stations[i].y_km == b.stations[i].y_km);
        CHECK(a.stations[i].los == b.stations[i].los);
        CHECK(a.stations[i].fade == b.stations[i].fade);
    }
    CHECK(a.sinr == b.sinr);
    CHECK(a.serving_index == b.serving_index);

    const Snapshot c = simulate_snapshot(sim, 200.0, 6);
    CHECK(a.sinr != c.sinr);

    SimConfig other = sim;
    other.seed = 100;
    const Snapshot d = simulate_snapshot(other, 200.0, 5);
    CHECK(a.sinr != d.sinr);
}

TEST_CASE("the sampled network matches the homogeneous process intensity") {
    SimConfig sim = case1_sim();
    const double lambda = 100.0;
    const double R = sim_radius_km(sim, lambda);
    CHECK(R == doctest::Approx(1.5)); // 5 x the 0.3 km LoS transition dominates
    const double mu = lambda * pi * R * R;
    const int trials = 3000;
    double total = 0.0;
    double outside = 0.0;
    for (int t = 0; t < trials; ++t) {
        const NetworkDraw draw = sample_network(sim, lambda, static_cast<std::uint64_t>(t));
        total += static_cast<double>(draw.stations.size());
        for (const Station& s : draw.stations)
            if (std::hypot(s.x_km, s.y_km) > R + 1e-12) outside += 1.0;
    }
    CHECK(outside == 0.0);
    const double z = (total / trials - mu) / (std::sqrt(mu) / std::sqrt(double(trials)));
    CHECK(std::fabs(z) < 4.5);
}

TEST_CASE("radius rule: transition-dominated near, span-dominated far") {
    SimConfig sim = case1_sim();
    CHECK(sim_radius_km(sim, 1e4) == doctest::Approx(1.5));
    CHECK(sim_radius_km(sim, 0.1) ==
          doctest::Approx(20.0 / std::sqrt(0.1 * pi))); // sparse: keep ~400 expected stations
    SimConfig flat = flat_sim(0.0, false);
    CHECK(sim_radius_km(flat, 100.0) == doctest::Approx(20.0 / std::sqrt(100.0 * pi)));
    sim.sim_radius_km = 2.25;
    CHECK(sim_radius_km(sim, 1e4) == doctest::Approx(2.25)); // explicit override wins
}

TEST_CASE("estimator validation: trial floor, density floor") {
    SimConfig sim = case1_sim();
    sim.trials = 999;
    CHECK_THROWS_AS(estimate_coverage(sim, 100.0, 1.0), std::invalid_argument);
    sim.trials = 1000;
    sim.sim_radius_km = 0.1;
    // 100 * pi * 0.01 ~ 3 expected stations < 20: refuse to produce estimates
    CHECK_THROWS_AS(estimate_coverage(sim, 100.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(estimate_coverage(sim, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("estimates are identical for any worker count and match the snapshot path") {
    SimConfig sim = case1_sim();
    sim.trials = 2000;
    sim.threads = 1;
    const Estimate cov1 = estimate_coverage(sim, 150.0, 1.0);
    const Estimate ase1 = estimate_ase(sim, 150.0, 1.0);
    sim.threads = 5;
    const Estimate cov5 = estimate_coverage(sim, 150.0, 1.0);
    const Estimate ase5 = estimate_ase(sim, 150.0, 1.0);
    CHECK(cov1.mean == cov5.mean);
    CHECK(ase1.mean == ase5.mean); // bitwise: block-ordered reduction
    CHECK(ase1.ci_half_width == ase5.ci_half_width);

    long hits = 0;
    for (long t = 0; t < sim.trials; ++t)
        if (simulate_snapshot(sim, 150.0, static_cast<std::uint64_t>(t)).sinr > 1.0) ++hits;
    CHECK(cov1.mean == doctest::Approx(double(hits) / double(sim.trials)).epsilon(1e-15));
}

TEST_CASE("tiny disc: empty draws are resampled and counted, never returned") {
    SimConfig sim = case1_sim();
    sim.sim_radius_km = 0.05;
    sim.analysis.noise_power_w = 0.0;
    long resamples = 0;
    for (int t = 0; t < 300; ++t) {
        const Snapshot s = simulate_snapshot(sim, 10.0, static_cast<std::uint64_t>(t));
        CHECK_FALSE(s.stations.empty());
        resamples += s.resamples;
    }
    CHECK(resamples > 300); // mean count ~0.08: emptiness dominates
}

TEST_CASE("coverage estimate agrees with the independent analytic engine") {
    SimConfig sim = case1_sim();
    sim.trials = 20000;
    const Estimate e = estimate_coverage(sim, 100.0, 1.0);
    const CoveragePoint cp = coverage_probability(sim.analysis, 100.0, 1.0);
    CHECK(std::fabs(e.mean - cp.p_cov) < std::max(0.02, 3.0 * e.ci_half_width));
    CHECK(e.ci_half_width > 0.0);
    CHECK(e.ci_half_width < 0.02);
    CHECK(e.trials == 20000);
}

TEST_CASE("rate-density estimate reproduces the reference anchor point") {
    SimConfig sim = case1_sim();
    sim.trials = 20000;
    const Estimate e = estimate_ase(sim, 200.0, 1.0);
    const AsePoint ap = area_spectral_efficiency(sim.analysis, 200.0, 1.0);
    CHECK(std::fabs(e.mean - ap.ase_bps_hz_km2) <
          std::max(0.10 * ap.ase_bps_hz_km2, 3.0 * e.ci_half_width));
    CHECK(e.capped_fraction == doctest::Approx(0.0));
}

TEST_CASE("doubling the disc radius moves the estimates by less than one CI") {
    SimConfig sim = case1_sim();
    sim.trials = 20000;
    const double lambda = 10.0;
    const Estimate base_cov = estimate_coverage(sim, lambda, 1.0);
    const Estimate base_ase = estimate_ase(sim, lambda, 1.0);
    sim.sim_radius_km = 2.0 * sim_radius_km(case1_sim(), lambda);
    const Estimate wide_cov = estimate_coverage(sim, lambda, 1.0);
    const Estimate wide_ase = estimate_ase(sim, lambda, 1.0);
    CHECK(std::fabs(base_cov.mean - wide_cov.mean) <
          base_cov.ci_half_width + wide_cov.ci_half_width);
    CHECK(std::fabs(base_ase.mean - wide_ase.mean) <
          base_ase.ci_half_width + wide_ase.ci_half_width);
}

TEST_CASE("empirical SINR tail tracks the analytic one across 20 thresholds") {
    SimConfig sim = case1_sim();
    sim.trials = 20000;
    const double lambda = 100.0;
    // thresholds log-spaced over [-10 dB, +15 dB]
    double sup = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double gamma_db = -10.0 + 25.0 * i / 19.0;
        const double gamma = db_to_linear(gamma_db);
        const Estimate e = estimate_coverage(sim, lambda, gamma);
        const double analytic = coverage_probability(sim.analysis, lambda, gamma).p_cov;
        sup = std::max(sup, std::fabs(e.mean - analytic));
    }
    CHECK(sup < 0.02);
}

TEST_CASE("per-trial caps: blown-up SINR counts as covered but its rate is clipped") {
    SimConfig sim = flat_sim(8.5, true);
    sim.sim_radius_km = 0.05;     // nearly always a single station
    sim.min_expected_bs = 0.01;   // opt out of the bulk floor for this edge probe
    sim.trials = 1000;
    sim.gamma_cap_db = 60.0;
    const Estimate cov = estimate_coverage(sim, 10.0, 1.0);
    const Estimate ase = estimate_ase(sim, 10.0, 1.0);
    CHECK(cov.mean > 0.9);            // isolated stations: SINR = infinity
    CHECK(ase.capped_fraction > 0.9); // ...and the rate cap engaged
    const double cap_rate = std::log2(1.0 + db_to_linear(60.0));
    CHECK(ase.mean <= 10.0 * cap_rate * 1.0001);
    CHECK(cov.resampled_empty > 0);
}

TEST_CASE("binomial interval options") {
    SimConfig sim = case1_sim();
    sim.trials = 5000;
    const Estimate normal_ci = estimate_coverage(sim, 100.0, 1.0);
    sim.exact_binomial_ci = true;
    const Estimate exact_ci = estimate_coverage(sim, 100.0, 1.0);
    CHECK(normal_ci.mean == exact_ci.mean);
    CHECK(exact_ci.ci_half_width == doctest::Approx(normal_ci.ci_half_width).epsilon(0.10));
    CHECK(exact_ci.ci_half_width > 0.0);
}

TEST_CASE("regularized incomplete beta: reference identities") {
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    // I_x(1, b) = 1 - (1-x)^b
    CHECK(regularized_incomplete_beta(1.0, 4.0, 0.2) ==
          doctest::Approx(1.0 - std::pow(0.8, 4.0)).epsilon(1e-12));
    // binomial tail identity: P[Bin(10, 0.3) >= 3] = I_{0.3}(3, 8)
    double tail = 0.0;
    for (int k = 3; k <= 10; ++k) {
        double c = 1.0;
        for (int j = 0; j < k; ++j) c = c * (10 - j) / (j + 1);
        tail += c * std::pow(0.3, k) * std::pow(0.7, 10 - k);
    }
    CHECK(regularized_incomplete_beta(3.0, 8.0, 0.3) == doctest::Approx(tail).epsilon(1e-10));
    CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), std::invalid_argument);
}
