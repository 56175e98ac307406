#include "udn/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "udn/channel_models.hpp"
#include "udn/fading.hpp"

namespace udn {

namespace {

constexpr long kBlockSize = 1024;

bool antenna_on(const SimConfig& sim) {
    return sim.antenna.has_value() && sim.antenna->enabled;
}

double tilt_for(const SimConfig& sim, double lambda) {
    if (!antenna_on(sim)) return 0.0;
    return downtilt_deg(*sim.antenna, lambda, sim.analysis.model.height());
}

// Fading-free received power of one station: antenna weight included, fast
// fading excluded. This is the association metric; multiplying by the drawn
// fade gives the instantaneous power.
double mean_power(const SimConfig& sim, double tilt_deg, const Station& st) {
    const PathLossModel& m = sim.analysis.model;
    const double r = std::hypot(st.x_km, st.y_km);
    double w = distance_3d(r, m.height());
    w = std::max(w, m.min_eval_distance());
    double p = sim.analysis.tx_power_w *
               m.gain(w, st.los ? PathType::Los : PathType::Nlos);
    if (antenna_on(sim)) p *= total_gain_linear(*sim.antenna, r, m.height(), tilt_deg);
    return p;
}

// Positions and LoS states for one trial, appended draw-by-draw so that any
// caller holding the same stream reproduces the same network. The disc is
// redrawn (and counted) while empty.
long draw_network(const SimConfig& sim, double radius, double lambda, Stream& rng,
                  std::vector<Station>& stations) {
    const PathLossModel& m = sim.analysis.model;
    const double pi = std::numbers::pi;
    std::poisson_distribution<long> count_dist(lambda * pi * radius * radius);
    long resamples = 0;
    long n = count_dist(rng);
    while (n == 0) {
        ++resamples;
        n = count_dist(rng);
    }
    stations.clear();
    stations.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double r = radius * std::sqrt(rng.uniform_co());
        const double theta = 2.0 * pi * rng.uniform_co();
        Station st;
        st.x_km = r * std::cos(theta);
        st.y_km = r * std::sin(theta);
        double w = distance_3d(r, m.height());
        w = std::max(w, m.min_eval_distance());
        st.los = rng.uniform_co() < m.los_probability(w);
        stations.push_back(st);
    }
    return resamples;
}

void draw_fades(const SimConfig& sim, Stream& rng, std::vector<Station>& stations) {
    for (Station& st : stations)
        st.fade = sample_gain(sim.analysis.fading.on(st.los), rng);
}

LinkOutcome links_impl(const SimConfig& sim, double tilt_deg,
                       const std::vector<Station>& stations,
                       std::vector<double>& power_scratch) {
    if (stations.empty())
        throw std::invalid_argument("evaluate_links: station list is empty");
    power_scratch.clear();
    power_scratch.reserve(stations.size());
    LinkOutcome out;
    double best_power = -1.0;
    for (std::size_t i = 0; i < stations.size(); ++i) {
        const double p = mean_power(sim, tilt_deg, stations[i]);
        power_scratch.push_back(p);
        if (p > best_power) { // strict: ties resolve to the lowest index
            best_power = p;
            out.serving_index = static_cast<int>(i);
            out.serving_los = stations[i].los;
        }
    }
    const std::size_t s = static_cast<std::size_t>(out.serving_index);
    double interference = 0.0;
    for (std::size_t i = 0; i < stations.size(); ++i) {
        if (i == s) continue;
        interference += power_scratch[i] * stations[i].fade;
    }
    const double signal = power_scratch[s] * stations[s].fade;
    const double denom = interference + sim.analysis.noise_power_w;
    out.sinr = denom > 0.0 ? signal / denom
                           : std::numeric_limits<double>::infinity();
    return out;
}

void validate_bulk(const SimConfig& sim, double lambda, double radius) {
    if (!(lambda > 0.0)) throw std::invalid_argument("estimate: lambda must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("estimate: sim radius must be positive");
    if (sim.trials < 1000) throw std::invalid_argument("estimate: need at least 1000 trials");
    const double expected = lambda * std::numbers::pi * radius * radius;
    if (expected < sim.min_expected_bs)
        throw std::invalid_argument("estimate: expected station count " +
                                    std::to_string(expected) + " below floor " +
                                    std::to_string(sim.min_expected_bs));
}

struct BlockAcc {
    double sum = 0.0;    // rate sum (ASE) -- unused by coverage
    double sum_sq = 0.0; // rate square sum
    long successes = 0;  // SINR > gamma count
    long capped = 0;     // SINR above the rate cap
    long resamples = 0;  // empty-disc redraws
};

// Runs all trials in fixed blocks; blocks are processed by any number of
// workers but reduced in block order, so every estimate is independent of
// the thread count. Per-trial draws come from Stream(seed, trial_index),
// so they are also independent of the block layout.
template <typename PerTrial>
std::vector<BlockAcc> run_blocks(const SimConfig& sim, double lambda, double radius,
                                 PerTrial&& per_trial) {
    const long n_blocks = (sim.trials + kBlockSize - 1) / kBlockSize;
    std::vector<BlockAcc> blocks(static_cast<std::size_t>(n_blocks));
    const double tilt = tilt_for(sim, lambda);

    int threads = sim.threads > 0
                      ? sim.threads
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = static_cast<int>(std::min<long>(threads, n_blocks));

    auto worker = [&](int w) {
        std::vector<Station> stations;
        std::vector<double> powers;
        for (long b = w; b < n_blocks; b += threads) {
            BlockAcc acc;
            const long lo = b * kBlockSize;
            const long hi = std::min(sim.trials, lo + kBlockSize);
            for (long t = lo; t < hi; ++t) {
                Stream rng(sim.seed, static_cast<std::uint64_t>(t));
                acc.resamples += draw_network(sim, radius, lambda, rng, stations);
                draw_fades(sim, rng, stations);
                const LinkOutcome link = links_impl(sim, tilt, stations, powers);
                per_trial(link.sinr, acc);
            }
            blocks[static_cast<std::size_t>(b)] = acc;
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (std::thread& th : pool) th.join();
    }
    return blocks;
}

// Continued fraction for the regularized incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 3.0e-16) break;
    }
    return h;
}

// Smallest x with I_x(a, b) >= q, by bisection (I_x is monotone in x).
double beta_quantile(double a, double b, double q) {
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (regularized_incomplete_beta(a, b, mid) < q)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14) break;
    }
    return 0.5 * (lo + hi);
}

// 95% Clopper-Pearson interval half-width (the wider side) for k of n.
double exact_binomial_half_width(long k, long n, double p_hat) {
    const double alpha = 0.05;
    double lo = 0.0;
    double hi = 1.0;
    if (k > 0) lo = beta_quantile(static_cast<double>(k), static_cast<double>(n - k + 1), alpha / 2.0);
    if (k < n) hi = beta_quantile(static_cast<double>(k + 1), static_cast<double>(n - k), 1.0 - alpha / 2.0);
    if (k == 0) hi = 1.0 - std::pow(alpha / 2.0, 1.0 / static_cast<double>(n));
    if (k == n) lo = std::pow(alpha / 2.0, 1.0 / static_cast<double>(n));
    return std::max(p_hat - lo, hi - p_hat);
}

} // namespace

double sim_radius_km(const SimConfig& sim, double lambda_per_km2) {
    if (!(lambda_per_km2 > 0.0))
        throw std::invalid_argument("sim_radius_km: lambda must be positive");
    if (sim.sim_radius_km > 0.0) return sim.sim_radius_km;
    const double pi = std::numbers::pi;
    return std::max(5.0 * sim.analysis.model.max_transition(),
                    20.0 / std::sqrt(lambda_per_km2 * pi));
}

NetworkDraw sample_network(const SimConfig& sim, double lambda_per_km2, Stream& rng) {
    const double radius = sim_radius_km(sim, lambda_per_km2);
    NetworkDraw draw;
    draw.resamples = draw_network(sim, radius, lambda_per_km2, rng, draw.stations);
    return draw;
}

NetworkDraw sample_network(const SimConfig& sim, double lambda_per_km2,
                           std::uint64_t trial_index) {
    Stream rng(sim.seed, trial_index);
    return sample_network(sim, lambda_per_km2, rng);
}

Snapshot snapshot_sinr(const SimConfig& sim, double lambda_per_km2, NetworkDraw draw,
                       Stream& rng) {
    draw_fades(sim, rng, draw.stations);
    Snapshot snap;
    snap.stations = std::move(draw.stations);
    snap.resamples = draw.resamples;
    std::vector<double> powers;
    const LinkOutcome link = links_impl(sim, tilt_for(sim, lambda_per_km2), snap.stations, powers);
    snap.serving_index = link.serving_index;
    snap.serving_los = link.serving_los;
    snap.sinr = link.sinr;
    return snap;
}

Snapshot simulate_snapshot(const SimConfig& sim, double lambda_per_km2,
                           std::uint64_t trial_index) {
    Stream rng(sim.seed, trial_index);
    NetworkDraw draw = sample_network(sim, lambda_per_km2, rng);
    return snapshot_sinr(sim, lambda_per_km2, std::move(draw), rng);
}

LinkOutcome evaluate_links(const SimConfig& sim, double tilt_deg,
                           const std::vector<Station>& stations) {
    std::vector<double> powers;
    return links_impl(sim, tilt_deg, stations, powers);
}

Estimate estimate_coverage(const SimConfig& sim, double lambda_per_km2, double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("estimate_coverage: SINR threshold must be positive");
    const double radius = sim_radius_km(sim, lambda_per_km2);
    validate_bulk(sim, lambda_per_km2, radius);

    const std::vector<BlockAcc> blocks = run_blocks(
        sim, lambda_per_km2, radius,
        [gamma](double sinr, BlockAcc& acc) { acc.successes += sinr > gamma ? 1 : 0; });

    long successes = 0;
    long resamples = 0;
    for (const BlockAcc& b : blocks) {
        successes += b.successes;
        resamples += b.resamples;
    }
    const double n = static_cast<double>(sim.trials);
    Estimate est;
    est.trials = sim.trials;
    est.seed = sim.seed;
    est.resampled_empty = resamples;
    est.mean = static_cast<double>(successes) / n;
    if (sim.exact_binomial_ci)
        est.ci_half_width = exact_binomial_half_width(successes, sim.trials, est.mean);
    else
        est.ci_half_width = 1.96 * std::sqrt(est.mean * (1.0 - est.mean) / n);
    return est;
}

Estimate estimate_ase(const SimConfig& sim, double lambda_per_km2, double gamma0) {
    if (!(gamma0 > 0.0))
        throw std::invalid_argument("estimate_ase: rate threshold must be positive");
    const double radius = sim_radius_km(sim, lambda_per_km2);
    validate_bulk(sim, lambda_per_km2, radius);
    const double cap = std::pow(10.0, sim.gamma_cap_db / 10.0);

    const std::vector<BlockAcc> blocks = run_blocks(
        sim, lambda_per_km2, radius, [gamma0, cap](double sinr, BlockAcc& acc) {
            if (sinr > cap) ++acc.capped;
            if (sinr > gamma0) {
                const double rate = std::log2(1.0 + std::min(sinr, cap));
                acc.sum += rate;
                acc.sum_sq += rate * rate;
            }
        });

    double sum = 0.0;
    double sum_sq = 0.0;
    long capped = 0;
    long resamples = 0;
    for (const BlockAcc& b : blocks) { // fixed order: thread-count independent
        sum += b.sum;
        sum_sq += b.sum_sq;
        capped += b.capped;
        resamples += b.resamples;
    }
    const double n = static_cast<double>(sim.trials);
    const double mean_rate = sum / n;
    double var = 0.0;
    if (sim.trials > 1) {
        var = (sum_sq - n * mean_rate * mean_rate) / (n - 1.0);
        var = std::max(var, 0.0);
    }
    Estimate est;
    est.trials = sim.trials;
    est.seed = sim.seed;
    est.resampled_empty = resamples;
    est.capped_fraction = static_cast<double>(capped) / n;
    est.mean = lambda_per_km2 * mean_rate;
    est.ci_half_width = lambda_per_km2 * 1.96 * std::sqrt(var / n);
    return est;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("regularized_incomplete_beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

} // namespace udn
