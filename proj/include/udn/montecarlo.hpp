#ifndef UDN_MONTECARLO_HPP
#define UDN_MONTECARLO_HPP

// Independent system-level simulator: stations drawn from a Poisson process
// on a disc around the typical user, per-link LoS states, association by
// smallest fading-free path loss (antenna pattern included, fast fading
// excluded), SINR assembled from the faded powers. Serves as the ground
// truth oracle for the analytic engine and as the only evaluator for the
// vertical antenna pattern.

#include <cstdint>
#include <optional>
#include <vector>

#include "udn/analytic.hpp"
#include "udn/antenna.hpp"
#include "udn/rng.hpp"

namespace udn {

struct SimConfig {
    AnalysisConfig analysis;             // model, fading, powers (quadrature unused)
    std::optional<AntennaSpec> antenna;  // applied to every link when enabled
    double sim_radius_km = 0.0;          // 0 = auto: max(5 d_transition, 20/sqrt(lambda pi))
    long trials = 50000;
    std::uint64_t seed = 1;
    double min_expected_bs = 20.0;       // validation floor on lambda pi R^2
    double gamma_cap_db = 60.0;          // SINR cap inside the rate estimator
    bool exact_binomial_ci = false;      // Clopper-Pearson instead of normal CI
    int threads = 0;                     // 0 = all hardware threads

    explicit SimConfig(AnalysisConfig a) : analysis(std::move(a)) {}
};

struct Station {
    double x_km = 0.0;
    double y_km = 0.0;
    bool los = false;
    double fade = 1.0; // multiplicative power fading, drawn per link
};

struct NetworkDraw {
    std::vector<Station> stations; // fades not yet drawn
    long resamples = 0;            // empty-disc redraws consumed by this trial
};

struct Snapshot {
    std::vector<Station> stations;
    int serving_index = -1;
    bool serving_los = false;
    double sinr = 0.0; // linear; +infinity when there is no interference and no noise
    long resamples = 0;
};

struct Estimate {
    double mean = 0.0;
    double ci_half_width = 0.0;   // 95%
    long trials = 0;
    std::uint64_t seed = 0;
    long resampled_empty = 0;     // empty-disc redraws across all trials
    double capped_fraction = 0.0; // trials whose SINR exceeded the cap (rate estimates)
};

// Disc radius for a given density under the configured rule.
double sim_radius_km(const SimConfig& sim, double lambda_per_km2);

// Positions and LoS flags for one trial; deterministic in (seed, trial_index).
// The Stream overload continues an externally managed trial stream so the
// fading draws in snapshot_sinr follow on from the same state.
NetworkDraw sample_network(const SimConfig& sim, double lambda_per_km2,
                           std::uint64_t trial_index);
NetworkDraw sample_network(const SimConfig& sim, double lambda_per_km2, Stream& rng);

// Draw per-link fading from `rng` (continuing the trial's stream) and assemble
// the SINR. Association maximizes the fading-free received power.
Snapshot snapshot_sinr(const SimConfig& sim, double lambda_per_km2, NetworkDraw draw, Stream& rng);

// Both steps with the trial's own stream.
Snapshot simulate_snapshot(const SimConfig& sim, double lambda_per_km2, std::uint64_t trial_index);

// Deterministic SINR for an explicit station list (fades already set); the
// reference implementation behind every simulated trial and the entry point
// for fixed-geometry checks. tilt_deg only matters when the antenna is on.
struct LinkOutcome {
    int serving_index = -1;
    bool serving_los = false;
    double sinr = 0.0;
};
LinkOutcome evaluate_links(const SimConfig& sim, double tilt_deg,
                           const std::vector<Station>& stations);

// Pr[SINR > gamma] as a trial fraction with a 95% binomial CI.
Estimate estimate_coverage(const SimConfig& sim, double lambda_per_km2, double gamma);

// lambda * mean(log2(1 + min(SINR, cap)) ; SINR > gamma0) with a normal CI.
Estimate estimate_ase(const SimConfig& sim, double lambda_per_km2, double gamma0);

// Regularized incomplete beta I_x(a, b); exposed for the exact binomial CI.
double regularized_incomplete_beta(double a, double b, double x);

} // namespace udn

#endif // UDN_MONTECARLO_HPP
