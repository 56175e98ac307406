#ifndef UDN_ASYMPTOTICS_HPP
#define UDN_ASYMPTOTICS_HPP

// Closed-form limit diagnostics for dense deployments: the two-station SIR
// that drives coverage to zero as stations crowd in, the annulus outage
// bound kappa, and slope-based classification of ASE-vs-density sweeps.

#include <cstddef>
#include <optional>
#include <vector>

namespace udn {

// SIR of a link at ground distance r against a single interferer at tau * r,
// both with height offset L and LoS exponent alpha:
//   ((tau^2 r^2 + L^2) / (r^2 + L^2))^(alpha / 2)
// Tends to tau^alpha when L = 0 and to 1 as r -> 0 with L > 0: densification
// squeezes the geometry advantage out of the serving link.
double pairwise_sir(double r_km, double tau, double height_km, double alpha_los);

// Upper bound on the probability that no interferer lands in the annulus
// (r, tau r] that would cap the SIR below gamma:
//   kappa = exp(-prl_at_height * (tau^2 - 1) / (1 + 1/gamma))
// prl_at_height is the LoS probability floor over the annulus.
double kappa_bound(double prl_at_height, double gamma, double tau);

struct RegimeThresholds {
    double crawl_slope = 0.5;        // log-log slope below which growth counts as crawling
    double crash_drop_fraction = 0.5; // fraction of peak ASE defining the crash onset
};

struct DensityRange {
    double lo_per_km2 = 0.0;
    double hi_per_km2 = 0.0;
};

struct SweepSample {
    double lambda_per_km2 = 0.0;
    double ase = 0.0;
};

struct CrashDiagnostics {
    std::optional<DensityRange> crawl_interval; // widest run of near-flat log-log slope
    std::optional<double> crash_onset_per_km2;  // first density past the peak under the drop fraction
    double peak_lambda_per_km2 = 0.0;
    double peak_ase = 0.0;
    bool peak_on_boundary = false; // peak sits at an end of the swept range
};

// Classify an ASE sweep (sorted by increasing density, at least 5 points).
CrashDiagnostics classify_regimes(const std::vector<SweepSample>& sweep,
                                  const RegimeThresholds& thresholds = {});

// First density past the curve's peak where the ASE falls below `level`;
// empty if it never does. Used to compare how far densification can go
// before the ASE collapses under different configurations.
std::optional<double> first_density_below(const std::vector<SweepSample>& sweep, double level);

} // namespace udn

#endif // UDN_ASYMPTOTICS_HPP
