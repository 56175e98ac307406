#include "udn/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace udn {

double pairwise_sir(double r_km, double tau, double height_km, double alpha_los)
{
    if (r_km < 0.0)
        throw std::invalid_argument("pairwise_sir: negative distance");
    if (tau <= 1.0)
        throw std::invalid_argument("pairwise_sir: tau must exceed 1");
    if (height_km == 0.0)
        return std::pow(tau, alpha_los); // exact algebraic reduction, constant in r
    const double num = r_km * r_km + height_km * height_km;
    const double den = tau * tau * r_km * r_km + height_km * height_km;
    return std::pow(den / num, 0.5 * alpha_los);
}

double kappa_bound(double prl_at_height, double gamma, double tau)
{
    if (prl_at_height <= 0.0 || prl_at_height > 1.0)
        throw std::invalid_argument("kappa_bound: LoS probability outside (0, 1]");
    if (gamma <= 0.0)
        throw std::invalid_argument("kappa_bound: threshold must be positive");
    if (tau <= 1.0)
        throw std::invalid_argument("kappa_bound: tau must exceed 1");
    // Exponent grouped as a division chain: folding the threshold factor and
    // the LoS floor into one divisor lets the representation error of a
    // decimal prl_at_height cancel in the rounding (0.8, 1, 8 -> exactly
    // -25.2), where a product-first grouping lands one ulp high and exp()
    // turns that into a few-ulp relative slip in the bound.
    return std::exp(-(tau * tau - 1.0) / ((1.0 + 1.0 / gamma) / prl_at_height));
}

CrashDiagnostics classify_regimes(const std::vector<SweepSample>& sweep,
                                  const RegimeThresholds& thresholds)
{
    if (sweep.size() < 5)
        throw std::invalid_argument("classify_regimes: need at least 5 sweep points");
    for (std::size_t i = 1; i < sweep.size(); ++i)
        if (!(sweep[i].lambda_per_km2 > sweep[i - 1].lambda_per_km2))
            throw std::invalid_argument("classify_regimes: densities must be strictly increasing");

    CrashDiagnostics diag;

    std::size_t peak = 0;
    for (std::size_t i = 1; i < sweep.size(); ++i)
        if (sweep[i].ase > sweep[peak].ase)
            peak = i;
    diag.peak_lambda_per_km2 = sweep[peak].lambda_per_km2;
    diag.peak_ase = sweep[peak].ase;
    diag.peak_on_boundary = (peak == 0 || peak + 1 == sweep.size());

    // Crawl: widest contiguous run of near-flat log-log slope, |slope| below
    // the threshold. Slow growth and a small decrease both count; a steep
    // decline (the crash itself) does not. Slopes are rescale-invariant, so
    // diagnostics only depend on the curve shape.
    const auto slope = [&](std::size_t i) {
        const double dl = std::log(sweep[i + 1].lambda_per_km2) - std::log(sweep[i].lambda_per_km2);
        if (sweep[i].ase <= 0.0 || sweep[i + 1].ase <= 0.0)
            return -std::numeric_limits<double>::infinity();
        return (std::log(sweep[i + 1].ase) - std::log(sweep[i].ase)) / dl;
    };
    const auto crawling = [&](std::size_t i) {
        return std::fabs(slope(i)) < thresholds.crawl_slope;
    };
    double best_width = 0.0;
    std::size_t i = 0;
    while (i + 1 < sweep.size()) {
        if (crawling(i)) {
            std::size_t j = i;
            while (j + 1 < sweep.size() && crawling(j))
                ++j;
            const double width = std::log(sweep[j].lambda_per_km2) - std::log(sweep[i].lambda_per_km2);
            if (width > best_width) {
                best_width = width;
                diag.crawl_interval = DensityRange{sweep[i].lambda_per_km2, sweep[j].lambda_per_km2};
            }
            i = j;
        } else {
            ++i;
        }
    }

    for (std::size_t k = peak + 1; k < sweep.size(); ++k) {
        if (sweep[k].ase < thresholds.crash_drop_fraction * diag.peak_ase) {
            diag.crash_onset_per_km2 = sweep[k].lambda_per_km2;
            break;
        }
    }
    return diag;
}

std::optional<double> first_density_below(const std::vector<SweepSample>& sweep, double level) {
    std::size_t peak = 0;
    for (std::size_t i = 1; i < sweep.size(); ++i)
        if (sweep[i].ase > sweep[peak].ase)
            peak = i;
    for (std::size_t i = peak + 1; i < sweep.size(); ++i)
        if (sweep[i].ase < level)
            return sweep[i].lambda_per_km2;
    return std::nullopt;
}

} // namespace udn
