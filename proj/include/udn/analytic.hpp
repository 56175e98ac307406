#ifndef UDN_ANALYTIC_HPP
#define UDN_ANALYTIC_HPP

// Downlink coverage probability and area spectral efficiency for a Poisson
// field of base stations under the piecewise LoS/NLoS path loss model.
//
// The typical user sits at the origin and associates with the station of
// largest fading-free gain. Coverage splits into per-segment, per-path terms
//   p_cov = sum_n (T_n^L + T_n^NL),
//   T_n^path = integral over r of Pr[SINR > gamma | serving at r] f_n^path(r)
// where f_n^path is the association distance density. Rayleigh signal fading
// uses the interference Laplace transform in closed form; Rician signal
// fading inverts the characteristic function of 1/SINR (Gil-Pelaez).

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "udn/channel_models.hpp"
#include "udn/fading.hpp"
#include "udn/quadrature.hpp"
#include "udn/units.hpp"

namespace udn {

struct AnalysisConfig {
    PathLossModel model;
    FadingModel fading = FadingModel::all_rayleigh();
    double tx_power_w = 0.0;    // defaults to 24 dBm in the constructor
    double noise_power_w = 0.0; // defaults to -95 dBm (includes the UE noise figure as stated)
    QuadratureSpec quadrature{};

    explicit AnalysisConfig(PathLossModel m);
};

struct TermContribution {
    int segment = 0;
    PathType path = PathType::Los;
    double value = 0.0;
};

struct CoveragePoint {
    double lambda_per_km2 = 0.0;
    double gamma = 0.0; // linear SINR threshold
    double p_cov = 0.0;
    std::vector<TermContribution> terms;
    bool converged = true;
};

struct AsePoint {
    double lambda_per_km2 = 0.0;
    double gamma0 = 0.0; // linear minimum working SINR
    double ase_bps_hz_km2 = 0.0;
    double p_cov_at_gamma0 = 0.0;
    bool converged = true;
};

struct ExclusionRadii {
    double same_path = 0.0;  // closest possible same-path interferer (the serving radius)
    double cross_path = 0.0; // closest possible opposite-path interferer
};

// Interferer-free radii consistent with smallest-path-loss association when
// the serving link lies in segment n, path signal_path, at ground radius r.
ExclusionRadii exclusion_radii(const PathLossModel& m, int n, double r_km, PathType signal_path);

// Area of the region within ground radius x weighted by the probability that
// a link there is on `path`: 2 pi * integral_0^x Pr^path(w(u)) u du.
// Multiplied by lambda it is the void exponent of path-`path` stations.
double void_area(const PathLossModel& m, double x_km, PathType path,
                 const QuadratureSpec& spec = {});

// Association distance density f_n^path(r): the serving station lies in
// segment n on `path` at ground radius r. Integrates to 1 over all (n, path).
double association_density(const AnalysisConfig& cfg, double lambda, int n, double r_km,
                           PathType path);

// E[exp(-s I_agg)] conditioned on the serving link (segment n, signal_path,
// ground radius r); the product of LoS- and NLoS-interferer factors, each a
// Campbell-theorem exponential with the matching exclusion radius.
double interference_laplace(const AnalysisConfig& cfg, double lambda, int n, double r_km,
                            double s, PathType signal_path);

// Pr[SINR > gamma | serving link] with an exponentially distributed signal
// power: exp(-gamma P_N / (P zeta)) * L_I(gamma / (P zeta)).
double conditional_coverage_rayleigh(const AnalysisConfig& cfg, double lambda, int n, double r_km,
                                     double gamma, PathType signal_path);

// Characteristic function E[exp(i omega / SINR)] conditioned on the serving
// link; the outer integral runs over the signal fading density, the inner
// Campbell exponentials cover both interferer paths.
std::complex<double> characteristic_fn_inv_sinr(const AnalysisConfig& cfg, double lambda, int n,
                                                double r_km, PathType signal_path, double omega);

// Pr[SINR > gamma | serving link] for arbitrary signal fading via Gil-Pelaez
// inversion of the characteristic function of 1/SINR.
double conditional_coverage_rician(const AnalysisConfig& cfg, double lambda, int n, double r_km,
                                   double gamma, PathType signal_path);

// Total coverage probability with the per-term breakdown retained.
CoveragePoint coverage_probability(const AnalysisConfig& cfg, double lambda, double gamma);

// The by-parts identity on a finite threshold range, for any CCDF:
//   lambda [ log2(1+gamma0) ccdf(gamma0)
//            + 1/ln2 * integral_{gamma0}^{gamma_max} ccdf(g)/(1+g) dg ].
// area_spectral_efficiency uses the same reduction with an adaptive
// gamma_max; exposed so the identity can be validated on synthetic CCDFs.
double ase_by_parts(const std::function<double(double)>& ccdf, double lambda, double gamma0,
                    double gamma_max, const QuadratureSpec& spec = {});

// ASE = lambda E[log2(1 + SINR); SINR > gamma0], evaluated by parts:
//   lambda [ log2(1+gamma0) p_cov(gamma0) + 1/ln2 * integral p_cov(gamma)/(1+gamma) dgamma ]
// which avoids differentiating the CCDF.
AsePoint area_spectral_efficiency(const AnalysisConfig& cfg, double lambda, double gamma0);

// SINR density at gamma from a Richardson-extrapolated central difference of
// the CCDF; diagnostic only, ASE never differentiates.
double sinr_pdf(const AnalysisConfig& cfg, double lambda, double gamma);

} // namespace udn

#endif // UDN_ANALYTIC_HPP
