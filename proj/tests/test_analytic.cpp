#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "udn/analytic.hpp"
#include "udn/channel_models.hpp"
#include "udn/fading.hpp"
#include "udn/quadrature.hpp"
#include "udn/units.hpp"

using namespace udn;

namespace {

// Total association mass: integral of the serving-distance density over all
// (segment, path) combinations; must be 1: the user always has a server.
double association_mass(const AnalysisConfig& cfg, double lambda) {
    QuadratureSpec q;
    q.rel_tol = 1e-10;
    double total = 0.0;
    for (int n = 0; n < cfg.model.segment_count(); ++n) {
        const PathSegment& seg = cfg.model.segment(n);
        const double L = cfg.model.height();
        const double r_lo = seg.d_lo > L ? std::sqrt(seg.d_lo * seg.d_lo - L * L) : 0.0;
        double r_hi = std::isinf(seg.d_hi) ? 0.0 : std::sqrt(seg.d_hi * seg.d_hi - L * L);
        for (PathType path : {PathType::Los, PathType::Nlos}) {
            auto dens = [&](double r) { return association_density(cfg, lambda, n, r, path); };
            if (std::isinf(seg.d_hi)) {
                total += integrate_semi_infinite(dens, r_lo + 1e-12, q).value;
            } else {
                total += integrate_finite(dens, r_lo + 1e-12, r_hi - 1e-12, q).value;
            }
        }
    }
    return total;
}

// Textbook single-slope Rayleigh interference-limited coverage with nearest-
// station association: p_cov = 1 / (1 + rho(gamma, alpha)) independent of
// density, rho = gamma^{2/alpha} integral_{gamma^{-2/alpha}}^inf du/(1+u^{alpha/2}).
double classical_flat_coverage(double gamma, double alpha) {
    QuadratureSpec q;
    q.rel_tol = 1e-12;
    const double lo = std::pow(gamma, -2.0 / alpha);
    auto integrand = [alpha](double u) { return 1.0 / (1.0 + std::pow(u, alpha / 2.0)); };
    const double rho = std::pow(gamma, 2.0 / alpha) * integrate_semi_infinite(integrand, lo, q).value;
    return 1.0 / (1.0 + rho);
}

} // namespace

TEST_CASE("association density normalizes to one across models and densities") {
    struct Combo {
        AnalysisConfig cfg;
        double lambda;
    };
    Case1Params flat;
    flat.height_m = 0.0;
    const Combo combos[] = {
        {AnalysisConfig(build_3gpp_case1(Case1Params{})), 100.0},
        {AnalysisConfig(build_3gpp_case1(Case1Params{})), 1e4},
        {AnalysisConfig(build_3gpp_case1(flat)), 300.0},
        {AnalysisConfig(build_3gpp_case2(Case2Params{})), 1e3},
        {AnalysisConfig(build_approx_case2(ApproxCase2Params{})), 1e3},
        {AnalysisConfig(build_single_slope(SingleSlopeParams{.height_m = 8.5})), 500.0},
    };
    for (const Combo& c : combos) {
        CAPTURE(c.lambda);
        CHECK(association_mass(c.cfg, c.lambda) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("association density is zero-cost outside its segment and non-negative inside") {
    AnalysisConfig cfg(build_3gpp_case1(Case1Params{}));
    // segment 0 covers 3D distances up to 0.3 km; ground range slightly less
    const double L = cfg.model.height();
    const double r_edge = std::sqrt(0.3 * 0.3 - L * L);
    CHECK_THROWS_AS(association_density(cfg, 100.0, 0, r_edge + 0.01, PathType::Los),
                    std::domain_error);
    for (double r : {0.01, 0.1, 0.25})
        CHECK(association_density(cfg, 100.0, 0, r, PathType::Los) >= 0.0);
}

TEST_CASE("exclusion radii: same-path at r, cross-path solves the gain equation") {
    const PathLossModel m = build_3gpp_case1(Case1Params{});
    const double L = m.height();
    for (double r : {0.02, 0.08}) {
        const ExclusionRadii ex = exclusion_radii(m, 0, r, PathType::Los);
        CHECK(ex.same_path == doctest::Approx(r));
        // an NLoS interferer is weaker at equal distance out here, so it may
        // sit closer than the LoS server without beating it
        CHECK(ex.cross_path < r);
        CHECK(ex.cross_path > 0.0);
        CHECK(m.gain(distance_3d(ex.cross_path, L), PathType::Nlos) ==
              doctest::Approx(m.gain(distance_3d(r, L), PathType::Los)).epsilon(1e-9));
    }
    // the mirror case: LoS interferers outshine an NLoS server, so they are
    // excluded beyond the serving radius
    const ExclusionRadii exn = exclusion_radii(m, 0, 0.02, PathType::Nlos);
    CHECK(exn.cross_path > 0.02);
    CHECK(m.gain(distance_3d(exn.cross_path, L), PathType::Los) ==
          doctest::Approx(m.gain(distance_3d(0.02, L), PathType::Nlos)).epsilon(1e-9));
    // NLoS serving at the origin: LoS interferers excluded out to a fixed radius
    const ExclusionRadii ex0 = exclusion_radii(m, 0, 0.0, PathType::Nlos);
    CHECK(ex0.cross_path == doctest::Approx(0.0168229).epsilon(1e-4));
}

TEST_CASE("void area: zero at zero, increasing, density-free") {
    const PathLossModel m = build_3gpp_case1(Case1Params{});
    CHECK(void_area(m, 0.0, PathType::Los) == doctest::Approx(0.0));
    double prev = 0.0;
    for (double x : {0.05, 0.1, 0.2, 0.5}) {
        const double v = void_area(m, x, PathType::Los);
        CHECK(v >= prev);
        prev = v;
    }
    // beyond the LoS cutoff the LoS void area saturates
    CHECK(void_area(m, 5.0, PathType::Los) == doctest::Approx(void_area(m, 0.4, PathType::Los)).epsilon(1e-9));
    // and the two paths together tile the disc
    for (double x : {0.1, 0.35}) {
        const double disc = pi * x * x;
        CHECK(void_area(m, x, PathType::Los) + void_area(m, x, PathType::Nlos) ==
              doctest::Approx(disc).epsilon(1e-9));
    }
}

TEST_CASE("interference Laplace transform: boundary value and monotonicity") {
    AnalysisConfig cfg(build_3gpp_case1(Case1Params{}));
    CHECK(interference_laplace(cfg, 200.0, 0, 0.05, 0.0, PathType::Los) == doctest::Approx(1.0));
    double prev = 1.0;
    for (double s : {1e8, 1e10, 1e12, 1e14}) {
        const double v = interference_laplace(cfg, 200.0, 0, 0.05, s, PathType::Los);
        CHECK(v <= prev + 1e-15);
        CHECK(v >= 0.0);
        prev = v;
    }
}

TEST_CASE("flat single-slope network reproduces the classical constant coverage") {
    SingleSlopeParams p;
    p.height_m = 0.0;
    AnalysisConfig cfg(build_single_slope(p));
    cfg.noise_power_w = 0.0; // interference-limited regime
    for (double gamma : {0.5, 1.0, 4.0}) {
        const double expect = classical_flat_coverage(gamma, p.alpha);
        const double got1 = coverage_probability(cfg, 100.0, gamma).p_cov;
        const double got2 = coverage_probability(cfg, 3000.0, gamma).p_cov;
        CAPTURE(gamma);
        CHECK(got1 == doctest::Approx(expect).epsilon(1e-8));
        CHECK(got2 == doctest::Approx(got1).epsilon(1e-8)); // density invariance
    }
}

TEST_CASE("coverage terms: breakdown sums to the total, all within [0,1]") {
    AnalysisConfig cfg(build_3gpp_case1(Case1Params{}));
    // sparse network: association reaches past the LoS cutoff, so both
    // segments contribute on both paths
    const CoveragePoint sparse = coverage_probability(cfg, 10.0, 1.0);
    CHECK(sparse.terms.size() == 4);
    // dense network: the far segment is truncated away by the association
    // survival radius and only the near segment's two paths remain
    const CoveragePoint cp = coverage_probability(cfg, 300.0, 1.0);
    CHECK(cp.terms.size() == 2);
    for (const CoveragePoint* point : {&sparse, &cp}) {
        CHECK(point->converged);
        CHECK(point->p_cov > 0.0);
        CHECK(point->p_cov < 1.0);
        double sum = 0.0;
        for (const TermContribution& t : point->terms) {
            CHECK(t.value >= -1e-12);
            sum += t.value;
        }
        CHECK(sum == doctest::Approx(point->p_cov).epsilon(1e-12));
    }
}

TEST_CASE("coverage probability is decreasing in the threshold") {
    AnalysisConfig cfg(build_3gpp_case1(Case1Params{}));
    double prev = 1.0;
    for (double gamma : {0.25, 1.0, 4.0, 16.0}) {
        const double p = coverage_probability(cfg, 200.0, gamma).p_cov;
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("input validation") {
    AnalysisConfig cfg(build_3gpp_case1(Case1Params{}));
    CHECK_THROWS_AS(coverage_probability(cfg, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(coverage_probability(cfg, -5.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(coverage_probability(cfg, 100.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(area_spectral_efficiency(cfg, 100.0, -1.0), std::invalid_argument);
}

TEST_CASE("by-parts rate identity on synthetic tail functions") {
    // step tail: SINR = gamma_c almost surely  =>  ASE = lambda log2(1+gamma_c)
    const double gamma_c = 7.0;
    auto step = [gamma_c](double g) { return g < gamma_c ? 1.0 : 0.0; };
    const double lambda = 42.0;
    const double got = ase_by_parts(step, lambda, 1.0, 1e6, {});
    CHECK(got == doctest::Approx(lambda * std::log2(1.0 + gamma_c)).epsilon(1e-8));

    // exponential tail (unit-mean SINR): lambda [log2(2) e^{-1} +
    //   1/ln2 integral_1^inf e^{-g}/(1+g) dg]
    QuadratureSpec q;
    auto expint = integrate_semi_infinite(
        [](double g) { return std::exp(-g) / (1.0 + g); }, 1.0, q);
    const double expect = lambda * (std::exp(-1.0) + expint.value / std::numbers::ln2);
    auto exp_tail = [](double g) { return std::exp(-g); };
    CHECK(ase_by_parts(exp_tail, lambda, 1.0, 200.0, {}) ==
          doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("full rate integral is consistent with its own coverage factor") {
    AnalysisConfig cfg(build_3gpp_case1(Case1Params{}));
    const double lambda = 150.0;
    const AsePoint ap = area_spectral_efficiency(cfg, lambda, 1.0);
    CHECK(ap.converged);
    const CoveragePoint cp = coverage_probability(cfg, lambda, 1.0);
    CHECK(ap.p_cov_at_gamma0 == doctest::Approx(cp.p_cov).epsilon(1e-6));
    // the by-parts split makes the first term a strict lower bound
    CHECK(ap.ase_bps_hz_km2 > lambda * std::log2(2.0) * cp.p_cov);
}

TEST_CASE("SINR density matches an independent finite difference") {
    AnalysisConfig cfg(build_3gpp_case1(Case1Params{}));
    const double lambda = 100.0;
    const double gamma = 1.5;
    const double pdf = sinr_pdf(cfg, lambda, gamma);
    const double h = 0.02;
    const double fd = (coverage_probability(cfg, lambda, gamma - h).p_cov -
                       coverage_probability(cfg, lambda, gamma + h).p_cov) /
                      (2.0 * h);
    CHECK(pdf == doctest::Approx(fd).epsilon(1e-3));
    CHECK(pdf >= 0.0);
}

TEST_CASE("characteristic-function route agrees with the Laplace route for Rayleigh") {
    AnalysisConfig cfg(build_3gpp_case1(Case1Params{}));
    // K = 0 turns the Rician signal model into the Rayleigh one
    cfg.fading = FadingModel::rician_los(0.0);
    AnalysisConfig ray(build_3gpp_case1(Case1Params{}));
    for (double r : {0.03, 0.12}) {
        for (double gamma : {0.5, 2.0}) {
            const double via_cf = conditional_coverage_rician(cfg, 400.0, 0, r, gamma, PathType::Los);
            const double via_laplace =
                conditional_coverage_rayleigh(ray, 400.0, 0, r, gamma, PathType::Los);
            CAPTURE(r);
            CAPTURE(gamma);
            CHECK(via_cf == doctest::Approx(via_laplace).epsilon(2e-3));
        }
    }
}

TEST_CASE("NLoS-serving links ignore the LoS Rician setting entirely") {
    AnalysisConfig rician(build_3gpp_case1(Case1Params{}));
    rician.fading = FadingModel::rician_los(10.0);
    AnalysisConfig ray(build_3gpp_case1(Case1Params{}));
    // the signal is NLoS -> Rayleigh in both configurations
    const double a = conditional_coverage_rician(rician, 400.0, 0, 0.05, 1.0, PathType::Nlos);
    const double b = conditional_coverage_rayleigh(ray, 400.0, 0, 0.05, 1.0, PathType::Nlos);
    // the two routes share only the model, not the integration path, so the
    // agreement floor is the inversion tolerance rather than machine epsilon
    CHECK(a == doctest::Approx(b).epsilon(1e-4));
}

TEST_CASE("characteristic function: unit at zero frequency, bounded modulus") {
    AnalysisConfig cfg(build_3gpp_case1(Case1Params{}));
    cfg.fading = FadingModel::rician_los(10.0);
    const std::complex<double> at0 = characteristic_fn_inv_sinr(cfg, 300.0, 0, 0.05, PathType::Los, 0.0);
    CHECK(std::abs(at0 - std::complex<double>(1.0, 0.0)) < 1e-9);
    for (double w : {1.0, 30.0, 1e3})
        CHECK(std::abs(characteristic_fn_inv_sinr(cfg, 300.0, 0, 0.05, PathType::Los, w)) <=
              1.0 + 1e-9);
}

TEST_CASE("coverage is stable under a tolerance refinement") {
    AnalysisConfig loose(build_3gpp_case1(Case1Params{}));
    AnalysisConfig tight(build_3gpp_case1(Case1Params{}));
    tight.quadrature.rel_tol = 1e-9;
    tight.quadrature.abs_tol = 1e-13;
    const double a = coverage_probability(loose, 250.0, 1.0).p_cov;
    const double b = coverage_probability(tight, 250.0, 1.0).p_cov;
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("conditional coverage bounds and limits") {
    AnalysisConfig cfg(build_3gpp_case1(Case1Params{}));
    double prev = 1.0;
    for (double gamma : {0.1, 1.0, 10.0, 100.0}) {
        const double c = conditional_coverage_rayleigh(cfg, 200.0, 0, 0.05, gamma, PathType::Los);
        CHECK(c >= 0.0);
        CHECK(c <= prev + 1e-15);
        prev = c;
    }
}
