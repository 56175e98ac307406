#ifndef UDN_FADING_HPP
#define UDN_FADING_HPP

// Multipath fading power distributions, unit mean by construction.
// Rayleigh power is Exp(1); Rician power with factor K is a scaled
// noncentral chi-square with 2 degrees of freedom,
//   f(x) = (K+1) exp(-K - (K+1)x) I0(2 sqrt(K(K+1)x)).

#include <complex>

#include "udn/quadrature.hpp"
#include "udn/rng.hpp"

namespace udn {

enum class FadingKind { Rayleigh, Rician };

struct FadingSpec {
    FadingKind kind = FadingKind::Rayleigh;
    double k = 0.0;  // Rician K factor (linear); ignored for Rayleigh

    static FadingSpec rayleigh() { return {FadingKind::Rayleigh, 0.0}; }
    static FadingSpec rician(double k_linear) { return {FadingKind::Rician, k_linear}; }
};

// Per-link-state assignment; NLoS links are Rayleigh in every scenario here,
// the LoS assignment is the configurable one.
struct FadingModel {
    FadingSpec los = FadingSpec::rayleigh();
    FadingSpec nlos = FadingSpec::rayleigh();

    static FadingModel all_rayleigh() { return {}; }
    static FadingModel rician_los(double k_linear) {
        return {FadingSpec::rician(k_linear), FadingSpec::rayleigh()};
    }
    bool pure_rayleigh() const {
        return (los.kind == FadingKind::Rayleigh || los.k == 0.0) &&
               (nlos.kind == FadingKind::Rayleigh || nlos.k == 0.0);
    }
    const FadingSpec& on(bool is_los) const { return is_los ? los : nlos; }
};

// Modified Bessel function of the first kind, order zero. Power series below
// z = 15, asymptotic expansion beyond; the scaled variant e^{-z} I0(z) is
// stable for all z >= 0, the unscaled one overflows past z ~ 709.
double bessel_i0(double z);
double bessel_i0_scaled(double z);

double fading_pdf(const FadingSpec& spec, double x);

// CCDF Pr[g > x]; the Rician branch integrates the density numerically.
double fading_ccdf(const FadingSpec& spec, double x, const QuadratureSpec& quad = {});

// E[exp(i t g)] and E[exp(-s g)] in closed form.
std::complex<double> fading_char_fn(const FadingSpec& spec, double t);
double fading_laplace(const FadingSpec& spec, double s);

// 1 - E[exp(-s g)] and 1 - E[exp(i t g)] without cancellation for small
// arguments, where both behave like s (resp. -i t) times the unit mean.
// These are the per-interferer factors of Campbell-theorem exponents.
double fading_one_minus_laplace(const FadingSpec& spec, double s);
std::complex<double> fading_one_minus_char_fn(const FadingSpec& spec, double t);

double sample_gain(const FadingSpec& spec, Stream& rng);

} // namespace udn

#endif // UDN_FADING_HPP
