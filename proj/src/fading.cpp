#include "udn/fading.hpp"
#include "udn/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace udn {

namespace {

// I0(z) = sum_k (z^2/4)^k / (k!)^2, adequate below z = 15
double i0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= q / (double(k) * double(k));
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

// e^{-z} I0(z) ~ (2 pi z)^{-1/2} sum_k a_k / z^k with
// a_k = (1^2 3^2 ... (2k-1)^2) / (k! 8^k); truncated at the smallest term.
double i0e_asymptotic(double z) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 30; ++k) {
        const double f = double(2 * k - 1);
        const double next = term * f * f / (8.0 * double(k) * z);
        if (next >= term) break;  // asymptotic series started diverging
        term = next;
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum / std::sqrt(2.0 * pi * z);
}

} // namespace

double bessel_i0(double z) {
    if (z < 0.0) throw std::domain_error("bessel_i0: argument must be >= 0");
    if (z > 700.0)
        throw std::domain_error("bessel_i0: overflow for z > 700, use bessel_i0_scaled");
    if (z < 15.0) return i0_series(z);
    return i0e_asymptotic(z) * std::exp(z);
}

double bessel_i0_scaled(double z) {
    if (z < 0.0) throw std::domain_error("bessel_i0_scaled: argument must be >= 0");
    if (z < 15.0) return i0_series(z) * std::exp(-z);
    return i0e_asymptotic(z);
}

double fading_pdf(const FadingSpec& spec, double x) {
    if (x < 0.0) throw std::invalid_argument("fading_pdf: x must be >= 0");
    if (spec.kind == FadingKind::Rayleigh || spec.k == 0.0) return std::exp(-x);
    const double k = spec.k;
    const double z = 2.0 * std::sqrt(k * (k + 1.0) * x);
    // (K+1) I0(z) e^{-K-(K+1)x} computed with the scaled Bessel to avoid
    // overflow of I0 at large arguments
    return (k + 1.0) * bessel_i0_scaled(z) * std::exp(z - k - (k + 1.0) * x);
}

double fading_ccdf(const FadingSpec& spec, double x, const QuadratureSpec& quad) {
    if (x < 0.0) throw std::invalid_argument("fading_ccdf: x must be >= 0");
    if (spec.kind == FadingKind::Rayleigh || spec.k == 0.0) return std::exp(-x);
    QuadratureSpec q = quad;
    q.tail_map = TailMap::Exponential;  // density has an exponential tail
    auto r = integrate_semi_infinite([&](double t) { return fading_pdf(spec, t); }, x, q);
    return std::clamp(r.value, 0.0, 1.0);
}

std::complex<double> fading_char_fn(const FadingSpec& spec, double t) {
    const std::complex<double> jt(0.0, t);
    if (spec.kind == FadingKind::Rayleigh || spec.k == 0.0) return 1.0 / (1.0 - jt);
    const double k = spec.k;
    // scaled noncentral chi^2(2 dof, noncentrality 2K):
    // E[e^{itg}] = (1 - it/(K+1))^{-1} exp(i K t / (K+1 - it))
    return std::exp(jt * k / (k + 1.0 - jt)) / (1.0 - jt / (k + 1.0));
}

double fading_laplace(const FadingSpec& spec, double s) {
    if (spec.kind == FadingKind::Rayleigh || spec.k == 0.0) return 1.0 / (1.0 + s);
    const double k = spec.k;
    return std::exp(-k * s / (k + 1.0 + s)) / (1.0 + s / (k + 1.0));
}

namespace {

// series fallbacks keep 1 - e^{z} and log(1+z) exact for tiny |z|
std::complex<double> log1p_c(std::complex<double> z) {
    if (std::abs(z) < 1e-4)
        return z * (1.0 - z * (0.5 - z * (1.0 / 3.0 - z * 0.25)));
    return std::log(1.0 + z);
}

std::complex<double> expm1_c(std::complex<double> z) {
    if (std::abs(z) < 1e-4)
        return z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
    return std::exp(z) - 1.0;
}

} // namespace

double fading_one_minus_laplace(const FadingSpec& spec, double s) {
    if (spec.kind == FadingKind::Rayleigh || spec.k == 0.0) return s / (1.0 + s);
    const double k = spec.k;
    // -log M = log1p(s/(K+1)) + K s/(K+1+s), then 1 - M = -expm1(log M)
    return -std::expm1(-(std::log1p(s / (k + 1.0)) + k * s / (k + 1.0 + s)));
}

std::complex<double> fading_one_minus_char_fn(const FadingSpec& spec, double t) {
    const std::complex<double> jt(0.0, t);
    if (spec.kind == FadingKind::Rayleigh || spec.k == 0.0) return -jt / (1.0 - jt);
    const double k = spec.k;
    const std::complex<double> log_phi = -log1p_c(-jt / (k + 1.0)) + jt * k / (k + 1.0 - jt);
    return -expm1_c(log_phi);
}

double sample_gain(const FadingSpec& spec, Stream& rng) {
    if (spec.kind == FadingKind::Rayleigh || spec.k == 0.0) return rng.exponential();
    const double k = spec.k;
    const double mean_amp = std::sqrt(k / (k + 1.0));
    const double sigma = std::sqrt(0.5 / (k + 1.0));
    const double re = mean_amp + sigma * rng.normal();
    const double im = sigma * rng.normal();
    return re * re + im * im;
}

} // namespace udn
