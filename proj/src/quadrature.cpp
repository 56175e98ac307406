#include "udn/quadrature.hpp"
#include "udn/units.hpp"

#include <algorithm>
#include <limits>

namespace udn {

InversionResult invert_characteristic_tail(const std::function<std::complex<double>(double)>& charfn,
                                           double gamma, const QuadratureSpec& spec,
                                           double omega_anchor) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("invert_characteristic_tail: gamma must be > 0");

    const double x = 1.0 / gamma;
    auto integrand = [&](double w) {
        const std::complex<double> rot(std::cos(w * x), -std::sin(w * x));
        return std::imag(rot * charfn(w)) / w;
    };

    QuadratureSpec oct_spec;
    oct_spec.rel_tol = 1e-7;
    oct_spec.abs_tol = spec.abs_tol / 8.0;
    oct_spec.max_subdivisions = spec.max_octave_subdivisions;

    InversionResult out;
    double lo = 0.0;
    double width = omega_anchor > 0.0 ? omega_anchor : pi / (4.0 * x);
    double total = 0.0;
    bool converged = true;
    int consecutive_small = 0;
    int consecutive_dead = 0;
    for (int octave = 0; octave < 64; ++octave) {
        const double hi = lo + width;
        // once the characteristic function's envelope is negligible across the
        // octave, its contribution is bounded by max|F| ln(hi/lo); skip the
        // adaptive pass rather than resolving oscillation that cannot matter
        double bound = std::numeric_limits<double>::infinity();
        if (lo > 0.0) {
            double env = 0.0;
            for (int j = 0; j <= 6; ++j) {
                env = std::max(env, std::abs(charfn(lo + j * (hi - lo) / 6.0)));
                out.evaluations += 1;
            }
            bound = 1.5 * env * std::log(hi / lo);
        }
        double piece = 0.0;
        if (bound >= spec.abs_tol) {
            auto r = integrate_finite(integrand, lo, hi, oct_spec);
            piece = r.value;
            total += piece;
            out.evaluations += r.evaluations;
            converged = converged && r.converged;
        }
        out.omega_reached = hi;
        out.last_octave = piece;
        if (std::fabs(piece) < spec.abs_tol)
            ++consecutive_small;
        else
            consecutive_small = 0;
        if (bound < spec.abs_tol / 16.0)
            ++consecutive_dead;
        else
            consecutive_dead = 0;
        // never stop before a few full periods of e^{-i w x} (small anchors
        // make early octaves artificially tiny) -- unless the envelope itself
        // has provably died off
        if (consecutive_small >= 2 && octave >= 3 && hi * x >= 8.0 * pi) break;
        if (consecutive_dead >= 2 && octave >= 3) break;
        lo = hi;
        width *= 2.0;
        if (lo >= spec.omega_max) {
            converged = false;
            break;
        }
    }

    out.raw = 0.5 - total / pi;
    out.probability = std::clamp(out.raw, 0.0, 1.0);
    out.clamped = out.probability != out.raw;
    out.converged = converged;
    return out;
}

} // namespace udn
