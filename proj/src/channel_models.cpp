#include "udn/channel_models.hpp"
#include "udn/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace udn {

namespace {
constexpr double kLn10 = 2.302585092994045684017991454684364208;
}

LosProbability LosProbability::always() {
    LosProbability p;
    p.kind_ = Kind::AlwaysLos;
    return p;
}

LosProbability LosProbability::linear(double d1_km) {
    if (!(d1_km > 0.0)) throw std::invalid_argument("LosProbability::linear: d1 must be > 0");
    LosProbability p;
    p.kind_ = Kind::Linear;
    p.p1_ = d1_km;
    p.transitions_ = {d1_km};
    return p;
}

LosProbability LosProbability::exponential_3gpp(double r1_km, double r2_km) {
    if (!(r1_km > 0.0) || !(r2_km > 0.0))
        throw std::invalid_argument("LosProbability::exponential_3gpp: R1, R2 must be > 0");
    LosProbability p;
    p.kind_ = Kind::Exponential3gpp;
    p.p1_ = r1_km;
    p.p2_ = r2_km;
    p.transitions_ = {r1_km / kLn10};  // 1 - 5e^{-R1/w} meets 5e^{-w/R2} regime switch
    return p;
}

LosProbability LosProbability::three_piece_linear(double d1_km, double d2_km) {
    if (!(0.0 < d1_km && d1_km < d2_km))
        throw std::invalid_argument("LosProbability::three_piece_linear: need 0 < d1 < d2");
    LosProbability p;
    p.kind_ = Kind::ThreePieceLinear;
    p.p1_ = d1_km;
    p.p2_ = d2_km;
    p.transitions_ = {d1_km, d2_km};
    return p;
}

int LosProbability::piece_count() const {
    switch (kind_) {
        case Kind::AlwaysLos: return 1;
        case Kind::Linear: return 2;
        case Kind::Exponential3gpp: return 2;
        case Kind::ThreePieceLinear: return 3;
    }
    return 1;
}

double LosProbability::piece(int n, double w) const {
    switch (kind_) {
        case Kind::AlwaysLos:
            return 1.0;
        case Kind::Linear:
            return n == 0 ? 1.0 - w / p1_ : 0.0;
        case Kind::Exponential3gpp:
            return n == 0 ? 1.0 - 5.0 * std::exp(-p1_ / w) : 5.0 * std::exp(-w / p2_);
        case Kind::ThreePieceLinear:
            if (n == 0) return 1.0;
            if (n == 1) return 1.0 - (w - p1_) / (p2_ - p1_);
            return 0.0;
    }
    return 1.0;
}

double LosProbability::raw(double w) const {
    int n = 0;
    for (double t : transitions_) {
        if (w <= t) break;
        ++n;
    }
    return piece(n, w);
}

double LosProbability::operator()(double w) const {
    return std::clamp(raw(w), 0.0, 1.0);
}

PathLossModel::PathLossModel(std::string name, std::vector<PathSegment> segments,
                             LosProbability los, double height_km)
    : name_(std::move(name)), segments_(std::move(segments)), los_(los), height_km_(height_km) {
    if (segments_.empty()) throw std::invalid_argument("PathLossModel: no segments");
    if (height_km < 0.0) throw std::invalid_argument("PathLossModel: height must be >= 0");
    // segments must tile (L, +inf) in order
    if (std::fabs(segments_.front().d_lo - height_km_) > 1e-15)
        throw std::invalid_argument("PathLossModel: first segment must start at L");
    for (size_t i = 0; i + 1 < segments_.size(); ++i) {
        if (!(segments_[i].d_hi > segments_[i].d_lo) ||
            segments_[i + 1].d_lo != segments_[i].d_hi)
            throw std::invalid_argument("PathLossModel: segments must tile (L, inf)");
    }
    if (!std::isinf(segments_.back().d_hi))
        throw std::invalid_argument("PathLossModel: last segment must extend to infinity");
}

int PathLossModel::segment_of(double w) const {
    if (w < height_km_ * (1.0 - 1e-12))
        throw std::domain_error("PathLossModel: 3D distance below antenna height offset");
    for (size_t i = 0; i + 1 < segments_.size(); ++i)
        if (w <= segments_[i].d_hi) return int(i);
    return int(segments_.size()) - 1;
}

double PathLossModel::segment_gain(int n, double w, PathType path) const {
    const PathSegment& s = segments_.at(size_t(n));
    const double we = std::max(w, min_eval_km_);
    const double a = path == PathType::Los ? s.a_los : s.a_nlos;
    const double alpha = path == PathType::Los ? s.alpha_los : s.alpha_nlos;
    return a * std::pow(we, -alpha);
}

double PathLossModel::gain(double w, PathType path) const {
    return segment_gain(segment_of(w), w, path);
}

double PathLossModel::max_transition() const {
    double t = 0.0;
    for (const auto& s : segments_)
        if (std::isfinite(s.d_hi)) t = std::max(t, s.d_hi);
    return t;
}

double distance_3d(double r_km, double height_km) {
    return std::hypot(r_km, height_km);
}

double approx_distance(double r_km, double height_km) {
    const double L = height_km;
    const double v1 = (std::sqrt(2.0) - 1.0) * L;
    const double v2 = (std::sqrt(2.0) + 1.0) * L;
    if (r_km <= v1) return L;
    if (r_km <= v2) return (r_km + L) / std::sqrt(2.0);
    return r_km;
}

namespace {

void require_positive_exponents(double alpha_los, double alpha_nlos) {
    // alpha <= 0 breaks both the interference integrals and the association
    // ordering, so reject it at construction rather than mid-quadrature.
    if (!(alpha_los > 0.0) || !(alpha_nlos > 0.0))
        throw std::invalid_argument("path-loss exponents must be positive");
}

std::vector<PathSegment> shared_zeta_segments(const std::vector<double>& bounds, double a_los,
                                              double alpha_los, double a_nlos,
                                              double alpha_nlos) {
    require_positive_exponents(alpha_los, alpha_nlos);
    // bounds = {L, t1, ..., tk}; appends the trailing infinite segment
    std::vector<PathSegment> segs;
    for (size_t i = 0; i < bounds.size(); ++i) {
        PathSegment s;
        s.d_lo = bounds[i];
        s.d_hi = (i + 1 < bounds.size()) ? bounds[i + 1]
                                         : std::numeric_limits<double>::infinity();
        s.a_los = a_los;
        s.alpha_los = alpha_los;
        s.a_nlos = a_nlos;
        s.alpha_nlos = alpha_nlos;
        segs.push_back(s);
    }
    return segs;
}

} // namespace

PathLossModel build_3gpp_case1(const Case1Params& p) {
    const double L = meters_to_km(p.height_m);
    const double d1 = meters_to_km(p.d1_m);
    if (!(d1 > L))
        throw std::invalid_argument("build_3gpp_case1: d1 must exceed the height offset L");
    auto segs = shared_zeta_segments({L, d1}, db_to_linear(p.a_los_db), p.alpha_los,
                                     db_to_linear(p.a_nlos_db), p.alpha_nlos);
    return PathLossModel("3gpp_case1", std::move(segs), LosProbability::linear(d1), L);
}

PathLossModel build_3gpp_case2(const Case2Params& p) {
    const double L = meters_to_km(p.height_m);
    const double r1 = meters_to_km(p.r1_m);
    const double r2 = meters_to_km(p.r2_m);
    const double d1 = r1 / kLn10;
    if (!(d1 > L))
        throw std::invalid_argument("build_3gpp_case2: regime switch R1/ln10 must exceed L");
    auto segs = shared_zeta_segments({L, d1}, db_to_linear(p.a_los_db), p.alpha_los,
                                     db_to_linear(p.a_nlos_db), p.alpha_nlos);
    return PathLossModel("3gpp_case2", std::move(segs), LosProbability::exponential_3gpp(r1, r2),
                         L);
}

PathLossModel build_approx_case2(const ApproxCase2Params& p) {
    const double L = meters_to_km(p.height_m);
    const double d1 = meters_to_km(p.d1_m);
    const double d2 = meters_to_km(p.d2_m);
    if (!(d1 > L))
        throw std::invalid_argument("build_approx_case2: d1 must exceed the height offset L");
    auto segs = shared_zeta_segments({L, d1, d2}, db_to_linear(p.a_los_db), p.alpha_los,
                                     db_to_linear(p.a_nlos_db), p.alpha_nlos);
    return PathLossModel("approx_case2", std::move(segs),
                         LosProbability::three_piece_linear(d1, d2), L);
}

PathLossModel build_single_slope(const SingleSlopeParams& p) {
    require_positive_exponents(p.alpha, p.alpha);
    const double L = meters_to_km(p.height_m);
    const double a = db_to_linear(p.a_db);
    std::vector<PathSegment> segs{{L, std::numeric_limits<double>::infinity(), a, p.alpha, a,
                                   p.alpha}};
    return PathLossModel("single_slope", std::move(segs), LosProbability::always(), L);
}

double equal_gain_radius(const PathLossModel& m, int n, double r_km, PathType signal_path) {
    if (r_km < 0.0) throw std::invalid_argument("equal_gain_radius: r must be >= 0");
    const double L = m.height();
    const double w = distance_3d(r_km, L);
    const double target = m.segment_gain(n, w, signal_path);
    const PathType other = signal_path == PathType::Los ? PathType::Nlos : PathType::Los;

    const double w_min = std::max(L, m.min_eval_distance());
    if (m.gain(w_min, other) <= target) return 0.0;  // opposite curve never reaches the target

    double lo = w_min, hi = std::max(w, w_min) + 1.0;
    int guard = 0;
    while (m.gain(hi, other) > target) {
        hi *= 2.0;
        if (++guard > 400)
            throw std::runtime_error("equal_gain_radius: failed to bracket the root");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (m.gain(mid, other) > target)
            lo = mid;
        else
            hi = mid;
    }
    const double root_w = 0.5 * (lo + hi);
    const double rr = root_w * root_w - L * L;
    return rr > 0.0 ? std::sqrt(rr) : 0.0;
}

ModelValidationReport validate(const PathLossModel& m, int points_per_decade) {
    ModelValidationReport rep;
    rep.continuous_los = rep.continuous_nlos = true;
    rep.monotone_los = rep.monotone_nlos = true;
    rep.prob_range_ok = true;
    rep.los_dominates = true;

    const double w_lo = std::max(m.height(), m.min_eval_distance());
    const double w_hi = std::max(10.0 * m.max_transition(), 1000.0);
    const long steps = std::lround(std::log10(w_hi / w_lo) * points_per_decade);
    const double step = std::log(w_hi / w_lo) / double(steps);

    double prev_los = m.gain(w_lo, PathType::Los);
    double prev_nlos = m.gain(w_lo, PathType::Nlos);
    for (long i = 1; i <= steps; ++i) {
        const double w = w_lo * std::exp(step * double(i));
        const double gl = m.gain(w, PathType::Los);
        const double gn = m.gain(w, PathType::Nlos);
        if (gl >= prev_los) rep.monotone_los = false;
        if (gn >= prev_nlos) rep.monotone_nlos = false;
        if (gl < gn * (1.0 - 1e-12)) rep.los_dominates = false;
        const double praw = m.los_function().raw(w);
        if (praw < -1e-12 || praw > 1.0 + 1e-12) rep.prob_range_ok = false;
        if (praw < 0.0 || praw > 1.0) rep.prob_clamped = true;
        prev_los = gl;
        prev_nlos = gn;
    }

    // relative jump across each internal segment boundary, both branches
    for (int n = 0; n + 1 < m.segment_count(); ++n) {
        const double b = m.segment(n).d_hi;
        for (PathType path : {PathType::Los, PathType::Nlos}) {
            const double left = m.gain(b * (1.0 - 1e-9), path);
            const double right = m.gain(b * (1.0 + 1e-9), path);
            const double jump = std::fabs(left - right) / std::max(left, right);
            rep.max_jump = std::max(rep.max_jump, jump);
            if (jump > 1e-6) {
                if (path == PathType::Los)
                    rep.continuous_los = false;
                else
                    rep.continuous_nlos = false;
            }
        }
    }
    return rep;
}

} // namespace udn
