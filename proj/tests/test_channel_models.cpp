#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "udn/channel_models.hpp"
#include "udn/units.hpp"

using namespace udn;

TEST_CASE("3D distance and its piecewise surrogate") {
    CHECK(distance_3d(0.3, 0.4) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(distance_3d(0.0, 0.0085) == doctest::Approx(0.0085));
    CHECK(distance_3d(1.0, 0.0) == doctest::Approx(1.0));

    const double L = 0.0085;
    SUBCASE("surrogate is a lower bound that never strays far") {
        double sup_err_km = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double r = i * (1.0 / 4000.0);
            const double w = distance_3d(r, L);
            const double wt = approx_distance(r, L);
            CHECK(wt <= w + 1e-15);
            sup_err_km = std::max(sup_err_km, w - wt);
        }
        // the worst gap scales with L and sits near the first branch switch
        CHECK(sup_err_km < 0.21 * L);
        CHECK(sup_err_km > 0.19 * L);
    }
    SUBCASE("branch continuity at the switch points") {
        const double b1 = (std::sqrt(2.0) - 1.0) * L;
        const double b2 = (std::sqrt(2.0) + 1.0) * L;
        CHECK(approx_distance(b1 - 1e-12, L) ==
              doctest::Approx(approx_distance(b1 + 1e-12, L)).epsilon(1e-6));
        CHECK(approx_distance(b2 - 1e-12, L) ==
              doctest::Approx(approx_distance(b2 + 1e-12, L)).epsilon(1e-6));
        CHECK(approx_distance(0.0, L) == doctest::Approx(L));
        // far out the surrogate is just the ground distance
        CHECK(approx_distance(0.9, L) == doctest::Approx(0.9));
    }
    SUBCASE("zero height: exact equality") {
        for (double r : {0.0, 0.1, 0.7}) CHECK(approx_distance(r, 0.0) == doctest::Approx(distance_3d(r, 0.0)));
    }
}

TEST_CASE("two-slope linear-LoS model structure") {
    const PathLossModel m = build_3gpp_case1(Case1Params{});
    CHECK(m.segment_count() == 2);
    CHECK(m.height() == doctest::Approx(0.0085));
    CHECK(m.max_transition() == doctest::Approx(0.3));

    // LoS probability: linear to zero at the transition, zero beyond
    CHECK(m.los_probability(0.0) == doctest::Approx(1.0));
    CHECK(m.los_probability(0.15) == doctest::Approx(0.5));
    CHECK(m.los_probability(0.3) == doctest::Approx(0.0));
    CHECK(m.los_probability(0.8) == doctest::Approx(0.0));

    // gains: positive, strictly decreasing in distance, NLoS below LoS
    double prev_l = 1e300;
    double prev_n = 1e300;
    for (double w : {0.01, 0.05, 0.2, 0.5, 2.0}) {
        const double gl = m.gain(w, PathType::Los);
        const double gn = m.gain(w, PathType::Nlos);
        CHECK(gl > 0.0);
        CHECK(gn > 0.0);
        CHECK(gl < prev_l);
        CHECK(gn < prev_n);
        CHECK(gn < gl);
        prev_l = gl;
        prev_n = gn;
    }
    // reference gains at 1 km in dB
    CHECK(linear_to_db(m.gain(1.0, PathType::Los)) == doctest::Approx(-103.8).epsilon(1e-12));
    CHECK(linear_to_db(m.gain(1.0, PathType::Nlos)) == doctest::Approx(-145.4).epsilon(1e-12));
}

TEST_CASE("exponential-LoS model and its piecewise-linear surrogate") {
    const PathLossModel m2 = build_3gpp_case2(Case2Params{});
    const PathLossModel ma = build_approx_case2(ApproxCase2Params{});
    const double d1 = 0.156 / std::log(10.0); // first branch end of the exponential form

    CHECK(m2.los_probability(d1 * 0.999) == doctest::Approx(0.5).epsilon(1e-2));
    // beyond the branch point: 5 exp(-w/R2)
    CHECK(m2.los_probability(0.1) == doctest::Approx(5.0 * std::exp(-0.1 / 0.030)).epsilon(1e-12));
    CHECK(m2.los_probability(0.3) == doctest::Approx(5.0 * std::exp(-10.0)).epsilon(1e-12));

    // surrogate: certain LoS below 18.4 m, linear to zero at 117.1 m
    CHECK(ma.los_probability(0.010) == doctest::Approx(1.0));
    CHECK(ma.los_probability(0.0184) == doctest::Approx(1.0));
    CHECK(ma.los_probability(0.1171) == doctest::Approx(0.0));
    CHECK(ma.los_probability(0.2) == doctest::Approx(0.0));
    // anchored to pass through 0.5 at the exponential model's branch point
    CHECK(ma.los_probability(d1) == doctest::Approx(0.5).epsilon(2e-3));
    // both stay inside [0, 1] everywhere
    for (double w = 0.0; w < 0.4; w += 0.001) {
        CHECK(m2.los_probability(w) <= 1.0 + 1e-12);
        CHECK(m2.los_probability(w) >= 0.0);
        CHECK(ma.los_probability(w) <= 1.0 + 1e-12);
        CHECK(ma.los_probability(w) >= 0.0);
    }
}

TEST_CASE("single-slope model is one segment, always line of sight") {
    SingleSlopeParams p;
    p.height_m = 8.5;
    const PathLossModel m = build_single_slope(p);
    CHECK(m.segment_count() == 1);
    CHECK(m.max_transition() == doctest::Approx(0.0));
    CHECK(m.los_probability(0.05) == doctest::Approx(1.0));
    CHECK(m.los_probability(5.0) == doctest::Approx(1.0));
    CHECK(m.gain(0.5, PathType::Los) == doctest::Approx(m.gain(0.5, PathType::Nlos)));
}

TEST_CASE("segment lookup is consistent with segment boundaries") {
    const PathLossModel m = build_3gpp_case1(Case1Params{});
    for (int n = 0; n < m.segment_count(); ++n) {
        const PathSegment& seg = m.segment(n);
        const double mid = 0.5 * (seg.d_lo + std::min(seg.d_hi, seg.d_lo + 1.0));
        CHECK(m.segment_of(mid) == n);
    }
    CHECK(std::isinf(m.segment(m.segment_count() - 1).d_hi)); // the last segment is unbounded
}

TEST_CASE("segment-restricted LoS probability: agrees inside, continues smoothly outside") {
    const PathLossModel case2 = build_3gpp_case2(Case2Params{});
    for (int n = 0; n < case2.segment_count(); ++n) {
        const PathSegment& seg = case2.segment(n);
        const double w = std::min(seg.d_lo + 0.01, 0.5 * (seg.d_lo + std::min(seg.d_hi, 1.0)));
        CHECK(case2.segment_los_probability(n, w) ==
              doctest::Approx(case2.los_probability(w)).epsilon(1e-12));
    }
    // the restriction extends its own formula past the boundary without the
    // step the total exhibits there (adaptive rules probe endpoint overshoot)
    const double d1 = case2.segment(0).d_hi;
    CHECK(d1 == doctest::Approx(0.156 / std::log(10.0)).epsilon(1e-9));
    CHECK(case2.segment_los_probability(0, d1 * 1.001) ==
          doctest::Approx(case2.segment_los_probability(0, d1)).epsilon(1e-2));
    CHECK(std::fabs(case2.los_probability(d1 * 1.0000001) - case2.los_probability(d1)) > 0.02);

    const PathLossModel case1 = build_3gpp_case1(Case1Params{});
    CHECK(case1.segment_los_probability(0, 0.15) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(case1.segment_los_probability(1, 0.45) == doctest::Approx(0.0));
    const PathLossModel flat = build_single_slope(SingleSlopeParams{});
    CHECK(flat.segment_los_probability(0, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("equal-gain radius: definition, edge cases, monotonicity") {
    const PathLossModel m = build_3gpp_case1(Case1Params{});
    const double L = m.height();

    SUBCASE("the returned radius equalizes the two path gains") {
        for (double r : {0.02, 0.05, 0.1}) {
            // serving LoS in segment 0 -> NLoS exclusion radius r1
            const double r1 = equal_gain_radius(m, 0, r, PathType::Los);
            if (r1 > 0.0) {
                const double w_serv = distance_3d(r, L);
                const double w_int = distance_3d(r1, L);
                CHECK(m.gain(w_int, PathType::Nlos) ==
                      doctest::Approx(m.gain(w_serv, PathType::Los)).epsilon(1e-9));
            }
        }
    }
    SUBCASE("NLoS-serving at the origin still excludes a LoS disc") {
        const double r2 = equal_gain_radius(m, 0, 0.0, PathType::Nlos);
        CHECK(r2 == doctest::Approx(0.0168229).epsilon(1e-4));
    }
    SUBCASE("monotone in the serving radius") {
        double prev = 0.0;
        for (double r : {0.01, 0.03, 0.06, 0.1}) {
            const double r1 = equal_gain_radius(m, 0, r, PathType::Los);
            CHECK(r1 >= prev - 1e-12);
            prev = r1;
        }
    }
    SUBCASE("single-slope model: both paths coincide, radius equals r") {
        SingleSlopeParams p;
        p.height_m = 8.5;
        const PathLossModel ss = build_single_slope(p);
        for (double r : {0.05, 0.3}) CHECK(equal_gain_radius(ss, 0, r, PathType::Los) == doctest::Approx(r));
    }
}

TEST_CASE("builders validate their parameters") {
    Case1Params bad;
    bad.alpha_los = -1.0;
    CHECK_THROWS_AS(build_3gpp_case1(bad), std::invalid_argument);
    Case1Params bad2;
    bad2.d1_m = 0.0;
    CHECK_THROWS_AS(build_3gpp_case1(bad2), std::invalid_argument);
    SingleSlopeParams bad3;
    bad3.alpha = 0.0;
    CHECK_THROWS_AS(build_single_slope(bad3), std::invalid_argument);
    Case2Params bad4;
    bad4.r2_m = -5.0;
    CHECK_THROWS_AS(build_3gpp_case2(bad4), std::invalid_argument);
}
