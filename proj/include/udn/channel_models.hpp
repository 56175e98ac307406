#ifndef UDN_CHANNEL_MODELS_HPP
#define UDN_CHANNEL_MODELS_HPP

// Piecewise multi-slope path loss with per-segment LoS/NLoS branches and a
// nonzero BS-UE antenna height difference L. All distances are in km, gains
// are linear. The 3D link distance is w = sqrt(r^2 + L^2) for a UE at ground
// distance r, so the model domain starts at w = L.

#include <limits>
#include <string>
#include <vector>

namespace udn {

enum class PathType { Los, Nlos };

struct PathSegment {
    double d_lo = 0.0;  // exclusive lower 3D-distance bound (km); first segment starts at L
    double d_hi = std::numeric_limits<double>::infinity();  // inclusive upper bound
    double a_los = 1.0;      // gain at 1 km, LoS branch: zeta^L(w) = a_los w^{-alpha_los}
    double alpha_los = 2.0;
    double a_nlos = 1.0;
    double alpha_nlos = 3.0;
};

// LoS probability as a function of the 3D distance w. Raw variant values are
// clamped to [0, 1] on evaluation; validate() reports whether the clamp ever
// engages on a dense grid.
class LosProbability {
  public:
    enum class Kind { AlwaysLos, Linear, Exponential3gpp, ThreePieceLinear };

    static LosProbability always();
    static LosProbability linear(double d1_km);
    // 1 - 5 exp(-R1/w) up to the crossover d1 = R1/ln(10), then 5 exp(-w/R2)
    static LosProbability exponential_3gpp(double r1_km, double r2_km);
    // 1 on (0, d1], linear ramp down on (d1, d2], 0 beyond
    static LosProbability three_piece_linear(double d1_km, double d2_km);

    double operator()(double w) const;  // composite, clamped
    double raw(double w) const;         // before clamping
    double piece(int n, double w) const;  // branch n evaluated at w (0-based)
    int piece_count() const;
    // boundaries between consecutive pieces, size piece_count()-1
    const std::vector<double>& transitions() const { return transitions_; }
    Kind kind() const { return kind_; }

  private:
    Kind kind_ = Kind::AlwaysLos;
    double p1_ = 0.0, p2_ = 0.0;
    std::vector<double> transitions_;
};

struct ModelValidationReport {
    bool continuous_los = false;
    bool continuous_nlos = false;
    bool monotone_los = false;
    bool monotone_nlos = false;
    double max_jump = 0.0;     // worst relative mismatch across segment boundaries
    bool prob_range_ok = false;  // raw LoS probability stayed in [0, 1]
    bool prob_clamped = false;   // clamp engaged somewhere on the grid
    bool los_dominates = false;  // zeta^L >= zeta^NL everywhere on the grid

    bool ok() const {
        return continuous_los && continuous_nlos && monotone_los && monotone_nlos &&
               prob_range_ok;
    }
};

class PathLossModel {
  public:
    PathLossModel(std::string name, std::vector<PathSegment> segments, LosProbability los,
                  double height_km);

    const std::string& name() const { return name_; }
    double height() const { return height_km_; }
    int segment_count() const { return int(segments_.size()); }
    const PathSegment& segment(int n) const { return segments_.at(size_t(n)); }
    const LosProbability& los_function() const { return los_; }

    // Distances below this floor are clamped up before evaluating the power
    // law; only reachable when L = 0.
    double min_eval_distance() const { return min_eval_km_; }
    void set_min_eval_distance(double km) { min_eval_km_ = km; }

    int segment_of(double w) const;  // first segment closed at L, others (d_lo, d_hi]
    double gain(double w, PathType path) const;                  // composite zeta^Path
    double segment_gain(int n, double w, PathType path) const;   // zeta_n^Path
    double los_probability(double w) const { return los_(w); }
    double segment_los_probability(int n, double w) const { return los_.piece(n, w); }

    // largest finite segment boundary; 0 when the model has a single segment
    double max_transition() const;

  private:
    std::string name_;
    std::vector<PathSegment> segments_;
    LosProbability los_;
    double height_km_ = 0.0;
    double min_eval_km_ = 1e-6;
};

double distance_3d(double r_km, double height_km);

// Piecewise lower bound of distance_3d used in closed-form work: L near the
// cell centre, (r+L)/sqrt(2) in between, r far out; branch switches at
// (sqrt(2)-1)L and (sqrt(2)+1)L.
double approx_distance(double r_km, double height_km);

// Builder parameters live at the configuration boundary: metres and dB.
// Gains are dB relative to 1 km.
struct Case1Params {
    double height_m = 8.5;
    double d1_m = 300.0;
    double a_los_db = -103.8;
    double alpha_los = 2.09;
    double a_nlos_db = -145.4;
    double alpha_nlos = 3.75;
};

struct Case2Params {
    double height_m = 8.5;
    double r1_m = 156.0;
    double r2_m = 30.0;
    double a_los_db = -103.8;
    double alpha_los = 2.09;
    double a_nlos_db = -145.4;
    double alpha_nlos = 3.75;
};

struct ApproxCase2Params {
    double height_m = 8.5;
    double d1_m = 18.4;
    double d2_m = 117.1;
    double a_los_db = -103.8;
    double alpha_los = 2.09;
    double a_nlos_db = -145.4;
    double alpha_nlos = 3.75;
};

struct SingleSlopeParams {
    double height_m = 0.0;
    double a_db = -145.4;
    double alpha = 3.75;
};

PathLossModel build_3gpp_case1(const Case1Params& p = {});
PathLossModel build_3gpp_case2(const Case2Params& p = {});
PathLossModel build_approx_case2(const ApproxCase2Params& p = {});
PathLossModel build_single_slope(const SingleSlopeParams& p = {});

inline double path_gain(const PathLossModel& m, double w, PathType path) {
    return m.gain(w, path);
}

// Ground radius at which the opposite path's composite gain equals segment
// n's gain for signal_path at ground radius r. Returns 0 when no finite root
// exists (the opposite curve never reaches the target gain, so no exclusion
// is needed). Bracketed bisection, <= 200 iterations, |interval| < 1e-12 km.
double equal_gain_radius(const PathLossModel& m, int n, double r_km, PathType signal_path);

// Dense-grid structural checks; points_per_decade >= 1e4 mirrors the
// contract under which the report's booleans are quoted.
ModelValidationReport validate(const PathLossModel& m, int points_per_decade = 10000);

} // namespace udn

#endif // UDN_CHANNEL_MODELS_HPP
