#ifndef UDN_SWEEP_HPP
#define UDN_SWEEP_HPP

// Configuration-driven density sweeps: evaluates the analytic engine and/or
// the Monte Carlo simulator over a base-station density grid, emits table
// artifacts (CSV/JSON), compares the two engines, and classifies the growth
// regimes of each curve. All dB <-> linear conversion happens here; the
// engines underneath are linear-domain only.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "udn/analytic.hpp"
#include "udn/antenna.hpp"
#include "udn/asymptotics.hpp"
#include "udn/channel_models.hpp"
#include "udn/fading.hpp"

namespace udn {

enum class EngineChoice { Analytic, MonteCarlo, Both };

std::string engine_name(EngineChoice e);
EngineChoice engine_from_name(const std::string& name);

// Which path-loss family to build, with its parameters; the sweep overrides
// the antenna-height difference per curve.
struct ModelSpec {
    enum class Kind { Case1, Case2, ApproxCase2, SingleSlope };
    Kind kind = Kind::Case1;
    Case1Params case1;
    Case2Params case2;
    ApproxCase2Params approx_case2;
    SingleSlopeParams single_slope;

    PathLossModel build(double height_m) const;
    double default_height_m() const;
};

struct SweepSpec {
    std::string scenario = "custom";
    ModelSpec model;
    FadingModel fading = FadingModel::all_rayleigh();
    std::optional<AntennaSpec> antenna;

    std::vector<double> heights_m;    // empty = model's own height
    std::vector<double> lambda_grid;  // BSs/km^2, strictly ascending
    double gamma_db = 0.0;            // coverage threshold
    double gamma0_db = 0.0;           // rate threshold inside the ASE
    double tx_power_dbm = 24.0;
    double noise_dbm = -95.0;         // use -inf for a no-noise study

    EngineChoice engine = EngineChoice::Analytic;
    QuadratureSpec quadrature;

    long mc_trials = 20000;
    std::uint64_t seed = 1;
    int threads = 0;                 // 0 = all hardware threads
    double sim_radius_km = 0.0;      // 0 = auto rule
    double gamma_cap_db = 60.0;
    double mc_lambda_cap = 1e4;      // cost guard: MC skipped above this...
    bool allow_mc_above_cap = false; // ...unless overridden
    double verify_p_cov_tol = 0.02;  // absolute floor in verify()
};

// Throws std::invalid_argument on empty/unsorted/non-positive grids.
void validate(const SweepSpec& spec);

// Minimum points per decade needed before regimes are classified.
constexpr double kMinPointsPerDecade = 4.0;

struct ResultRow {
    double lambda = 0.0;
    double height_m = 0.0;
    double gamma_db = 0.0;
    double p_cov_analytic = 0.0;
    double ase_analytic = 0.0;
    double p_cov_mc = 0.0;
    double p_cov_mc_ci = 0.0;
    double ase_mc = 0.0;
    double ase_mc_ci = 0.0;
    bool analytic_run = false;
    bool mc_run = false;
    bool analytic_converged = true;
    std::uint64_t seed = 0;
    std::string engine_label;
    std::string error;        // per-point failure note; empty = clean
    double wall_time_s = 0.0; // in-memory diagnostic, never serialized
};

struct CurveDiagnostics {
    double height_m = 0.0;
    bool classified = false;
    CrashDiagnostics regimes;           // valid when classified
    std::optional<double> ase_below_1;  // first density with ASE < 1 bps/Hz/km^2
};

struct SweepResult {
    std::vector<ResultRow> rows; // ordered by (curve index, grid index)
    std::vector<CurveDiagnostics> curves;
};

// Evaluates every (height, lambda) pair. Analytic points run on a worker
// pool; Monte Carlo points run one at a time with the simulator's own pool.
// Per-point exceptions are recorded in-row and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec);

enum class TableFormat { Csv, Json };

// CSV columns, exactly: lambda_bs_per_km2, L_m, gamma_db, p_cov_analytic,
// ase_analytic_bps_hz_km2, p_cov_mc, p_cov_mc_ci, ase_mc, ase_mc_ci,
// engine, seed. Fields an engine did not produce stay empty (CSV) or null
// (JSON). JSON adds a metadata block (config hash, format version). Output
// is byte-identical across reruns of the same spec and seed.
std::string render_table(const SweepSpec& spec, const std::vector<ResultRow>& rows,
                         TableFormat format);
void write_table(const SweepSpec& spec, const std::vector<ResultRow>& rows,
                 TableFormat format, const std::string& path);

// Engine comparison. p_cov passes when |analytic - MC| <= max(tol0, 3 CI)
// with tol0 = spec.verify_p_cov_tol; ASE passes when the difference is
// within max(10% of the analytic value, 3 CI, 1e-3 bps/Hz/km^2).
struct VerifyPoint {
    double lambda = 0.0;
    double height_m = 0.0;
    double p_cov_analytic = 0.0;
    double p_cov_mc = 0.0;
    double p_cov_tol = 0.0;
    double ase_analytic = 0.0;
    double ase_mc = 0.0;
    double ase_tol = 0.0;
    bool pass = false;
    std::string error;
};

struct VerifyReport {
    std::vector<VerifyPoint> points;
    bool tolerances_ok = false;
    bool convergence_ok = false; // false when any point failed to converge
    bool degraded = false;       // analytic tolerance too loose to trust
    // 0 = pass, 2 = tolerance failure, 3 = convergence failure/degraded.
    int exit_code() const;
    std::string summary() const;
};

VerifyReport verify(const SweepSpec& spec);

// Bundled sweep definitions covering the reference figures.
std::vector<std::string> scenario_names();
SweepSpec make_scenario(const std::string& name);

// JSON round trip for SweepSpec (sections: model, fading, antenna,
// quadrature, sim, sweep). Canonical dumps are deterministic.
std::string spec_to_json(const SweepSpec& spec);
SweepSpec spec_from_json(const std::string& text);

// FNV-1a 64-bit hash of the canonical JSON form, as fixed-width hex.
std::string config_hash(const SweepSpec& spec);

} // namespace udn

#endif // UDN_SWEEP_HPP
