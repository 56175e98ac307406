#include "udn/sweep.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "udn/montecarlo.hpp"

namespace udn {

// Defined in config_json.cpp next to the other JSON plumbing.
std::string render_json_table(const SweepSpec& spec, const std::vector<ResultRow>& rows);

namespace {

// -inf dBm means "no noise": the engines take exact zero watts.
double power_watt(double dbm) {
    if (std::isinf(dbm) && dbm < 0.0) return 0.0;
    return dbm_to_watt(dbm);
}

// Shortest round-trip decimal form: deterministic, parses back bit-exact.
std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double wall_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

AnalysisConfig analysis_for(const SweepSpec& spec, double height_m) {
    AnalysisConfig cfg(spec.model.build(height_m));
    cfg.fading = spec.fading;
    cfg.tx_power_w = power_watt(spec.tx_power_dbm);
    cfg.noise_power_w = power_watt(spec.noise_dbm);
    cfg.quadrature = spec.quadrature;
    return cfg;
}

SimConfig sim_for(const SweepSpec& spec, const AnalysisConfig& analysis) {
    SimConfig sim(analysis);
    sim.antenna = spec.antenna;
    sim.sim_radius_km = spec.sim_radius_km;
    sim.trials = spec.mc_trials;
    sim.seed = spec.seed;
    sim.gamma_cap_db = spec.gamma_cap_db;
    sim.threads = spec.threads;
    return sim;
}

std::vector<double> curve_heights(const SweepSpec& spec) {
    if (!spec.heights_m.empty()) return spec.heights_m;
    return {spec.model.default_height_m()};
}

double points_per_decade(const std::vector<double>& grid) {
    if (grid.size() < 2) return 0.0;
    const double decades = std::log10(grid.back() / grid.front());
    if (decades <= 0.0) return 0.0;
    return static_cast<double>(grid.size() - 1) / decades;
}

} // namespace

std::string engine_name(EngineChoice e) {
    switch (e) {
        case EngineChoice::Analytic: return "analytic";
        case EngineChoice::MonteCarlo: return "mc";
        case EngineChoice::Both: return "both";
    }
    return "analytic";
}

EngineChoice engine_from_name(const std::string& name) {
    if (name == "analytic") return EngineChoice::Analytic;
    if (name == "mc" || name == "montecarlo") return EngineChoice::MonteCarlo;
    if (name == "both") return EngineChoice::Both;
    throw std::invalid_argument("unknown engine '" + name + "' (analytic|mc|both)");
}

PathLossModel ModelSpec::build(double height_m) const {
    switch (kind) {
        case Kind::Case1: {
            Case1Params p = case1;
            p.height_m = height_m;
            return build_3gpp_case1(p);
        }
        case Kind::Case2: {
            Case2Params p = case2;
            p.height_m = height_m;
            return build_3gpp_case2(p);
        }
        case Kind::ApproxCase2: {
            ApproxCase2Params p = approx_case2;
            p.height_m = height_m;
            return build_approx_case2(p);
        }
        case Kind::SingleSlope: {
            SingleSlopeParams p = single_slope;
            p.height_m = height_m;
            return build_single_slope(p);
        }
    }
    throw std::logic_error("ModelSpec: bad kind");
}

double ModelSpec::default_height_m() const {
    switch (kind) {
        case Kind::Case1: return case1.height_m;
        case Kind::Case2: return case2.height_m;
        case Kind::ApproxCase2: return approx_case2.height_m;
        case Kind::SingleSlope: return single_slope.height_m;
    }
    return 0.0;
}

void validate(const SweepSpec& spec) {
    if (spec.lambda_grid.empty())
        throw std::invalid_argument("sweep: density grid is empty");
    double prev = 0.0;
    for (double l : spec.lambda_grid) {
        if (!(l > 0.0)) throw std::invalid_argument("sweep: densities must be positive");
        if (!(l > prev)) throw std::invalid_argument("sweep: densities must be strictly ascending");
        prev = l;
    }
    for (double h : spec.heights_m)
        if (h < 0.0) throw std::invalid_argument("sweep: heights must be non-negative");
    if (spec.mc_trials < 1000 &&
        (spec.engine == EngineChoice::MonteCarlo || spec.engine == EngineChoice::Both))
        throw std::invalid_argument("sweep: Monte Carlo needs at least 1000 trials");
    (void)spec.model.build(curve_heights(spec).front()); // builder validates params
}

SweepResult run_sweep(const SweepSpec& spec) {
    validate(spec);
    const std::vector<double> heights = curve_heights(spec);
    const std::size_t n_lambda = spec.lambda_grid.size();
    const double gamma = db_to_linear(spec.gamma_db);
    const double gamma0 = db_to_linear(spec.gamma0_db);
    const bool want_analytic =
        spec.engine == EngineChoice::Analytic || spec.engine == EngineChoice::Both;
    const bool want_mc =
        spec.engine == EngineChoice::MonteCarlo || spec.engine == EngineChoice::Both;

    SweepResult out;
    out.rows.resize(heights.size() * n_lambda);
    std::vector<AnalysisConfig> configs;
    configs.reserve(heights.size());
    for (double h : heights) configs.push_back(analysis_for(spec, h));

    for (std::size_t c = 0; c < heights.size(); ++c)
        for (std::size_t i = 0; i < n_lambda; ++i) {
            ResultRow& row = out.rows[c * n_lambda + i];
            row.lambda = spec.lambda_grid[i];
            row.height_m = heights[c];
            row.gamma_db = spec.gamma_db;
            row.seed = spec.seed;
        }

    if (want_analytic) {
        std::atomic<std::size_t> next{0};
        const std::size_t total = out.rows.size();
        auto worker = [&]() {
            for (;;) {
                const std::size_t k = next.fetch_add(1);
                if (k >= total) return;
                ResultRow& row = out.rows[k];
                const AnalysisConfig& cfg = configs[k / n_lambda];
                const double t0 = wall_seconds();
                try {
                    const CoveragePoint cp = coverage_probability(cfg, row.lambda, gamma);
                    const AsePoint ap = area_spectral_efficiency(cfg, row.lambda, gamma0);
                    row.p_cov_analytic = cp.p_cov;
                    row.ase_analytic = ap.ase_bps_hz_km2;
                    row.analytic_converged = cp.converged && ap.converged;
                    row.analytic_run = true;
                } catch (const std::exception& e) {
                    row.error = std::string("analytic: ") + e.what();
                }
                row.wall_time_s += wall_seconds() - t0;
            }
        };
        int threads = spec.threads > 0
                          ? spec.threads
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        threads = static_cast<int>(
            std::min<std::size_t>(static_cast<std::size_t>(threads), total));
        if (threads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(threads));
            for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
            for (std::thread& th : pool) th.join();
        }
    }

    if (want_mc) {
        // One point at a time; the simulator parallelizes its own trials.
        for (std::size_t c = 0; c < heights.size(); ++c) {
            const SimConfig sim = sim_for(spec, configs[c]);
            for (std::size_t i = 0; i < n_lambda; ++i) {
                ResultRow& row = out.rows[c * n_lambda + i];
                if (row.lambda > spec.mc_lambda_cap && !spec.allow_mc_above_cap)
                    continue; // cost guard: leave MC fields unpopulated
                const double t0 = wall_seconds();
                try {
                    const Estimate cov = estimate_coverage(sim, row.lambda, gamma);
                    const Estimate ase = estimate_ase(sim, row.lambda, gamma0);
                    row.p_cov_mc = cov.mean;
                    row.p_cov_mc_ci = cov.ci_half_width;
                    row.ase_mc = ase.mean;
                    row.ase_mc_ci = ase.ci_half_width;
                    row.mc_run = true;
                } catch (const std::exception& e) {
                    if (!row.error.empty()) row.error += "; ";
                    row.error += std::string("mc: ") + e.what();
                }
                row.wall_time_s += wall_seconds() - t0;
            }
        }
    }

    for (ResultRow& row : out.rows) {
        if (row.analytic_run && row.mc_run)
            row.engine_label = "both";
        else if (row.analytic_run)
            row.engine_label = "analytic";
        else if (row.mc_run)
            row.engine_label = "mc";
        else
            row.engine_label = "none";
    }

    // Regime classification per curve, off whichever engine produced a full
    // ASE curve (analytic preferred).
    const double ppd = points_per_decade(spec.lambda_grid);
    for (std::size_t c = 0; c < heights.size(); ++c) {
        CurveDiagnostics diag;
        diag.height_m = heights[c];
        std::vector<SweepSample> samples;
        samples.reserve(n_lambda);
        bool complete = true;
        for (std::size_t i = 0; i < n_lambda; ++i) {
            const ResultRow& row = out.rows[c * n_lambda + i];
            double ase = 0.0;
            if (row.analytic_run)
                ase = row.ase_analytic;
            else if (row.mc_run)
                ase = row.ase_mc;
            else
                complete = false;
            samples.push_back({row.lambda, ase});
        }
        if (complete && samples.size() >= 5 && ppd >= kMinPointsPerDecade) {
            try {
                diag.regimes = classify_regimes(samples);
                diag.ase_below_1 = first_density_below(samples, 1.0);
                diag.classified = true;
            } catch (const std::exception&) {
                diag.classified = false;
            }
        }
        out.curves.push_back(std::move(diag));
    }
    return out;
}

namespace {

void append_csv_cell(std::string& s, bool present, double v) {
    s += ',';
    if (present) s += format_double(v);
}

} // namespace

std::string render_table(const SweepSpec& spec, const std::vector<ResultRow>& rows,
                         TableFormat format) {
    if (rows.empty()) throw std::invalid_argument("render_table: no rows");
    if (format == TableFormat::Csv) {
        std::string s =
            "lambda_bs_per_km2,L_m,gamma_db,p_cov_analytic,ase_analytic_bps_hz_km2,"
            "p_cov_mc,p_cov_mc_ci,ase_mc,ase_mc_ci,engine,seed\n";
        for (const ResultRow& r : rows) {
            s += format_double(r.lambda);
            s += ',';
            s += format_double(r.height_m);
            s += ',';
            s += format_double(r.gamma_db);
            append_csv_cell(s, r.analytic_run, r.p_cov_analytic);
            append_csv_cell(s, r.analytic_run, r.ase_analytic);
            append_csv_cell(s, r.mc_run, r.p_cov_mc);
            append_csv_cell(s, r.mc_run, r.p_cov_mc_ci);
            append_csv_cell(s, r.mc_run, r.ase_mc);
            append_csv_cell(s, r.mc_run, r.ase_mc_ci);
            s += ',';
            s += r.engine_label;
            s += ',';
            s += std::to_string(r.seed);
            s += '\n';
        }
        return s;
    }
    return render_json_table(spec, rows);
}

void write_table(const SweepSpec& spec, const std::vector<ResultRow>& rows,
                 TableFormat format, const std::string& path) {
    const std::string body = render_table(spec, rows, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_table: cannot open " + path);
    out << body;
    if (!out) throw std::runtime_error("write_table: short write to " + path);
}

int VerifyReport::exit_code() const {
    if (degraded || !convergence_ok) return 3;
    if (!tolerances_ok) return 2;
    return 0;
}

std::string VerifyReport::summary() const {
    std::ostringstream os;
    os << "verify: " << points.size() << " point(s)\n";
    for (const VerifyPoint& p : points) {
        os << "  lambda=" << format_double(p.lambda) << " L=" << format_double(p.height_m);
        if (!p.error.empty()) {
            os << "  ERROR " << p.error << '\n';
            continue;
        }
        os << "  p_cov " << format_double(p.p_cov_analytic) << " vs "
           << format_double(p.p_cov_mc) << " (tol " << format_double(p.p_cov_tol) << ")"
           << "  ase " << format_double(p.ase_analytic) << " vs " << format_double(p.ase_mc)
           << " (tol " << format_double(p.ase_tol) << ")  "
           << (p.pass ? "pass" : "FAIL") << '\n';
    }
    os << (tolerances_ok ? "tolerances: pass" : "tolerances: FAIL") << '\n';
    os << (convergence_ok ? "convergence: ok" : "convergence: FAIL") << '\n';
    if (degraded) os << "degraded: analytic tolerance too loose for a trustworthy comparison\n";
    os << "exit code " << exit_code() << '\n';
    return os.str();
}

VerifyReport verify(const SweepSpec& spec) {
    SweepSpec both = spec;
    both.engine = EngineChoice::Both;
    both.allow_mc_above_cap = true; // a comparison needs both sides everywhere
    const SweepResult result = run_sweep(both);

    VerifyReport report;
    report.tolerances_ok = true;
    report.convergence_ok = true;
    // A loose analytic tolerance makes the reference itself unreliable; flag
    // it instead of letting wide error bars pass silently.
    report.degraded = both.quadrature.rel_tol > 1e-3;

    for (const ResultRow& row : result.rows) {
        VerifyPoint p;
        p.lambda = row.lambda;
        p.height_m = row.height_m;
        if (!row.analytic_run || !row.mc_run) {
            p.error = row.error.empty() ? "missing engine output" : row.error;
            p.pass = false;
            report.convergence_ok = false;
            report.points.push_back(std::move(p));
            continue;
        }
        if (!row.analytic_converged) report.convergence_ok = false;
        p.p_cov_analytic = row.p_cov_analytic;
        p.p_cov_mc = row.p_cov_mc;
        p.p_cov_tol = std::max(spec.verify_p_cov_tol, 3.0 * row.p_cov_mc_ci);
        p.ase_analytic = row.ase_analytic;
        p.ase_mc = row.ase_mc;
        p.ase_tol = std::max({0.10 * std::fabs(row.ase_analytic), 3.0 * row.ase_mc_ci, 1e-3});
        const bool cov_ok = std::fabs(p.p_cov_analytic - p.p_cov_mc) <= p.p_cov_tol;
        const bool ase_ok = std::fabs(p.ase_analytic - p.ase_mc) <= p.ase_tol;
        p.pass = cov_ok && ase_ok;
        if (!p.pass) report.tolerances_ok = false;
        report.points.push_back(std::move(p));
    }
    return report;
}

namespace {

std::vector<double> log_grid(double from, double to, double per_decade) {
    const int n = static_cast<int>(std::lround(std::log10(to / from) * per_decade)) + 1;
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g.push_back(from * std::pow(10.0, i / per_decade));
    g.back() = to; // pin the endpoint against rounding drift
    return g;
}

} // namespace

std::vector<std::string> scenario_names() {
    return {
        "fig3_case1_L8.5",      "fig3_case1_L0",   "fig3_single_slope_L8.5",
        "fig3_single_slope_L0", "fig4_L_sweep",    "fig6_antenna_mc",
        "fig7_rician_K10",      "fig8_case2_L8.5", "fig8_approx_case2_L8.5",
    };
}

SweepSpec make_scenario(const std::string& name) {
    SweepSpec spec;
    spec.scenario = name;
    spec.lambda_grid = log_grid(1e-1, 1e5, 10.0);
    if (name == "fig3_case1_L8.5") {
        spec.heights_m = {8.5};
    } else if (name == "fig3_case1_L0") {
        spec.heights_m = {0.0};
    } else if (name == "fig3_single_slope_L8.5") {
        spec.model.kind = ModelSpec::Kind::SingleSlope;
        spec.heights_m = {8.5};
    } else if (name == "fig3_single_slope_L0") {
        spec.model.kind = ModelSpec::Kind::SingleSlope;
        spec.heights_m = {0.0};
    } else if (name == "fig4_L_sweep") {
        spec.heights_m = {3.5, 8.5, 18.5};
    } else if (name == "fig6_antenna_mc") {
        spec.engine = EngineChoice::MonteCarlo;
        spec.heights_m = {8.5};
        spec.lambda_grid = log_grid(1e1, 1e5, 4.0);
        AntennaSpec ant;
        ant.enabled = true;
        spec.antenna = ant;
        spec.mc_trials = 2000;
        spec.allow_mc_above_cap = true;
    } else if (name == "fig7_rician_K10") {
        spec.engine = EngineChoice::Both;
        spec.heights_m = {8.5};
        spec.fading = FadingModel::rician_los(10.0);
        spec.lambda_grid = {3e2, 1e3, 3e3, 1e4};
        spec.mc_trials = 50000;
        spec.verify_p_cov_tol = 0.03; // documented relaxed comparison bar
    } else if (name == "fig8_case2_L8.5") {
        spec.model.kind = ModelSpec::Kind::Case2;
        spec.heights_m = {8.5};
        spec.lambda_grid = log_grid(1e0, 1e4, 10.0);
    } else if (name == "fig8_approx_case2_L8.5") {
        spec.model.kind = ModelSpec::Kind::ApproxCase2;
        spec.heights_m = {8.5};
        spec.lambda_grid = log_grid(1e0, 1e4, 10.0);
    } else {
        throw std::invalid_argument("unknown scenario '" + name + "'");
    }
    return spec;
}

} // namespace udn
