// Command-line front end: density sweeps, engine comparison, bundled
// scenario management. See README.md for the config schema.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "udn/sweep.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int env_default_threads() {
    // The only environment knob: default worker count, overridden by --threads.
    if (const char* v = std::getenv("UDN_SWEEP_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(v, &end, 10);
        if (end && *end == '\0' && n > 0) return static_cast<int>(n);
        std::cerr << "warning: ignoring invalid UDN_SWEEP_THREADS='" << v << "'\n";
    }
    return 0;
}

struct CommonOpts {
    std::string config_path;
    std::string scenario;
    std::optional<std::string> engine;
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
    int threads = 0;
    bool allow_mc_dense = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    auto* cfg = cmd->add_option("--config", o.config_path, "sweep spec JSON file");
    auto* sc = cmd->add_option("--scenario", o.scenario, "bundled scenario name");
    cfg->excludes(sc);
    cmd->add_option("--engine", o.engine, "analytic|mc|both (overrides spec)");
    cmd->add_option("--seed", o.seed, "RNG seed (overrides spec)");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per point (overrides spec)");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all)")
        ->default_val(env_default_threads());
    cmd->add_flag("--allow-mc-dense", o.allow_mc_dense,
                  "run Monte Carlo above the density cost guard");
}

udn::SweepSpec load_spec(const CommonOpts& o) {
    if (o.config_path.empty() && o.scenario.empty())
        throw CLI::ValidationError("spec", "one of --config or --scenario is required");
    udn::SweepSpec spec = o.config_path.empty()
                              ? udn::make_scenario(o.scenario)
                              : udn::spec_from_json(read_file(o.config_path));
    if (o.engine) spec.engine = udn::engine_from_name(*o.engine);
    if (o.seed) spec.seed = *o.seed;
    if (o.trials) spec.mc_trials = *o.trials;
    if (o.threads > 0) spec.threads = o.threads;
    if (o.allow_mc_dense) spec.allow_mc_above_cap = true;
    return spec;
}

void print_diagnostics(const udn::SweepResult& result) {
    for (const udn::CurveDiagnostics& d : result.curves) {
        std::cout << "curve L=" << d.height_m << " m: ";
        if (!d.classified) {
            std::cout << "regimes not classified (grid too sparse or incomplete)\n";
            continue;
        }
        std::cout << "peak ASE " << d.regimes.peak_ase << " at lambda "
                  << d.regimes.peak_lambda_per_km2;
        if (d.regimes.peak_on_boundary) std::cout << " (boundary)";
        if (d.regimes.crawl_interval)
            std::cout << "; crawl [" << d.regimes.crawl_interval->lo_per_km2 << ", "
                      << d.regimes.crawl_interval->hi_per_km2 << "]";
        if (d.regimes.crash_onset_per_km2)
            std::cout << "; crash onset " << *d.regimes.crash_onset_per_km2;
        if (d.ase_below_1) std::cout << "; ASE<1 at " << *d.ase_below_1;
        std::cout << '\n';
    }
}

int run_sweep_cmd(const CommonOpts& o, const std::string& out_dir, const std::string& format) {
    udn::SweepSpec spec = load_spec(o);
    const udn::SweepResult result = udn::run_sweep(spec);

    std::filesystem::create_directories(out_dir);
    const std::string base = (std::filesystem::path(out_dir) / spec.scenario).string();
    if (format == "csv" || format == "both")
        udn::write_table(spec, result.rows, udn::TableFormat::Csv, base + ".csv");
    if (format == "json" || format == "both")
        udn::write_table(spec, result.rows, udn::TableFormat::Json, base + ".json");

    long failed = 0;
    for (const udn::ResultRow& r : result.rows)
        if (!r.error.empty()) ++failed;
    std::cout << "scenario " << spec.scenario << ": " << result.rows.size() << " rows ("
              << failed << " with errors) -> " << base << ".{" << format << "}\n";
    print_diagnostics(result);
    if (failed > 0)
        std::cerr << "warning: " << failed << " point(s) recorded an error; see the table\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage and area-spectral-efficiency sweeps over base-station density"};
    app.require_subcommand(1);

    CommonOpts sweep_opts;
    std::string out_dir = ".";
    std::string format = "both";
    CLI::App* sweep = app.add_subcommand("sweep", "run a density sweep and write tables");
    add_common(sweep, sweep_opts);
    sweep->add_option("--out", out_dir, "output directory")->capture_default_str();
    sweep->add_option("--format", format, "csv|json|both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();

    CommonOpts verify_opts;
    CLI::App* verify = app.add_subcommand("verify", "compare analytic vs Monte Carlo");
    add_common(verify, verify_opts);

    CLI::App* scenarios = app.add_subcommand("scenarios", "bundled scenario library");
    std::string dump_name;
    CLI::App* sc_list = scenarios->add_subcommand("list", "list scenario names");
    CLI::App* sc_dump = scenarios->add_subcommand("dump", "print a scenario spec as JSON");
    sc_dump->add_option("name", dump_name, "scenario name")->required();
    scenarios->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return run_sweep_cmd(sweep_opts, out_dir, format);
        if (verify->parsed()) {
            const udn::SweepSpec spec = load_spec(verify_opts);
            const udn::VerifyReport report = udn::verify(spec);
            std::cout << report.summary();
            return report.exit_code();
        }
        if (sc_list->parsed()) {
            for (const std::string& n : udn::scenario_names()) std::cout << n << '\n';
            return 0;
        }
        if (sc_dump->parsed()) {
            std::cout << udn::spec_to_json(udn::make_scenario(dump_name));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
