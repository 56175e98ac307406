// JSON boundary for sweep specs and result tables. Canonical form: every
// field written explicitly in a fixed key order, so dumps are deterministic
// and hashable; parsing fills defaults for absent keys.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "udn/sweep.hpp"

namespace udn {

namespace {

using Json = nlohmann::ordered_json;

std::string model_kind_name(ModelSpec::Kind k) {
    switch (k) {
        case ModelSpec::Kind::Case1: return "case1";
        case ModelSpec::Kind::Case2: return "case2";
        case ModelSpec::Kind::ApproxCase2: return "approx_case2";
        case ModelSpec::Kind::SingleSlope: return "single_slope";
    }
    return "case1";
}

ModelSpec::Kind model_kind_from(const std::string& s) {
    if (s == "case1") return ModelSpec::Kind::Case1;
    if (s == "case2") return ModelSpec::Kind::Case2;
    if (s == "approx_case2") return ModelSpec::Kind::ApproxCase2;
    if (s == "single_slope") return ModelSpec::Kind::SingleSlope;
    throw std::invalid_argument("config: unknown model type '" + s + "'");
}

Json fading_spec_to_json(const FadingSpec& f) {
    Json j;
    j["kind"] = f.kind == FadingKind::Rician ? "rician" : "rayleigh";
    j["k"] = f.k;
    return j;
}

FadingSpec fading_spec_from(const Json& j) {
    FadingSpec f;
    const std::string kind = j.value("kind", "rayleigh");
    if (kind == "rician")
        f = FadingSpec::rician(j.value("k", 0.0));
    else if (kind == "rayleigh")
        f = FadingSpec::rayleigh();
    else
        throw std::invalid_argument("config: unknown fading kind '" + kind + "'");
    return f;
}

Json model_to_json(const ModelSpec& m) {
    Json j;
    j["type"] = model_kind_name(m.kind);
    switch (m.kind) {
        case ModelSpec::Kind::Case1:
            j["height_m"] = m.case1.height_m;
            j["d1_m"] = m.case1.d1_m;
            j["a_los_db"] = m.case1.a_los_db;
            j["alpha_los"] = m.case1.alpha_los;
            j["a_nlos_db"] = m.case1.a_nlos_db;
            j["alpha_nlos"] = m.case1.alpha_nlos;
            break;
        case ModelSpec::Kind::Case2:
            j["height_m"] = m.case2.height_m;
            j["r1_m"] = m.case2.r1_m;
            j["r2_m"] = m.case2.r2_m;
            j["a_los_db"] = m.case2.a_los_db;
            j["alpha_los"] = m.case2.alpha_los;
            j["a_nlos_db"] = m.case2.a_nlos_db;
            j["alpha_nlos"] = m.case2.alpha_nlos;
            break;
        case ModelSpec::Kind::ApproxCase2:
            j["height_m"] = m.approx_case2.height_m;
            j["d1_m"] = m.approx_case2.d1_m;
            j["d2_m"] = m.approx_case2.d2_m;
            j["a_los_db"] = m.approx_case2.a_los_db;
            j["alpha_los"] = m.approx_case2.alpha_los;
            j["a_nlos_db"] = m.approx_case2.a_nlos_db;
            j["alpha_nlos"] = m.approx_case2.alpha_nlos;
            break;
        case ModelSpec::Kind::SingleSlope:
            j["height_m"] = m.single_slope.height_m;
            j["a_db"] = m.single_slope.a_db;
            j["alpha"] = m.single_slope.alpha;
            break;
    }
    return j;
}

ModelSpec model_from_json(const Json& j) {
    ModelSpec m;
    m.kind = model_kind_from(j.value("type", "case1"));
    switch (m.kind) {
        case ModelSpec::Kind::Case1: {
            Case1Params p;
            p.height_m = j.value("height_m", p.height_m);
            p.d1_m = j.value("d1_m", p.d1_m);
            p.a_los_db = j.value("a_los_db", p.a_los_db);
            p.alpha_los = j.value("alpha_los", p.alpha_los);
            p.a_nlos_db = j.value("a_nlos_db", p.a_nlos_db);
            p.alpha_nlos = j.value("alpha_nlos", p.alpha_nlos);
            m.case1 = p;
            break;
        }
        case ModelSpec::Kind::Case2: {
            Case2Params p;
            p.height_m = j.value("height_m", p.height_m);
            p.r1_m = j.value("r1_m", p.r1_m);
            p.r2_m = j.value("r2_m", p.r2_m);
            p.a_los_db = j.value("a_los_db", p.a_los_db);
            p.alpha_los = j.value("alpha_los", p.alpha_los);
            p.a_nlos_db = j.value("a_nlos_db", p.a_nlos_db);
            p.alpha_nlos = j.value("alpha_nlos", p.alpha_nlos);
            m.case2 = p;
            break;
        }
        case ModelSpec::Kind::ApproxCase2: {
            ApproxCase2Params p;
            p.height_m = j.value("height_m", p.height_m);
            p.d1_m = j.value("d1_m", p.d1_m);
            p.d2_m = j.value("d2_m", p.d2_m);
            p.a_los_db = j.value("a_los_db", p.a_los_db);
            p.alpha_los = j.value("alpha_los", p.alpha_los);
            p.a_nlos_db = j.value("a_nlos_db", p.a_nlos_db);
            p.alpha_nlos = j.value("alpha_nlos", p.alpha_nlos);
            m.approx_case2 = p;
            break;
        }
        case ModelSpec::Kind::SingleSlope: {
            SingleSlopeParams p;
            p.height_m = j.value("height_m", p.height_m);
            p.a_db = j.value("a_db", p.a_db);
            p.alpha = j.value("alpha", p.alpha);
            m.single_slope = p;
            break;
        }
    }
    return m;
}

Json antenna_to_json(const AntennaSpec& a) {
    Json j;
    j["enabled"] = a.enabled;
    j["boresight_gain_db"] = a.boresight_gain_db;
    j["vertical_hpbw_deg"] = a.vertical_hpbw_deg;
    j["cos_exponent"] = a.cos_exponent;
    j["sidelobe_floor_db"] = a.sidelobe_floor_db;
    j["tilt_margin"] = a.tilt_margin;
    return j;
}

AntennaSpec antenna_from_json(const Json& j) {
    AntennaSpec a;
    a.enabled = j.value("enabled", true);
    a.boresight_gain_db = j.value("boresight_gain_db", a.boresight_gain_db);
    a.vertical_hpbw_deg = j.value("vertical_hpbw_deg", a.vertical_hpbw_deg);
    a.cos_exponent = j.value("cos_exponent", a.cos_exponent);
    a.sidelobe_floor_db = j.value("sidelobe_floor_db", a.sidelobe_floor_db);
    a.tilt_margin = j.value("tilt_margin", a.tilt_margin);
    return a;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::string spec_to_json(const SweepSpec& spec) {
    Json j;
    j["model"] = model_to_json(spec.model);
    j["fading"]["los"] = fading_spec_to_json(spec.fading.los);
    j["fading"]["nlos"] = fading_spec_to_json(spec.fading.nlos);
    if (spec.antenna)
        j["antenna"] = antenna_to_json(*spec.antenna);
    else
        j["antenna"] = nullptr;
    j["quadrature"]["rel_tol"] = spec.quadrature.rel_tol;
    j["quadrature"]["abs_tol"] = spec.quadrature.abs_tol;
    j["quadrature"]["max_subdivisions"] = spec.quadrature.max_subdivisions;
    j["quadrature"]["tail_map"] =
        spec.quadrature.tail_map == TailMap::Exponential ? "exponential" : "rational";
    j["quadrature"]["omega_max"] = spec.quadrature.omega_max;
    j["quadrature"]["max_octave_subdivisions"] = spec.quadrature.max_octave_subdivisions;
    j["sim"]["trials"] = spec.mc_trials;
    j["sim"]["seed"] = spec.seed;
    j["sim"]["threads"] = spec.threads;
    j["sim"]["radius_km"] = spec.sim_radius_km;
    j["sim"]["gamma_cap_db"] = spec.gamma_cap_db;
    j["sim"]["mc_lambda_cap"] = spec.mc_lambda_cap;
    j["sim"]["allow_mc_above_cap"] = spec.allow_mc_above_cap;
    j["sweep"]["scenario"] = spec.scenario;
    j["sweep"]["engine"] = engine_name(spec.engine);
    j["sweep"]["heights_m"] = spec.heights_m;
    j["sweep"]["lambda_grid"] = spec.lambda_grid;
    j["sweep"]["gamma_db"] = spec.gamma_db;
    j["sweep"]["gamma0_db"] = spec.gamma0_db;
    j["sweep"]["tx_power_dbm"] = spec.tx_power_dbm;
    j["sweep"]["noise_dbm"] = spec.noise_dbm;
    j["sweep"]["verify_p_cov_tol"] = spec.verify_p_cov_tol;
    return j.dump(2) + "\n";
}

SweepSpec spec_from_json(const std::string& text) {
    const Json j = Json::parse(text);
    SweepSpec spec;
    if (j.contains("model")) spec.model = model_from_json(j.at("model"));
    if (j.contains("fading")) {
        const Json& f = j.at("fading");
        if (f.contains("los")) spec.fading.los = fading_spec_from(f.at("los"));
        if (f.contains("nlos")) spec.fading.nlos = fading_spec_from(f.at("nlos"));
    }
    if (j.contains("antenna") && !j.at("antenna").is_null())
        spec.antenna = antenna_from_json(j.at("antenna"));
    if (j.contains("quadrature")) {
        const Json& q = j.at("quadrature");
        spec.quadrature.rel_tol = q.value("rel_tol", spec.quadrature.rel_tol);
        spec.quadrature.abs_tol = q.value("abs_tol", spec.quadrature.abs_tol);
        spec.quadrature.max_subdivisions =
            q.value("max_subdivisions", spec.quadrature.max_subdivisions);
        const std::string tm = q.value("tail_map", "rational");
        if (tm == "exponential")
            spec.quadrature.tail_map = TailMap::Exponential;
        else if (tm == "rational")
            spec.quadrature.tail_map = TailMap::Rational;
        else
            throw std::invalid_argument("config: unknown tail_map '" + tm + "'");
        spec.quadrature.omega_max = q.value("omega_max", spec.quadrature.omega_max);
        spec.quadrature.max_octave_subdivisions =
            q.value("max_octave_subdivisions", spec.quadrature.max_octave_subdivisions);
    }
    if (j.contains("sim")) {
        const Json& s = j.at("sim");
        spec.mc_trials = s.value("trials", spec.mc_trials);
        spec.seed = s.value("seed", spec.seed);
        spec.threads = s.value("threads", spec.threads);
        spec.sim_radius_km = s.value("radius_km", spec.sim_radius_km);
        spec.gamma_cap_db = s.value("gamma_cap_db", spec.gamma_cap_db);
        spec.mc_lambda_cap = s.value("mc_lambda_cap", spec.mc_lambda_cap);
        spec.allow_mc_above_cap = s.value("allow_mc_above_cap", spec.allow_mc_above_cap);
    }
    if (j.contains("sweep")) {
        const Json& s = j.at("sweep");
        spec.scenario = s.value("scenario", spec.scenario);
        if (s.contains("engine")) spec.engine = engine_from_name(s.at("engine").get<std::string>());
        if (s.contains("heights_m")) spec.heights_m = s.at("heights_m").get<std::vector<double>>();
        if (s.contains("lambda_grid")) {
            const Json& g = s.at("lambda_grid");
            if (g.is_array()) {
                spec.lambda_grid = g.get<std::vector<double>>();
            } else if (g.is_object()) {
                // {"from": 0.1, "to": 1e5, "points_per_decade": 10}
                const double from = g.at("from").get<double>();
                const double to = g.at("to").get<double>();
                const double ppd = g.value("points_per_decade", 10.0);
                if (!(from > 0.0) || !(to > from) || !(ppd > 0.0))
                    throw std::invalid_argument("config: bad lambda_grid range");
                const int n = static_cast<int>(std::lround(std::log10(to / from) * ppd)) + 1;
                spec.lambda_grid.clear();
                for (int i = 0; i < n; ++i)
                    spec.lambda_grid.push_back(from * std::pow(10.0, i / ppd));
                spec.lambda_grid.back() = to;
            } else {
                throw std::invalid_argument("config: lambda_grid must be array or range object");
            }
        }
        spec.gamma_db = s.value("gamma_db", spec.gamma_db);
        spec.gamma0_db = s.value("gamma0_db", spec.gamma0_db);
        spec.tx_power_dbm = s.value("tx_power_dbm", spec.tx_power_dbm);
        spec.noise_dbm = s.value("noise_dbm", spec.noise_dbm);
        spec.verify_p_cov_tol = s.value("verify_p_cov_tol", spec.verify_p_cov_tol);
    }
    return spec;
}

std::string config_hash(const SweepSpec& spec) {
    const std::uint64_t h = fnv1a64(spec_to_json(spec));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf, 16);
}

std::string render_json_table(const SweepSpec& spec, const std::vector<ResultRow>& rows) {
    Json j;
    j["metadata"]["tool"] = "udn_sweep";
    j["metadata"]["format_version"] = 1;
    j["metadata"]["scenario"] = spec.scenario;
    j["metadata"]["engine"] = engine_name(spec.engine);
    j["metadata"]["seed"] = spec.seed;
    j["metadata"]["config_hash"] = config_hash(spec);
    j["metadata"]["gamma_db"] = spec.gamma_db;
    j["metadata"]["gamma0_db"] = spec.gamma0_db;
    j["rows"] = Json::array();
    for (const ResultRow& r : rows) {
        Json row;
        row["lambda_bs_per_km2"] = r.lambda;
        row["L_m"] = r.height_m;
        row["gamma_db"] = r.gamma_db;
        row["p_cov_analytic"] = r.analytic_run ? Json(r.p_cov_analytic) : Json(nullptr);
        row["ase_analytic_bps_hz_km2"] = r.analytic_run ? Json(r.ase_analytic) : Json(nullptr);
        row["p_cov_mc"] = r.mc_run ? Json(r.p_cov_mc) : Json(nullptr);
        row["p_cov_mc_ci"] = r.mc_run ? Json(r.p_cov_mc_ci) : Json(nullptr);
        row["ase_mc"] = r.mc_run ? Json(r.ase_mc) : Json(nullptr);
        row["ase_mc_ci"] = r.mc_run ? Json(r.ase_mc_ci) : Json(nullptr);
        row["engine"] = r.engine_label;
        row["seed"] = r.seed;
        if (!r.error.empty()) row["error"] = r.error;
        j["rows"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

} // namespace udn
