#include "jjsim/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include <json.hpp>

namespace jjsim::cli {

namespace {

using nlohmann::json;

enum class KeyType { number, integer, string, boolean };

const std::map<std::string, KeyType>& key_types() {
    static const std::map<std::string, KeyType> table = {
        {"experiment", KeyType::string},
        {"out", KeyType::string},
        {"format", KeyType::string},
        {"method", KeyType::string},
        {"rtol", KeyType::number},
        {"atol", KeyType::number},
        {"dt_init", KeyType::number},
        {"dt_max", KeyType::number},
        {"dt_out", KeyType::number},
        {"alpha", KeyType::number},
        {"i_tot", KeyType::number},
        {"v0", KeyType::number},
        {"tau_max", KeyType::number},
        {"v_min", KeyType::number},
        {"v_max", KeyType::number},
        {"points", KeyType::integer},
        {"i_start", KeyType::number},
        {"i_peak", KeyType::number},
        {"i_end", KeyType::number},
        {"rate", KeyType::number},
        {"i_from", KeyType::number},
        {"i_to", KeyType::number},
        {"omega_f", KeyType::number},
        {"v_f", KeyType::number},
        {"carry_state", KeyType::boolean},
        {"transient_tau", KeyType::number},
        {"periods", KeyType::number},
        {"min_plateau_points", KeyType::integer},
        {"delta_v", KeyType::number},
        {"delta_ij", KeyType::number},
        {"delta_is", KeyType::number},
        {"amp_window", KeyType::number},
        {"spectrum_span", KeyType::number},
        {"field", KeyType::string},
        {"window", KeyType::string},
        {"dir_v", KeyType::number},
        {"dir_ij", KeyType::number},
        {"dir_is", KeyType::number},
        {"delta_min", KeyType::number},
        {"delta_max", KeyType::number},
        {"probe_horizon", KeyType::number},
        {"settle_window", KeyType::number},
        {"amp_tol", KeyType::number},
        {"max_tau_per_point", KeyType::number},
        {"k_a", KeyType::number},
        {"k_b", KeyType::number},
        {"gamma", KeyType::number},
        {"phi_min", KeyType::number},
        {"phi_max", KeyType::number},
        {"ell", KeyType::number},
        {"voltage", KeyType::number},
        {"current", KeyType::number},
        {"capacitance", KeyType::number},
        {"critical_current", KeyType::number},
        {"q_factor", KeyType::number},
        {"cavity_length", KeyType::number},
        {"v_init", KeyType::number},
        {"ij_init", KeyType::number},
        {"is_init", KeyType::number},
    };
    return table;
}

const std::set<std::string>& common_keys() {
    static const std::set<std::string> keys = {"experiment", "out",     "format",
                                               "method",     "rtol",    "atol",
                                               "dt_init",    "dt_max",  "dt_out"};
    return keys;
}

struct ExperimentSchema {
    std::set<std::string> allowed;
    std::vector<std::string> required;
};

const std::map<Experiment, ExperimentSchema>& schemas() {
    static const std::map<Experiment, ExperimentSchema> table = {
        {Experiment::characteristic, {{"alpha", "v_min", "v_max", "points"}, {"alpha"}}},
        {Experiment::stability, {{"alpha", "v0", "v_min", "v_max", "points"}, {"alpha"}}},
        {Experiment::sweep,
         {{"alpha", "i_start", "i_peak", "i_end", "rate"}, {"alpha", "i_peak"}}},
        {Experiment::continuation,
         {{"alpha", "i_from", "i_to", "points", "v_init", "ij_init", "is_init",
           "settle_window", "amp_tol", "max_tau_per_point"},
          {"alpha", "i_from", "i_to", "points"}}},
        {Experiment::shapiro,
         {{"alpha", "omega_f", "v_f", "i_from", "i_to", "points", "transient_tau", "periods",
           "min_plateau_points", "carry_state"},
          {"alpha", "omega_f", "v_f", "i_from", "i_to", "points"}}},
        {Experiment::attractor,
         {{"alpha", "v0", "delta_v", "delta_ij", "delta_is", "tau_max", "amp_window",
           "spectrum_span", "field"},
          {"alpha", "v0"}}},
        {Experiment::basin,
         {{"alpha", "v0", "dir_v", "dir_ij", "dir_is", "delta_min", "delta_max",
           "probe_horizon", "amp_window", "spectrum_span", "field"},
          {"alpha", "v0"}}},
        {Experiment::spectrum,
         {{"alpha", "v0", "delta_v", "delta_ij", "delta_is", "tau_max", "spectrum_span",
           "field", "window"},
          {"alpha", "v0"}}},
        {Experiment::harmonic_balance, {{"alpha", "i_tot"}, {"alpha", "i_tot"}}},
        {Experiment::squid,
         {{"k_a", "k_b", "gamma", "phi_min", "phi_max", "points"}, {"k_a", "k_b", "gamma"}}},
        {Experiment::radiation,
         {{"ell", "voltage", "current", "capacitance", "critical_current", "q_factor",
           "cavity_length"},
          {"ell", "voltage", "current", "capacitance", "critical_current"}}},
        {Experiment::simulate,
         {{"alpha", "i_tot", "v_init", "ij_init", "is_init", "v_f", "omega_f", "tau_max"},
          {"alpha", "i_tot", "tau_max"}}},
    };
    return table;
}

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

class Extractor {
  public:
    Extractor(const json& flat, Experiment ex) : flat_(flat), ex_(ex) {}

    [[nodiscard]] bool has(const std::string& key) const { return flat_.contains(key); }

    [[nodiscard]] double number(const std::string& key, double fallback) const {
        if (!flat_.contains(key)) return fallback;
        return flat_.at(key).get<double>();
    }

    [[nodiscard]] double required_number(const std::string& key) const {
        require(key);
        return flat_.at(key).get<double>();
    }

    [[nodiscard]] int integer(const std::string& key, int fallback) const {
        if (!flat_.contains(key)) return fallback;
        return flat_.at(key).get<int>();
    }

    [[nodiscard]] int required_integer(const std::string& key) const {
        require(key);
        return flat_.at(key).get<int>();
    }

    [[nodiscard]] bool flag(const std::string& key, bool fallback) const {
        if (!flat_.contains(key)) return fallback;
        return flat_.at(key).get<bool>();
    }

    [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
        if (!flat_.contains(key)) return fallback;
        return flat_.at(key).get<std::string>();
    }

    void require(const std::string& key) const {
        if (!flat_.contains(key))
            fail("missing required key '" + key + "' for experiment '" + experiment_name(ex_) +
                 "'");
    }

  private:
    const json& flat_;
    Experiment ex_;
};

void check_positive(double value, const std::string& key) {
    if (!(value > 0.0)) fail("invalid value for key '" + key + "': must be > 0");
}

void check_non_negative(double value, const std::string& key) {
    if (value < 0.0) fail("invalid value for key '" + key + "': must be >= 0");
}

}  // namespace

Experiment experiment_from_name(const std::string& name) {
    static const std::map<std::string, Experiment> table = {
        {"characteristic", Experiment::characteristic},
        {"stability", Experiment::stability},
        {"sweep", Experiment::sweep},
        {"continuation", Experiment::continuation},
        {"shapiro", Experiment::shapiro},
        {"attractor", Experiment::attractor},
        {"basin", Experiment::basin},
        {"spectrum", Experiment::spectrum},
        {"harmonic-balance", Experiment::harmonic_balance},
        {"squid", Experiment::squid},
        {"radiation", Experiment::radiation},
        {"simulate", Experiment::simulate},
    };
    const auto it = table.find(name);
    if (it == table.end()) {
        std::string names;
        for (const auto& [n, _] : table) names += (names.empty() ? "" : ", ") + n;
        fail("invalid value for key 'experiment': '" + name + "' (known: " + names + ")");
    }
    return it->second;
}

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::characteristic: return "characteristic";
        case Experiment::stability: return "stability";
        case Experiment::sweep: return "sweep";
        case Experiment::continuation: return "continuation";
        case Experiment::shapiro: return "shapiro";
        case Experiment::attractor: return "attractor";
        case Experiment::basin: return "basin";
        case Experiment::spectrum: return "spectrum";
        case Experiment::harmonic_balance: return "harmonic-balance";
        case Experiment::squid: return "squid";
        case Experiment::radiation: return "radiation";
        case Experiment::simulate: return "simulate";
    }
    return "unknown";
}

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        fail("config file '" + path + "' is not valid JSON: " + err.what());
    }
    if (!doc.is_object()) fail("config file '" + path + "' must hold a flat JSON object");
    for (const auto& [key, value] : doc.items())
        if (value.is_object() || value.is_array())
            fail("config key '" + key + "' must be a scalar (flat config)");
    return doc;
}

nlohmann::json merge_config(const nlohmann::json& file_values, const nlohmann::json& overrides) {
    json merged = file_values.is_null() ? json::object() : file_values;
    if (!overrides.is_null())
        for (const auto& [key, value] : overrides.items()) merged[key] = value;
    return merged;
}

RunConfig parse_config(const nlohmann::json& flat) {
    if (!flat.is_object()) fail("config must be a flat JSON object");
    if (!flat.contains("experiment")) fail("missing required key 'experiment'");
    if (!flat.at("experiment").is_string()) fail("type mismatch for key 'experiment': expected string");

    RunConfig cfg;
    cfg.experiment = experiment_from_name(flat.at("experiment").get<std::string>());
    const ExperimentSchema& schema = schemas().at(cfg.experiment);

    // Strict pass over every provided key: known, allowed here, right type.
    for (const auto& [key, value] : flat.items()) {
        const auto type_it = key_types().find(key);
        if (type_it == key_types().end()) fail("unknown key '" + key + "'");
        if (common_keys().count(key) == 0 && schema.allowed.count(key) == 0)
            fail("unknown key '" + key + "' for experiment '" +
                 experiment_name(cfg.experiment) + "'");
        switch (type_it->second) {
            case KeyType::number:
                if (!value.is_number())
                    fail("type mismatch for key '" + key + "': expected number");
                break;
            case KeyType::integer:
                if (!value.is_number_integer() && !value.is_number_unsigned())
                    fail("type mismatch for key '" + key + "': expected integer");
                break;
            case KeyType::string:
                if (!value.is_string())
                    fail("type mismatch for key '" + key + "': expected string");
                break;
            case KeyType::boolean:
                if (!value.is_boolean())
                    fail("type mismatch for key '" + key + "': expected boolean");
                break;
        }
    }
    for (const auto& key : schema.required)
        if (!flat.contains(key))
            fail("missing required key '" + key + "' for experiment '" +
                 experiment_name(cfg.experiment) + "'");

    const Extractor get(flat, cfg.experiment);

    cfg.out = get.text("out", cfg.out);
    const std::string format = get.text("format", "csv");
    if (format == "csv")
        cfg.format = OutputFormat::csv;
    else if (format == "json")
        cfg.format = OutputFormat::json;
    else
        fail("invalid value for key 'format': expected 'csv' or 'json'");

    const std::string method = get.text("method", "adaptive");
    if (method == "adaptive")
        cfg.integ.method = Method::adaptive;
    else if (method == "rk4")
        cfg.integ.method = Method::fixed_rk4;
    else
        fail("invalid value for key 'method': expected 'adaptive' or 'rk4'");

    cfg.integ.rtol = get.number("rtol", cfg.integ.rtol);
    cfg.integ.atol = get.number("atol", cfg.integ.atol);
    check_positive(cfg.integ.rtol, "rtol");
    check_positive(cfg.integ.atol, "atol");
    cfg.integ.dt_init = get.number("dt_init", 0.0);
    cfg.integ.dt_max = get.number("dt_max", 0.0);
    check_non_negative(cfg.integ.dt_init, "dt_init");
    check_non_negative(cfg.integ.dt_max, "dt_max");

    // Output cadence: fine for spectral work, coarse for slow sweeps.
    double dt_out_default = 1e-3;
    switch (cfg.experiment) {
        case Experiment::sweep:
        case Experiment::continuation: dt_out_default = 0.1; break;
        default: break;
    }
    cfg.integ.dt_out = get.number("dt_out", dt_out_default);
    check_positive(cfg.integ.dt_out, "dt_out");

    if (cfg.integ.method == Method::fixed_rk4) {
        if (!get.has("dt_init"))
            fail("missing required key 'dt_init': method 'rk4' needs an explicit step size");
        check_positive(cfg.integ.dt_init, "dt_init");
        if (cfg.integ.dt_init > cfg.integ.dt_out)
            fail("invalid value for key 'dt_init': rk4 step must not exceed dt_out");
    }

    const auto get_alpha = [&] {
        cfg.alpha = get.required_number("alpha");
        check_non_negative(cfg.alpha, "alpha");
    };

    switch (cfg.experiment) {
        case Experiment::characteristic: {
            get_alpha();
            cfg.v_min = get.number("v_min", 0.0);
            cfg.v_max = get.number("v_max", 10.0);
            cfg.points = get.integer("points", 1001);
            if (cfg.points < 1) fail("invalid value for key 'points': must be >= 1");
            if (cfg.points > 1 && !(cfg.v_max > cfg.v_min))
                fail("invalid value for key 'v_max': must exceed v_min");
            break;
        }
        case Experiment::stability: {
            get_alpha();
            const bool grid = get.has("v_min") || get.has("v_max") || get.has("points");
            cfg.single_v0 = get.has("v0");
            if (cfg.single_v0 && grid)
                fail("invalid value for key 'v0': conflicts with v_min/v_max/points");
            if (cfg.single_v0) {
                cfg.v0 = get.required_number("v0");
            } else {
                cfg.v_min = get.number("v_min", 0.0);
                cfg.v_max = get.number("v_max", 50.0);
                cfg.points = get.integer("points", 501);
                if (cfg.points < 1) fail("invalid value for key 'points': must be >= 1");
                if (cfg.points > 1 && !(cfg.v_max > cfg.v_min))
                    fail("invalid value for key 'v_max': must exceed v_min");
            }
            break;
        }
        case Experiment::sweep: {
            get_alpha();
            cfg.i_start = get.number("i_start", 0.0);
            cfg.i_peak = get.required_number("i_peak");
            cfg.i_end = get.number("i_end", 0.0);
            cfg.rate = get.number("rate", 0.01);
            check_positive(cfg.rate, "rate");
            if (cfg.i_peak < cfg.i_start || cfg.i_peak < cfg.i_end)
                fail("invalid value for key 'i_peak': must be the largest bias");
            break;
        }
        case Experiment::continuation: {
            get_alpha();
            cfg.i_from = get.required_number("i_from");
            cfg.i_to = get.required_number("i_to");
            cfg.points = get.required_integer("points");
            if (cfg.points < 1) fail("invalid value for key 'points': must be >= 1");
            cfg.v_init = get.number("v_init", 0.0);
            cfg.ij_init = get.number("ij_init", 0.0);
            cfg.is_init = get.number("is_init", 0.0);
            cfg.settle_window = get.number("settle_window", cfg.settle_window);
            cfg.amp_tol = get.number("amp_tol", cfg.amp_tol);
            cfg.max_tau_per_point = get.number("max_tau_per_point", cfg.max_tau_per_point);
            check_positive(cfg.settle_window, "settle_window");
            check_positive(cfg.amp_tol, "amp_tol");
            check_positive(cfg.max_tau_per_point, "max_tau_per_point");
            break;
        }
        case Experiment::shapiro: {
            get_alpha();
            cfg.omega_f = get.required_number("omega_f");
            check_positive(cfg.omega_f, "omega_f");
            cfg.v_f = get.required_number("v_f");
            check_non_negative(cfg.v_f, "v_f");
            cfg.i_from = get.required_number("i_from");
            cfg.i_to = get.required_number("i_to");
            cfg.points = get.required_integer("points");
            if (cfg.points < 1) fail("invalid value for key 'points': must be >= 1");
            cfg.transient_tau = get.number("transient_tau", cfg.transient_tau);
            check_non_negative(cfg.transient_tau, "transient_tau");
            cfg.periods = get.number("periods", cfg.periods);
            if (!(cfg.periods >= 1.0)) fail("invalid value for key 'periods': must be >= 1");
            cfg.min_plateau_points = get.integer("min_plateau_points", cfg.min_plateau_points);
            if (cfg.min_plateau_points < 2)
                fail("invalid value for key 'min_plateau_points': must be >= 2");
            cfg.carry_state = get.flag("carry_state", cfg.carry_state);
            if (!get.has("dt_out"))
                cfg.integ.dt_out = 2.0 * std::numbers::pi / cfg.omega_f / 64.0;
            break;
        }
        case Experiment::attractor:
        case Experiment::spectrum: {
            get_alpha();
            cfg.v0 = get.required_number("v0");
            cfg.delta_v = get.number("delta_v", 0.0);
            cfg.delta_ij = get.number("delta_ij", 0.0);
            cfg.delta_is = get.number("delta_is", 0.0);
            cfg.tau_max = get.number("tau_max", 5000.0);
            cfg.amp_window = get.number("amp_window", cfg.amp_window);
            cfg.spectrum_span = get.number("spectrum_span", cfg.spectrum_span);
            check_positive(cfg.amp_window, "amp_window");
            check_positive(cfg.spectrum_span, "spectrum_span");
            if (cfg.tau_max < 2.0 * cfg.amp_window + 500.0 ||
                cfg.tau_max < cfg.spectrum_span + 500.0)
                fail("invalid value for key 'tau_max': too short for the analysis windows");
            const std::string field = get.text("field", "i_j");
            if (field == "v")
                cfg.field = Field::v;
            else if (field == "i_j")
                cfg.field = Field::i_j;
            else if (field == "i_s")
                cfg.field = Field::i_s;
            else
                fail("invalid value for key 'field': expected 'v', 'i_j' or 'i_s'");
            const std::string window = get.text("window", "hann");
            if (window == "hann")
                cfg.window = WindowFn::hann;
            else if (window == "rectangular")
                cfg.window = WindowFn::rectangular;
            else
                fail("invalid value for key 'window': expected 'hann' or 'rectangular'");
            break;
        }
        case Experiment::basin: {
            get_alpha();
            cfg.v0 = get.required_number("v0");
            cfg.dir_v = get.number("dir_v", 0.0);
            cfg.dir_ij = get.number("dir_ij", 0.0);
            cfg.dir_is = get.number("dir_is", 0.0);
            if (cfg.dir_v == 0.0 && cfg.dir_ij == 0.0 && cfg.dir_is == 0.0)
                fail("invalid value for key 'dir_v': direction (dir_v, dir_ij, dir_is) must be nonzero");
            cfg.delta_min = get.number("delta_min", cfg.delta_min);
            cfg.delta_max = get.number("delta_max", cfg.delta_max);
            check_positive(cfg.delta_min, "delta_min");
            if (!(cfg.delta_max >= cfg.delta_min))
                fail("invalid value for key 'delta_max': must be >= delta_min");
            cfg.probe_horizon = get.number("probe_horizon", cfg.probe_horizon);
            cfg.amp_window = get.number("amp_window", cfg.amp_window);
            cfg.spectrum_span = get.number("spectrum_span", cfg.spectrum_span);
            if (cfg.probe_horizon < 2.0 * cfg.amp_window + 500.0 ||
                cfg.probe_horizon < cfg.spectrum_span + 500.0)
                fail("invalid value for key 'probe_horizon': too short for the analysis windows");
            break;
        }
        case Experiment::harmonic_balance: {
            get_alpha();
            cfg.i_tot = get.required_number("i_tot");
            break;
        }
        case Experiment::squid: {
            cfg.k_a = get.required_number("k_a");
            cfg.k_b = get.required_number("k_b");
            check_non_negative(cfg.k_a, "k_a");
            check_non_negative(cfg.k_b, "k_b");
            cfg.gamma = get.required_number("gamma");
            check_positive(cfg.gamma, "gamma");
            cfg.phi_min = get.number("phi_min", 0.0);
            cfg.phi_max_set = get.has("phi_max");
            cfg.phi_max = get.number("phi_max", 0.0);
            cfg.points = get.integer("points", 201);
            if (cfg.points < 1) fail("invalid value for key 'points': must be >= 1");
            if (cfg.phi_max_set && cfg.points > 1 && !(cfg.phi_max > cfg.phi_min))
                fail("invalid value for key 'phi_max': must exceed phi_min");
            break;
        }
        case Experiment::radiation: {
            cfg.ell = get.required_number("ell");
            cfg.voltage = get.required_number("voltage");
            cfg.current = get.required_number("current");
            cfg.capacitance = get.required_number("capacitance");
            cfg.critical_current = get.required_number("critical_current");
            check_positive(cfg.ell, "ell");
            check_positive(cfg.voltage, "voltage");
            check_positive(cfg.current, "current");
            check_positive(cfg.capacitance, "capacitance");
            check_positive(cfg.critical_current, "critical_current");
            cfg.q_factor_set = get.has("q_factor");
            cfg.q_factor = get.number("q_factor", 0.0);
            if (cfg.q_factor_set) check_positive(cfg.q_factor, "q_factor");
            cfg.cavity_length_set = get.has("cavity_length");
            cfg.cavity_length = get.number("cavity_length", 0.0);
            if (cfg.cavity_length_set) check_positive(cfg.cavity_length, "cavity_length");
            break;
        }
        case Experiment::simulate: {
            get_alpha();
            cfg.i_tot = get.required_number("i_tot");
            cfg.tau_max = get.required_number("tau_max");
            check_positive(cfg.tau_max, "tau_max");
            cfg.v_init = get.number("v_init", 0.0);
            cfg.ij_init = get.number("ij_init", 0.0);
            cfg.is_init = get.number("is_init", 0.0);
            cfg.v_f = get.number("v_f", 0.0);
            cfg.omega_f = get.number("omega_f", 0.0);
            if (cfg.v_f != 0.0 && !(cfg.omega_f > 0.0))
                fail("invalid value for key 'omega_f': must be > 0 when v_f is nonzero");
            break;
        }
    }
    return cfg;
}

}  // namespace jjsim::cli
