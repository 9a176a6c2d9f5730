#include "jjsim/cli/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "jjsim/analysis.hpp"
#include "jjsim/characteristic.hpp"
#include "jjsim/constants.hpp"
#include "jjsim/integrate.hpp"
#include "jjsim/model.hpp"
#include "jjsim/parallel.hpp"
#include "jjsim/radiation.hpp"
#include "jjsim/stability.hpp"

namespace jjsim::cli {

namespace {

using nlohmann::json;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunOutput {
    Table table;
    json summary = json::object();
    bool no_result = false;
};

std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    const double step = (hi - lo) / (n - 1);
    for (int k = 0; k < n; ++k) out.push_back(lo + step * k);
    out.back() = hi;
    return out;
}

void write_csv(const std::string& path, const Table& t) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt_g(row[c]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_json_table(const std::string& path, const Table& t) {
    json doc;
    doc["columns"] = t.columns;
    doc["rows"] = t.rows;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

json json_or_null(const std::optional<double>& x) {
    return x ? json(*x) : json(nullptr);
}

/// Stationary circuit state sitting on the characteristic at voltage v0,
/// together with the bias that holds it there.
struct OperatingPoint {
    CircuitState state;
    double i_tot = 0.0;
};

OperatingPoint operating_point(double alpha, double v0) {
    const double den = 1.0 + v0 * v0;
    return {{v0, 4.0 * alpha * v0 / den, 4.0 * alpha * v0 * v0 / den}, i_of_v(alpha, v0)};
}

RunOutput run_characteristic(const RunConfig& cfg) {
    RunOutput out;
    out.table.columns = {"v", "i", "di_dv"};
    for (double v : linspace(cfg.v_min, cfg.v_max, cfg.points))
        out.table.rows.push_back({v, i_of_v(cfg.alpha, v), i_of_v_derivative(cfg.alpha, v)});
    const CharacteristicExtrema ex = extrema(cfg.alpha);
    out.summary["alpha"] = cfg.alpha;
    out.summary["i_c"] = ex.i_c;
    out.summary["folded"] = ex.v_minus.has_value();
    out.summary["v_minus"] = json_or_null(ex.v_minus);
    out.summary["v_plus"] = json_or_null(ex.v_plus);
    out.summary["i_r"] = json_or_null(ex.i_r);
    return out;
}

RunOutput run_stability(const RunConfig& cfg) {
    RunOutput out;
    out.table.columns = {"v0", "i_tot", "lambda0", "kappa", "eta", "slope", "unstable"};
    const std::vector<double> grid =
        cfg.single_v0 ? std::vector<double>{cfg.v0} : linspace(cfg.v_min, cfg.v_max, cfg.points);
    int unstable_count = 0;
    for (double v0 : grid) {
        const StabilityReport r = eigenvalues(cfg.alpha, v0);
        unstable_count += r.unstable ? 1 : 0;
        out.table.rows.push_back({v0, i_of_v(cfg.alpha, v0), r.lambda0, r.kappa, r.eta, r.slope,
                                  r.unstable ? 1.0 : 0.0});
    }
    const CharacteristicExtrema ex = extrema(cfg.alpha);
    out.summary["alpha"] = cfg.alpha;
    out.summary["points"] = grid.size();
    out.summary["unstable_points"] = unstable_count;
    out.summary["v_minus"] = json_or_null(ex.v_minus);
    out.summary["v_plus"] = json_or_null(ex.v_plus);
    return out;
}

RunOutput run_sweep(const RunConfig& cfg) {
    const RampSpec ramp{cfg.i_start, cfg.i_peak, cfg.i_end, cfg.rate};
    const RampResult res = ramp_sweep(cfg.alpha, ramp, cfg.integ);
    const SweepJumps jumps = detect_jumps(cfg.alpha, res);

    RunOutput out;
    out.table.columns = {"tau", "i_tot", "v", "i_j", "i_s", "i_res", "i_cap"};
    out.table.rows.reserve(res.samples.size());
    for (const RampSample& s : res.samples)
        out.table.rows.push_back({s.tau, s.i_tot, s.v, s.i_j, s.i_s, s.i_res, s.i_cap});

    const CharacteristicExtrema ex = extrema(cfg.alpha);
    out.summary["alpha"] = cfg.alpha;
    out.summary["rate"] = cfg.rate;
    out.summary["tau_turn"] = ramp.tau_turn();
    out.summary["i_up"] = json_or_null(jumps.i_up);
    out.summary["i_down"] = json_or_null(jumps.i_down);
    out.summary["i_c"] = ex.i_c;
    out.summary["i_r"] = json_or_null(ex.i_r);
    out.summary["hysteretic"] = jumps.i_up.has_value() && jumps.i_down.has_value();
    return out;
}

RunOutput run_continuation(const RunConfig& cfg) {
    ContinuationOptions opt;
    opt.settle_window = cfg.settle_window;
    opt.amp_tol = cfg.amp_tol;
    opt.max_tau_per_point = cfg.max_tau_per_point;
    const CircuitState s0{cfg.v_init, cfg.ij_init, cfg.is_init};
    const auto points =
        continuation_sweep(cfg.alpha, linspace(cfg.i_from, cfg.i_to, cfg.points), cfg.integ, s0, opt);

    RunOutput out;
    out.table.columns = {"i_tot", "v", "settled", "amplitude"};
    int settled_count = 0;
    for (const ContinuationPoint& p : points) {
        settled_count += p.settled ? 1 : 0;
        out.table.rows.push_back({p.i_tot, p.v, p.settled ? 1.0 : 0.0, p.amplitude});
    }
    out.summary["alpha"] = cfg.alpha;
    out.summary["points"] = points.size();
    out.summary["settled_points"] = settled_count;
    return out;
}

RunOutput run_shapiro(const RunConfig& cfg) {
    ShapiroOptions opt;
    opt.transient_tau = cfg.transient_tau;
    opt.min_periods = cfg.periods;
    opt.min_plateau_points = cfg.min_plateau_points;
    opt.continuation = cfg.carry_state;
    opt.threads = thread_budget_from_env();
    const ShapiroResult res = shapiro_staircase(
        cfg.alpha, cfg.omega_f, cfg.v_f, linspace(cfg.i_from, cfg.i_to, cfg.points), cfg.integ, opt);

    RunOutput out;
    out.table.columns = {"i_tot", "v_mean", "v_over_omega"};
    for (const ShapiroPoint& p : res.points)
        out.table.rows.push_back({p.i_tot, p.v_mean, p.v_mean / cfg.omega_f});

    json plateaus = json::array();
    for (const ShapiroPlateau& p : res.plateaus)
        plateaus.push_back({{"n", p.n},
                            {"v_locked", p.n * cfg.omega_f},
                            {"i_lo", p.i_lo},
                            {"i_hi", p.i_hi},
                            {"width", p.i_hi - p.i_lo},
                            {"points", p.points},
                            {"max_rel_dev", p.max_rel_dev}});
    out.summary["alpha"] = cfg.alpha;
    out.summary["omega_f"] = cfg.omega_f;
    out.summary["v_f"] = cfg.v_f;
    out.summary["plateaus"] = plateaus;
    out.no_result = res.plateaus.empty();
    return out;
}

RunOutput run_attractor(const RunConfig& cfg) {
    AttractorOptions opt;
    opt.horizon = cfg.tau_max;
    opt.amp_window = cfg.amp_window;
    opt.spectrum_span = cfg.spectrum_span;
    opt.field = cfg.field;
    const CircuitState delta{cfg.delta_v, cfg.delta_ij, cfg.delta_is};
    const AttractorVerdict verdict = detect_attractor(cfg.alpha, cfg.v0, delta, cfg.integ, opt);
    const OperatingPoint op = operating_point(cfg.alpha, cfg.v0);

    RunOutput out;
    out.table.columns = {"persistent", "amplitude", "decay_ratio", "omega_fund"};
    out.table.rows.push_back({verdict.persistent ? 1.0 : 0.0, verdict.amplitude,
                              verdict.decay_ratio, verdict.omega_fund.value_or(0.0)});
    out.summary["alpha"] = cfg.alpha;
    out.summary["v0"] = cfg.v0;
    out.summary["i_tot"] = op.i_tot;
    out.summary["persistent"] = verdict.persistent;
    out.summary["amplitude"] = verdict.amplitude;
    out.summary["decay_ratio"] = verdict.decay_ratio;
    out.summary["omega_fund"] = json_or_null(verdict.omega_fund);
    return out;
}

RunOutput run_basin(const RunConfig& cfg) {
    BasinOptions opt;
    opt.delta_min = cfg.delta_min;
    opt.delta_max = cfg.delta_max;
    opt.probe_horizon = cfg.probe_horizon;
    opt.attractor.amp_window = cfg.amp_window;
    opt.attractor.spectrum_span = cfg.spectrum_span;
    opt.attractor.field = cfg.field;
    const CircuitState direction{cfg.dir_v, cfg.dir_ij, cfg.dir_is};
    const BasinBracket bracket = basin_threshold(cfg.alpha, cfg.v0, direction, cfg.integ, opt);

    RunOutput out;
    out.table.columns = {"found", "delta_decay", "delta_persist"};
    out.table.rows.push_back(
        {bracket.found ? 1.0 : 0.0, bracket.delta_decay, bracket.delta_persist});
    out.summary["alpha"] = cfg.alpha;
    out.summary["v0"] = cfg.v0;
    out.summary["found"] = bracket.found;
    out.summary["delta_decay"] = bracket.delta_decay;
    out.summary["delta_persist"] =
        bracket.found ? json(bracket.delta_persist) : json(nullptr);
    out.no_result = !bracket.found;
    return out;
}

RunOutput run_spectrum(const RunConfig& cfg) {
    const OperatingPoint op = operating_point(cfg.alpha, cfg.v0);
    const CircuitState s0{op.state.v + cfg.delta_v, op.state.i_j + cfg.delta_ij,
                          op.state.i_s + cfg.delta_is};
    const DimensionlessParams p{cfg.alpha, op.i_tot, std::nullopt};
    const Trajectory3 tr = integrate_circuit(p, s0, 0.0, cfg.tau_max, cfg.integ);
    const PowerSpectrum spec =
        power_spectrum(tr, cfg.field, cfg.window, cfg.tau_max - cfg.spectrum_span);

    RunOutput out;
    out.table.columns = {"omega", "power"};
    out.table.rows.reserve(spec.omega.size());
    for (std::size_t k = 0; k < spec.omega.size(); ++k)
        out.table.rows.push_back({spec.omega[k], spec.power[k]});

    out.summary["alpha"] = cfg.alpha;
    out.summary["v0"] = cfg.v0;
    out.summary["i_tot"] = op.i_tot;
    out.summary["bins"] = spec.omega.size();
    try {
        out.summary["omega_peak"] = dominant_frequency(spec);
    } catch (const std::invalid_argument&) {
        out.summary["omega_peak"] = nullptr;  // spectrum flat, nothing oscillates
    }
    return out;
}

RunOutput run_harmonic_balance(const RunConfig& cfg) {
    const HarmonicBalance hb = harmonic_balance(cfg.alpha, cfg.i_tot);
    RunOutput out;
    out.table.columns = {"v0",      "omega_est",     "zeta0_re", "zeta0_im",
                         "zeta0_abs", "v1_consistent", "in_regime"};
    out.table.rows.push_back({hb.v0, hb.omega_est, hb.zeta0.real(), hb.zeta0.imag(),
                              std::abs(hb.zeta0), hb.v1_consistent ? 1.0 : 0.0,
                              hb.in_regime ? 1.0 : 0.0});
    out.summary["alpha"] = cfg.alpha;
    out.summary["i_tot"] = cfg.i_tot;
    out.summary["v0"] = hb.v0;
    out.summary["omega_est"] = hb.omega_est;
    out.summary["zeta0_re"] = hb.zeta0.real();
    out.summary["zeta0_im"] = hb.zeta0.imag();
    out.summary["v1_consistent"] = hb.v1_consistent;
    out.summary["in_regime"] = hb.in_regime;
    return out;
}

RunOutput run_squid(const RunConfig& cfg) {
    const PhysicalConstants k = codata();
    const double period = std::numbers::pi * k.hbar / k.e;
    const double phi_max = cfg.phi_max_set ? cfg.phi_max : cfg.phi_min + 2.0 * period;

    RunOutput out;
    out.table.columns = {"phi", "alpha_eff", "i_c"};
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    bool first = true;
    for (double phi : linspace(cfg.phi_min, phi_max, cfg.points)) {
        const double a = squid_effective_alpha(cfg.k_a, cfg.k_b, phi, cfg.gamma);
        out.table.rows.push_back({phi, a, extrema(a).i_c});
        alpha_lo = first ? a : std::min(alpha_lo, a);
        alpha_hi = first ? a : std::max(alpha_hi, a);
        first = false;
    }
    out.summary["period"] = period;
    out.summary["alpha_min"] = alpha_lo;
    out.summary["alpha_max"] = alpha_hi;
    out.summary["alpha_zero_flux"] = squid_effective_alpha(cfg.k_a, cfg.k_b, 0.0, cfg.gamma);
    return out;
}

RunOutput run_radiation(const RunConfig& cfg) {
    const PhysicalConstants k = codata();
    const double omega_J = josephson_frequency(cfg.voltage);
    const double d = dipole_moment(cfg.ell);
    const double gamma_e = spontaneous_rate(d, omega_J);
    const double lambda = emission_wavelength(omega_J);

    // Only C and I enter the efficiency; R is a placeholder chosen to satisfy
    // the overdamped-consistency check gamma R C = 1.
    PhysicalParams p;
    p.R = 50.0;
    p.C = cfg.capacitance;
    p.gamma = 1.0 / (p.R * p.C);
    p.K = {0.0, 0.0};
    p.I = cfg.current;
    const double eta_rad = efficiency_open_space(p, cfg.voltage, cfg.ell, cfg.critical_current);

    RunOutput out;
    out.summary["omega_J"] = omega_J;
    out.summary["dipole_moment"] = d;
    out.summary["gamma_e"] = gamma_e;
    out.summary["lambda"] = lambda;
    out.summary["eta_rad"] = eta_rad;

    std::optional<double> eta_cav;
    std::optional<double> gamma_purcell;
    if (cfg.q_factor_set) {
        eta_cav = efficiency_cavity(eta_rad, cfg.q_factor);
        if (cfg.cavity_length_set)
            gamma_purcell = purcell_rate(gamma_e, cfg.q_factor, lambda, cfg.cavity_length);
    }
    out.summary["eta_cavity"] = json_or_null(eta_cav);
    out.summary["gamma_purcell"] = json_or_null(gamma_purcell);

    out.table.columns = {"omega_J",  "dipole_moment", "gamma_e",    "lambda",
                         "eta_rad", "eta_cavity",    "gamma_purcell"};
    out.table.rows.push_back({omega_J, d, gamma_e, lambda, eta_rad, eta_cav.value_or(0.0),
                              gamma_purcell.value_or(0.0)});
    (void)k;
    return out;
}

RunOutput run_simulate(const RunConfig& cfg) {
    std::optional<Drive> drive;
    if (cfg.v_f != 0.0) drive = Drive{cfg.v_f, cfg.omega_f};
    const DimensionlessParams p{cfg.alpha, cfg.i_tot, drive};
    const CircuitState s0{cfg.v_init, cfg.ij_init, cfg.is_init};
    const Trajectory3 tr = integrate_circuit(p, s0, 0.0, cfg.tau_max, cfg.integ);

    RunOutput out;
    out.table.columns = {"tau", "v", "i_j", "i_s"};
    out.table.rows.reserve(tr.t.size());
    for (std::size_t k = 0; k < tr.t.size(); ++k)
        out.table.rows.push_back({tr.t[k], tr.y[k][0], tr.y[k][1], tr.y[k][2]});

    out.summary["alpha"] = cfg.alpha;
    out.summary["i_tot"] = cfg.i_tot;
    out.summary["driven"] = drive.has_value();
    out.summary["samples"] = tr.t.size();
    out.summary["final"] = {{"tau", tr.t.back()},
                            {"v", tr.y.back()[0]},
                            {"i_j", tr.y.back()[1]},
                            {"i_s", tr.y.back()[2]}};
    out.summary["stats"] = {{"accepted", tr.stats.accepted},
                            {"rejected", tr.stats.rejected},
                            {"rhs_evals", tr.stats.rhs_evals}};
    return out;
}

RunOutput dispatch(const RunConfig& cfg) {
    switch (cfg.experiment) {
        case Experiment::characteristic: return run_characteristic(cfg);
        case Experiment::stability: return run_stability(cfg);
        case Experiment::sweep: return run_sweep(cfg);
        case Experiment::continuation: return run_continuation(cfg);
        case Experiment::shapiro: return run_shapiro(cfg);
        case Experiment::attractor: return run_attractor(cfg);
        case Experiment::basin: return run_basin(cfg);
        case Experiment::spectrum: return run_spectrum(cfg);
        case Experiment::harmonic_balance: return run_harmonic_balance(cfg);
        case Experiment::squid: return run_squid(cfg);
        case Experiment::radiation: return run_radiation(cfg);
        case Experiment::simulate: return run_simulate(cfg);
    }
    throw std::logic_error("unhandled experiment");
}

}  // namespace

ExitCode run_experiment(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    RunOutput out;
    ExitCode code = ExitCode::ok;
    try {
        out = dispatch(cfg);
        if (out.no_result) code = ExitCode::no_result;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::numeric_failure;
    }

    const std::string data_path =
        cfg.out + (cfg.format == OutputFormat::csv ? ".csv" : ".json");
    const std::string summary_path = cfg.out + ".summary.json";
    out.summary["experiment"] = experiment_name(cfg.experiment);
    out.summary["status"] = code == ExitCode::ok ? "ok" : "no_result";
    out.summary["data"] = data_path;
    try {
        if (cfg.format == OutputFormat::csv)
            write_csv(data_path, out.table);
        else
            write_json_table(data_path, out.table);
        std::ofstream sout(summary_path);
        if (!sout) throw std::runtime_error("cannot write '" + summary_path + "'");
        sout << out.summary.dump(2) << '\n';
        if (!sout) throw std::runtime_error("write to '" + summary_path + "' failed");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::numeric_failure;
    }
    log << "wrote " << data_path << " (" << out.table.rows.size() << " rows) and "
        << summary_path << '\n';
    return code;
}

}  // namespace jjsim::cli
