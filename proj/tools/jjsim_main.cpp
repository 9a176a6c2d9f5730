#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jjsim/cli/config.hpp"
#include "jjsim/cli/run.hpp"

namespace {

using nlohmann::json;

struct FlagSpec {
    const char* flag;   // CLI name, kebab-case
    const char* key;    // config key, snake_case
    const char* help;
    const char* group;
};

const std::vector<FlagSpec> k_number_flags = {
    {"--alpha", "alpha", "coupling parameter |K|^2 / gamma^2", "Model"},
    {"--i-tot", "i_tot", "dimensionless bias current", "Model"},
    {"--v0", "v0", "stationary operating voltage", "Model"},
    {"--tau-max", "tau_max", "integration horizon", "Integration"},
    {"--dt-out", "dt_out", "output sampling step", "Integration"},
    {"--dt-init", "dt_init", "initial step (required for rk4)", "Integration"},
    {"--dt-max", "dt_max", "step ceiling for the adaptive method", "Integration"},
    {"--rtol", "rtol", "relative tolerance", "Integration"},
    {"--atol", "atol", "absolute tolerance", "Integration"},
    {"--v-min", "v_min", "grid start", "Grids"},
    {"--v-max", "v_max", "grid end", "Grids"},
    {"--i-start", "i_start", "ramp start bias", "Sweep"},
    {"--i-peak", "i_peak", "ramp peak bias", "Sweep"},
    {"--i-end", "i_end", "ramp end bias", "Sweep"},
    {"--rate", "rate", "ramp speed |di/dtau|", "Sweep"},
    {"--i-from", "i_from", "bias grid start", "Grids"},
    {"--i-to", "i_to", "bias grid end", "Grids"},
    {"--omega-f", "omega_f", "drive frequency", "Drive"},
    {"--v-f", "v_f", "drive amplitude", "Drive"},
    {"--transient-tau", "transient_tau", "discarded settling span", "Drive"},
    {"--periods", "periods", "drive periods in the average", "Drive"},
    {"--delta-v", "delta_v", "perturbation of v", "Perturbation"},
    {"--delta-ij", "delta_ij", "perturbation of i_j", "Perturbation"},
    {"--delta-is", "delta_is", "perturbation of i_s", "Perturbation"},
    {"--amp-window", "amp_window", "amplitude window span", "Perturbation"},
    {"--spectrum-span", "spectrum_span", "span feeding the spectrum", "Perturbation"},
    {"--dir-v", "dir_v", "perturbation direction, v component", "Perturbation"},
    {"--dir-ij", "dir_ij", "perturbation direction, i_j component", "Perturbation"},
    {"--dir-is", "dir_is", "perturbation direction, i_s component", "Perturbation"},
    {"--delta-min", "delta_min", "smallest probed magnitude", "Perturbation"},
    {"--delta-max", "delta_max", "largest probed magnitude", "Perturbation"},
    {"--probe-horizon", "probe_horizon", "horizon of each basin probe", "Perturbation"},
    {"--settle-window", "settle_window", "stationarity window span", "Continuation"},
    {"--amp-tol", "amp_tol", "peak-to-peak counted as settled", "Continuation"},
    {"--max-tau-per-point", "max_tau_per_point", "per-bias integration cap", "Continuation"},
    {"--k-a", "k_a", "tunneling rate of arm A [1/s]", "Loop"},
    {"--k-b", "k_b", "tunneling rate of arm B [1/s]", "Loop"},
    {"--gamma", "gamma", "electrode relaxation rate [1/s]", "Loop"},
    {"--phi-min", "phi_min", "flux grid start [Wb]", "Loop"},
    {"--phi-max", "phi_max", "flux grid end [Wb]", "Loop"},
    {"--ell", "ell", "electrode separation [m]", "Emission"},
    {"--voltage", "voltage", "dc junction voltage [V]", "Emission"},
    {"--current", "current", "bias current [A]", "Emission"},
    {"--capacitance", "capacitance", "junction capacitance [F]", "Emission"},
    {"--critical-current", "critical_current", "switching current [A]", "Emission"},
    {"--q-factor", "q_factor", "cavity quality factor", "Emission"},
    {"--cavity-length", "cavity_length", "cavity size [m]", "Emission"},
    {"--v-init", "v_init", "initial v", "Initial state"},
    {"--ij-init", "ij_init", "initial i_j", "Initial state"},
    {"--is-init", "is_init", "initial i_s", "Initial state"},
};

const std::vector<FlagSpec> k_integer_flags = {
    {"--points", "points", "number of grid points", "Grids"},
    {"--min-plateau-points", "min_plateau_points", "grid points per plateau", "Drive"},
};

const std::vector<FlagSpec> k_string_flags = {
    {"--method", "method", "integrator: adaptive or rk4", "Integration"},
    {"--out", "out", "output path stem", "Output"},
    {"--format", "format", "table format: csv or json", "Output"},
    {"--field", "field", "probed field: v, i_j or i_s", "Perturbation"},
    {"--window", "window", "spectral window: hann or rectangular", "Perturbation"},
};

const std::vector<FlagSpec> k_bool_flags = {
    {"--carry-state", "carry_state", "sweep biases carrying the state along", "Drive"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "jjsim: stationary response, sweeps, spectra and emission figures of a\n"
        "resistively shunted tunneling circuit.\n\n"
        "Experiments: characteristic, stability, sweep, continuation, shapiro,\n"
        "attractor, basin, spectrum, harmonic-balance, squid, radiation, simulate.\n"
        "Flags override --config values; see the README for per-experiment keys."};

    std::string experiment;
    std::string config_path;
    app.add_option("experiment", experiment, "experiment to run");
    app.add_option("--config", config_path, "JSON config file (flat object)")
        ->check(CLI::ExistingFile);

    std::map<std::string, double> numbers;
    std::map<std::string, int> integers;
    std::map<std::string, std::string> strings;
    std::map<std::string, bool> bools;
    for (const FlagSpec& f : k_number_flags)
        app.add_option(f.flag, numbers[f.key], f.help)->group(f.group);
    for (const FlagSpec& f : k_integer_flags)
        app.add_option(f.flag, integers[f.key], f.help)->group(f.group);
    for (const FlagSpec& f : k_string_flags)
        app.add_option(f.flag, strings[f.key], f.help)->group(f.group);
    for (const FlagSpec& f : k_bool_flags)
        app.add_flag(f.flag, bools[f.key], f.help)->group(f.group);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(jjsim::cli::ExitCode::config_error);
    }

    try {
        json file_values = json::object();
        if (!config_path.empty()) file_values = jjsim::cli::load_config_file(config_path);

        json overrides = json::object();
        if (!experiment.empty()) overrides["experiment"] = experiment;
        for (const FlagSpec& f : k_number_flags)
            if (app.count(f.flag) > 0) overrides[f.key] = numbers[f.key];
        for (const FlagSpec& f : k_integer_flags)
            if (app.count(f.flag) > 0) overrides[f.key] = integers[f.key];
        for (const FlagSpec& f : k_string_flags)
            if (app.count(f.flag) > 0) overrides[f.key] = strings[f.key];
        for (const FlagSpec& f : k_bool_flags)
            if (app.count(f.flag) > 0) overrides[f.key] = bools[f.key];

        const jjsim::cli::RunConfig cfg =
            jjsim::cli::parse_config(jjsim::cli::merge_config(file_values, overrides));
        return static_cast<int>(jjsim::cli::run_experiment(cfg, std::cout, std::cerr));
    } catch (const jjsim::cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(jjsim::cli::ExitCode::config_error);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(jjsim::cli::ExitCode::numeric_failure);
    }
}
