#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "jjsim/analysis.hpp"
#include "jjsim/integrate.hpp"

namespace jjsim::cli {

/// Anything wrong with the requested run before any numerics start: unknown
/// key, bad type, missing requirement, out-of-range value. Maps to exit
/// code 2.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Experiment {
    characteristic,
    stability,
    sweep,
    continuation,
    shapiro,
    attractor,
    basin,
    spectrum,
    harmonic_balance,
    squid,
    radiation,
    simulate,
};

enum class OutputFormat { csv, json };

[[nodiscard]] Experiment experiment_from_name(const std::string& name);
[[nodiscard]] std::string experiment_name(Experiment e);

/// Fully validated run request. Fields are grouped by the experiments that
/// read them; parse_config fills only what the chosen experiment allows.
struct RunConfig {
    Experiment experiment = Experiment::characteristic;
    std::string out = "jjsim_out";
    OutputFormat format = OutputFormat::csv;
    IntegratorConfig integ{};

    double alpha = 0.0;
    double i_tot = 0.0;
    double v0 = 0.0;
    double tau_max = 0.0;

    // characteristic / stability grids
    double v_min = 0.0;
    double v_max = 0.0;
    int points = 0;
    bool single_v0 = false;

    // ramp sweep
    double i_start = 0.0;
    double i_peak = 0.0;
    double i_end = 0.0;
    double rate = 0.01;

    // continuation / shapiro bias grids
    double i_from = 0.0;
    double i_to = 0.0;

    // drive
    double omega_f = 0.0;
    double v_f = 0.0;
    double transient_tau = 200.0;
    double periods = 100.0;
    int min_plateau_points = 3;
    // sweep biases in order, each starting from the previous final state
    bool carry_state = false;

    // attractor / spectrum probes
    double delta_v = 0.0;
    double delta_ij = 0.0;
    double delta_is = 0.0;
    double amp_window = 100.0;
    double spectrum_span = 150.0;
    Field field = Field::i_j;
    WindowFn window = WindowFn::hann;

    // basin scan
    double dir_v = 0.0;
    double dir_ij = 0.0;
    double dir_is = 0.0;
    double delta_min = 1e-7;
    double delta_max = 1.0;
    double probe_horizon = 2000.0;

    // continuation settling
    double settle_window = 20.0;
    double amp_tol = 1e-7;
    double max_tau_per_point = 2000.0;

    // squid loop
    double k_a = 0.0;
    double k_b = 0.0;
    double gamma = 0.0;
    double phi_min = 0.0;
    double phi_max = 0.0;
    bool phi_max_set = false;

    // radiation estimates (SI)
    double ell = 0.0;
    double voltage = 0.0;
    double current = 0.0;
    double capacitance = 0.0;
    double critical_current = 0.0;
    double q_factor = 0.0;
    double cavity_length = 0.0;
    bool q_factor_set = false;
    bool cavity_length_set = false;

    // simulate initial state
    double v_init = 0.0;
    double ij_init = 0.0;
    double is_init = 0.0;
};

/// Reads a flat JSON object from disk. Throws ConfigError on I/O or syntax
/// problems, or if the document is not a flat object of scalars.
[[nodiscard]] nlohmann::json load_config_file(const std::string& path);

/// Lays flag-style overrides on top of file values (overrides win).
[[nodiscard]] nlohmann::json merge_config(const nlohmann::json& file_values,
                                          const nlohmann::json& overrides);

/// Strictly validates the flat key-value map for its experiment: every key
/// must be known to that experiment, well-typed and in range, and all
/// required keys present. Throws ConfigError naming the offending key.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& flat);

}  // namespace jjsim::cli
