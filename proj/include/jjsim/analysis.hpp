#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "jjsim/integrate.hpp"
#include "jjsim/model.hpp"

namespace jjsim {

enum class Field { v = 0, i_j = 1, i_s = 2 };
enum class WindowFn { rectangular, hann };

/// One-sided power spectrum of a mean-subtracted, windowed sample sequence.
/// Bin k sits at omega[k] = 2 pi k / (n dt); power is normalized so that its
/// sum equals the time-domain mean square of the windowed sequence.
struct PowerSpectrum {
    std::vector<double> omega;
    std::vector<double> power;
};

/// Requires at least 64 uniformly spaced samples; throws otherwise.
[[nodiscard]] PowerSpectrum power_spectrum(std::span<const double> samples, double dt,
                                           WindowFn window = WindowFn::hann);

/// Same, reading one field of a trajectory, optionally restricted to
/// tau >= tau_from.
[[nodiscard]] PowerSpectrum power_spectrum(const Trajectory3& tr, Field field,
                                           WindowFn window = WindowFn::hann,
                                           double tau_from = 0.0);

/// Location of the strongest nonzero-frequency bin, sharpened by fitting a
/// parabola through the bin and its neighbors. Throws on a flat spectrum.
[[nodiscard]] double dominant_frequency(const PowerSpectrum& spec);

struct AttractorOptions {
    double horizon = 5000.0;       // total integration span
    double amp_window = 100.0;     // tau span of each amplitude window
    double spectrum_span = 150.0;  // tau span feeding the spectrum
    double amp_threshold = 1e-3;   // persistent needs at least this peak-to-peak
    double decay_ratio_min = 0.99; // and at most this much decay between windows
    Field field = Field::i_j;
};

/// Outcome of a perturb-and-watch run near a stable operating point.
/// persistent means the oscillation still has amplitude above threshold at
/// the end of the horizon and is no longer decaying.
struct AttractorVerdict {
    bool persistent = false;
    double amplitude = 0.0;    // final-window peak-to-peak of the probed field
    double decay_ratio = 0.0;  // final window amplitude over the previous one
    std::optional<double> omega_fund{};
};

/// Starts at the stationary state of voltage v0 displaced by delta and
/// integrates to the horizon. The operating point must be stable (throws on
/// an unstable v0); anything that rings at the end is a coexisting attractor,
/// not linear instability.
[[nodiscard]] AttractorVerdict detect_attractor(double alpha, double v0,
                                                const CircuitState& delta,
                                                const IntegratorConfig& cfg,
                                                const AttractorOptions& opt = {});

struct BasinOptions {
    double delta_min = 1e-7;
    double delta_max = 1.0;
    double probe_horizon = 2000.0;
    AttractorOptions attractor{};
};

/// One-decade bracket of the perturbation magnitude separating decay from
/// persistence along a fixed direction. If even delta_max decays, found is
/// false. If delta_min already persists, delta_decay is 0 (threshold below
/// the scanned range).
struct BasinBracket {
    bool found = false;
    double delta_decay = 0.0;
    double delta_persist = 0.0;
};

[[nodiscard]] BasinBracket basin_threshold(double alpha, double v0, const CircuitState& direction,
                                           const IntegratorConfig& cfg,
                                           const BasinOptions& opt = {});

/// Single-harmonic truncation of the oscillating solution at bias i_tot:
/// operating voltage v0 (largest-|v| stationary branch), estimated
/// fundamental frequency, and the dc coherence zeta0. v1_consistent reports
/// whether a nonzero first harmonic solves the truncated balance at
/// omega = v0; in_regime flags |v0| > 1 where the truncation applies.
struct HarmonicBalance {
    double v0 = 0.0;
    double omega_est = 0.0;
    std::complex<double> zeta0{0.0, 0.0};
    bool v1_consistent = false;
    bool in_regime = false;
};

[[nodiscard]] HarmonicBalance harmonic_balance(double alpha, double i_tot);

struct ShapiroOptions {
    double transient_tau = 200.0;  // discarded before averaging
    double min_periods = 100.0;    // drive periods in the averaging span
    int min_plateau_points = 3;    // consecutive grid points to call a plateau
    double rel_tol = 0.01;         // |v_mean - n omega_f| <= rel_tol * n * omega_f
    // Sweep the biases in grid order, starting each run from the previous
    // final state. Tracks a locked branch across its full width instead of
    // re-deciding the attractor from rest at every bias; this is how a
    // staircase is actually measured. Forces single-threaded execution.
    bool continuation = false;
    unsigned threads = 1;
};

struct ShapiroPoint {
    double i_tot = 0.0;
    double v_mean = 0.0;
};

/// Run of consecutive bias points locked to the n-th harmonic of the drive.
struct ShapiroPlateau {
    int n = 0;
    double i_lo = 0.0;
    double i_hi = 0.0;
    int points = 0;
    double max_rel_dev = 0.0;
};

struct ShapiroResult {
    std::vector<ShapiroPoint> points;
    std::vector<ShapiroPlateau> plateaus;
};

/// Time-averaged dc voltage under a harmonic drive, swept over bias values.
/// Each bias integrates from rest past the transient, then averages v over
/// an integer number of drive periods. Sharpest averages come from a dt_out
/// that divides the drive period.
[[nodiscard]] ShapiroResult shapiro_staircase(double alpha, double omega_f, double v_f,
                                              const std::vector<double>& i_grid,
                                              const IntegratorConfig& cfg,
                                              const ShapiroOptions& opt = {});

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares straight line through (x, y); needs at least two points.
[[nodiscard]] LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace jjsim
