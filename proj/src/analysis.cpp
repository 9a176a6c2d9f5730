#include "jjsim/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "jjsim/characteristic.hpp"
#include "jjsim/parallel.hpp"
#include "jjsim/stability.hpp"

namespace jjsim {

namespace {

// FFTW planning is not thread-safe; executing distinct plans is.
std::mutex g_fftw_plan_mutex;

std::vector<std::complex<double>> rfft(std::vector<double>& data) {
    const int n = static_cast<int>(data.size());
    std::vector<std::complex<double>> out(data.size() / 2 + 1);
    fftw_plan plan = nullptr;
    {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        plan = fftw_plan_dft_r2c_1d(n, data.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw std::runtime_error("power_spectrum: FFT planning failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

PowerSpectrum power_spectrum(std::span<const double> samples, double dt, WindowFn window) {
    const std::size_t n = samples.size();
    if (n < 64) throw std::invalid_argument("power_spectrum: need at least 64 samples");
    if (!(dt > 0.0)) throw std::invalid_argument("power_spectrum: dt must be > 0");

    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= static_cast<double>(n);

    std::vector<double> buf(n);
    if (window == WindowFn::hann) {
        const double step = 2.0 * std::numbers::pi / static_cast<double>(n - 1);
        for (std::size_t k = 0; k < n; ++k)
            buf[k] = (samples[k] - mean) * 0.5 * (1.0 - std::cos(step * static_cast<double>(k)));
    } else {
        for (std::size_t k = 0; k < n; ++k) buf[k] = samples[k] - mean;
    }

    const auto bins = rfft(buf);
    PowerSpectrum spec;
    spec.omega.resize(bins.size());
    spec.power.resize(bins.size());
    const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (std::size_t k = 0; k < bins.size(); ++k) {
        spec.omega[k] = d_omega * static_cast<double>(k);
        // One-sided: interior bins carry their mirror image's share too.
        const bool interior = k > 0 && !(n % 2 == 0 && k == bins.size() - 1);
        spec.power[k] = std::norm(bins[k]) * norm * (interior ? 2.0 : 1.0);
    }
    return spec;
}

PowerSpectrum power_spectrum(const Trajectory3& tr, Field field, WindowFn window,
                             double tau_from) {
    if (tr.t.size() < 2) throw std::invalid_argument("power_spectrum: trajectory too short");
    const auto first = static_cast<std::size_t>(
        std::lower_bound(tr.t.begin(), tr.t.end(), tau_from - 1e-9 * tr.dt_out) - tr.t.begin());
    if (first >= tr.t.size())
        throw std::invalid_argument("power_spectrum: tau_from past the trajectory end");

    std::vector<double> col(tr.t.size() - first);
    const auto f = static_cast<std::size_t>(field);
    for (std::size_t k = 0; k < col.size(); ++k) col[k] = tr.y[first + k][f];
    return power_spectrum(col, tr.dt_out, window);
}

double dominant_frequency(const PowerSpectrum& spec) {
    if (spec.power.size() < 3)
        throw std::invalid_argument("dominant_frequency: spectrum too short");
    std::size_t peak = 1;
    for (std::size_t k = 2; k < spec.power.size(); ++k)
        if (spec.power[k] > spec.power[peak]) peak = k;
    if (!(spec.power[peak] > 0.0))
        throw std::invalid_argument("dominant_frequency: flat spectrum");

    const double d_omega = spec.omega[1] - spec.omega[0];
    if (peak + 1 >= spec.power.size()) return spec.omega[peak];

    const double pl = spec.power[peak - 1];
    const double pc = spec.power[peak];
    const double pr = spec.power[peak + 1];
    const double denom = pl - 2.0 * pc + pr;
    double shift = 0.0;
    if (denom < 0.0) shift = std::clamp(0.5 * (pl - pr) / denom, -0.5, 0.5);
    return spec.omega[peak] + shift * d_omega;
}

namespace {

double window_peak_to_peak(const Trajectory3& tr, Field field, double tau_lo, double tau_hi) {
    const auto f = static_cast<std::size_t>(field);
    const auto lo = static_cast<std::size_t>(
        std::lower_bound(tr.t.begin(), tr.t.end(), tau_lo - 1e-9 * tr.dt_out) - tr.t.begin());
    double mn = tr.y[lo][f], mx = mn;
    for (std::size_t k = lo; k < tr.t.size() && tr.t[k] <= tau_hi + 1e-9 * tr.dt_out; ++k) {
        mn = std::min(mn, tr.y[k][f]);
        mx = std::max(mx, tr.y[k][f]);
    }
    return mx - mn;
}

}  // namespace

AttractorVerdict detect_attractor(double alpha, double v0, const CircuitState& delta,
                                  const IntegratorConfig& cfg, const AttractorOptions& opt) {
    if (is_unstable(alpha, v0))
        throw std::invalid_argument("detect_attractor: operating point is linearly unstable");
    if (opt.horizon < 2.0 * opt.amp_window + 500.0 || opt.horizon < opt.spectrum_span + 500.0)
        throw std::invalid_argument("detect_attractor: horizon too short for the windows");

    const double w = 1.0 + v0 * v0;
    const CircuitState s0{v0 + delta.v, 4.0 * alpha * v0 / w + delta.i_j,
                          4.0 * alpha * v0 * v0 / w + delta.i_s};
    const DimensionlessParams p{alpha, i_of_v(alpha, v0), {}};

    const Trajectory3 tr = integrate_circuit(p, s0, 0.0, opt.horizon, cfg);

    AttractorVerdict verdict;
    const double end = tr.t.back();
    const double amp_prev =
        window_peak_to_peak(tr, opt.field, end - 2.0 * opt.amp_window, end - opt.amp_window);
    verdict.amplitude = window_peak_to_peak(tr, opt.field, end - opt.amp_window, end);
    verdict.decay_ratio = amp_prev > 0.0 ? verdict.amplitude / amp_prev
                                         : (verdict.amplitude > 0.0 ? 2.0 : 1.0);
    verdict.persistent =
        verdict.amplitude > opt.amp_threshold && verdict.decay_ratio >= opt.decay_ratio_min;

    if (verdict.amplitude > 0.0) {
        const PowerSpectrum spec =
            power_spectrum(tr, opt.field, WindowFn::hann, end - opt.spectrum_span);
        bool flat = true;
        for (std::size_t k = 1; k < spec.power.size(); ++k)
            if (spec.power[k] > 0.0) {
                flat = false;
                break;
            }
        if (!flat) verdict.omega_fund = dominant_frequency(spec);
    }
    return verdict;
}

BasinBracket basin_threshold(double alpha, double v0, const CircuitState& direction,
                             const IntegratorConfig& cfg, const BasinOptions& opt) {
    const double norm =
        std::sqrt(direction.v * direction.v + direction.i_j * direction.i_j +
                  direction.i_s * direction.i_s);
    if (!(norm > 0.0))
        throw std::invalid_argument("basin_threshold: direction must be nonzero");
    if (!(opt.delta_min > 0.0) || !(opt.delta_max >= opt.delta_min))
        throw std::invalid_argument("basin_threshold: bad magnitude range");

    const CircuitState unit{direction.v / norm, direction.i_j / norm, direction.i_s / norm};
    AttractorOptions probe_opt = opt.attractor;
    probe_opt.horizon = opt.probe_horizon;

    auto persists = [&](double mag) {
        const CircuitState delta{mag * unit.v, mag * unit.i_j, mag * unit.i_s};
        return detect_attractor(alpha, v0, delta, cfg, probe_opt).persistent;
    };

    BasinBracket bracket;
    double prev = 0.0;
    for (double mag = opt.delta_min; mag <= opt.delta_max * (1.0 + 1e-12); mag *= 10.0) {
        if (persists(mag)) {
            bracket.found = true;
            bracket.delta_decay = prev;  // 0 means the threshold sits below delta_min
            bracket.delta_persist = mag;
            return bracket;
        }
        prev = mag;
    }
    bracket.delta_decay = prev;
    return bracket;
}

HarmonicBalance harmonic_balance(double alpha, double i_tot) {
    const auto roots = fixed_points(alpha, i_tot);
    HarmonicBalance hb;
    // The oscillating branch rides the largest-|v| stationary point.
    hb.v0 = roots.front().v0;
    for (const auto& fp : roots)
        if (std::abs(fp.v0) > std::abs(hb.v0)) hb.v0 = fp.v0;
    hb.omega_est = std::abs(hb.v0);
    if (hb.v0 != 0.0)
        hb.zeta0 = 4.0 * alpha / (1.0 - std::complex<double>(0.0, 1.0) / hb.v0);
    hb.in_regime = std::abs(hb.v0) > 1.0;
    // First-harmonic balance at omega = v0 couples zeta1 to v1 with strength
    // i (4 alpha - zeta0); a nonzero pair exists when that does not vanish.
    hb.v1_consistent =
        std::abs(4.0 * alpha - hb.zeta0) > 1e-12 && 4.0 * alpha > 1.0;
    return hb;
}

ShapiroResult shapiro_staircase(double alpha, double omega_f, double v_f,
                                const std::vector<double>& i_grid, const IntegratorConfig& cfg,
                                const ShapiroOptions& opt) {
    if (!(omega_f > 0.0)) throw std::invalid_argument("shapiro_staircase: omega_f must be > 0");
    if (i_grid.empty()) throw std::invalid_argument("shapiro_staircase: empty bias grid");

    const double period = 2.0 * std::numbers::pi / omega_f;
    const double n_periods = std::ceil(opt.min_periods);
    const double span_avg = n_periods * period;

    ShapiroResult result;
    result.points.resize(i_grid.size());

    // Trapezoid average of v over the post-transient samples.
    const auto mean_tail = [&](const Trajectory3& tr) {
        const auto k0 = static_cast<std::size_t>(
            std::lower_bound(tr.t.begin(), tr.t.end(), opt.transient_tau - 1e-9 * tr.dt_out) -
            tr.t.begin());
        const std::size_t k1 = tr.t.size() - 1;
        double acc = 0.5 * (tr.y[k0][0] + tr.y[k1][0]);
        for (std::size_t k = k0 + 1; k < k1; ++k) acc += tr.y[k][0];
        return acc / static_cast<double>(k1 - k0);
    };

    if (opt.continuation) {
        CircuitState s{};
        for (std::size_t idx = 0; idx < i_grid.size(); ++idx) {
            const DimensionlessParams p{alpha, i_grid[idx], Drive{v_f, omega_f}};
            const Trajectory3 tr = integrate_circuit(p, s, 0.0, opt.transient_tau + span_avg, cfg);
            result.points[idx] = {i_grid[idx], mean_tail(tr)};
            const auto& last = tr.y.back();
            s = CircuitState{last[0], last[1], last[2]};
        }
    } else {
        parallel_for(i_grid.size(), opt.threads, [&](std::size_t idx) {
            const DimensionlessParams p{alpha, i_grid[idx], Drive{v_f, omega_f}};
            const Trajectory3 tr =
                integrate_circuit(p, CircuitState{}, 0.0, opt.transient_tau + span_avg, cfg);
            result.points[idx] = {i_grid[idx], mean_tail(tr)};
        });
    }

    // Group consecutive points locked to the same drive harmonic.
    std::size_t k = 0;
    const auto& pts = result.points;
    while (k < pts.size()) {
        const int n = static_cast<int>(std::lround(pts[k].v_mean / omega_f));
        const auto locked = [&](std::size_t j) {
            if (n < 1) return false;
            const double target = static_cast<double>(n) * omega_f;
            return std::abs(pts[j].v_mean - target) <= opt.rel_tol * target &&
                   std::lround(pts[j].v_mean / omega_f) == n;
        };
        if (!locked(k)) {
            ++k;
            continue;
        }
        std::size_t end = k + 1;
        while (end < pts.size() && locked(end)) ++end;
        if (end - k >= static_cast<std::size_t>(opt.min_plateau_points)) {
            ShapiroPlateau pl;
            pl.n = n;
            pl.i_lo = pts[k].i_tot;
            pl.i_hi = pts[end - 1].i_tot;
            pl.points = static_cast<int>(end - k);
            const double target = static_cast<double>(n) * omega_f;
            for (std::size_t j = k; j < end; ++j)
                pl.max_rel_dev =
                    std::max(pl.max_rel_dev, std::abs(pts[j].v_mean - target) / target);
            result.plateaus.push_back(pl);
        }
        k = end;
    }
    return result;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need matching arrays with >= 2 points");
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

}  // namespace jjsim
