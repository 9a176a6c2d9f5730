#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jjsim/model.hpp"

namespace jjsim {

/// Raised when a run cannot continue: non-finite state or derivative, or the
/// adaptive step size collapsing below 1e-14.
class IntegrationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Method { adaptive, fixed_rk4 };

struct IntegratorConfig {
    Method method = Method::adaptive;
    double rtol = 1e-9;
    double atol = 1e-9;
    /// adaptive: initial step, 0 picks one automatically.
    /// fixed_rk4: the step size; required, and must not exceed dt_out.
    double dt_init = 0.0;
    double dt_max = 0.0;  // 0: no cap beyond the remaining span
    double dt_out = 1e-3;
};

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
};

/// Samples on the uniform grid t[k] = t0 + k dt_out, plus run statistics.
template <std::size_t N>
struct Trajectory {
    double dt_out = 0.0;
    std::vector<double> t;
    std::vector<std::array<double, N>> y;
    IntegrationStats stats;
};

using Trajectory3 = Trajectory<3>;

[[nodiscard]] inline CircuitState circuit_state_at(const Trajectory3& tr, std::size_t k) {
    return {tr.y[k][0], tr.y[k][1], tr.y[k][2]};
}

namespace detail {

template <std::size_t N>
[[nodiscard]] bool finite(const std::array<double, N>& y) {
    for (double v : y)
        if (!std::isfinite(v)) return false;
    return true;
}

/// Cubic Hermite value on [ta, ta+h] at t, from endpoint values and slopes.
template <std::size_t N>
[[nodiscard]] std::array<double, N> hermite(const std::array<double, N>& ya,
                                            const std::array<double, N>& fa,
                                            const std::array<double, N>& yb,
                                            const std::array<double, N>& fb, double ta, double h,
                                            double t) {
    const double th = (t - ta) / h;
    const double u = 1.0 - th;
    const double h00 = u * u * (1.0 + 2.0 * th);
    const double h10 = u * u * th;
    const double h01 = th * th * (3.0 - 2.0 * th);
    const double h11 = th * th * (th - 1.0);
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = h00 * ya[i] + h * h10 * fa[i] + h01 * yb[i] + h * h11 * fb[i];
    return out;
}

/// Emits every output grid point that falls inside the step just taken.
template <std::size_t N>
class OutputGrid {
  public:
    OutputGrid(double t0, double t1, double dt_out, Trajectory<N>& tr)
        : t0_(t0), dt_out_(dt_out), tr_(tr) {
        n_last_ = static_cast<std::size_t>(
            std::floor((t1 - t0) / dt_out * (1.0 + 1e-14) + 1e-9));
        tr_.dt_out = dt_out;
        tr_.t.reserve(n_last_ + 1);
        tr_.y.reserve(n_last_ + 1);
    }

    void emit_initial(const std::array<double, N>& y0) { push(0, y0); }

    void emit_step(const std::array<double, N>& ya, const std::array<double, N>& fa,
                   const std::array<double, N>& yb, const std::array<double, N>& fb, double ta,
                   double h) {
        const double tb = ta + h;
        while (next_ <= n_last_) {
            const double tk = t0_ + static_cast<double>(next_) * dt_out_;
            if (tk > tb + 1e-9 * dt_out_) break;
            push(next_, hermite<N>(ya, fa, yb, fb, ta, h, tk));
        }
    }

    [[nodiscard]] bool done() const { return next_ > n_last_; }
    [[nodiscard]] double t_end() const {
        return t0_ + static_cast<double>(n_last_) * dt_out_;
    }

  private:
    void push(std::size_t k, const std::array<double, N>& y) {
        tr_.t.push_back(t0_ + static_cast<double>(k) * dt_out_);
        tr_.y.push_back(y);
        next_ = k + 1;
    }

    double t0_;
    double dt_out_;
    Trajectory<N>& tr_;
    std::size_t n_last_ = 0;
    std::size_t next_ = 0;
};

template <std::size_t N, typename Rhs>
Trajectory<N> integrate_adaptive(Rhs&& rhs, const std::array<double, N>& y0, double t0, double t1,
                                 const IntegratorConfig& cfg) {
    if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0))
        throw std::invalid_argument("integrate: rtol and atol must be > 0");

    // Dormand-Prince 5(4) tableau; the last stage is the derivative at the
    // accepted point (first-same-as-last).
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    Trajectory<N> tr;
    OutputGrid<N> grid(t0, t1, cfg.dt_out, tr);
    grid.emit_initial(y0);

    std::array<double, N> y = y0;
    std::array<double, N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    double t = t0;
    const double t_end = t1;

    rhs(t, y, k1);
    ++tr.stats.rhs_evals;
    if (!finite<N>(k1)) throw IntegrationError("integrate: non-finite derivative at start");

    auto scaled_norm = [&](const std::array<double, N>& err, const std::array<double, N>& ya,
                           const std::array<double, N>& yb) {
        double sum = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = cfg.atol + cfg.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            const double q = err[i] / sc;
            sum += q * q;
        }
        return std::sqrt(sum / static_cast<double>(N));
    };

    // Initial step: small fraction of the scale set by y and f, refined by
    // one Euler probe of the derivative's rate of change.
    double h = cfg.dt_init;
    if (h <= 0.0) {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = cfg.atol + cfg.rtol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, t_end - t0);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h0 * k1[i];
        rhs(t + h0, ytmp, k2);
        ++tr.stats.rhs_evals;
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = cfg.atol + cfg.rtol * std::abs(y[i]);
            const double q = (k2[i] - k1[i]) / sc;
            d2 += q * q;
        }
        d2 = std::sqrt(d2 / N) / h0;
        const double dmax = std::max(d1, d2);
        const double h1 = (dmax <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                          : std::pow(0.01 / dmax, 0.2);
        h = std::min({100.0 * h0, h1, t_end - t0});
        // The scale guess collapses when components start near zero but have
        // large derivatives. Do not give up below the step floor on a guess;
        // start at the floor and let step rejection decide.
        h = std::max(h, std::min(1.05e-14, t_end - t0));
    }
    if (cfg.dt_max > 0.0) h = std::min(h, cfg.dt_max);

    bool just_rejected = false;
    while (!grid.done() && t < t_end) {
        if (h < 1e-14)
            throw IntegrationError("integrate: step size underflow at tau = " +
                                   std::to_string(t));
        if (t + h > t_end) h = t_end - t;

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] =
                y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] =
                y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(t + h, ynew, k7);
        tr.stats.rhs_evals += 6;

        if (!finite<N>(ynew) || !finite<N>(k7))
            throw IntegrationError("integrate: non-finite state at tau = " + std::to_string(t));

        std::array<double, N> err;
        for (std::size_t i = 0; i < N; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
        const double errnorm = scaled_norm(err, y, ynew);

        if (errnorm <= 1.0) {
            grid.emit_step(y, k1, ynew, k7, t, h);
            t += h;
            y = ynew;
            k1 = k7;
            ++tr.stats.accepted;
            double fac = 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2);
            fac = std::min(just_rejected ? 1.0 : 10.0, std::max(0.2, fac));
            h *= fac;
            just_rejected = false;
        } else {
            ++tr.stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(errnorm, -0.2));
            just_rejected = true;
        }
        if (cfg.dt_max > 0.0) h = std::min(h, cfg.dt_max);
    }
    return tr;
}

template <std::size_t N, typename Rhs>
Trajectory<N> integrate_fixed_rk4(Rhs&& rhs, const std::array<double, N>& y0, double t0, double t1,
                                  const IntegratorConfig& cfg) {
    const double h0 = cfg.dt_init;
    if (!(h0 > 0.0))
        throw std::invalid_argument("integrate: fixed_rk4 needs dt_init > 0");
    if (h0 > cfg.dt_out * (1.0 + 1e-12))
        throw std::invalid_argument("integrate: fixed_rk4 step must not exceed dt_out");

    Trajectory<N> tr;
    OutputGrid<N> grid(t0, t1, cfg.dt_out, tr);
    grid.emit_initial(y0);

    std::array<double, N> y = y0;
    std::array<double, N> k1, k2, k3, k4, ytmp, ynew, fb;
    rhs(t0, y, k1);
    ++tr.stats.rhs_evals;

    const double span = t1 - t0;
    const auto n_steps = static_cast<std::size_t>(std::ceil(span / h0 * (1.0 - 1e-14)));
    for (std::size_t step = 0; step < n_steps && !grid.done(); ++step) {
        const double ta = t0 + static_cast<double>(step) * h0;
        const double tb = (step + 1 == n_steps) ? t1 : ta + h0;
        const double h = tb - ta;

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(ta + 0.5 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(ta + 0.5 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * k3[i];
        rhs(tb, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        rhs(tb, ynew, fb);
        tr.stats.rhs_evals += 4;

        if (!finite<N>(ynew) || !finite<N>(fb))
            throw IntegrationError("integrate: non-finite state at tau = " + std::to_string(ta));

        grid.emit_step(y, k1, ynew, fb, ta, h);
        y = ynew;
        k1 = fb;
        ++tr.stats.accepted;
    }
    return tr;
}

}  // namespace detail

/// Integrates dy/dt = rhs(t, y) over [t0, t1], sampling on the uniform grid
/// t0 + k dt_out. rhs has signature void(double, const array&, array& out).
template <std::size_t N, typename Rhs>
Trajectory<N> integrate(Rhs&& rhs, const std::array<double, N>& y0, double t0, double t1,
                        const IntegratorConfig& cfg) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate: need t1 > t0");
    if (!(cfg.dt_out > 0.0)) throw std::invalid_argument("integrate: dt_out must be > 0");
    if (cfg.method == Method::fixed_rk4)
        return detail::integrate_fixed_rk4<N>(std::forward<Rhs>(rhs), y0, t0, t1, cfg);
    return detail::integrate_adaptive<N>(std::forward<Rhs>(rhs), y0, t0, t1, cfg);
}

/// Convenience wrapper for the circuit equations (driven when p.drive is set).
[[nodiscard]] Trajectory3 integrate_circuit(const DimensionlessParams& p, const CircuitState& s0,
                                            double tau0, double tau1,
                                            const IntegratorConfig& cfg);

/// Triangular bias ramp i(tau): up from i_start to i_peak at +rate, then down
/// to i_end at -rate.
struct RampSpec {
    double i_start = 0.0;
    double i_peak = 0.0;
    double i_end = 0.0;
    double rate = 0.01;

    [[nodiscard]] double tau_turn() const { return (i_peak - i_start) / rate; }
    [[nodiscard]] double tau_total() const { return tau_turn() + (i_peak - i_end) / rate; }
    [[nodiscard]] double bias_at(double tau) const {
        return tau <= tau_turn() ? i_start + rate * tau : i_peak - rate * (tau - tau_turn());
    }
};

/// One output sample of a ramp run, with the bias split into the three
/// parallel current channels (supercurrent i_j, resistive i_res = v,
/// capacitive i_cap = dv/dtau); they add up to the applied bias.
struct RampSample {
    double tau = 0.0;
    double i_tot = 0.0;
    double v = 0.0;
    double i_j = 0.0;
    double i_s = 0.0;
    double i_res = 0.0;
    double i_cap = 0.0;
};

struct RampResult {
    std::vector<RampSample> samples;
    std::size_t turn_index = 0;  // first sample of the descending leg
};

[[nodiscard]] RampResult ramp_sweep(double alpha, const RampSpec& ramp,
                                    const IntegratorConfig& cfg);

/// Bias values where the ramp run switched branches, if it did: i_up is the
/// bias at which the ascending leg left the low-voltage branch, i_down where
/// the descending leg fell back. Absent when the curve never crosses the
/// fold (monotone characteristic or ramp too short).
struct SweepJumps {
    std::optional<double> i_up{};
    std::optional<double> i_down{};
};

[[nodiscard]] SweepJumps detect_jumps(double alpha, const RampResult& result);

/// Quasi-static point-by-point sweep: each bias is integrated from the
/// previous endpoint until the voltage stops moving.
struct ContinuationPoint {
    double i_tot = 0.0;
    double v = 0.0;
    bool settled = false;
    double amplitude = 0.0;  // last observed v peak-to-peak over the window
};

struct ContinuationOptions {
    double settle_window = 20.0;   // tau span of one stationarity window
    double amp_tol = 1e-7;         // window peak-to-peak below this counts as settled
    int required_windows = 2;      // consecutive quiet windows needed
    double max_tau_per_point = 2000.0;
};

[[nodiscard]] std::vector<ContinuationPoint> continuation_sweep(
    double alpha, const std::vector<double>& i_values, const IntegratorConfig& cfg,
    CircuitState s0 = {}, const ContinuationOptions& opt = {});

}  // namespace jjsim
