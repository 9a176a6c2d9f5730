#include "jjsim/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "jjsim/characteristic.hpp"

namespace jjsim {

namespace {

std::array<double, 3> to_array(const CircuitState& s) { return {s.v, s.i_j, s.i_s}; }

}  // namespace

Trajectory3 integrate_circuit(const DimensionlessParams& p, const CircuitState& s0, double tau0,
                              double tau1, const IntegratorConfig& cfg) {
    auto rhs = [&p](double tau, const std::array<double, 3>& y, std::array<double, 3>& dy) {
        const CircuitState d = rhs_driven(p, {y[0], y[1], y[2]}, tau);
        dy = {d.v, d.i_j, d.i_s};
    };
    return integrate<3>(rhs, to_array(s0), tau0, tau1, cfg);
}

RampResult ramp_sweep(double alpha, const RampSpec& ramp, const IntegratorConfig& cfg) {
    if (!(ramp.rate > 0.0)) throw std::invalid_argument("ramp_sweep: rate must be > 0");
    if (ramp.i_peak < ramp.i_start || ramp.i_peak < ramp.i_end)
        throw std::invalid_argument("ramp_sweep: i_peak must be the largest bias");

    auto rhs = [alpha, &ramp](double tau, const std::array<double, 3>& y,
                              std::array<double, 3>& dy) {
        const DimensionlessParams p{alpha, ramp.bias_at(tau), {}};
        const CircuitState d = rhs_autonomous(p, {y[0], y[1], y[2]});
        dy = {d.v, d.i_j, d.i_s};
    };

    // Start on the lowest-voltage stationary branch at the initial bias.
    const CircuitState s0 = fixed_points(alpha, ramp.i_start).front().state();

    const Trajectory3 tr = integrate<3>(rhs, to_array(s0), 0.0, ramp.tau_total(), cfg);

    RampResult out;
    out.samples.reserve(tr.t.size());
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        RampSample s;
        s.tau = tr.t[k];
        s.i_tot = ramp.bias_at(s.tau);
        s.v = tr.y[k][0];
        s.i_j = tr.y[k][1];
        s.i_s = tr.y[k][2];
        s.i_res = s.v;
        s.i_cap = s.i_tot - s.v - s.i_j;  // dv/dtau on the trajectory
        out.samples.push_back(s);
    }
    out.turn_index = static_cast<std::size_t>(
        std::upper_bound(tr.t.begin(), tr.t.end(), ramp.tau_turn()) - tr.t.begin());
    return out;
}

SweepJumps detect_jumps(double alpha, const RampResult& result) {
    SweepJumps jumps;
    const CharacteristicExtrema ex = extrema(alpha);
    if (!ex.v_minus || !ex.v_plus) return jumps;  // monotone curve, nothing to jump between
    const double vm = *ex.v_minus;
    const double vp = *ex.v_plus;
    const auto& s = result.samples;
    const std::size_t turn = result.turn_index;

    // Ascending leg: find the first sample above the fold, then the bias of
    // the last sample that was still on the low branch before it.
    for (std::size_t k = 0; k < turn; ++k) {
        if (s[k].v <= vp) continue;
        for (std::size_t j = k; j-- > 0;) {
            if (s[j].v < vm) {
                jumps.i_up = s[j].i_tot;
                break;
            }
        }
        break;
    }

    // Descending leg: first sample back below the fold, bias of the last
    // sample that was still on the high branch.
    for (std::size_t k = turn; k < s.size(); ++k) {
        if (s[k].v >= vm) continue;
        for (std::size_t j = k; j-- > turn;) {
            if (s[j].v > vp) {
                jumps.i_down = s[j].i_tot;
                break;
            }
        }
        break;
    }
    return jumps;
}

std::vector<ContinuationPoint> continuation_sweep(double alpha,
                                                  const std::vector<double>& i_values,
                                                  const IntegratorConfig& cfg, CircuitState s0,
                                                  const ContinuationOptions& opt) {
    if (!(opt.settle_window > 0.0) || !(opt.amp_tol > 0.0))
        throw std::invalid_argument("continuation_sweep: bad settling options");

    std::vector<ContinuationPoint> out;
    out.reserve(i_values.size());
    CircuitState s = s0;

    for (const double i_tot : i_values) {
        const DimensionlessParams p{alpha, i_tot, {}};
        ContinuationPoint pt;
        pt.i_tot = i_tot;

        int quiet = 0;
        double elapsed = 0.0;
        while (elapsed < opt.max_tau_per_point) {
            const Trajectory3 tr = integrate_circuit(p, s, 0.0, opt.settle_window, cfg);
            double lo = tr.y.front()[0], hi = lo;
            for (const auto& y : tr.y) {
                lo = std::min(lo, y[0]);
                hi = std::max(hi, y[0]);
            }
            pt.amplitude = hi - lo;
            s = circuit_state_at(tr, tr.y.size() - 1);
            elapsed += opt.settle_window;
            quiet = (pt.amplitude < opt.amp_tol) ? quiet + 1 : 0;
            if (quiet >= opt.required_windows) break;
        }
        pt.settled = quiet >= opt.required_windows;
        pt.v = s.v;
        out.push_back(pt);
    }
    return out;
}

}  // namespace jjsim
