#pragma once

// Adaptive embedded Runge-Kutta integrator (Dormand-Prince 5(4), FSAL) on a
// flat coefficient vector. Serves as the independent reference route for the
// mild solver: plain explicit stepping with error control, no use of the
// per-mode propagators. Step endpoints are forced onto the requested output
// times, so no interpolation enters the comparison.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mgt {

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h_init = 0.0;           // 0: derived from the first output interval
    std::size_t max_steps = 50000000;
};

struct OdeResult {
    bool completed = false;  // false: step-size underflow or step budget hit
    double t_reached = 0.0;
    std::size_t steps = 0;
};

// deriv(t, y, dydt); emit(output_index, t, y) fires at every requested time.
// out_times must be nondecreasing, starting at or after t0.
template <class DerivFn, class EmitFn>
OdeResult integrate_dp54(DerivFn&& deriv, std::vector<double> y, double t0,
                         const std::vector<double>& out_times, EmitFn&& emit,
                         const OdeOptions& opt = {}) {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0, e3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
                            e4 = 125.0 / 192.0 - 393.0 / 640.0,
                            e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0, e6 = 11.0 / 84.0 - 187.0 / 2100.0,
                            e7 = -1.0 / 40.0;
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

    OdeResult res;
    double t = t0;
    deriv(t, y, k1);
    std::size_t oi = 0;
    while (oi < out_times.size() && out_times[oi] <= t0) {
        emit(oi, t0, y);
        ++oi;
    }

    const double span = out_times.empty() ? 0.0 : out_times.back() - t0;
    double h = opt.h_init > 0.0 ? opt.h_init
                                : std::max(1e-8, 1e-3 * (oi < out_times.size() ? out_times[oi] - t0 : span));

    while (oi < out_times.size()) {
        const double target = out_times[oi];
        bool underflow = false;
        while (t < target) {
            if (res.steps >= opt.max_steps) {
                res.t_reached = t;
                return res;
            }
            const double h_min = 16.0 * 2.220446049250313e-16 * std::max(std::abs(t), 1.0);
            if (h < h_min) {
                underflow = true;
                break;
            }
            double hs = std::min(h, target - t);
            bool hit_target = hs == target - t;

            for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
            deriv(t + c2 * hs, ytmp, k2);
            for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
            deriv(t + c3 * hs, ytmp, k3);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            deriv(t + c4 * hs, ytmp, k4);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            deriv(t + c5 * hs, ytmp, k5);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            deriv(t + hs, ytmp, k6);
            for (std::size_t i = 0; i < n; ++i)
                ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            deriv(t + hs, ynew, k7);

            double err2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                       e7 * k7[i]);
                const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err2 += (e / sc) * (e / sc);
            }
            double err = std::sqrt(err2 / n);
            if (!std::isfinite(err)) err = 1e10;

            ++res.steps;
            if (err <= 1.0) {
                t = hit_target ? target : t + hs;
                y.swap(ynew);
                k1.swap(k7);  // FSAL
                const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
                // a step clipped to the output time must not shrink later steps
                h = hit_target ? std::max(h, hs * fac) : hs * fac;
            } else {
                h = hs * std::max(0.2, 0.9 * std::pow(err, -0.2));
            }
        }
        if (underflow) {
            res.t_reached = t;
            return res;  // completed stays false: blow-up signal
        }
        emit(oi, target, y);
        ++oi;
    }
    res.completed = true;
    res.t_reached = t;
    return res;
}

}  // namespace mgt
