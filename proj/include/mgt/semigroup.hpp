#pragma once

// Linear flow e^{Gt} assembled from the per-mode Pade propagators, the
// decay-rate measurement against the spectral abscissa, and numerical
// sectoriality probes for the opposite-sign operator.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mgt/block.hpp"
#include "mgt/expm.hpp"
#include "mgt/util.hpp"

namespace mgt {

struct PropagatorSet {
    double t = 0.0;
    std::vector<Mat3> mats;  // e^{L_k t} per mode
};

inline PropagatorSet make_propagators(const BlockOperator& b, double t) {
    PropagatorSet ps;
    ps.t = t;
    ps.mats.resize(b.size());
    parallel_for(b.size(), [&](std::size_t k) { ps.mats[k] = mode_expm(b.blocks[k].L, t); });
    return ps;
}

inline StateTriple apply_propagators(const PropagatorSet& ps, const StateTriple& s) {
    if (ps.mats.size() != s.size())
        throw std::invalid_argument("apply_propagators: state length does not match propagator set");
    StateTriple r = StateTriple::zero(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const Vec3 x = ps.mats[k] * Vec3{s.u[k], s.v[k], s.w[k]};
        r.u[k] = x[0];
        r.v[k] = x[1];
        r.w[k] = x[2];
    }
    return r;
}

inline StateTriple evolve_linear(const BlockOperator& b, const StateTriple& s, double t) {
    detail::check_state(b, s, "evolve_linear");
    if (!(t >= 0.0)) throw std::domain_error("evolve_linear: t must be >= 0");
    return apply_propagators(make_propagators(b, t), s);
}

// ---------------------------------------------------------------------------
// Decay-rate measurement

struct DecayFit {
    double omega = 0.0;     // fitted exponential rate; positive means decay
    double abscissa = 0.0;  // max over modes of max Re eigenvalue of L
    bool decaying = false;
    bool dominant_simple = false;  // isolated dominant real part, one frequency
    double horizon_used = 0.0;
    int periods_used = 0;  // >0 when the period-averaged estimator ran
};

namespace detail {

struct DominantInfo {
    double abscissa = 0.0;
    double freq = 0.0;  // |Im| of the dominant roots (0 if real)
    bool simple = false;
};

inline DominantInfo dominant_root_info(const std::vector<ModeSpectrum>& spec) {
    DominantInfo d;
    d.abscissa = -std::numeric_limits<double>::infinity();
    for (const auto& ms : spec) d.abscissa = std::max(d.abscissa, max_real_root(ms));
    const double tol = 1e-9 * std::max(1.0, std::abs(d.abscissa));
    double next = -std::numeric_limits<double>::infinity();
    bool freq_set = false, freq_consistent = true;
    for (const auto& ms : spec)
        for (const auto& z : ms.roots) {
            if (z.real() >= d.abscissa - tol) {
                const double f = std::abs(z.imag());
                if (!freq_set) {
                    d.freq = f;
                    freq_set = true;
                } else if (std::abs(f - d.freq) > 1e-6 * std::max(1.0, d.freq)) {
                    freq_consistent = false;
                }
            } else {
                next = std::max(next, z.real());
            }
        }
    const double gap = d.abscissa - next;  // +inf when every root is dominant
    d.simple = freq_consistent && gap >= 1e-3;
    return d;
}

inline double lsq_slope(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    KahanSum st, sy;
    for (std::size_t i = 0; i < n; ++i) {
        st.add(t[i]);
        sy.add(y[i]);
    }
    const double tm = st.value() / n, ym = sy.value() / n;
    KahanSum num, den;
    for (std::size_t i = 0; i < n; ++i) {
        num.add((t[i] - tm) * (y[i] - ym));
        den.add((t[i] - tm) * (t[i] - tm));
    }
    if (den.value() == 0.0) throw std::runtime_error("lsq_slope: degenerate abscissae");
    return num.value() / den.value();
}

}  // namespace detail

// Least-squares fit of log y_norm(e^{Gt} s0) over the back half of the
// horizon, for a generic normalized state. Oscillatory dominant roots are
// handled by averaging log y over whole periods before fitting, which cancels
// the ripple exactly on the uniform sub-period grid. Non-decay is reported,
// not an error.
inline DecayFit decay_rate(const BlockOperator& b, double horizon, int samples) {
    if (!(horizon > 0.0)) throw std::invalid_argument("decay_rate: horizon must be positive");
    if (samples < 8) throw std::invalid_argument("decay_rate: need at least 8 samples");

    const auto spec = spectrum(b);
    const detail::DominantInfo dom = detail::dominant_root_info(spec);

    // generic data: every mode excited, normalized to y_norm 1
    rng_t rng(0x5eed5eedULL);
    StateTriple s0 = StateTriple::zero(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) {
        s0.u[k] = normal(rng) / (1.0 + k);
        s0.v[k] = normal(rng) / (1.0 + k);
        s0.w[k] = normal(rng) / (1.0 + k);
    }
    s0 = (1.0 / y_norm(b, s0)) * s0;

    // shrink the horizon until the fit window stays in floating-point range
    double h = horizon;
    for (int it = 0; it < 60; ++it) {
        const double ya = y_norm(b, evolve_linear(b, s0, h / 2.0));
        const double yb = y_norm(b, evolve_linear(b, s0, h));
        const bool ok = std::isfinite(ya) && std::isfinite(yb) && ya > 1e-200 && yb > 1e-200 &&
                        ya < 1e200 && yb < 1e200;
        if (ok) break;
        h /= 2.0;
    }

    DecayFit fit;
    fit.abscissa = dom.abscissa;
    fit.dominant_simple = dom.simple;
    fit.horizon_used = h;

    std::vector<double> ts, logs;
    const double window = h / 2.0;
    int periods = 0;
    if (dom.freq > 1e-9) {
        const double t_osc = 2.0 * M_PI / dom.freq;
        periods = static_cast<int>(std::floor(window / t_osc));
        periods = std::min(periods, 16);
    }
    if (periods >= 2) {
        // period-averaged estimator: mean of log y over each whole period
        const int per_period = 32;
        const double t_osc = 2.0 * M_PI / dom.freq;
        const double t_start = h - periods * t_osc;
        const double dt = t_osc / per_period;
        PropagatorSet step = make_propagators(b, dt);
        StateTriple cur = evolve_linear(b, s0, t_start);
        for (int i = 0; i < periods; ++i) {
            KahanSum acc;
            bool valid = true;
            for (int j = 0; j < per_period; ++j) {
                const double y = y_norm(b, cur);
                if (!(y > 0.0) || !std::isfinite(y)) valid = false;
                if (valid) acc.add(std::log(y));
                cur = apply_propagators(step, cur);
            }
            if (valid) {
                ts.push_back(t_start + (i + 0.5) * t_osc);
                logs.push_back(acc.value() / per_period);
            }
        }
        fit.periods_used = periods;
    }
    if (ts.size() < 2) {
        ts.clear();
        logs.clear();
        fit.periods_used = 0;
        const double dt = window / (samples - 1);
        PropagatorSet step = make_propagators(b, dt);
        StateTriple cur = evolve_linear(b, s0, h / 2.0);
        for (int j = 0; j < samples; ++j) {
            const double y = y_norm(b, cur);
            if (y > 0.0 && std::isfinite(y)) {
                ts.push_back(h / 2.0 + j * dt);
                logs.push_back(std::log(y));
            }
            cur = apply_propagators(step, cur);
        }
    }
    if (ts.size() < 2) throw std::runtime_error("decay_rate: no usable samples in the fit window");
    fit.omega = -detail::lsq_slope(ts, logs);
    fit.decaying = fit.omega > 0.0;
    return fit;
}

// ---------------------------------------------------------------------------
// Sectoriality probe
//
// Rays are parameterized by the angle theta measured from the negative real
// axis: z = r e^{i(pi - theta)}. For stable parameters the spectrum of -L
// sits in a sector around the positive real axis, so theta = 0 looks
// straight away from it and the probe stays finite for theta up to
// pi - (spectral angle), a little past pi/2.

struct SectorialityRow {
    double theta = 0.0;
    double m_raw = 0.0;       // sup |z| |(zI + L_k)^{-1}|_2
    double m_weighted = 0.0;  // same with the Y-norm weighting D = diag(sqrt(l), sqrt(l), 1)
    std::size_t skipped = 0;  // probe points within 1e-8 of an eigenvalue
};

inline std::vector<SectorialityRow> sectoriality_probe(const BlockOperator& b,
                                                       const std::vector<double>& angles,
                                                       const std::vector<double>& radii) {
    for (double r : radii)
        if (!(r > 0.0)) throw std::invalid_argument("sectoriality_probe: radii must be positive");
    const auto spec = spectrum(b);
    std::vector<SectorialityRow> table(angles.size());
    parallel_for(angles.size(), [&](std::size_t ai) {
        SectorialityRow row;
        row.theta = angles[ai];
        const cplx dir = std::polar(1.0, M_PI - angles[ai]);
        for (double r : radii) {
            const cplx z = r * dir;
            for (std::size_t k = 0; k < b.size(); ++k) {
                bool near = false;
                for (const auto& zr : spec[k].roots) {
                    const cplx mu = -zr;  // eigenvalue of -L_k
                    if (std::abs(z - mu) <= 1e-8 * std::max(1.0, std::abs(mu))) near = true;
                }
                if (near) {
                    ++row.skipped;
                    continue;
                }
                CMat3 m = to_complex(b.blocks[k].L);
                for (int i = 0; i < 3; ++i) m[i][i] += z;  // zI - (-L) = zI + L
                const CMat3 res = inverse3(m);
                row.m_raw = std::max(row.m_raw, std::abs(z) * norm2(res));
                const double sq = std::sqrt(b.op.lambda[k]);
                CMat3 wres = res;
                // D res D^{-1} with D = diag(sq, sq, 1)
                wres[0][2] = res[0][2] * sq;
                wres[1][2] = res[1][2] * sq;
                wres[2][0] = res[2][0] / sq;
                wres[2][1] = res[2][1] / sq;
                row.m_weighted = std::max(row.m_weighted, std::abs(z) * norm2(wres));
            }
        }
        table[ai] = row;
    });
    return table;
}

}  // namespace mgt
