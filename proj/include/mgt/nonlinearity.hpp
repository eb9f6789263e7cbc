#pragma once

// Structured nonlinearity f(u, du/dt, d2u/dt2) = f1(u) + f2(v) + f3(w) lifted
// into the state space as F = (0, 0, f) through collocation, plus the
// sampling probes that certify the growth and Lipschitz estimates the local
// theory needs: |f_i''(s)| <= c (1 + |s|^(rho-2)) for i = 1,2 and a global
// Lipschitz bound for f3.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgt/block.hpp"
#include "mgt/frac_power.hpp"
#include "mgt/spectral.hpp"
#include "mgt/util.hpp"

namespace mgt {

struct Nonlinearity {
    std::string name = "zero";
    std::function<double(double)> f1, f2, f3;     // components; all vanish at 0
    std::function<double(double)> df1, df2, df3;  // first derivatives (augmented system)
    double rho = 2.0;          // declared growth exponent, > 1
    double f3_lipschitz = 0.0; // declared global Lipschitz bound for f3
    int N = 3;                 // declared spatial dimension (exponent arithmetic only)
    int m = 1;                 // declared elliptic half-order
    bool polynomial = true;    // selects the dealiasing rule
};

inline double subcritical_exponent(int N, int m) {
    if (m < 1 || N <= 2 * m)
        throw std::domain_error("supercritical dimension constraint violated: require N > 2m >= 2");
    return static_cast<double>(N + 2 * m) / static_cast<double>(N - 2 * m);
}

// Gallery by name. rho feeds the pure-power formula and the declared exponent
// of every entry; N, m are metadata for the exponent arithmetic.
inline Nonlinearity make_gallery_nonlinearity(const std::string& name, double rho, int N, int m) {
    if (!(rho > 1.0))
        throw std::domain_error("nonlinearity: rho must be > 1");
    auto zero_fn = [](double) { return 0.0; };
    Nonlinearity nl;
    nl.name = name;
    nl.rho = rho;
    nl.N = N;
    nl.m = m;
    nl.f1 = nl.f2 = nl.f3 = zero_fn;
    nl.df1 = nl.df2 = nl.df3 = zero_fn;

    auto power = [rho](double s) { return s == 0.0 ? 0.0 : s * std::pow(std::abs(s), rho - 1.0); };
    auto dpower = [rho](double s) { return s == 0.0 ? 0.0 : rho * std::pow(std::abs(s), rho - 1.0); };

    if (name == "zero") {
        nl.polynomial = true;
    } else if (name == "pure_power") {
        nl.f1 = power;
        nl.df1 = dpower;
        nl.polynomial = std::floor(rho) == rho;
    } else if (name == "cubic") {
        nl.f1 = [](double s) { return -s * s * s; };
        nl.df1 = [](double s) { return -3.0 * s * s; };
        nl.polynomial = true;
    } else if (name == "sine") {
        nl.f1 = [](double s) { return std::sin(s); };
        nl.df1 = [](double s) { return std::cos(s); };
        nl.polynomial = false;
    } else if (name == "saturating") {
        nl.f3 = [](double s) { return s / (1.0 + s * s); };
        nl.df3 = [](double s) {
            const double d = 1.0 + s * s;
            return (1.0 - s * s) / (d * d);
        };
        nl.f3_lipschitz = 1.0;
        nl.polynomial = false;
    } else if (name == "quintic") {
        // natural exponent 5; declaring a smaller rho makes this the
        // designed-supercritical entry that growth_check must flag
        nl.f1 = [](double s) { return s * s * s * s * s; };
        nl.df1 = [](double s) { return 5.0 * s * s * s * s; };
        nl.polynomial = true;
    } else if (name == "full") {
        nl.f1 = power;
        nl.df1 = dpower;
        nl.f2 = [](double s) { return std::sin(s); };
        nl.df2 = [](double s) { return std::cos(s); };
        nl.f3 = [](double s) { return s / (1.0 + s * s); };
        nl.df3 = [](double s) {
            const double d = 1.0 + s * s;
            return (1.0 - s * s) / (d * d);
        };
        nl.f3_lipschitz = 1.0;
        nl.polynomial = false;
    } else {
        throw std::invalid_argument(
            "nonlinearity: unknown gallery entry '" + name +
            "' (known: zero, pure_power, cubic, sine, saturating, quintic, full)");
    }
    return nl;
}

namespace detail {
inline const std::function<double(double)>& pick_f(const Nonlinearity& nl, int which) {
    if (which == 1) return nl.f1;
    if (which == 2) return nl.f2;
    throw std::invalid_argument("nonlinearity probe: component selector must be 1 or 2");
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Growth probe: c = max |f''(s)| / (1 + |s|^(rho-2)) over a symmetric sample
// grid, second derivative by central differences. A ratio still climbing
// between the half-range and the full range marks growth beyond the declared
// exponent.

struct GrowthCheck {
    double c = 0.0;       // fitted constant over the full range
    double c_half = 0.0;  // same over [-range/2, range/2]
    bool flagged = false; // ratio divergence: declared rho too small
};

inline GrowthCheck growth_check(const Nonlinearity& nl, int which, int sample_count, double range) {
    if (sample_count < 16) throw std::invalid_argument("growth_check: need at least 16 samples");
    if (!(range > 0.0)) throw std::invalid_argument("growth_check: range must be positive");
    const auto& f = detail::pick_f(nl, which);
    GrowthCheck out;
    for (int i = 0; i < sample_count; ++i) {
        const double s = -range + 2.0 * range * i / (sample_count - 1);
        const double h = 1e-4 * std::max(1.0, std::abs(s));
        const double f2nd = (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h);
        const double denom = 1.0 + std::pow(std::abs(s), nl.rho - 2.0);
        const double ratio = std::abs(f2nd) / denom;  // denom may be +inf at s=0 for rho<2
        if (std::isfinite(ratio)) {
            out.c = std::max(out.c, ratio);
            if (std::abs(s) <= range / 2.0) out.c_half = std::max(out.c_half, ratio);
        }
    }
    out.flagged = out.c > 2.5 * out.c_half + 1e-9;
    return out;
}

// Mean-value bound probe: max |f(s1)-f(s2)| / ((1 + |s1|^(rho-1) + |s2|^(rho-1)) |s1-s2|).
inline double mv_lipschitz_check(const Nonlinearity& nl, int which, int pairs, rng_t& rng) {
    if (pairs < 1) throw std::invalid_argument("mv_lipschitz_check: need at least one pair");
    const auto& f = detail::pick_f(nl, which);
    const double range = 4.0;
    double c = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const double s1 = uniform(rng, -range, range);
        const double s2 = uniform(rng, -range, range);
        if (s1 == s2) continue;
        const double num = std::abs(f(s1) - f(s2));
        const double den =
            (1.0 + std::pow(std::abs(s1), nl.rho - 1.0) + std::pow(std::abs(s2), nl.rho - 1.0)) *
            std::abs(s1 - s2);
        c = std::max(c, num / den);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Collocation lifting: F(u,v,w) = (0, 0, analyze(f1(u) + f2(v) + f3(w))) on a
// dealiased grid.

inline StateTriple apply_F(const BlockOperator& b, const Nonlinearity& nl, const StateTriple& s,
                           std::size_t grid_override = 0) {
    detail::check_state(b, s, "apply_F");
    if (!b.op.transform)
        throw std::invalid_argument("nonlinear dynamics require a collocation model");
    const std::size_t n = b.size();
    if (grid_override != 0 && grid_override < n)
        throw std::invalid_argument("apply_F: grid override smaller than the mode count");
    const TransformPair tp(grid_override == 0 ? dealias_grid_size(n, nl.polynomial)
                                              : grid_override);
    const std::vector<double> gu = tp.synthesize(s.u);
    const std::vector<double> gv = tp.synthesize(s.v);
    const std::vector<double> gw = tp.synthesize(s.w);
    std::vector<double> h(tp.grid_size());
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = nl.f1(gu[j]) + nl.f2(gv[j]) + nl.f3(gw[j]);
    StateTriple r = StateTriple::zero(n);
    r.w = tp.analyze(h, n);
    return r;
}

// ---------------------------------------------------------------------------
// Function-space probes

// max |f_i(u1) - f_i(u2)|_{L^p} / ((1 + |u1|_H^(rho-1) + |u2|_H^(rho-1)) |u1-u2|_H)
// with p = 2N/(N+2m) by grid quadrature and H the sigma = 1/2 spectral norm.
struct LemmaProbeResult {
    double c = 0.0;
    double u1_norm = 0.0;  // H-norms of the pair achieving the max
    double u2_norm = 0.0;
    int pair_index = -1;
};

inline LemmaProbeResult lemma_lipschitz_probe(const BlockOperator& b, const Nonlinearity& nl,
                                              int which, int pairs, rng_t& rng,
                                              double norm_cap = 5.0,
                                              std::size_t grid_override = 0) {
    if (!b.op.transform)
        throw std::invalid_argument("nonlinear dynamics require a collocation model");
    const auto& f = detail::pick_f(nl, which);
    const double p = 2.0 * nl.N / static_cast<double>(nl.N + 2 * nl.m);
    const std::size_t n = b.size();
    if (grid_override != 0 && grid_override < n)
        throw std::invalid_argument("lemma_lipschitz_probe: grid override smaller than the mode count");
    const TransformPair tp(grid_override == 0 ? dealias_grid_size(n, nl.polynomial)
                                              : grid_override);
    const double wq = tp.quadrature_weight();

    auto smooth_sample = [&](double cap) {
        CoeffVector u(n);
        for (std::size_t k = 0; k < n; ++k) u[k] = normal(rng) / ((1.0 + k) * (1.0 + k));
        const double nrm = frac_norm(b.op, 0.5, u);
        const double target = uniform(rng, 0.05, 1.0) * cap;
        for (auto& x : u) x *= target / nrm;
        return u;
    };
    auto lp_norm = [&](const std::vector<double>& g) {
        KahanSum acc;
        for (double x : g) acc.add(wq * std::pow(std::abs(x), p));
        return std::pow(acc.value(), 1.0 / p);
    };

    LemmaProbeResult out;
    for (int i = 0; i < pairs; ++i) {
        const CoeffVector u1 = smooth_sample(norm_cap);
        const CoeffVector u2 = smooth_sample(norm_cap);
        const double h1 = frac_norm(b.op, 0.5, u1);
        const double h2 = frac_norm(b.op, 0.5, u2);
        CoeffVector diff(n);
        for (std::size_t k = 0; k < n; ++k) diff[k] = u1[k] - u2[k];
        const double hd = frac_norm(b.op, 0.5, diff);
        if (hd == 0.0) continue;
        const std::vector<double> g1 = tp.synthesize(u1);
        const std::vector<double> g2 = tp.synthesize(u2);
        std::vector<double> fd(g1.size());
        for (std::size_t j = 0; j < fd.size(); ++j) fd[j] = f(g1[j]) - f(g2[j]);
        const double num = lp_norm(fd);
        const double den =
            (1.0 + std::pow(h1, nl.rho - 1.0) + std::pow(h2, nl.rho - 1.0)) * hd;
        const double ratio = num / den;
        if (ratio > out.c) {
            out.c = ratio;
            out.u1_norm = h1;
            out.u2_norm = h2;
            out.pair_index = i;
        }
    }
    return out;
}

// max y_minus1_norm(F(s1) - F(s2)) / y_alpha_norm(s1 - s2) over random pairs in
// the radius-ball of the Y^a norm (a defaults to the solver's alpha_space).
inline double F_local_lipschitz_probe(const BlockOperator& b, const Nonlinearity& nl, double radius,
                                      int pairs, rng_t& rng, double a = 0.75) {
    if (!(radius > 0.0)) throw std::invalid_argument("F_local_lipschitz_probe: radius must be positive");
    const AlphaPowerSet aps = make_alpha_power_set(b, a);
    const std::size_t n = b.size();

    auto ball_sample = [&]() {
        StateTriple s = StateTriple::zero(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double decay = 1.0 / ((1.0 + k) * (1.0 + k));
            s.u[k] = normal(rng) * decay;
            s.v[k] = normal(rng) * decay;
            s.w[k] = normal(rng) * decay;
        }
        const double nrm = y_alpha_norm(b, aps, s);
        const double target = uniform(rng, 0.05, 1.0) * radius;
        return (target / nrm) * s;
    };

    double c = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const StateTriple s1 = ball_sample();
        const StateTriple s2 = ball_sample();
        const double den = y_alpha_norm(b, aps, s1 - s2);
        if (den == 0.0) continue;
        const double num = y_minus1_norm(b, apply_F(b, nl, s1) - apply_F(b, nl, s2));
        c = std::max(c, num / den);
    }
    return c;
}

}  // namespace mgt
