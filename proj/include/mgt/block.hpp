#pragma once

// First-order reformulation of
//
//   d^3u/dt^3 + alpha d^2u/dt^2 + beta A du/dt + gamma A u + delta A d^2u/dt^2 = f
//
// as d/dt (u,v,w) = G (u,v,w) + (0,0,f) with v = du/dt, w = d^2u/dt^2. Against
// an eigenmode A phi = lambda phi the generator G acts as the companion block
//
//   L = [ 0      1       0       ]
//       [ 0      0       1       ]
//       [ -g*l  -b*l  -(a + d*l) ]
//
// with characteristic polynomial z^3 + (a+d*l) z^2 + b*l z + g*l. All
// spectral-theory statements (sectoriality, fractional powers, Re sigma > 0)
// are phrased for the opposite-sign operator; throughout, that operator is
// -G, and the explicit inverse below is the inverse of G itself.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgt/cubic.hpp"
#include "mgt/mat3.hpp"
#include "mgt/spectral.hpp"
#include "mgt/util.hpp"

namespace mgt {

struct MgtParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double delta = 1.0;

    void validate() const {
        auto bad = [](double x) { return !(x > 0.0) || !std::isfinite(x); };
        if (bad(alpha)) throw std::domain_error("MgtParams: alpha must be positive");
        if (bad(beta)) throw std::domain_error("MgtParams: beta must be positive");
        if (bad(gamma)) throw std::domain_error("MgtParams: gamma must be positive");
        if (bad(delta)) throw std::domain_error("MgtParams: delta must be positive");
    }
};

struct StateTriple {
    CoeffVector u, v, w;

    std::size_t size() const { return u.size(); }

    static StateTriple zero(std::size_t n) {
        return {CoeffVector(n, 0.0), CoeffVector(n, 0.0), CoeffVector(n, 0.0)};
    }

    bool finite() const { return all_finite(u) && all_finite(v) && all_finite(w); }
};

inline StateTriple operator+(const StateTriple& a, const StateTriple& b) {
    StateTriple r = a;
    for (std::size_t k = 0; k < r.size(); ++k) {
        r.u[k] += b.u[k];
        r.v[k] += b.v[k];
        r.w[k] += b.w[k];
    }
    return r;
}

inline StateTriple operator-(const StateTriple& a, const StateTriple& b) {
    StateTriple r = a;
    for (std::size_t k = 0; k < r.size(); ++k) {
        r.u[k] -= b.u[k];
        r.v[k] -= b.v[k];
        r.w[k] -= b.w[k];
    }
    return r;
}

inline StateTriple operator*(double c, const StateTriple& a) {
    StateTriple r = a;
    for (std::size_t k = 0; k < r.size(); ++k) {
        r.u[k] *= c;
        r.v[k] *= c;
        r.w[k] *= c;
    }
    return r;
}

struct ModeBlock {
    double lambda = 0.0;
    Mat3 L = Mat3::zero();
};

inline ModeBlock mode_block(const MgtParams& p, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("mode_block: lambda must be positive");
    ModeBlock b;
    b.lambda = lambda;
    b.L[0][1] = 1.0;
    b.L[1][2] = 1.0;
    b.L[2][0] = -p.gamma * lambda;
    b.L[2][1] = -p.beta * lambda;
    b.L[2][2] = -(p.alpha + p.delta * lambda);
    return b;
}

// Coefficients (c2, c1, c0) of the mode characteristic polynomial
// z^3 + c2 z^2 + c1 z + c0.
inline std::array<double, 3> mode_char_coeffs(const MgtParams& p, double lambda) {
    return {p.alpha + p.delta * lambda, p.beta * lambda, p.gamma * lambda};
}

struct BlockOperator {
    SpectralOperator op;
    MgtParams params;
    std::vector<ModeBlock> blocks;

    std::size_t size() const { return op.size(); }
};

inline BlockOperator make_block_operator(SpectralOperator op, MgtParams params) {
    params.validate();
    BlockOperator b;
    b.op = std::move(op);
    b.params = params;
    b.blocks.reserve(b.op.size());
    for (double lam : b.op.lambda) b.blocks.push_back(mode_block(params, lam));
    return b;
}

namespace detail {
inline void check_state(const BlockOperator& b, const StateTriple& s, const char* where) {
    if (s.u.size() != s.v.size() || s.u.size() != s.w.size())
        throw std::invalid_argument(std::string(where) + ": state components have unequal lengths");
    if (s.size() != b.size())
        throw std::invalid_argument(std::string(where) + ": state length " + std::to_string(s.size()) +
                                    " does not match operator size " + std::to_string(b.size()));
}
}  // namespace detail

// G(u,v,w) = (v, w, -alpha w - lambda (beta v + gamma u + delta w)) per mode.
inline StateTriple apply_generator(const BlockOperator& b, const StateTriple& s) {
    detail::check_state(b, s, "apply_generator");
    const auto& p = b.params;
    StateTriple r = StateTriple::zero(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double lam = b.op.lambda[k];
        r.u[k] = s.v[k];
        r.v[k] = s.w[k];
        r.w[k] = -p.alpha * s.w[k] - lam * (p.beta * s.v[k] + p.gamma * s.u[k] + p.delta * s.w[k]);
    }
    return r;
}

// Explicit inverse of G, rows (-beta/gamma, -delta/gamma - alpha/(gamma lambda),
// -1/(gamma lambda)), (1,0,0), (0,1,0) per mode; defined for all positive
// parameters since det L = -gamma*lambda != 0.
inline StateTriple apply_generator_inverse(const BlockOperator& b, const StateTriple& s) {
    detail::check_state(b, s, "apply_generator_inverse");
    const auto& p = b.params;
    StateTriple r = StateTriple::zero(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double inv_l = 1.0 / b.op.lambda[k];
        r.u[k] = -(p.beta / p.gamma) * s.u[k] - (p.delta / p.gamma + p.alpha / p.gamma * inv_l) * s.v[k] -
                 inv_l / p.gamma * s.w[k];
        r.v[k] = s.u[k];
        r.w[k] = s.v[k];
    }
    return r;
}

// ---------------------------------------------------------------------------
// Spectrum and stability

struct ModeSpectrum {
    double lambda = 0.0;
    std::array<cplx, 3> roots{};  // eigenvalues of L, sorted by (Re, Im)
    double separation = 0.0;      // relative pairwise root separation
    bool near_multiple = false;   // separation below the conditioning threshold
};

inline constexpr double kNearMultipleSeparation = 1e-4;

inline ModeSpectrum mode_spectrum(const MgtParams& p, double lambda) {
    const auto c = mode_char_coeffs(p, lambda);
    const CubicRoots cr = solve_cubic(c[0], c[1], c[2]);
    for (const auto& z : cr.roots) {
        if (!cubic_residual_ok(c[0], c[1], c[2], z, 1e-9))
            throw std::runtime_error("mode_spectrum: cubic residual above tolerance at lambda = " +
                                     std::to_string(lambda));
    }
    ModeSpectrum ms;
    ms.lambda = lambda;
    ms.roots = cr.roots;
    ms.separation = cr.separation;
    ms.near_multiple = cr.separation < kNearMultipleSeparation;
    return ms;
}

inline std::vector<ModeSpectrum> spectrum(const BlockOperator& b) {
    std::vector<ModeSpectrum> out(b.size());
    parallel_for(b.size(), [&](std::size_t k) { out[k] = mode_spectrum(b.params, b.op.lambda[k]); });
    return out;
}

inline double max_real_root(const ModeSpectrum& ms) {
    double m = ms.roots[0].real();
    for (const auto& z : ms.roots) m = std::max(m, z.real());
    return m;
}

// Spectral abscissa of G: max over modes of max Re eigenvalue.
inline double spectral_abscissa(const BlockOperator& b) {
    const auto spec = spectrum(b);
    double a = -std::numeric_limits<double>::infinity();
    for (const auto& ms : spec) a = std::max(a, max_real_root(ms));
    return a;
}

struct StabilityResult {
    bool stable = false;
    double ratio = 0.0;  // gamma / (alpha + delta lambda0)
    double beta = 0.0;
    double chi = 0.0;  // beta (alpha + delta lambda0) - gamma
};

// The condition gamma/(alpha + delta lambda0) < beta at the smallest
// eigenvalue; chi is the margin beta(alpha + delta lambda0) - gamma. Since
// chi is increasing in lambda, the smallest eigenvalue is the worst mode.
inline StabilityResult stability_condition(const MgtParams& p, double lambda0) {
    if (!(lambda0 > 0.0)) throw std::domain_error("stability_condition: lambda0 must be positive");
    StabilityResult r;
    r.ratio = p.gamma / (p.alpha + p.delta * lambda0);
    r.beta = p.beta;
    r.chi = p.beta * (p.alpha + p.delta * lambda0) - p.gamma;
    r.stable = r.ratio < p.beta;
    return r;
}

inline StabilityResult stability_condition(const BlockOperator& b) {
    return stability_condition(b.params, b.op.lambda_min());
}

// Routh-Hurwitz for z^3 + c2 z^2 + c1 z + c0: all coefficients positive and
// c2 c1 > c0. Here c2 c1 - c0 = lambda (beta (alpha + delta lambda) - gamma).
inline bool routh_hurwitz(const MgtParams& p, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("routh_hurwitz: lambda must be positive");
    const auto c = mode_char_coeffs(p, lambda);
    return c[0] > 0.0 && c[1] > 0.0 && c[2] > 0.0 && c[0] * c[1] > c[2];
}

// ---------------------------------------------------------------------------
// Resolvent

struct CStateTriple {
    std::vector<cplx> u, v, w;

    std::size_t size() const { return u.size(); }

    static CStateTriple zero(std::size_t n) {
        return {std::vector<cplx>(n), std::vector<cplx>(n), std::vector<cplx>(n)};
    }

    static CStateTriple from_real(const StateTriple& s) {
        CStateTriple c = zero(s.size());
        for (std::size_t k = 0; k < s.size(); ++k) {
            c.u[k] = s.u[k];
            c.v[k] = s.v[k];
            c.w[k] = s.w[k];
        }
        return c;
    }
};

// (z I - L_k)^{-1} per mode by direct elimination. z must stay clear of the
// mode spectra; violations name the offending mode.
inline CStateTriple resolvent_apply(const BlockOperator& b, cplx z, const CStateTriple& s) {
    if (s.u.size() != b.size() || s.v.size() != b.size() || s.w.size() != b.size())
        throw std::invalid_argument("resolvent_apply: state length does not match operator size");
    CStateTriple r = CStateTriple::zero(b.size());
    std::vector<std::string> faults(b.size());
    parallel_for(b.size(), [&](std::size_t k) {
        const ModeSpectrum ms = mode_spectrum(b.params, b.op.lambda[k]);
        for (const auto& root : ms.roots) {
            if (std::abs(z - root) <= 1e-12 * std::max(1.0, std::abs(z))) {
                faults[k] = "resolvent_apply: z within 1e-12 of the spectrum at mode " +
                            std::to_string(k + 1);
                return;
            }
        }
        CMat3 m = to_complex(b.blocks[k].L * -1.0);
        for (int i = 0; i < 3; ++i) m[i][i] += z;
        const CVec3 x = solve3(m, CVec3{s.u[k], s.v[k], s.w[k]});
        r.u[k] = x[0];
        r.v[k] = x[1];
        r.w[k] = x[2];
    });
    for (const auto& f : faults)
        if (!f.empty()) throw std::domain_error(f);
    return r;
}

inline CStateTriple resolvent_apply(const BlockOperator& b, cplx z, const StateTriple& s) {
    detail::check_state(b, s, "resolvent_apply");
    return resolvent_apply(b, z, CStateTriple::from_real(s));
}

// ---------------------------------------------------------------------------
// Scale norms on state triples
//
// y_norm:        sigma = (1/2, 1/2, 0)   — the base product norm
// y_minus1_norm: sigma = (1/2, 1/2, -1/2) — one rung down the scale

inline double y_norm(const BlockOperator& b, const StateTriple& s) {
    detail::check_state(b, s, "y_norm");
    const double nu = frac_norm(b.op, 0.5, s.u);
    const double nv = frac_norm(b.op, 0.5, s.v);
    const double nw = frac_norm(b.op, 0.0, s.w);
    return std::sqrt(nu * nu + nv * nv + nw * nw);
}

inline double y_minus1_norm(const BlockOperator& b, const StateTriple& s) {
    detail::check_state(b, s, "y_minus1_norm");
    const double nu = frac_norm(b.op, 0.5, s.u);
    const double nv = frac_norm(b.op, 0.5, s.v);
    const double nw = frac_norm(b.op, -0.5, s.w);
    return std::sqrt(nu * nu + nv * nv + nw * nw);
}

inline double y_norm(const BlockOperator& b, const CStateTriple& s) {
    KahanSum acc;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double lam = b.op.lambda[k];
        acc.add(lam * std::norm(s.u[k]));
        acc.add(lam * std::norm(s.v[k]));
        acc.add(std::norm(s.w[k]));
    }
    return std::sqrt(acc.value());
}

// (G s, s)_Y — negative on (0,0,w) states, witnessing non-accretivity of the
// displayed action: the value is -alpha |w|^2 - delta (A^{1/2} w, A^{1/2} w).
inline double accretivity_form(const BlockOperator& b, const StateTriple& s) {
    detail::check_state(b, s, "accretivity_form");
    const StateTriple g = apply_generator(b, s);
    return inner_sigma(b.op, 0.5, g.u, s.u) + inner_sigma(b.op, 0.5, g.v, s.v) +
           inner_sigma(b.op, 0.0, g.w, s.w);
}

// Applies G^{-1} to the X^{1/2}-orthonormal family (lambda_n^{-1/2} e_n, 0, 0)
// and returns the minimum pairwise Y-distance of the images. The images are
// (-beta/gamma lambda_n^{-1/2} e_n, lambda_n^{-1/2} e_n, 0), so every pair is
// sqrt(2 (1 + (beta/gamma)^2)) apart: bounded away from zero uniformly, hence
// no convergent subsequence and no compact resolvent.
inline double noncompactness_witness(const BlockOperator& b, std::size_t n_family) {
    if (n_family < 2 || n_family > b.size())
        throw std::invalid_argument("noncompactness_witness: need 2 <= n_family <= n_modes");
    std::vector<StateTriple> images;
    images.reserve(n_family);
    for (std::size_t n = 0; n < n_family; ++n) {
        StateTriple e = StateTriple::zero(b.size());
        e.u[n] = std::pow(b.op.lambda[n], -0.5);
        images.push_back(apply_generator_inverse(b, e));
    }
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_family; ++i)
        for (std::size_t j = i + 1; j < n_family; ++j)
            min_dist = std::min(min_dist, y_norm(b, images[i] - images[j]));
    const double ratio = b.params.beta / b.params.gamma;
    const double expected = std::sqrt(2.0 * (1.0 + ratio * ratio));
    if (std::abs(min_dist - expected) > 1e-10 * std::max(1.0, expected))
        throw std::logic_error("noncompactness_witness: distance deviates from closed form");
    return min_dist;
}

}  // namespace mgt
