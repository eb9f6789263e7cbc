#pragma once

// Fractional powers of the opposite-sign block operator. With G the per-mode
// companion action and stable parameters, -G has spectrum {mu_i} = {-z_i} in
// the open right half-plane, so principal powers are defined. Two routes:
//
//   fc:   per mode, (-L)^(-a) = V diag(mu_i^(-a)) V^(-1) with Vandermonde
//         eigenvectors (1, z_i, z_i^2) and Lagrange-form inverse rows;
//   quad: per mode, (-L)^(-a) = (1/Gamma(a)) \int_0^inf t^(a-1) e^{Lt} dt
//         by composite Gauss-Legendre after the substitution t = e^tau.
//
// The routes share no numerics beyond the cubic solve (the quadrature uses the
// Pade propagator), so their agreement is a meaningful cross-check. Near-
// multiple roots make the eigenvector matrix ill-conditioned; the fc route
// then falls back to quadrature and counts the fallback.

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mgt/block.hpp"
#include "mgt/cubic.hpp"
#include "mgt/expm.hpp"
#include "mgt/mat3.hpp"

namespace mgt {

struct FracPowerStats {
    std::atomic<std::size_t> quad_fallback_modes{0};
};

// Relative root separation below which the eigenvector route is abandoned.
inline constexpr double kFcSeparationMin = 3e-3;

namespace detail {

inline constexpr double kGlNodes16[8] = {
    0.09501250983763744019, 0.28160355077925891323, 0.45801677765722738634,
    0.61787624440264374845, 0.75540440835500303390, 0.86563120238783174388,
    0.94457502307323257608, 0.98940093499164993260};
inline constexpr double kGlWeights16[8] = {
    0.18945061045506849629, 0.18260341504492358887, 0.16915651939500253819,
    0.14959598881657673208, 0.12462897125553387205, 0.09515851168249278481,
    0.06225352393864789286, 0.02715245941175409485};

// (1/Gamma(a)) \int_0^inf t^(a-1) E(t) dt for a decaying propagator family
// E(t) with |E(t)| <= m_bound e^{-omega t} and dominant oscillation frequency
// rho_im. Truncation points keep head and tail mass below tol each; panels in
// tau = log t shrink where the phase rho_im e^tau turns over fast.
template <class MatT, class ExpFn>
MatT balakrishnan_integral(double a, double omega, double rho_im, double m_bound, double tol,
                           MatT acc, ExpFn&& exp_at) {
    if (!(a > 0.0) || !(a < 1.0))
        throw std::invalid_argument("balakrishnan_integral: exponent must lie in (0,1)");
    if (!(omega > 0.0))
        throw std::domain_error("fractional powers require Re σ(\U0001d538) > 0");
    const double ga = std::tgamma(a);

    double t_min = std::pow(tol * a * ga / (2.0 * m_bound), 1.0 / a);
    t_min = std::max(t_min, 1e-290);
    double t_max = std::max(1.0, 1.0 / omega);
    for (int it = 0; it < 400; ++it) {
        const double tail = m_bound / ga * std::pow(t_max, a - 1.0) * std::exp(-omega * t_max) / omega;
        if (tail <= tol / 2.0) break;
        t_max *= 1.4;
    }

    const double tau_min = std::log(t_min);
    const double tau_max = std::log(t_max);
    double tau = tau_min;
    int guard = 0;
    while (tau < tau_max) {
        double w = std::min(1.0, 6.0 / (rho_im * std::exp(tau) + 1e-300));
        w = std::max(w, 1e-4);
        w = std::min(w, tau_max - tau);
        const double mid = tau + 0.5 * w;
        const double half = 0.5 * w;
        for (int i = 0; i < 8; ++i) {
            for (double sign : {-1.0, 1.0}) {
                const double tn = mid + sign * half * kGlNodes16[i];
                const double t = std::exp(tn);
                const double f = kGlWeights16[i] * half * std::exp(a * tn);
                acc = acc + exp_at(t) * f;
            }
        }
        tau += w;
        if (++guard > 2000000)
            throw std::runtime_error("balakrishnan_integral: panel subdivision did not terminate");
    }
    return acc * (1.0 / ga);
}

struct ModeDecay {
    double omega = 0.0;   // decay rate, -max Re eigenvalue of L
    double rho_im = 0.0;  // max |Im eigenvalue|
    double m_bound = 1.0; // sampled bound on |e^{Lt}| e^{omega t}
};

inline ModeDecay mode_decay_data(const Mat3& L, const CubicRoots& cr) {
    ModeDecay d;
    double remax = cr.roots[0].real();
    for (const auto& z : cr.roots) {
        remax = std::max(remax, z.real());
        d.rho_im = std::max(d.rho_im, std::abs(z.imag()));
    }
    d.omega = -remax;
    if (!(d.omega > 0.0)) return d;  // caller rejects; bound meaningless
    double m = 1.0;
    for (int j = 1; j <= 24; ++j) {
        const double t = j / (4.0 * d.omega);
        m = std::max(m, norm2(mode_expm(L, t)) * std::exp(d.omega * t));
    }
    d.m_bound = 2.0 * m;
    return d;
}

inline void check_frac_exponent(double a, double lo, double hi, const char* where) {
    if (!(a > lo) || !(a <= hi) || !std::isfinite(a))
        throw std::invalid_argument(std::string(where) + ": exponent out of range");
}

// V diag((-z_i)^expnt) V^(-1) from the Vandermonde eigenvectors (1, z, z^2)
// and Lagrange-form inverse rows. Returns false when conjugate symmetry is
// degraded (imaginary residue above 1e-10 relative), signalling fallback.
inline bool eigen_power_matrix(const CubicRoots& cr, double expnt, Mat3& out) {
    CMat3 q = CMat3::zero();
    for (int i = 0; i < 3; ++i) {
        const cplx zi = cr.roots[i];
        const cplx zj = cr.roots[(i + 1) % 3];
        const cplx zk = cr.roots[(i + 2) % 3];
        const cplx denom = (zi - zj) * (zi - zk);
        const cplx f = std::pow(-zi, expnt);  // principal branch; Re(-z_i) > 0
        const CVec3 col{cplx(1.0), zi, zi * zi};
        const CVec3 row{zj * zk / denom, -(zj + zk) / denom, cplx(1.0) / denom};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) q[r][c] += f * col[r] * row[c];
    }
    double re_max = 0.0, im_max = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            re_max = std::max(re_max, std::abs(q[r][c].real()));
            im_max = std::max(im_max, std::abs(q[r][c].imag()));
        }
    if (im_max > 1e-10 * std::max(1.0, re_max)) return false;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out[r][c] = q[r][c].real();
    return true;
}

}  // namespace detail

// (-L)^(-a) for one mode by the Gamma-integral quadrature, a in (0,1).
inline Mat3 mode_frac_power_quad_matrix(const MgtParams& p, double lambda, double a) {
    detail::check_frac_exponent(a, 0.0, 1.0, "mode_frac_power_quad_matrix");
    if (a == 1.0) throw std::invalid_argument("mode_frac_power_quad_matrix: exponent must lie in (0,1)");
    const ModeBlock blk = mode_block(p, lambda);
    const auto c = mode_char_coeffs(p, lambda);
    const CubicRoots cr = solve_cubic(c[0], c[1], c[2]);
    const detail::ModeDecay d = detail::mode_decay_data(blk.L, cr);
    return detail::balakrishnan_integral(
        a, d.omega, d.rho_im, d.m_bound, 1e-10, Mat3::zero(),
        [&](double t) { return mode_expm(blk.L, t); });
}

// Exact (-L)^(-1): the negative of the explicit generator inverse.
inline Mat3 mode_inverse_matrix(const MgtParams& p, double lambda) {
    Mat3 m = Mat3::zero();
    const double inv_l = 1.0 / lambda;
    m[0][0] = p.beta / p.gamma;
    m[0][1] = p.delta / p.gamma + p.alpha / p.gamma * inv_l;
    m[0][2] = inv_l / p.gamma;
    m[1][0] = -1.0;
    m[2][1] = -1.0;
    return m;
}

// (-L)^(-a) by the eigenvalue functional calculus, a in (0,1]; falls back to
// the quadrature route (and counts it) when the roots are too close for the
// Vandermonde eigenvector matrix.
inline Mat3 mode_frac_power_fc_matrix(const MgtParams& p, double lambda, double a,
                                      FracPowerStats* stats = nullptr) {
    detail::check_frac_exponent(a, 0.0, 1.0, "mode_frac_power_fc_matrix");
    const auto c = mode_char_coeffs(p, lambda);
    const CubicRoots cr = solve_cubic(c[0], c[1], c[2]);
    for (const auto& z : cr.roots)
        if (!(z.real() < 0.0))
            throw std::domain_error("fractional powers require Re σ(\U0001d538) > 0");
    if (a == 1.0) return mode_inverse_matrix(p, lambda);
    Mat3 out;
    if (cr.separation < kFcSeparationMin || !detail::eigen_power_matrix(cr, -a, out)) {
        if (stats) stats->quad_fallback_modes.fetch_add(1, std::memory_order_relaxed);
        return mode_frac_power_quad_matrix(p, lambda, a);
    }
    return out;
}

// (-L)^(+a) for a in [0,1]: identity, -L itself, or the eigen route with the
// composition (-L) (-L)^(-(1-a)) as the ill-conditioned fallback.
inline Mat3 mode_power_pos_matrix(const MgtParams& p, double lambda, double a,
                                  FracPowerStats* stats = nullptr) {
    if (!(a >= 0.0) || !(a <= 1.0) || !std::isfinite(a))
        throw std::invalid_argument("mode_power_pos_matrix: exponent out of range");
    const ModeBlock blk = mode_block(p, lambda);
    if (a == 0.0) return Mat3::identity();
    if (a == 1.0) return blk.L * -1.0;
    const auto c = mode_char_coeffs(p, lambda);
    const CubicRoots cr = solve_cubic(c[0], c[1], c[2]);
    for (const auto& z : cr.roots)
        if (!(z.real() < 0.0))
            throw std::domain_error("fractional powers require Re σ(\U0001d538) > 0");
    Mat3 out;
    if (cr.separation < kFcSeparationMin || !detail::eigen_power_matrix(cr, a, out)) {
        if (stats) stats->quad_fallback_modes.fetch_add(1, std::memory_order_relaxed);
        return (blk.L * -1.0) * mode_frac_power_quad_matrix(p, lambda, 1.0 - a);
    }
    return out;
}

namespace detail {
inline void require_stable(const BlockOperator& b) {
    if (!stability_condition(b).stable)
        throw std::domain_error("fractional powers require Re σ(\U0001d538) > 0");
}

inline StateTriple apply_per_mode(const BlockOperator&, const StateTriple& s,
                                  const std::vector<Mat3>& mats) {
    StateTriple r = StateTriple::zero(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const Vec3 x = mats[k] * Vec3{s.u[k], s.v[k], s.w[k]};
        r.u[k] = x[0];
        r.v[k] = x[1];
        r.w[k] = x[2];
    }
    return r;
}
}  // namespace detail

// (-G)^(-a) s by the functional-calculus route, a in (0,1].
inline StateTriple frac_block_power_fc(const BlockOperator& b, double a, const StateTriple& s,
                                       FracPowerStats* stats = nullptr) {
    detail::check_state(b, s, "frac_block_power_fc");
    detail::require_stable(b);
    detail::check_frac_exponent(a, 0.0, 1.0, "frac_block_power_fc");
    std::vector<Mat3> mats(b.size());
    parallel_for(b.size(), [&](std::size_t k) {
        mats[k] = mode_frac_power_fc_matrix(b.params, b.op.lambda[k], a, stats);
    });
    return detail::apply_per_mode(b, s, mats);
}

// (-G)^(-a) s by the Gamma-integral quadrature route, a in (0,1).
inline StateTriple frac_block_power_quad(const BlockOperator& b, double a, const StateTriple& s) {
    detail::check_state(b, s, "frac_block_power_quad");
    detail::require_stable(b);
    detail::check_frac_exponent(a, 0.0, 1.0, "frac_block_power_quad");
    if (a == 1.0) throw std::invalid_argument("frac_block_power_quad: exponent must lie in (0,1)");
    std::vector<Mat3> mats(b.size());
    parallel_for(b.size(), [&](std::size_t k) {
        mats[k] = mode_frac_power_quad_matrix(b.params, b.op.lambda[k], a);
    });
    return detail::apply_per_mode(b, s, mats);
}

// Precomputed per-mode (-G)^(+a) matrices for repeated Y^alpha norm
// evaluations (the Picard contraction metric).
struct AlphaPowerSet {
    double a = 0.0;
    std::vector<Mat3> mats;
};

inline AlphaPowerSet make_alpha_power_set(const BlockOperator& b, double a,
                                          FracPowerStats* stats = nullptr) {
    detail::require_stable(b);
    AlphaPowerSet aps;
    aps.a = a;
    aps.mats.resize(b.size());
    parallel_for(b.size(), [&](std::size_t k) {
        aps.mats[k] = mode_power_pos_matrix(b.params, b.op.lambda[k], a, stats);
    });
    return aps;
}

// Y^a norm one rung down the scale: y_minus1_norm((-G)^a s).
inline double y_alpha_norm(const BlockOperator& b, const AlphaPowerSet& aps, const StateTriple& s) {
    detail::check_state(b, s, "y_alpha_norm");
    if (aps.mats.size() != b.size())
        throw std::invalid_argument("y_alpha_norm: power set does not match operator");
    return y_minus1_norm(b, detail::apply_per_mode(b, s, aps.mats));
}

inline double y_alpha_norm(const BlockOperator& b, double a, const StateTriple& s) {
    return y_alpha_norm(b, make_alpha_power_set(b, a), s);
}

}  // namespace mgt
