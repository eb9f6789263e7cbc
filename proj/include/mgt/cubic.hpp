#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "mgt/mat3.hpp"

namespace mgt {

// Roots of the monic cubic z^3 + a z^2 + b z + c with real coefficients.
//
// Primary route: Francis double-shift QR iteration on the 3x3 companion
// matrix of the coefficient-scaled polynomial, followed by Newton polish on
// the original cubic. Complex roots are returned as exact conjugate pairs.
struct CubicRoots {
    std::array<cplx, 3> roots{};  // sorted by (Re, Im)
    double scale = 1.0;           // coefficient scale used for the solve
    // Locally scaled pairwise separation min |z_i - z_j| / max(1, min|z_i|,|z_j|);
    // 1/separation estimates the root condition number.
    double separation = 0.0;
    int qr_iterations = 0;
};

namespace detail {

inline cplx horner_cubic(double a, double b, double c, cplx z) {
    return ((z + a) * z + b) * z + c;
}
inline cplx horner_cubic_deriv(double a, double b, cplx z) {
    return (3.0 * z + 2.0 * a) * z + b;
}

// Eigenvalues of a real 2x2 block, stable quadratic formula.
inline std::array<cplx, 2> eig2(double p, double q, double r, double s) {
    const double mid = 0.5 * (p + s);
    const double det = p * s - q * r;
    const double disc = mid * mid - det;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        double r1 = mid >= 0.0 ? mid + sq : mid - sq;
        double r2 = (r1 != 0.0) ? det / r1 : mid - std::copysign(sq, mid);
        return {cplx(r1, 0.0), cplx(r2, 0.0)};
    }
    const double sq = std::sqrt(-disc);
    return {cplx(mid, -sq), cplx(mid, sq)};
}

// Householder similarity on the given 3-vector column; applied in place.
inline void apply_householder3(Mat3& h, double x, double y, double z, int offset) {
    // offset 0: reflect rows/cols 0..2; offset 1: rows/cols 1..2 (z unused)
    double v0 = x, v1 = y, v2 = (offset == 0) ? z : 0.0;
    const double alpha = std::sqrt(v0 * v0 + v1 * v1 + v2 * v2);
    if (alpha == 0.0) return;
    const double beta = v0 >= 0.0 ? -alpha : alpha;
    v0 -= beta;
    const double vnorm2 = v0 * v0 + v1 * v1 + v2 * v2;
    if (vnorm2 == 0.0) return;
    const int base = offset;
    const int dim = 3 - offset;
    std::array<double, 3> v{v0, v1, v2};
    // H <- (I - 2 v v^T / v^T v) H (both sides)
    for (int col = 0; col < 3; ++col) {
        double dot = 0.0;
        for (int i = 0; i < dim; ++i) dot += v[i] * h[base + i][col];
        const double f = 2.0 * dot / vnorm2;
        for (int i = 0; i < dim; ++i) h[base + i][col] -= f * v[i];
    }
    for (int row = 0; row < 3; ++row) {
        double dot = 0.0;
        for (int i = 0; i < dim; ++i) dot += h[row][base + i] * v[i];
        const double f = 2.0 * dot / vnorm2;
        for (int i = 0; i < dim; ++i) h[row][base + i] -= f * v[i];
    }
}

// Closed-form depressed-cubic roots; last-resort path if QR stalls and the
// independent cross-check oracle in the tests.
inline std::array<cplx, 3> cubic_closed_form(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double shift = -a / 3.0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    std::array<cplx, 3> out;
    if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + sq);
        const double v = std::cbrt(-q / 2.0 - sq);
        const double y0 = u + v;
        out[0] = cplx(shift + y0, 0.0);
        const double re = shift - y0 / 2.0;
        const double im = std::sqrt(3.0) / 2.0 * std::abs(u - v);
        out[1] = cplx(re, -im);
        out[2] = cplx(re, im);
    } else {
        const double rr = std::sqrt(std::max(0.0, -p / 3.0));
        double arg = (rr > 0.0) ? std::clamp(3.0 * q / (2.0 * p * rr), -1.0, 1.0) : 0.0;
        const double phi = std::acos(arg);
        for (int k = 0; k < 3; ++k)
            out[k] = cplx(shift + 2.0 * rr * std::cos((phi + 2.0 * M_PI * k) / 3.0), 0.0);
    }
    return out;
}

}  // namespace detail

inline CubicRoots solve_cubic(double a, double b, double c) {
    CubicRoots out;
    const double theta = std::max({std::abs(a), std::sqrt(std::abs(b)), std::cbrt(std::abs(c))});
    if (theta == 0.0) {
        out.roots = {cplx(0.0), cplx(0.0), cplx(0.0)};
        out.separation = 0.0;
        return out;
    }
    out.scale = theta;
    const double as = a / theta;
    const double bs = b / (theta * theta);
    const double cs = c / (theta * theta * theta);

    // first-row companion form: upper Hessenberg as the Francis sweep expects
    Mat3 h = Mat3::zero();
    h[0][0] = -as;
    h[0][1] = -bs;
    h[0][2] = -cs;
    h[1][0] = 1.0;
    h[2][1] = 1.0;

    const double eps = std::numeric_limits<double>::epsilon();
    std::array<cplx, 3> w{};
    bool done = false;
    int iter = 0;
    for (; iter < 240 && !done; ++iter) {
        // deflation tests on the two subdiagonals
        if (std::abs(h[2][1]) <= eps * (std::abs(h[1][1]) + std::abs(h[2][2]))) {
            auto top = detail::eig2(h[0][0], h[0][1], h[1][0], h[1][1]);
            w = {top[0], top[1], cplx(h[2][2], 0.0)};
            done = true;
            break;
        }
        if (std::abs(h[1][0]) <= eps * (std::abs(h[0][0]) + std::abs(h[1][1]))) {
            auto bot = detail::eig2(h[1][1], h[1][2], h[2][1], h[2][2]);
            w = {cplx(h[0][0], 0.0), bot[0], bot[1]};
            done = true;
            break;
        }
        // implicit double shift from the trailing 2x2
        double s = h[1][1] + h[2][2];
        double t = h[1][1] * h[2][2] - h[1][2] * h[2][1];
        if (iter > 0 && iter % 16 == 0) {
            // exceptional shift to break rare symmetric cycling
            const double d = std::abs(h[1][0]) + std::abs(h[2][1]);
            s = 2.0 * (h[2][2] + 0.75 * d);
            t = (h[2][2] + 0.75 * d) * (h[2][2] + 0.75 * d);
        }
        const double x = h[0][0] * h[0][0] + h[0][1] * h[1][0] - s * h[0][0] + t;
        const double y = h[1][0] * (h[0][0] + h[1][1] - s);
        const double z = h[1][0] * h[2][1];
        detail::apply_householder3(h, x, y, z, 0);
        detail::apply_householder3(h, h[1][0], h[2][0], 0.0, 1);
        h[2][0] = 0.0;  // restored Hessenberg form
    }
    out.qr_iterations = iter;
    if (!done) w = detail::cubic_closed_form(as, bs, cs);

    // Newton polish on the scaled cubic; conjugate symmetry kept exactly.
    auto polish_real = [&](double z0) {
        double z = z0;
        for (int k = 0; k < 4; ++k) {
            const double pv = ((z + as) * z + bs) * z + cs;
            const double dv = (3.0 * z + 2.0 * as) * z + bs;
            if (dv == 0.0) break;
            const double step = pv / dv;
            if (!std::isfinite(step)) break;
            z -= step;
            if (std::abs(step) <= 4.0 * eps * std::abs(z)) break;
        }
        return z;
    };
    auto polish_cplx = [&](cplx z) {
        for (int k = 0; k < 4; ++k) {
            const cplx pv = detail::horner_cubic(as, bs, cs, z);
            const cplx dv = detail::horner_cubic_deriv(as, bs, z);
            if (dv == cplx(0.0)) break;
            const cplx step = pv / dv;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            z -= step;
            if (std::abs(step) <= 4.0 * eps * std::abs(z)) break;
        }
        return z;
    };
    for (int i = 0; i < 3; ++i) {
        if (w[i].imag() == 0.0) {
            w[i] = cplx(polish_real(w[i].real()), 0.0);
        } else if (w[i].imag() > 0.0) {
            w[i] = polish_cplx(w[i]);
        }
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && w[i].imag() > 0.0 && w[j].imag() < 0.0) w[j] = std::conj(w[i]);

    for (auto& z : w) z *= theta;
    std::sort(w.begin(), w.end(), [](cplx l, cplx r) {
        if (l.real() != r.real()) return l.real() < r.real();
        return l.imag() < r.imag();
    });
    out.roots = w;

    double sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double local = std::max(1.0, std::min(std::abs(w[i]), std::abs(w[j])));
            sep = std::min(sep, std::abs(w[i] - w[j]) / local);
        }
    out.separation = sep;
    return out;
}

// |p(z)| against the requested bound plus the unavoidable evaluation
// roundoff for these coefficient magnitudes.
inline bool cubic_residual_ok(double a, double b, double c, cplx z, double tol) {
    const double pz = std::abs(detail::horner_cubic(a, b, c, z));
    const double az = std::abs(z);
    const double eval_noise = 16.0 * std::numeric_limits<double>::epsilon() *
                              (std::abs(c) + std::abs(b) * az + std::abs(a) * az * az + az * az * az);
    return pz <= tol * std::max(1.0, az * az * az) + eval_noise;
}

}  // namespace mgt
