#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace mgt {

using cplx = std::complex<double>;

// Fixed-size 3x3 kernels. Every per-mode block of the first-order
// reformulation is 3x3, so all heavy lifting reduces to these.
template <typename T>
struct Matrix3 {
    std::array<std::array<T, 3>, 3> a{};

    static Matrix3 identity() {
        Matrix3 m;
        m.a[0][0] = m.a[1][1] = m.a[2][2] = T(1);
        return m;
    }
    static Matrix3 zero() { return Matrix3{}; }

    std::array<T, 3>& operator[](int i) { return a[i]; }
    const std::array<T, 3>& operator[](int i) const { return a[i]; }

    Matrix3 operator*(const Matrix3& rhs) const {
        Matrix3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                T s{};
                for (int k = 0; k < 3; ++k) s += a[i][k] * rhs.a[k][j];
                r.a[i][j] = s;
            }
        return r;
    }
    Matrix3 operator+(const Matrix3& rhs) const {
        Matrix3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.a[i][j] = a[i][j] + rhs.a[i][j];
        return r;
    }
    Matrix3 operator-(const Matrix3& rhs) const {
        Matrix3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.a[i][j] = a[i][j] - rhs.a[i][j];
        return r;
    }
    Matrix3 operator*(T s) const {
        Matrix3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.a[i][j] = a[i][j] * s;
        return r;
    }
    std::array<T, 3> operator*(const std::array<T, 3>& x) const {
        std::array<T, 3> y{};
        for (int i = 0; i < 3; ++i) y[i] = a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2];
        return y;
    }

    T det() const {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    }
    T trace() const { return a[0][0] + a[1][1] + a[2][2]; }

    double norm_inf() const {
        double m = 0.0;
        for (int i = 0; i < 3; ++i) {
            double row = std::abs(a[i][0]) + std::abs(a[i][1]) + std::abs(a[i][2]);
            if (row > m) m = row;
        }
        return m;
    }
    double norm_fro() const {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += std::norm(cplx(a[i][j]));
        return std::sqrt(s);
    }
    bool finite() const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const cplx z(a[i][j]);
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
            }
        return true;
    }
};

using Mat3 = Matrix3<double>;
using CMat3 = Matrix3<cplx>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<cplx, 3>;

inline CMat3 to_complex(const Mat3& m) {
    CMat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = cplx(m[i][j], 0.0);
    return c;
}

// Gaussian elimination with partial pivoting; throws on (near-)singular input.
template <typename T>
std::array<T, 3> solve3(Matrix3<T> m, std::array<T, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        double best = std::abs(m[col][col]);
        for (int r = col + 1; r < 3; ++r) {
            double mag = std::abs(m[r][col]);
            if (mag > best) {
                best = mag;
                piv = r;
            }
        }
        if (best == 0.0) throw std::runtime_error("solve3: singular 3x3 system");
        if (piv != col) {
            std::swap(m[piv], m[col]);
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < 3; ++r) {
            T f = m[r][col] / m[col][col];
            for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<T, 3> x{};
    for (int i = 2; i >= 0; --i) {
        T s = b[i];
        for (int j = i + 1; j < 3; ++j) s -= m[i][j] * x[j];
        x[i] = s / m[i][i];
    }
    return x;
}

template <typename T>
Matrix3<T> inverse3(const Matrix3<T>& m) {
    Matrix3<T> inv;
    for (int col = 0; col < 3; ++col) {
        std::array<T, 3> e{};
        e[col] = T(1);
        auto x = solve3(m, e);
        for (int row = 0; row < 3; ++row) inv[row][col] = x[row];
    }
    return inv;
}

// Eigenvalues of a symmetric real 3x3 with nonnegative spectrum, by the
// trigonometric (Smith) formula on the shifted/scaled matrix.
inline std::array<double, 3> sym3_eigenvalues(const Mat3& s) {
    const double p1 = s[0][1] * s[0][1] + s[0][2] * s[0][2] + s[1][2] * s[1][2];
    if (p1 == 0.0) {
        std::array<double, 3> ev{s[0][0], s[1][1], s[2][2]};
        if (ev[0] > ev[2]) std::swap(ev[0], ev[2]);
        if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
        if (ev[1] > ev[2]) std::swap(ev[1], ev[2]);
        return ev;
    }
    const double q = s.trace() / 3.0;
    const double p2 = (s[0][0] - q) * (s[0][0] - q) + (s[1][1] - q) * (s[1][1] - q) +
                      (s[2][2] - q) * (s[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (s[i][j] - (i == j ? q : 0.0)) / p;
    double r = b.det() / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double two_pi_3 = 2.0943951023931954923;
    std::array<double, 3> ev;
    ev[2] = q + 2.0 * p * std::cos(phi);
    ev[0] = q + 2.0 * p * std::cos(phi + two_pi_3);
    ev[1] = 3.0 * q - ev[0] - ev[2];
    return ev;  // ascending
}

// Spectral 2-norm via the largest eigenvalue of M^H M. Entries are rescaled
// first so the characteristic coefficients stay in range for stiff blocks.
inline double norm2(const CMat3& m) {
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(m[i][j]));
    if (scale == 0.0) return 0.0;
    CMat3 ms = m * cplx(1.0 / scale, 0.0);
    CMat3 hh;  // Ms^H Ms, Hermitian positive semidefinite
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cplx s{};
            for (int k = 0; k < 3; ++k) s += std::conj(ms[k][i]) * ms[k][j];
            hh[i][j] = s;
        }
    // Characteristic polynomial x^3 - tr x^2 + m2 x - det has real
    // coefficients and three real nonnegative roots.
    const double tr = hh.trace().real();
    const cplx h01 = hh[0][1], h02 = hh[0][2], h12 = hh[1][2];
    const double d0 = hh[0][0].real(), d1 = hh[1][1].real(), d2 = hh[2][2].real();
    const double m2 = d0 * d1 - std::norm(h01) + d0 * d2 - std::norm(h02) + d1 * d2 - std::norm(h12);
    const double det = d0 * (d1 * d2 - std::norm(h12)) -
                       (h01 * (std::conj(h01) * d2 - h12 * std::conj(h02))).real() +
                       (h02 * (std::conj(h01) * std::conj(h12) - d1 * std::conj(h02))).real();
    const double a2 = -tr, a1 = m2, a0 = -det;
    const double p = a1 - a2 * a2 / 3.0;
    const double qq = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    double lam_max;
    if (p >= -1e-300) {
        lam_max = -a2 / 3.0;  // triple or nearly-equal roots
    } else {
        const double mfac = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * qq / (p * mfac);
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        lam_max = -a2 / 3.0 + mfac * std::cos(theta);
    }
    return scale * std::sqrt(std::max(0.0, lam_max));
}

inline double norm2(const Mat3& m) { return norm2(to_complex(m)); }

}  // namespace mgt
