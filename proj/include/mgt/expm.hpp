#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "mgt/mat3.hpp"

namespace mgt {

// e^{Lt} for a single 3x3 block by scaling and squaring with a diagonal [6/6]
// Pade approximant. The scaled norm is kept below 1/4, well inside the
// approximant's accuracy radius; stiff blocks (|L|t large) just cost more
// squarings.
inline Mat3 mode_expm(const Mat3& L, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::domain_error("mode_expm: t must be finite and >= 0");
    if (!L.finite()) throw std::domain_error("mode_expm: matrix entries must be finite");
    if (t == 0.0) return Mat3::identity();

    Mat3 B = L * t;
    const double nb = B.norm_inf();
    if (!std::isfinite(nb))
        throw std::overflow_error("mode_expm: t*|L| overflows; evaluate over smaller time increments");

    int s = 0;
    if (nb > 0.25) s = static_cast<int>(std::ceil(std::log2(nb / 0.25)));
    if (s > 64)
        throw std::overflow_error("mode_expm: t*|L| = " + std::to_string(nb) +
                                  " needs more than 64 squarings; evaluate over smaller time increments");
    const Mat3 A = B * std::ldexp(1.0, -s);

    // diagonal Pade [6/6]: p(x) = sum c_k x^k, q(x) = p(-x)
    static constexpr double c[7] = {1.0,       1.0 / 2.0,    5.0 / 44.0,   1.0 / 66.0,
                                    1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
    const Mat3 A2 = A * A;
    const Mat3 A3 = A2 * A;
    const Mat3 A4 = A2 * A2;
    const Mat3 A5 = A4 * A;
    const Mat3 A6 = A4 * A2;
    const Mat3 I = Mat3::identity();
    const Mat3 even = I * c[0] + A2 * c[2] + A4 * c[4] + A6 * c[6];
    const Mat3 odd = A * c[1] + A3 * c[3] + A5 * c[5];
    const Mat3 P = even + odd;
    const Mat3 Q = even - odd;

    Mat3 R;
    for (int col = 0; col < 3; ++col) {
        const Vec3 x = solve3(Q, Vec3{P[0][col], P[1][col], P[2][col]});
        for (int row = 0; row < 3; ++row) R[row][col] = x[row];
    }
    for (int k = 0; k < s; ++k) {
        R = R * R;
        if (!R.finite())
            throw std::overflow_error("mode_expm: overflow while squaring; evaluate over smaller time increments");
    }
    return R;
}

}  // namespace mgt
