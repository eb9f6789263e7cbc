#pragma once

// Diagonal spectral model for a positive operator A with compactly supported
// coefficient sequences. A is represented by its ordered eigenvalue sequence
// {lambda_k} against an orthonormal eigenbasis {e_k}; fractional powers act
// diagonally, A^s phi_k = lambda_k^s phi_k, and the scale-s norm is
//
//   |phi|_s^2 = sum_k lambda_k^(2s) phi_k^2 .
//
// The concrete realization with a physical grid is (-d^2/dx^2)^m on (0,pi)
// with Dirichlet conditions: lambda_k = k^(2m), e_k = sqrt(2/pi) sin(kx).

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mgt/util.hpp"

namespace mgt {

using CoeffVector = std::vector<double>;

// ---------------------------------------------------------------------------
// Collocation transforms for the Dirichlet sine basis on (0,pi).
//
// Interior grid x_j = (j+1) pi/(M+1), j = 0..M-1, with table
// S[j][k] = sin((j+1)(k+1) pi/(M+1)). Synthesis and analysis
//
//   g_j   = sqrt(2/pi) sum_k phi_k S[j][k]
//   phi_k = sqrt(2 pi)/(M+1) sum_j g_j S[j][k]
//
// invert each other exactly (up to roundoff) for band-limited data, the
// analysis weight pi/(M+1) being the exact quadrature weight on this grid.

class TransformPair {
  public:
    explicit TransformPair(std::size_t n_grid) : m_(n_grid), table_(&sine_table(n_grid)) {
        if (n_grid == 0) throw std::invalid_argument("TransformPair: grid size must be >= 1");
    }

    std::size_t grid_size() const { return m_; }

    std::vector<double> grid_points() const {
        std::vector<double> x(m_);
        for (std::size_t j = 0; j < m_; ++j) x[j] = (j + 1) * M_PI / static_cast<double>(m_ + 1);
        return x;
    }

    double quadrature_weight() const { return M_PI / static_cast<double>(m_ + 1); }

    // Coefficients phi (length <= M, zero-padded) -> grid samples (length M).
    std::vector<double> synthesize(const CoeffVector& phi) const {
        if (phi.size() > m_)
            throw std::invalid_argument("TransformPair::synthesize: more coefficients than grid points");
        const double scale = std::sqrt(2.0 / M_PI);
        std::vector<double> g(m_, 0.0);
        const std::vector<double>& tab = *table_;
        parallel_for(m_, [&](std::size_t j) {
            KahanSum s;
            const double* row = &tab[j * m_];
            for (std::size_t k = 0; k < phi.size(); ++k) s.add(phi[k] * row[k]);
            g[j] = scale * s.value();
        });
        return g;
    }

    // Grid samples (length M) -> first n_out coefficients.
    CoeffVector analyze(const std::vector<double>& g, std::size_t n_out) const {
        if (g.size() != m_)
            throw std::invalid_argument("TransformPair::analyze: sample length does not match grid size");
        if (n_out > m_)
            throw std::invalid_argument("TransformPair::analyze: cannot recover more modes than grid points");
        const double scale = std::sqrt(2.0 * M_PI) / static_cast<double>(m_ + 1);
        CoeffVector phi(n_out, 0.0);
        const std::vector<double>& tab = *table_;
        parallel_for(n_out, [&](std::size_t k) {
            KahanSum s;
            for (std::size_t j = 0; j < m_; ++j) s.add(g[j] * tab[j * m_ + k]);
            phi[k] = scale * s.value();
        });
        return phi;
    }

  private:
    // Shared immutable sine tables, one per grid size.
    static const std::vector<double>& sine_table(std::size_t m) {
        static std::mutex mu;
        static std::map<std::size_t, std::vector<double>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
        std::vector<double> tab(m * m);
        const double h = M_PI / static_cast<double>(m + 1);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k)
                tab[j * m + k] = std::sin(static_cast<double>((j + 1) * (k + 1)) * h);
        return cache.emplace(m, std::move(tab)).first->second;
    }

    std::size_t m_;
    const std::vector<double>* table_;
};

// Dealiased collocation grid for evaluating a nonlinearity on n retained
// modes: the 3/2 rule (ceil(3n/2) points) for polynomial-type maps, a 2x grid
// for non-polynomial ones.
inline std::size_t dealias_grid_size(std::size_t n_modes, bool polynomial) {
    if (polynomial) return (3 * n_modes + 1) / 2;
    return 2 * n_modes;
}

// ---------------------------------------------------------------------------

struct SpectralOperator {
    std::vector<double> lambda;            // positive, nondecreasing
    int power_m = 0;                       // Laplacian power when built from one, else 0
    std::optional<TransformPair> transform;  // present for the Dirichlet-power model

    std::size_t size() const { return lambda.size(); }
    double lambda_min() const { return lambda.front(); }
    double lambda_max() const { return lambda.back(); }
};

inline SpectralOperator make_dirichlet_power_operator(int m, std::size_t n_modes) {
    if (m < 1) throw std::invalid_argument("make_dirichlet_power_operator: m must be >= 1");
    if (n_modes == 0) throw std::invalid_argument("make_dirichlet_power_operator: n_modes must be >= 1");
    SpectralOperator op;
    op.power_m = m;
    op.lambda.resize(n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
        const double base = static_cast<double>(k + 1);
        op.lambda[k] = std::pow(base, 2.0 * m);
        if (!std::isfinite(op.lambda[k]))
            throw std::domain_error("make_dirichlet_power_operator: eigenvalue overflow at mode " +
                                    std::to_string(k + 1));
    }
    op.transform.emplace(n_modes);
    return op;
}

inline SpectralOperator make_sequence_operator(std::vector<double> lambdas) {
    if (lambdas.empty()) throw std::invalid_argument("make_sequence_operator: empty eigenvalue sequence");
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        if (!(lambdas[k] > 0.0) || !std::isfinite(lambdas[k]))
            throw std::domain_error("make_sequence_operator: eigenvalue " + std::to_string(k + 1) +
                                    " is not positive");
        if (k > 0 && lambdas[k] < lambdas[k - 1])
            throw std::invalid_argument("make_sequence_operator: eigenvalues must be nondecreasing");
    }
    SpectralOperator op;
    op.lambda = std::move(lambdas);
    return op;
}

namespace detail {
inline void check_width(const SpectralOperator& op, const CoeffVector& phi, const char* where) {
    if (phi.size() > op.size())
        throw std::invalid_argument(std::string(where) + ": coefficient length " +
                                    std::to_string(phi.size()) + " exceeds operator size " +
                                    std::to_string(op.size()));
}
}  // namespace detail

// Coefficient vectors shorter than the mode count are implicitly zero-padded.
inline CoeffVector apply_frac_power(const SpectralOperator& op, double sigma, const CoeffVector& phi) {
    detail::check_width(op, phi, "apply_frac_power");
    CoeffVector out(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) out[k] = std::pow(op.lambda[k], sigma) * phi[k];
    return out;
}

inline double inner_sigma(const SpectralOperator& op, double sigma, const CoeffVector& x,
                          const CoeffVector& y) {
    detail::check_width(op, x, "inner_sigma");
    if (x.size() != y.size())
        throw std::invalid_argument("inner_sigma: coefficient lengths differ");
    KahanSum s;
    for (std::size_t k = 0; k < x.size(); ++k) s.add(std::pow(op.lambda[k], 2.0 * sigma) * x[k] * y[k]);
    return s.value();
}

inline double frac_norm(const SpectralOperator& op, double sigma, const CoeffVector& phi) {
    detail::check_width(op, phi, "frac_norm");
    KahanSum s;
    for (std::size_t k = 0; k < phi.size(); ++k) {
        const double w = std::pow(op.lambda[k], sigma) * phi[k];
        s.add(w * w);
    }
    return std::sqrt(s.value());
}

// Scale embedding |.|_{sigma2} <= lambda_0^(sigma2-sigma1) |.|_{sigma1} for
// sigma1 >= sigma2. Returns (lhs, rhs) of the realized inequality.
inline std::pair<double, double> embedding_bound(const SpectralOperator& op, double sigma1,
                                                 double sigma2, const CoeffVector& phi) {
    if (sigma1 < sigma2) throw std::invalid_argument("embedding_bound: requires sigma1 >= sigma2");
    const double lhs = frac_norm(op, sigma2, phi);
    const double rhs = std::pow(op.lambda_min(), sigma2 - sigma1) * frac_norm(op, sigma1, phi);
    if (lhs > rhs * (1.0 + 1e-12))
        throw std::logic_error("embedding_bound: scale inequality violated");
    return {lhs, rhs};
}

}  // namespace mgt
