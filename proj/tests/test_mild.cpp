// Local solver: Picard iteration on the Duhamel formula against the linear
// propagator, a parameter-shift oracle for linear feedback, the adaptive
// reference route, discrete consistency with the dynamics, truncation
// convergence, window heuristics, continuation, continuous dependence, and
// the augmented time-regularity system.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mgt/mgt.hpp"

namespace {

mgt::BlockOperator dirichlet_block(std::size_t n, mgt::MgtParams p = mgt::MgtParams{}) {
    return mgt::make_block_operator(mgt::make_dirichlet_power_operator(1, n), p);
}

// deterministic smooth profile: coefficients decay cubically, every slot filled
mgt::StateTriple smooth_state(const mgt::BlockOperator& b, double target_y_norm) {
    mgt::StateTriple s = mgt::StateTriple::zero(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) {
        const double d = 1.0 / ((k + 1.0) * (k + 1.0) * (k + 1.0));
        s.u[k] = d;
        s.v[k] = 0.5 * d;
        s.w[k] = -0.25 * d;
    }
    return (target_y_norm / mgt::y_norm(b, s)) * s;
}

// sup over the common index range of the y-norm of the difference, padding the
// narrower trajectory with zeros in the wider operator
double sup_diff(const mgt::BlockOperator& b_wide, const mgt::Trajectory& wide,
                const mgt::Trajectory& narrow) {
    const std::size_t count = std::min(wide.states.size(), narrow.states.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        mgt::StateTriple pad = mgt::StateTriple::zero(b_wide.size());
        for (std::size_t k = 0; k < narrow.states[j].size(); ++k) {
            pad.u[k] = narrow.states[j].u[k];
            pad.v[k] = narrow.states[j].v[k];
            pad.w[k] = narrow.states[j].w[k];
        }
        worst = std::max(worst, mgt::y_norm(b_wide, wide.states[j] - pad));
    }
    return worst;
}

}  // namespace

TEST_CASE("zero forcing reproduces the linear propagator", "[mild]") {
    const auto b = dirichlet_block(16);
    const auto nl = mgt::make_gallery_nonlinearity("zero", 2.0, 3, 1);
    const auto s0 = smooth_state(b, 1.0);
    mgt::SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.01;
    const auto tr = mgt::picard_solve(b, nl, s0, cfg);
    REQUIRE_FALSE(tr.blew_up);
    REQUIRE(tr.T_used == 0.5);
    REQUIRE(tr.halvings == 0);
    REQUIRE(tr.picard_iterations <= 2);
    for (std::size_t j = 0; j < tr.times.size(); ++j) {
        const auto want = mgt::evolve_linear(b, s0, tr.times[j]);
        REQUIRE(mgt::y_norm(b, tr.states[j] - want) < 1e-10);
    }
    REQUIRE(tr.y_norms.size() == tr.times.size());
    REQUIRE(tr.y_alpha_norms.size() == tr.times.size());
}

TEST_CASE("linear w-feedback equals a damping shift", "[mild]") {
    // f3(w) = eps w turns alpha into alpha - eps exactly
    const double eps = 0.25;
    const auto b = dirichlet_block(16);
    mgt::Nonlinearity nl = mgt::make_gallery_nonlinearity("zero", 2.0, 3, 1);
    nl.f3 = [eps](double s) { return eps * s; };
    nl.df3 = [eps](double) { return eps; };
    nl.polynomial = true;

    mgt::MgtParams shifted{};
    shifted.alpha -= eps;
    const auto b_shift = dirichlet_block(16, shifted);

    const auto s0 = smooth_state(b, 0.5);
    mgt::SolverConfig cfg;
    cfg.T = 0.25;
    cfg.dt = 1e-3;
    const auto tr = mgt::picard_solve(b, nl, s0, cfg);
    REQUIRE_FALSE(tr.blew_up);
    double worst = 0.0;
    for (std::size_t j = 0; j < tr.times.size(); ++j) {
        const auto want = mgt::evolve_linear(b_shift, s0, tr.times[j]);
        worst = std::max(worst, mgt::y_norm(b, tr.states[j] - want));
    }
    REQUIRE(worst < 1e-6);
}

TEST_CASE("cubic gallery run agrees with the adaptive reference", "[mild]") {
    const auto b = dirichlet_block(32);
    const auto nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
    const auto s0 = smooth_state(b, 0.2);
    mgt::SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.01;
    const auto pic = mgt::picard_solve(b, nl, s0, cfg);
    REQUIRE_FALSE(pic.blew_up);
    REQUIRE(pic.contraction_ratio < 1.0);
    const auto ref = mgt::reference_integrate(b, nl, s0, pic.times, 1e-8);
    REQUIRE_FALSE(ref.blew_up);
    double worst = 0.0;
    for (std::size_t j = 0; j < pic.times.size(); ++j)
        worst = std::max(worst, mgt::y_norm(b, pic.states[j] - ref.states[j]));
    REQUIRE(worst < 1e-4);
}

TEST_CASE("grid solutions satisfy the dynamics to the iteration budget", "[mild]") {
    const auto b = dirichlet_block(8);
    const auto nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
    // semigroup-prepared data: stiff transients decayed, FD derivative clean
    mgt::StateTriple s0 = smooth_state(b, 1.0);
    s0 = mgt::evolve_linear(b, s0, 0.25);
    s0 = (0.1 / mgt::y_norm(b, s0)) * s0;

    mgt::SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.01;
    cfg.picard_tol = 1e-6;
    const auto tr = mgt::picard_solve(b, nl, s0, cfg);
    REQUIRE_FALSE(tr.blew_up);
    const double dt = tr.times[1] - tr.times[0];
    const double bound = 10.0 * cfg.picard_tol / dt;
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < tr.times.size(); ++j) {
        const auto fd = (1.0 / (2.0 * dt)) * (tr.states[j + 1] - tr.states[j - 1]);
        const auto rhs = mgt::apply_generator(b, tr.states[j]) + mgt::apply_F(b, nl, tr.states[j]);
        worst = std::max(worst, mgt::y_norm(b, fd - rhs));
    }
    REQUIRE(worst < bound);
}

TEST_CASE("doubling the mode count converges the solution", "[mild]") {
    const auto nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
    mgt::SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.01;

    const auto b32 = dirichlet_block(32);
    const auto s32 = smooth_state(b32, 0.3);

    auto truncate_to = [&](std::size_t n) {
        const auto bn = dirichlet_block(n);
        mgt::StateTriple s = mgt::StateTriple::zero(n);
        for (std::size_t k = 0; k < n; ++k) {
            s.u[k] = s32.u[k];
            s.v[k] = s32.v[k];
            s.w[k] = s32.w[k];
        }
        return mgt::picard_solve(bn, nl, s, cfg);
    };

    const auto t8 = truncate_to(8);
    const auto t16 = truncate_to(16);
    const auto t32 = truncate_to(32);
    REQUIRE(t8.T_used == t16.T_used);
    REQUIRE(t16.T_used == t32.T_used);

    const double d1 = sup_diff(dirichlet_block(16), t16, t8);
    const double d2 = sup_diff(b32, t32, t16);
    REQUIRE(d1 > 0.0);
    REQUIRE(d2 > 0.0);
    REQUIRE(d2 <= 0.5 * d1);
}

TEST_CASE("window length is nonincreasing in the data radius", "[mild]") {
    const auto b = dirichlet_block(16);
    const auto nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
    mgt::SolverConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 0.01;
    double prev = 1e300;
    for (double radius : {0.5, 1.0, 4.0, 16.0, 64.0}) {
        const auto tr = mgt::picard_solve(b, nl, smooth_state(b, radius), cfg);
        double used = tr.blew_up ? 0.0 : tr.T_used;
        REQUIRE(used <= prev + 1e-12);
        prev = used;
    }
}

TEST_CASE("continuation in the linear case completes the horizon", "[mild]") {
    const auto b = dirichlet_block(8);
    const auto nl = mgt::make_gallery_nonlinearity("zero", 2.0, 3, 1);
    const auto s0 = smooth_state(b, 1.0);
    mgt::SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.01;
    const auto tr = mgt::continue_solution(b, nl, s0, cfg, 5.0);
    REQUIRE_FALSE(tr.blew_up);
    REQUIRE(tr.times.back() == Catch::Approx(5.0).margin(1e-9));
    // strictly increasing seam-free grid
    for (std::size_t j = 1; j < tr.times.size(); ++j) REQUIRE(tr.times[j] > tr.times[j - 1]);
    // stable parameters: terminal energy below initial
    REQUIRE(tr.y_norms.back() < tr.y_norms.front());
}

TEST_CASE("zero data stays identically zero under continuation", "[mild]") {
    const auto b = dirichlet_block(8);
    const auto nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
    mgt::SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.01;
    const auto tr = mgt::continue_solution(b, nl, mgt::StateTriple::zero(8), cfg, 2.0);
    REQUIRE_FALSE(tr.blew_up);
    for (const auto& s : tr.states)
        REQUIRE(mgt::y_norm(b, s) == 0.0);
}

TEST_CASE("focusing feedback blows up sooner for larger data", "[mild]") {
    // +u^3 feeds energy back; large data must trip the threshold in finite time
    const auto b = dirichlet_block(8);
    mgt::Nonlinearity nl = mgt::make_gallery_nonlinearity("zero", 3.0, 3, 1);
    nl.f1 = [](double s) { return s * s * s; };
    nl.df1 = [](double s) { return 3.0 * s * s; };
    nl.polynomial = true;

    mgt::SolverConfig cfg;
    cfg.T = 0.25;
    cfg.dt = 0.005;
    cfg.blowup_threshold = 1e4;

    std::vector<double> hit_times;
    for (double radius : {20.0, 60.0}) {
        const auto tr = mgt::continue_solution(b, nl, smooth_state(b, radius), cfg, 10.0);
        REQUIRE(tr.blew_up);
        REQUIRE(std::isfinite(tr.blowup_time));
        hit_times.push_back(tr.blowup_time);
    }
    REQUIRE(hit_times[1] <= hit_times[0]);
}

TEST_CASE("continuous dependence", "[mild]") {
    const auto b = dirichlet_block(16);
    const auto nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
    const auto s0 = smooth_state(b, 0.3);
    mgt::SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.01;

    SECTION("identical data gives the zero curve") {
        const auto dep = mgt::dependence_probe(b, nl, s0, s0, cfg);
        REQUIRE(dep.bound == 0.0);
        for (double r : dep.ratios) REQUIRE(r == 0.0);
    }

    SECTION("nearby data stays within a Gronwall-type envelope") {
        mgt::StateTriple s1 = s0;
        s1.u[3] += 1e-4;
        s1.w[5] -= 5e-5;
        const auto dep = mgt::dependence_probe(b, nl, s0, s1, cfg);
        REQUIRE(dep.bound > 0.0);
        REQUIRE(std::isfinite(dep.bound));
        // local Lipschitz envelope exp(L t) with a sampled L, slack factor 3
        mgt::rng_t rng(91);
        const double L = mgt::F_local_lipschitz_probe(b, nl, 1.0, 30, rng, cfg.alpha_space);
        REQUIRE(dep.bound <= 3.0 * std::exp((L + 1.0) * dep.times.back()));
        REQUIRE(dep.times.size() == dep.ratios.size());
    }
}

TEST_CASE("augmented system tracks the time derivative", "[mild]") {
    const auto b = dirichlet_block(16);
    mgt::SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.005;

    // domain-regular surrogate data
    mgt::StateTriple s0 = smooth_state(b, 1.0);
    s0 = mgt::evolve_linear(b, s0, 0.25);
    s0 = (0.1 / mgt::y_norm(b, s0)) * s0;

    SECTION("linear case: z coincides with dw/dt to 1e-6") {
        const auto nl = mgt::make_gallery_nonlinearity("zero", 2.0, 3, 1);
        mgt::SolverConfig fine = cfg;
        fine.dt = 0.0025;  // O(dt^2) difference truncation must clear 1e-6
        const auto res = mgt::augmented_solve(b, nl, s0, fine, 1e-11);
        REQUIRE_FALSE(res.traj.blew_up);
        REQUIRE(res.residual_own < 1e-6);
        REQUIRE(res.residual_cross < 1e-6);
    }

    SECTION("cubic case: residual within the acceptance budget") {
        const auto nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
        const auto res = mgt::augmented_solve(b, nl, s0, cfg, 1e-10);
        REQUIRE_FALSE(res.traj.blew_up);
        REQUIRE(res.residual_own < 1e-4);
        REQUIRE(res.residual_cross < 1e-4);
    }

    SECTION("initial z matches the compatibility condition bitwise") {
        const auto nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
        const auto res = mgt::augmented_solve(b, nl, s0, cfg, 1e-8);
        const auto f0 = mgt::apply_F(b, nl, s0);
        const auto& p = b.params;
        for (std::size_t k = 0; k < b.size(); ++k) {
            const double lam = b.op.lambda[k];
            const double want = -p.alpha * s0.w[k] -
                                lam * (p.beta * s0.v[k] + p.gamma * s0.u[k] + p.delta * s0.w[k]) +
                                f0.w[k];
            REQUIRE(res.z0[k] == want);
        }
    }

    SECTION("missing derivative handles are rejected") {
        mgt::Nonlinearity nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
        nl.df1 = nullptr;
        REQUIRE_THROWS_WITH(mgt::augmented_solve(b, nl, s0, cfg),
                            Catch::Matchers::ContainsSubstring("derivative handles"));
    }
}

TEST_CASE("solver configuration is validated", "[mild]") {
    mgt::SolverConfig cfg;
    cfg.dt = 2.0;  // dt > T
    REQUIRE_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = mgt::SolverConfig{};
    cfg.alpha_space = 1.0;
    REQUIRE_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = mgt::SolverConfig{};
    cfg.picard_max = 0;
    REQUIRE_THROWS_AS(cfg.validate(), std::domain_error);
}
