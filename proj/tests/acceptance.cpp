// Release acceptance: one executable check per criterion, one PASS/FAIL line
// each, exit 0 only if every criterion holds.
//
//   1  stability equivalence: condition ratio < beta <=> Routh-Hurwitz
//      <=> max Re root < 0 <=> fitted decay omega > 0, over random draws
//   2  explicit inverse: G(G^-1 s) = s; (u,0,0) -> (-beta/gamma u, u, 0)
//   3  non-accretivity: ((0,0,w), G(0,0,w))_Y <= -alpha |w|^2
//   4  non-compactness witness: min pairwise Y-distance sqrt(2(1+(beta/gamma)^2))
//   5  extrapolation scale: |G^-1 s|_Y ~ |s|_{Y_-1} with n-stable constants
//   6  fractional powers: eigendecomposition vs Gamma-integral quadrature,
//      composition law, a = 1 against the closed-form inverse
//   7  semigroup: e^{G 0} = I, group law, sectoriality table n-stable
//   8  mild solutions: Picard contraction, independent reference agreement,
//      continuous dependence
//   9  nonlinearity probes: finite constants, supercritical flagging,
//      quadrature-grid stability
//  10  augmented system: z tracks dw/dt, initial z from the compatibility line
//  11  CLI determinism: verify exits 0, CSV outputs byte-identical across runs

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mgt/mgt.hpp"

namespace {

using sclock = std::chrono::steady_clock;

struct Outcome {
    bool ok = false;
    std::string detail;
};

double seconds_since(const sclock::time_point& t0) {
    return std::chrono::duration<double>(sclock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

mgt::BlockOperator dir_block(std::size_t n, mgt::MgtParams p = mgt::MgtParams{}) {
    return mgt::make_block_operator(mgt::make_dirichlet_power_operator(1, n), p);
}

mgt::StateTriple random_state(const mgt::BlockOperator& b, mgt::rng_t& rng) {
    mgt::StateTriple s = mgt::StateTriple::zero(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) {
        s.u[k] = mgt::normal(rng);
        s.v[k] = mgt::normal(rng);
        s.w[k] = mgt::normal(rng);
    }
    return s;
}

// ---------------------------------------------------------------------------
// 1: four stability routes agree over random parameter/operator draws

Outcome c1_stability() {
    const auto t0 = sclock::now();
    mgt::rng_t rng(101);
    auto logu = [&](double lo, double hi) {
        return std::pow(10.0, mgt::uniform(rng, std::log10(lo), std::log10(hi)));
    };

    int accepted = 0, stable_n = 0, unstable_n = 0, attempts = 0, disagree = 0;
    int singles_checked = 0;
    double worst_single = 0.0;
    while (accepted < 240 && attempts < 6000) {
        ++attempts;
        mgt::MgtParams p;
        p.alpha = logu(0.1, 3.0);
        p.delta = logu(0.1, 3.0);
        p.beta = logu(0.05, 5.0);
        p.gamma = logu(0.05, 5.0);
        const mgt::BlockOperator b =
            (attempts % 5 == 0)
                ? mgt::make_block_operator(mgt::make_sequence_operator({logu(0.5, 50.0)}), p)
                : mgt::make_block_operator(
                      mgt::make_dirichlet_power_operator(1, 2 + (attempts % 9)), p);

        // the horizon-50 fit cannot resolve rates below ~1/horizon, nor cancel
        // oscillation ripple when the dominant period exceeds half the fitting
        // window; such draws are redrawn, both regimes stay well covered
        const auto spec = mgt::spectrum(b);
        const auto dom = mgt::detail::dominant_root_info(spec);
        if (std::abs(dom.abscissa) < 3e-2) continue;
        if (dom.freq > 0.0 && dom.freq < 0.15) continue;

        const auto sr = mgt::stability_condition(b);
        bool rh = true;
        for (std::size_t k = 0; k < b.size(); ++k) rh = rh && mgt::routh_hurwitz(p, b.op.lambda[k]);
        const bool roots_neg = mgt::spectral_abscissa(b) < 0.0;
        const auto fit = mgt::decay_rate(b, 50.0, 400);
        const bool cond = sr.stable, decay = fit.omega > 0.0;
        if (!(cond == rh && rh == roots_neg && roots_neg == decay)) ++disagree;

        if (b.size() == 1) {
            // rate accuracy needs the period-averaged branch (freq 0 or >= 0.55)
            // and a subdominant gap that clears the transient by mid-horizon
            double gap = 1e300;
            for (const auto& z : spec[0].roots) {
                const double d = dom.abscissa - z.real();
                if (d > 1e-9) gap = std::min(gap, d);
            }
            if ((dom.freq == 0.0 || dom.freq >= 0.55) && (gap == 1e300 || gap >= 0.3)) {
                ++singles_checked;
                worst_single = std::max(worst_single, std::abs(fit.omega + fit.abscissa) /
                                                          std::abs(fit.abscissa));
            }
        }
        ++accepted;
        (sr.stable ? stable_n : unstable_n)++;
    }
    const double el = seconds_since(t0);

    Outcome o;
    o.ok = accepted >= 200 && stable_n >= 80 && unstable_n >= 80 && disagree == 0 &&
           singles_checked >= 25 && worst_single <= 0.01 && el < 60.0;
    o.detail = std::to_string(accepted) + " draws (" + std::to_string(stable_n) + " stable/" +
               std::to_string(unstable_n) + " unstable), " + std::to_string(disagree) +
               " disagreements, single-mode rate error " + fmt(worst_single) + ", " + fmt(el) + " s";
    return o;
}

// ---------------------------------------------------------------------------
// 2: zero is in the resolvent set with the stated explicit inverse

Outcome c2_inverse() {
    const auto b = dir_block(64);
    const auto& p = b.params;
    mgt::rng_t rng(202);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        mgt::StateTriple s = random_state(b, rng);
        s = (1.0 / mgt::y_norm(b, s)) * s;
        const auto back = mgt::apply_generator(b, mgt::apply_generator_inverse(b, s));
        worst = std::max(worst, mgt::y_norm(b, back - s));
    }

    bool image_exact = true;
    mgt::StateTriple first = mgt::StateTriple::zero(64);
    for (std::size_t k = 0; k < 64; ++k) first.u[k] = mgt::normal(rng);
    const auto img = mgt::apply_generator_inverse(b, first);
    for (std::size_t k = 0; k < 64; ++k) {
        image_exact = image_exact && img.u[k] == -(p.beta / p.gamma) * first.u[k] &&
                      img.v[k] == first.u[k] && img.w[k] == 0.0;
    }

    Outcome o;
    o.ok = worst <= 1e-12 && image_exact;
    o.detail = "100 states, |G G^-1 s - s|_Y max " + fmt(worst) + ", image formula " +
               (image_exact ? "exact" : "violated");
    return o;
}

// ---------------------------------------------------------------------------
// 3: the generator is not accretive on the w-slice

Outcome c3_accretivity() {
    mgt::MgtParams q;
    q.alpha = 0.7;
    q.beta = 2.0;
    q.gamma = 1.3;
    q.delta = 0.4;
    mgt::rng_t rng(303);
    double worst_slack = -1e300;
    int checked = 0;
    for (const auto& b : {dir_block(32), dir_block(32, q)}) {
        for (int i = 0; i < 50; ++i) {
            mgt::StateTriple s = mgt::StateTriple::zero(32);
            double x2 = 0.0;
            for (std::size_t k = 0; k < 32; ++k) {
                s.w[k] = mgt::normal(rng);
                x2 += s.w[k] * s.w[k];
            }
            const double form = mgt::accretivity_form(b, s);
            worst_slack = std::max(worst_slack, form + b.params.alpha * x2);
            ++checked;
        }
    }
    Outcome o;
    o.ok = checked == 100 && worst_slack <= 1e-12;
    o.detail = "100 draws, max of form + alpha|w|^2 is " + fmt(worst_slack);
    return o;
}

// ---------------------------------------------------------------------------
// 4: non-compactness witness independent of family size

Outcome c4_noncompact() {
    mgt::MgtParams q;
    q.beta = 3.0;
    q.gamma = 2.0;
    double worst = 0.0;
    for (const auto& b : {dir_block(48), dir_block(48, q)}) {
        const double r = b.params.beta / b.params.gamma;
        const double closed = std::sqrt(2.0 * (1.0 + r * r));
        for (std::size_t fam : {std::size_t{2}, std::size_t{8}, std::size_t{24}, std::size_t{48}})
            worst = std::max(worst, std::abs(mgt::noncompactness_witness(b, fam) - closed));
    }
    Outcome o;
    o.ok = worst <= 1e-10;
    o.detail = "two parameter sets, family sizes 2..48, max deviation " + fmt(worst);
    return o;
}

// ---------------------------------------------------------------------------
// 5: |G^-1 s|_Y / |s|_{Y_-1} two-sided, constants stable in n

Outcome c5_equivalence() {
    // stratified sampling: the first 32 modes carry identical lambda and an
    // identical draw sequence at every n, so the measured constants can only
    // move if the tail modes genuinely extend the quotient range
    double r64 = 0.0;
    std::vector<double> ratios;
    for (std::size_t n : {std::size_t{64}, std::size_t{256}, std::size_t{1024}}) {
        const auto b = dir_block(n);
        mgt::rng_t rng(505);
        double lo = 1e300, hi = 0.0;
        for (int i = 0; i < 1000; ++i) {
            std::size_t k;
            if (i < 800) {
                k = static_cast<std::size_t>(i) % 32;
            } else {
                const double x =
                    std::exp(mgt::uniform(rng, 0.0, std::log(static_cast<double>(n - 32))));
                k = std::min(n - 1, 32 + static_cast<std::size_t>(x) - 1);
            }
            mgt::StateTriple s = mgt::StateTriple::zero(n);
            s.u[k] = mgt::normal(rng);
            s.v[k] = mgt::normal(rng);
            s.w[k] = mgt::normal(rng);
            const double r =
                mgt::y_norm(b, mgt::apply_generator_inverse(b, s)) / mgt::y_minus1_norm(b, s);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        const double spread = hi / lo;
        if (n == 64) r64 = spread;
        ratios.push_back(spread);
    }
    bool ok = true;
    for (double r : ratios) ok = ok && std::isfinite(r) && std::abs(r / r64 - 1.0) <= 0.05;
    Outcome o;
    o.ok = ok;
    o.detail = "1000 states each, max/min ratio " + fmt(ratios[0]) + " / " + fmt(ratios[1]) +
               " / " + fmt(ratios[2]) + " at n 64/256/1024";
    return o;
}

// ---------------------------------------------------------------------------
// 6: fractional power routes at n = 256

Outcome c6_fracpow() {
    const auto t0 = sclock::now();
    const std::size_t n = 256;
    const auto b = dir_block(n);
    mgt::rng_t rng(606);
    mgt::StateTriple s = random_state(b, rng);
    s = (1.0 / mgt::y_norm(b, s)) * s;

    double worst_route = 0.0;
    for (double a : {0.25, 0.5, 0.75})
        worst_route = std::max(worst_route, mgt::y_norm(b, mgt::frac_block_power_fc(b, a, s) -
                                                               mgt::frac_block_power_quad(b, a, s)));

    const auto one = mgt::frac_block_power_fc(b, 1.0, s);
    const double inv_diff = mgt::y_norm(b, one - (-1.0 * mgt::apply_generator_inverse(b, s)));

    const double comp1 = mgt::y_norm(
        b, mgt::frac_block_power_fc(b, 0.25, mgt::frac_block_power_fc(b, 0.25, s)) -
               mgt::frac_block_power_fc(b, 0.5, s));
    const double comp2 = mgt::y_norm(
        b, mgt::frac_block_power_fc(b, 0.5, mgt::frac_block_power_fc(b, 0.5, s)) - one);
    const double el = seconds_since(t0);

    Outcome o;
    o.ok = worst_route <= 1e-6 && std::max(comp1, comp2) <= 1e-8 && inv_diff <= 1e-10 && el < 30.0;
    o.detail = "route gap " + fmt(worst_route) + ", composition " + fmt(std::max(comp1, comp2)) +
               ", a=1 vs inverse " + fmt(inv_diff) + ", " + fmt(el) + " s";
    return o;
}

// ---------------------------------------------------------------------------
// 7: semigroup identities and sectoriality table

Outcome c7_semigroup() {
    const auto b = dir_block(48);
    mgt::rng_t rng(707);

    bool t0_exact = true;
    for (int i = 0; i < 5; ++i) {
        mgt::StateTriple s = random_state(b, rng);
        const auto r = mgt::evolve_linear(b, s, 0.0);
        for (std::size_t k = 0; k < b.size(); ++k)
            t0_exact = t0_exact && r.u[k] == s.u[k] && r.v[k] == s.v[k] && r.w[k] == s.w[k];
    }

    double worst_law = 0.0;
    for (int i = 0; i < 5; ++i) {
        mgt::StateTriple s = random_state(b, rng);
        s = (1.0 / mgt::y_norm(b, s)) * s;
        for (double t : {0.07, 0.19, 0.4, 0.77})
            for (double h : {0.07, 0.19, 0.4, 0.77}) {
                const auto oneshot = mgt::evolve_linear(b, s, t + h);
                const auto twostep = mgt::evolve_linear(b, mgt::evolve_linear(b, s, t), h);
                worst_law = std::max(worst_law, mgt::y_norm(b, oneshot - twostep));
            }
    }

    std::vector<double> radii;
    for (int i = 0; i < 25; ++i) radii.push_back(std::pow(10.0, -2.0 + 7.0 * i / 24.0));
    const std::vector<double> angles = {0.30 * M_PI, 0.45 * M_PI, 0.55 * M_PI};
    bool sect_ok = true;
    std::vector<double> base;
    double m55 = 0.0;
    for (std::size_t n : {std::size_t{32}, std::size_t{128}, std::size_t{512}}) {
        const auto rows = mgt::sectoriality_probe(dir_block(n), angles, radii);
        for (std::size_t j = 0; j < rows.size(); ++j) {
            sect_ok = sect_ok && std::isfinite(rows[j].m_weighted) && rows[j].m_weighted > 0.0 &&
                      rows[j].skipped == 0;
            if (n == 32)
                base.push_back(rows[j].m_weighted);
            else
                sect_ok = sect_ok && rows[j].m_weighted >= base[j] * (1.0 - 1e-9) &&
                          rows[j].m_weighted <= base[j] * 1.25;
        }
        m55 = rows.back().m_weighted;
    }

    Outcome o;
    o.ok = t0_exact && worst_law <= 1e-8 && sect_ok;
    o.detail = std::string("t=0 ") + (t0_exact ? "exact" : "violated") + ", group law gap " +
               fmt(worst_law) + ", M(0.55 pi) = " + fmt(m55) + " stable over n 32..512";
    return o;
}

// ---------------------------------------------------------------------------
// 8: Picard mild solutions against the adaptive reference

Outcome c8_wellposed() {
    const auto t0 = sclock::now();
    const std::size_t n = 128;
    const auto b = dir_block(n);
    mgt::SolverConfig cfg;
    cfg.T = 0.25;
    cfg.dt = 0.002;
    cfg.r = 1.0;

    mgt::rng_t rng(808);
    mgt::StateTriple s0 = mgt::detail::random_smooth_state(b, rng, 1.0);
    const auto aps = mgt::make_alpha_power_set(b, cfg.alpha_space);
    s0 = (cfg.r / mgt::y_alpha_norm(b, aps, s0)) * s0;

    double worst_contr = 0.0, worst_ref = 0.0;
    bool all_converged = true;
    int galleries = 0;
    for (const char* name : {"cubic", "sine", "saturating", "pure_power"}) {
        const auto nl = mgt::make_gallery_nonlinearity(name, 3.0, 3, 1);
        const auto tr = mgt::picard_solve(b, nl, s0, cfg);
        all_converged = all_converged && !tr.blew_up && tr.T_used > 0.0;
        worst_contr = std::max(worst_contr, tr.contraction_ratio);
        const auto ref = mgt::reference_integrate(b, nl, s0, tr.times, 1e-9);
        for (std::size_t j = 0; j < tr.times.size(); ++j)
            worst_ref = std::max(worst_ref, std::abs(tr.y_norms[j] - ref.y_norms[j]));
        ++galleries;
    }

    // continuous dependence for the cubic entry
    const auto nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
    mgt::StateTriple s1 = s0;
    s1.u[2] += 1e-3;
    s1.w[4] -= 5e-4;
    const auto dep = mgt::dependence_probe(b, nl, s0, s1, cfg);
    const double L = mgt::F_local_lipschitz_probe(b, nl, 1.0, 30, rng, cfg.alpha_space);
    const bool dep_ok = std::isfinite(dep.bound) && dep.bound > 0.0 &&
                        dep.bound <= 3.0 * std::exp((L + 1.0) * dep.times.back());

    // a second exponent inside (1/2, 1) for the contraction metric
    mgt::SolverConfig cfg9 = cfg;
    cfg9.alpha_space = 0.9;
    const auto tr9 = mgt::picard_solve(b, nl, s0, cfg9);
    const bool alpha9_ok = !tr9.blew_up && tr9.contraction_ratio < 1.0;
    const double el = seconds_since(t0);

    Outcome o;
    o.ok = galleries == 4 && all_converged && worst_contr < 1.0 && worst_ref <= 1e-4 && dep_ok &&
           alpha9_ok && el < 120.0;
    o.detail = "4 galleries at n=128, contraction max " + fmt(worst_contr) + ", reference gap " +
               fmt(worst_ref) + ", dependence bound " + fmt(dep.bound) + ", " + fmt(el) + " s";
    return o;
}

// ---------------------------------------------------------------------------
// 9: probe constants finite, supercritical flagged, grid-stable

Outcome c9_probes() {
    const auto b = dir_block(32);
    mgt::rng_t rng(909);
    bool finite_ok = true, flag_ok = true;

    struct Entry {
        const char* name;
        bool expect_flag;
    };
    // growth/MV/Lemma probes address the shared-exponent slots f1, f2; the
    // globally Lipschitz f3 slot enters through the whole-map probe below
    const Entry entries[] = {{"zero", false},       {"pure_power", false}, {"cubic", false},
                             {"sine", false},       {"saturating", false}, {"quintic", true},
                             {"full", false}};
    double saturating_loc = 0.0;
    for (const auto& e : entries) {
        const auto nl = mgt::make_gallery_nonlinearity(e.name, 3.0, 3, 1);
        const auto g = mgt::growth_check(nl, 1, 2001, 4.0);
        const double mv = mgt::mv_lipschitz_check(nl, 1, 400, rng);
        const auto lem = mgt::lemma_lipschitz_probe(b, nl, 1, 200, rng);
        const double loc = mgt::F_local_lipschitz_probe(b, nl, 1.0, 60, rng, 0.75);
        finite_ok = finite_ok && std::isfinite(g.c) && std::isfinite(mv) &&
                    std::isfinite(lem.c) && std::isfinite(loc);
        flag_ok = flag_ok && g.flagged == e.expect_flag;
        if (std::string(e.name) == "saturating") saturating_loc = loc;
        if (std::string(e.name) == "full") {
            const auto g2 = mgt::growth_check(nl, 2, 2001, 4.0);
            const double mv2 = mgt::mv_lipschitz_check(nl, 2, 400, rng);
            finite_ok = finite_ok && std::isfinite(g2.c) && std::isfinite(mv2);
        }
    }
    // the f3-only entry must contribute a genuine (positive) constant
    finite_ok = finite_ok && saturating_loc > 0.0;

    // quadrature-grid doubling with identical sample pairs
    const auto nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
    const std::size_t g0 = mgt::dealias_grid_size(32, nl.polynomial);
    mgt::rng_t r1(919), r2(919);
    const auto ca = mgt::lemma_lipschitz_probe(b, nl, 1, 400, r1, 5.0, g0);
    const auto cb = mgt::lemma_lipschitz_probe(b, nl, 1, 400, r2, 5.0, 2 * g0);
    const double drift = std::abs(cb.c / ca.c - 1.0);

    Outcome o;
    o.ok = finite_ok && flag_ok && drift <= 0.2;
    o.detail = std::string("7 gallery entries finite, flags ") + (flag_ok ? "correct" : "wrong") +
               ", grid-doubling drift " + fmt(drift);
    return o;
}

// ---------------------------------------------------------------------------
// 10: augmented system consistency

Outcome c10_augmented() {
    const std::size_t n = 32;
    const auto b = dir_block(n);
    const auto& p = b.params;
    mgt::SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.004;

    mgt::rng_t rng(1010);
    mgt::StateTriple s0 = mgt::detail::random_smooth_state(b, rng, 1.0);
    s0 = mgt::evolve_linear(b, s0, 0.25);  // push the data into the domain
    s0 = (0.1 / mgt::y_norm(b, s0)) * s0;

    const auto nl = mgt::make_gallery_nonlinearity("cubic", 3.0, 3, 1);
    const auto res = mgt::augmented_solve(b, nl, s0, cfg, 1e-10);

    bool z0_exact = true;
    const auto f0 = mgt::apply_F(b, nl, s0);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = b.op.lambda[k];
        const double want = -p.alpha * s0.w[k] -
                            lam * (p.beta * s0.v[k] + p.gamma * s0.u[k] + p.delta * s0.w[k]) +
                            f0.w[k];
        z0_exact = z0_exact && res.z0[k] == want;
    }

    Outcome o;
    o.ok = !res.traj.blew_up && res.residual_own <= 1e-4 && res.residual_cross <= 1e-4 && z0_exact;
    o.detail = "sup_t |z - dw/dt|_X = " + fmt(res.residual_own) + ", cross residual " +
               fmt(res.residual_cross) + ", initial z " + (z0_exact ? "exact" : "violated");
    return o;
}

// ---------------------------------------------------------------------------
// 11: CLI determinism

Outcome c11_cli() {
    const char* bin = std::getenv("MGT_CLI_BIN");
    Outcome o;
    if (bin == nullptr || std::string(bin).empty()) {
        o.detail = "MGT_CLI_BIN not set";
        return o;
    }

    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() /
        ("mgt-acceptance-" + std::to_string(sclock::now().time_since_epoch().count()));
    fs::create_directories(dir);

    auto run = [&](const std::string& args) {
        const std::string cmd = std::string("\"") + bin + "\" " + args + " > \"" +
                                (dir / "stdout.txt").string() + "\" 2> \"" +
                                (dir / "stderr.txt").string() + "\"";
        return std::system(cmd.c_str()) == 0;
    };
    auto slurp = [](const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    const bool verify_ok = run("verify");

    struct Cmd {
        const char* name;
        const char* extra;
    };
    const Cmd cmds[] = {{"spectrum", ""},
                        {"semigroup", "--set solver.horizon=2"},
                        {"simulate", "--set solver.horizon=1 --set output.format=csv-coeffs"},
                        {"fracpow", ""}};
    bool runs_ok = true, identical = true;
    std::size_t bytes = 0;
    for (const auto& c : cmds) {
        const fs::path p1 = dir / (std::string(c.name) + "-1.csv");
        const fs::path p2 = dir / (std::string(c.name) + "-2.csv");
        const std::string common =
            std::string(c.name) + " --set operator.n_modes=48 " + c.extra + " --set output.path=";
        runs_ok = runs_ok && run(common + "\"" + p1.string() + "\"");
        runs_ok = runs_ok && run(common + "\"" + p2.string() + "\"");
        const std::string b1 = slurp(p1), b2 = slurp(p2);
        identical = identical && !b1.empty() && b1 == b2;
        bytes += b1.size();
    }
    fs::remove_all(dir);

    o.ok = verify_ok && runs_ok && identical;
    o.detail = std::string("verify exit ") + (verify_ok ? "0" : "nonzero") + ", 4 CSV commands x2 " +
               (identical ? "byte-identical" : "diverged") + " (" + std::to_string(bytes) +
               " bytes)";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        Outcome (*fn)();
    };
    const Criterion table[] = {
        {1, "stability equivalence across four routes", c1_stability},
        {2, "explicit generator inverse", c2_inverse},
        {3, "non-accretivity of the block generator", c3_accretivity},
        {4, "non-compactness witness", c4_noncompact},
        {5, "extrapolation norm equivalence", c5_equivalence},
        {6, "fractional power routes", c6_fracpow},
        {7, "semigroup and sectoriality laws", c7_semigroup},
        {8, "local well-posedness of mild solutions", c8_wellposed},
        {9, "nonlinearity probe estimates", c9_probes},
        {10, "augmented time-derivative consistency", c10_augmented},
        {11, "command-line determinism", c11_cli},
    };

    bool all = true;
    for (const auto& c : table) {
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out.ok = false;
            out.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s criterion %d: %s (%s)\n", out.ok ? "PASS" : "FAIL", c.id, c.title,
                    out.detail.c_str());
        std::fflush(stdout);
        all = all && out.ok;
    }
    return all ? 0 : 1;
}
