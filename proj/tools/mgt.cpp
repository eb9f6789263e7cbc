// Command-line driver: one config file per run, flag overrides, bit-exact
// deterministic outputs. Exit codes: 0 success, 1 check/runtime failure,
// 2 configuration error.

#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mgt/mgt.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
};

mgt::RunConfig load_config(const CommonOpts& opts) {
    mgt::RunConfig cfg =
        opts.config_path.empty() ? mgt::RunConfig{} : mgt::parse_config(opts.config_path);
    for (const auto& ov : opts.overrides) mgt::apply_override(cfg, ov);
    mgt::validate_config(cfg);
    return cfg;
}

// Output sink: config output.path, or stdout when empty.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw mgt::ConfigError("cannot open output path '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "configuration file (sectioned key=value text)");
    cmd->add_option("--set", opts.overrides,
                    "override one key, e.g. --set params.beta=2 (repeatable)");
}

mgt::StateTriple seeded_state(const mgt::BlockOperator& b, const mgt::RunConfig& cfg,
                              double target_norm) {
    mgt::rng_t rng(cfg.seed);
    return mgt::detail::random_smooth_state(b, rng, target_norm);
}

int cmd_stability(const mgt::RunConfig& cfg, std::ostream& os) {
    const mgt::BlockOperator b = mgt::make_block_operator(cfg);
    const mgt::StabilityResult sr = mgt::stability_condition(b);
    os << "ratio = " << mgt::format_double(sr.ratio) << "\n";
    os << "beta = " << mgt::format_double(sr.beta) << "\n";
    os << "chi = " << mgt::format_double(sr.chi) << "\n";
    os << "verdict = " << (sr.stable ? "stable" : "unstable") << "\n";
    return 0;
}

int cmd_spectrum(const mgt::RunConfig& cfg, std::ostream& os) {
    const mgt::BlockOperator b = mgt::make_block_operator(cfg);
    const auto modes = mgt::spectrum(b);
    mgt::CsvWriter csv(os);
    csv.header({"mode", "lambda", "re1", "im1", "re2", "im2", "re3", "im3"});
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const auto& r = modes[k].roots;
        csv.row({static_cast<double>(k + 1), modes[k].lambda, r[0].real(), r[0].imag(), r[1].real(),
                 r[1].imag(), r[2].real(), r[2].imag()});
    }
    return 0;
}

int cmd_semigroup(const mgt::RunConfig& cfg, std::ostream& os) {
    const mgt::BlockOperator b = mgt::make_block_operator(cfg);
    const double dt = cfg.solver.dt;
    const auto steps = static_cast<std::size_t>(std::llround(cfg.horizon / dt));
    const mgt::PropagatorSet prop = mgt::make_propagators(b, dt);
    mgt::StateTriple s = seeded_state(b, cfg, 1.0);
    mgt::CsvWriter csv(os);
    csv.header({"t", "y_norm"});
    csv.row({0.0, mgt::y_norm(b, s)});
    for (std::size_t j = 1; j <= steps; ++j) {
        s = mgt::apply_propagators(prop, s);
        csv.row({j * dt, mgt::y_norm(b, s)});
    }
    return 0;
}

int cmd_simulate(const mgt::RunConfig& cfg, std::ostream& os) {
    const mgt::BlockOperator b = mgt::make_block_operator(cfg);
    const mgt::Nonlinearity nl = mgt::make_nonlinearity(cfg);
    const mgt::StateTriple s0 = seeded_state(b, cfg, cfg.solver.r);
    const mgt::Trajectory tr = mgt::continue_solution(b, nl, s0, cfg.solver, cfg.horizon);
    const bool coeffs = cfg.out_format == "csv-coeffs";
    mgt::CsvWriter csv(os);
    std::vector<std::string> head = {"t", "y_norm", "y_minus1_norm", "y_alpha_norm"};
    if (coeffs)
        for (std::size_t k = 0; k < b.size(); ++k)
            head.push_back("u_" + mgt::format_int(static_cast<long long>(k + 1)));
    csv.header(head);
    for (std::size_t j = 0; j < tr.times.size(); ++j) {
        std::vector<double> row = {tr.times[j], tr.y_norms[j], tr.y_minus1_norms[j],
                                   tr.y_alpha_norms[j]};
        if (coeffs) row.insert(row.end(), tr.states[j].u.begin(), tr.states[j].u.end());
        csv.row(row);
    }
    if (tr.blew_up)
        std::cerr << "blow-up flagged at t = " << mgt::format_double(tr.blowup_time) << "\n";
    return 0;
}

int cmd_fracpow(const mgt::RunConfig& cfg, std::ostream& os) {
    const mgt::BlockOperator b = mgt::make_block_operator(cfg);
    mgt::detail::require_stable(b);
    mgt::CsvWriter csv(os);
    csv.header({"a", "max_abs_disagreement"});
    for (double a : {0.25, 0.5, 0.75}) {
        double worst = 0.0;
        for (std::size_t k = 0; k < b.size(); ++k) {
            const mgt::Mat3 fc = mgt::mode_frac_power_fc_matrix(b.params, b.op.lambda[k], a);
            const mgt::Mat3 qd = mgt::mode_frac_power_quad_matrix(b.params, b.op.lambda[k], a);
            worst = std::max(worst, (fc - qd).norm_inf());
        }
        csv.row({a, worst});
    }
    return 0;
}

int cmd_verify(const mgt::RunConfig& cfg, std::ostream& os) {
    const mgt::Report rep = mgt::run_suite(cfg);
    os << mgt::serialize(rep);
    if (!rep.all_passed()) {
        for (const auto& e : rep.entries)
            if (e.status == "fail") std::cerr << "failed: " << e.name << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Spectral simulator and verification suite for a third-order-in-time damped "
        "evolution equation"};
    app.require_subcommand(1);

    CommonOpts opts;
    int (*handler)(const mgt::RunConfig&, std::ostream&) = nullptr;

    auto* stability = app.add_subcommand(
        "stability", "print the damping condition: ratio gamma/(alpha+delta*lambda0), beta, "
                     "margin chi, verdict");
    auto* spectrum_cmd = app.add_subcommand(
        "spectrum", "CSV columns mode,lambda,re1,im1,re2,im2,re3,im3 (per-mode cubic roots)");
    auto* semigroup_cmd = app.add_subcommand(
        "semigroup", "CSV columns t,y_norm: linear decay curve from a seeded smooth state");
    auto* simulate = app.add_subcommand(
        "simulate", "CSV columns t,y_norm,y_minus1_norm,y_alpha_norm (plus u_1..u_n with "
                    "output.format=csv-coeffs): nonlinear mild solution");
    auto* fracpow = app.add_subcommand(
        "fracpow", "CSV columns a,max_abs_disagreement: functional-calculus vs quadrature "
                   "fractional powers");
    auto* verify = app.add_subcommand(
        "verify", "run the full property suite; JSON report; exit 1 if any check fails");
    for (auto* cmd : {stability, spectrum_cmd, semigroup_cmd, simulate, fracpow, verify})
        add_common(cmd, opts);
    stability->callback([&] { handler = cmd_stability; });
    spectrum_cmd->callback([&] { handler = cmd_spectrum; });
    semigroup_cmd->callback([&] { handler = cmd_semigroup; });
    simulate->callback([&] { handler = cmd_simulate; });
    fracpow->callback([&] { handler = cmd_fracpow; });
    verify->callback([&] { handler = cmd_verify; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const mgt::RunConfig cfg = load_config(opts);
        Sink sink(cfg.out_path);
        return handler(cfg, sink.stream());
    } catch (const mgt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
