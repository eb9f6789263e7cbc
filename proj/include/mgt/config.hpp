#pragma once

// Run configuration: sectioned key=value text (UTF-8, '#'/';' comments),
// parse-validate-reject with line/key-precise errors, deterministic canonical
// serialization for the report digest. Flag overrides reuse the same setter
// path as the parser so they see identical validation.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgt/block.hpp"
#include "mgt/csv.hpp"
#include "mgt/mild.hpp"
#include "mgt/nonlinearity.hpp"
#include "mgt/spectral.hpp"
#include "mgt/util.hpp"

namespace mgt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // [operator]
    std::size_t op_m = 1;
    std::size_t n_modes = 256;
    std::string lambda_file;  // nonempty: eigenvalues listed one per line
    // [params]
    MgtParams params{};
    // [nonlinearity]
    std::string nl_name = "cubic";
    double rho = 3.0;
    int dim_n = 3;
    int nl_m = 1;
    // [solver]
    SolverConfig solver{};
    double horizon = 10.0;
    // [output]
    std::string out_path;           // empty: stdout
    std::string out_format = "csv"; // csv | csv-coeffs
    // global
    std::uint64_t seed = 42;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double parse_double_or(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError(where + " expects a number");
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + " expects a number, got '" + t + "'");
    }
    if (pos != t.size()) throw ConfigError(where + " expects a number, got '" + t + "'");
    return v;
}

inline long long parse_int_or(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    long long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError(where + " expects an integer, got '" + t + "'");
    return v;
}

}  // namespace detail

// Assign one key; `where` prefixes error messages ("file:line" or "--set").
inline void config_set(RunConfig& cfg, const std::string& section, const std::string& key,
                       const std::string& value, const std::string& where) {
    const std::string qual = section.empty() ? key : section + "." + key;
    const std::string ctx = where.empty() ? qual : where + ": " + qual;
    if (section.empty()) {
        if (key == "seed") {
            const long long s = detail::parse_int_or(value, ctx);
            if (s < 0) throw ConfigError(ctx + " must be >= 0");
            cfg.seed = static_cast<std::uint64_t>(s);
            return;
        }
    } else if (section == "operator") {
        if (key == "m") {
            const long long m = detail::parse_int_or(value, ctx);
            if (m < 1) throw ConfigError("operator.m must be a positive integer");
            cfg.op_m = static_cast<std::size_t>(m);
            return;
        }
        if (key == "n_modes") {
            const long long n = detail::parse_int_or(value, ctx);
            if (n < 1) throw ConfigError("operator.n_modes must be a positive integer");
            cfg.n_modes = static_cast<std::size_t>(n);
            return;
        }
        if (key == "lambda_file") {
            cfg.lambda_file = detail::trim(value);
            return;
        }
    } else if (section == "params") {
        if (key == "alpha" || key == "beta" || key == "gamma" || key == "delta") {
            const double v = detail::parse_double_or(value, ctx);
            if (!(v > 0.0)) throw ConfigError("params." + key + " must be positive");
            if (key == "alpha") cfg.params.alpha = v;
            else if (key == "beta") cfg.params.beta = v;
            else if (key == "gamma") cfg.params.gamma = v;
            else cfg.params.delta = v;
            return;
        }
    } else if (section == "nonlinearity") {
        if (key == "name") {
            cfg.nl_name = detail::trim(value);
            return;
        }
        if (key == "rho") {
            cfg.rho = detail::parse_double_or(value, ctx);
            return;
        }
        if (key == "N") {
            cfg.dim_n = static_cast<int>(detail::parse_int_or(value, ctx));
            return;
        }
        if (key == "m") {
            cfg.nl_m = static_cast<int>(detail::parse_int_or(value, ctx));
            return;
        }
    } else if (section == "solver") {
        if (key == "picard_max") {
            const long long v = detail::parse_int_or(value, ctx);
            if (v < 1) throw ConfigError("solver.picard_max must be >= 1");
            cfg.solver.picard_max = static_cast<int>(v);
            return;
        }
        if (key == "T" || key == "dt" || key == "picard_tol" || key == "alpha_space" ||
            key == "r" || key == "blowup_threshold" || key == "horizon") {
            const double v = detail::parse_double_or(value, ctx);
            if (key == "T") cfg.solver.T = v;
            else if (key == "dt") cfg.solver.dt = v;
            else if (key == "picard_tol") cfg.solver.picard_tol = v;
            else if (key == "alpha_space") cfg.solver.alpha_space = v;
            else if (key == "r") cfg.solver.r = v;
            else if (key == "blowup_threshold") cfg.solver.blowup_threshold = v;
            else cfg.horizon = v;
            return;
        }
    } else if (section == "output") {
        if (key == "path") {
            cfg.out_path = detail::trim(value);
            return;
        }
        if (key == "format") {
            cfg.out_format = detail::trim(value);
            return;
        }
    } else {
        throw ConfigError(ctx + ": unknown section '" + section + "'");
    }
    throw ConfigError(ctx + ": unknown key '" + qual + "'");
}

// Semantic validation with key-named messages; runs after all keys are set.
inline void validate_config(const RunConfig& cfg) {
    if (!(cfg.params.alpha > 0.0)) throw ConfigError("params.alpha must be positive");
    if (!(cfg.params.beta > 0.0)) throw ConfigError("params.beta must be positive");
    if (!(cfg.params.gamma > 0.0)) throw ConfigError("params.gamma must be positive");
    if (!(cfg.params.delta > 0.0)) throw ConfigError("params.delta must be positive");
    double cap = 0.0;
    try {
        cap = subcritical_exponent(cfg.dim_n, cfg.nl_m);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("nonlinearity: ") + e.what());
    }
    if (!(cfg.rho > 1.0)) throw ConfigError("nonlinearity.rho must exceed 1");
    if (cfg.rho > cap)
        throw ConfigError("nonlinearity.rho above the subcritical cap (N+2m)/(N-2m) = " +
                          format_double(cap));
    try {
        (void)make_gallery_nonlinearity(cfg.nl_name, cfg.rho, cfg.dim_n, cfg.nl_m);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("nonlinearity.name: ") + e.what());
    }
    if (!(cfg.solver.T > 0.0)) throw ConfigError("solver.T must be positive");
    if (!(cfg.solver.dt > 0.0) || cfg.solver.dt > cfg.solver.T)
        throw ConfigError("solver.dt must lie in (0, solver.T]");
    if (!(cfg.solver.picard_tol > 0.0)) throw ConfigError("solver.picard_tol must be positive");
    if (!(cfg.solver.alpha_space > 0.0) || !(cfg.solver.alpha_space < 1.0))
        throw ConfigError("solver.alpha_space must lie in (0,1)");
    if (!(cfg.solver.r > 0.0)) throw ConfigError("solver.r must be positive");
    if (!(cfg.solver.blowup_threshold > 0.0))
        throw ConfigError("solver.blowup_threshold must be positive");
    if (!(cfg.horizon > 0.0)) throw ConfigError("solver.horizon must be positive");
    if (cfg.out_format != "csv" && cfg.out_format != "csv-coeffs")
        throw ConfigError("output.format must be 'csv' or 'csv-coeffs'");
}

inline RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = origin + ":" + format_int(static_cast<long long>(lineno));
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(where + ": malformed section header '" + t + "'");
            section = detail::trim(t.substr(1, t.size() - 2));
            if (section != "operator" && section != "params" && section != "nonlinearity" &&
                section != "solver" && section != "output")
                throw ConfigError(where + ": unknown section '" + section + "'");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value', got '" + t + "'");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        config_set(cfg, section, key, value, where);
    }
    validate_config(cfg);
    return cfg;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

// One override "section.key=value" (or "seed=value"), validated like a file key.
inline void apply_override(RunConfig& cfg, const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects section.key=value, got '" + spec + "'");
    const std::string qual = detail::trim(spec.substr(0, eq));
    const std::string value = detail::trim(spec.substr(eq + 1));
    const std::size_t dot = qual.find('.');
    const std::string section = dot == std::string::npos ? "" : qual.substr(0, dot);
    const std::string key = dot == std::string::npos ? qual : qual.substr(dot + 1);
    config_set(cfg, section, key, value, "--set");
}

// Canonical serialization: fixed key order, shortest round-trip numbers.
inline std::string canonical_config_text(const RunConfig& cfg) {
    std::ostringstream os;
    os << "seed = " << format_int(static_cast<long long>(cfg.seed)) << "\n";
    os << "[operator]\n";
    os << "m = " << format_int(static_cast<long long>(cfg.op_m)) << "\n";
    os << "n_modes = " << format_int(static_cast<long long>(cfg.n_modes)) << "\n";
    if (!cfg.lambda_file.empty()) os << "lambda_file = " << cfg.lambda_file << "\n";
    os << "[params]\n";
    os << "alpha = " << format_double(cfg.params.alpha) << "\n";
    os << "beta = " << format_double(cfg.params.beta) << "\n";
    os << "gamma = " << format_double(cfg.params.gamma) << "\n";
    os << "delta = " << format_double(cfg.params.delta) << "\n";
    os << "[nonlinearity]\n";
    os << "name = " << cfg.nl_name << "\n";
    os << "rho = " << format_double(cfg.rho) << "\n";
    os << "N = " << format_int(cfg.dim_n) << "\n";
    os << "m = " << format_int(cfg.nl_m) << "\n";
    os << "[solver]\n";
    os << "T = " << format_double(cfg.solver.T) << "\n";
    os << "dt = " << format_double(cfg.solver.dt) << "\n";
    os << "picard_tol = " << format_double(cfg.solver.picard_tol) << "\n";
    os << "picard_max = " << format_int(cfg.solver.picard_max) << "\n";
    os << "alpha_space = " << format_double(cfg.solver.alpha_space) << "\n";
    os << "r = " << format_double(cfg.solver.r) << "\n";
    os << "blowup_threshold = " << format_double(cfg.solver.blowup_threshold) << "\n";
    os << "horizon = " << format_double(cfg.horizon) << "\n";
    os << "[output]\n";
    os << "path = " << cfg.out_path << "\n";
    os << "format = " << cfg.out_format << "\n";
    return os.str();
}

inline std::string config_digest(const RunConfig& cfg) {
    const std::uint64_t h = fnv1a64(canonical_config_text(cfg));
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) out[15 - i] = hex[(h >> (4 * i)) & 0xF];
    return out;
}

// ---------------------------------------------------------------------------
// Factories from a validated config.

inline SpectralOperator make_operator(const RunConfig& cfg) {
    if (!cfg.lambda_file.empty()) {
        std::ifstream in(cfg.lambda_file);
        if (!in) throw ConfigError("cannot open lambda file '" + cfg.lambda_file + "'");
        std::vector<double> lam;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = detail::trim(line);
            if (t.empty() || t[0] == '#') continue;
            lam.push_back(detail::parse_double_or(
                t, cfg.lambda_file + ":" + format_int(static_cast<long long>(lineno))));
        }
        return make_sequence_operator(lam);
    }
    return make_dirichlet_power_operator(static_cast<int>(cfg.op_m), cfg.n_modes);
}

inline BlockOperator make_block_operator(const RunConfig& cfg) {
    return make_block_operator(make_operator(cfg), cfg.params);
}

inline Nonlinearity make_nonlinearity(const RunConfig& cfg) {
    return make_gallery_nonlinearity(cfg.nl_name, cfg.rho, cfg.dim_n, cfg.nl_m);
}

}  // namespace mgt
