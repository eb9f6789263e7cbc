#pragma once

// Deterministic text output. Doubles are printed as the shortest decimal that
// round-trips to the same bits, so emitted files are byte-stable across runs
// and carry no excess digits. Rows end in "\n" regardless of platform.

#include <charconv>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgt {

inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

inline std::string format_int(long long x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc()) throw std::runtime_error("format_int: conversion failed");
    return std::string(buf, res.ptr);
}

// Minimal CSV emitter: header once, then rows; no quoting (all fields are
// numbers or plain identifiers by construction).
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string>& names) {
        write_fields(names);
    }

    void row(const std::vector<double>& values) {
        std::vector<std::string> fields;
        fields.reserve(values.size());
        for (double v : values) fields.push_back(format_double(v));
        write_fields(fields);
    }

private:
    void write_fields(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os_ << ',';
            os_ << fields[i];
        }
        os_ << '\n';
    }

    std::ostream& os_;
};

}  // namespace mgt
