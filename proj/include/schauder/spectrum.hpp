#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schauder/error.hpp"
#include "schauder/matrix_io.hpp"

namespace schauder {

/// Finite strictly decreasing sample of positive spectral values lambda_n.
class SpectrumSequence {
public:
    explicit SpectrumSequence(std::vector<double> values, std::string tag = "explicit")
        : values_(std::move(values)), tag_(std::move(tag)) {
        if (values_.empty()) {
            throw InvalidInput("spectrum sample is empty");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]) || values_[i] <= 0.0) {
                throw InvalidInput("spectrum value " + std::to_string(i + 1) + " is not a positive finite number");
            }
            if (i > 0 && !(values_[i] < values_[i - 1])) {
                throw InvalidInput("spectrum is not strictly decreasing at position " + std::to_string(i + 1));
            }
        }
    }

    /// lambda_n = 1/n, n = 1..count.
    static SpectrumSequence harmonic(std::size_t count) {
        std::vector<double> v(count);
        for (std::size_t n = 1; n <= count; ++n) {
            v[n - 1] = 1.0 / static_cast<double>(n);
        }
        return SpectrumSequence(std::move(v), "harmonic");
    }

    /// lambda_n = r^n, n = 1..count.
    static SpectrumSequence geometric(double ratio, std::size_t count) {
        if (!(ratio > 0.0 && ratio < 1.0)) {
            throw InvalidParameter("geometric ratio must lie in (0, 1)");
        }
        std::vector<double> v(count);
        for (std::size_t n = 1; n <= count; ++n) {
            v[n - 1] = std::pow(ratio, static_cast<double>(n));
        }
        return SpectrumSequence(std::move(v), "geometric(" + format_double(ratio) + ")");
    }

    /// "harmonic:N" or "geometric:r:N".
    static SpectrumSequence from_tag(std::string_view tag) {
        const auto fields = split(tag);
        if (fields.size() == 2 && fields[0] == "harmonic") {
            return harmonic(parse_count(fields[1]));
        }
        if (fields.size() == 3 && fields[0] == "geometric") {
            return geometric(parse_ratio(fields[1]), parse_count(fields[2]));
        }
        throw InvalidParameter("unknown spectrum generator '" + std::string(tag) +
                               "' (expected harmonic:N or geometric:r:N)");
    }

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_.at(i); }
    const std::string& tag() const noexcept { return tag_; }

private:
    static std::vector<std::string_view> split(std::string_view s) {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= s.size(); ++i) {
            if (i == s.size() || s[i] == ':') {
                out.push_back(s.substr(start, i - start));
                start = i + 1;
            }
        }
        return out;
    }

    static double parse_ratio(std::string_view field) {
        try {
            return detail::parse_double(field, 0);
        } catch (const IoError&) {
            throw InvalidParameter("invalid geometric ratio '" + std::string(field) + "'");
        }
    }

    static std::size_t parse_count(std::string_view field) {
        try {
            return detail::parse_dimension(field, 0);
        } catch (const IoError&) {
            throw InvalidParameter("invalid sample length '" + std::string(field) + "'");
        }
    }

    std::vector<double> values_;
    std::string tag_;
};

/// One decimal per line, '#' comments allowed; must be strictly decreasing.
inline SpectrumSequence read_spectrum(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_skippable(line)) {
            continue;
        }
        const auto fields = detail::split_fields(line);
        if (fields.size() != 1) {
            throw IoError("expected one value per line", line_no);
        }
        const double v = detail::parse_double(fields[0], line_no);
        if (v <= 0.0) {
            throw IoError("spectrum values must be positive", line_no);
        }
        if (!values.empty() && !(v < values.back())) {
            throw IoError("spectrum must be strictly decreasing", line_no);
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw IoError("spectrum file holds no values");
    }
    return SpectrumSequence(std::move(values));
}

inline SpectrumSequence load_spectrum(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open spectrum file '" + path + "'");
    }
    return read_spectrum(in);
}

/// A generator tag when the argument parses as one, else a file path.
inline SpectrumSequence spectrum_from_argument(const std::string& arg) {
    if (arg.rfind("harmonic:", 0) == 0 || arg.rfind("geometric:", 0) == 0) {
        return SpectrumSequence::from_tag(arg);
    }
    return load_spectrum(arg);
}

} // namespace schauder
