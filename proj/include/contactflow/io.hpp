#pragma once

// Artifact writing: RFC-4180-style CSV with '.' decimal separator and 17
// significant digits, plus small helpers for hashing and timestamps.

#include "contactflow/core.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace contactflow {

inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) body_ << ',';
            body_ << header[i];
        }
        body_ << "\r\n";
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) body_ << ',';
            body_ << format_value(values[i]);
        }
        body_ << "\r\n";
    }

    void row_mixed(const std::vector<std::string>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) body_ << ',';
            body_ << values[i];
        }
        body_ << "\r\n";
    }

    std::string str() const { return body_.str(); }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        out << body_.str();
    }

private:
    std::ostringstream body_;
};

inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%S", &tm);
    return buf;
}

// <experiment>-<timestamp>.<ext>, deduplicated within the directory
inline std::filesystem::path artifact_path(const std::filesystem::path& dir,
                                           const std::string& experiment,
                                           const std::string& ext) {
    const std::string stamp = timestamp_utc();
    std::filesystem::path p = dir / (experiment + "-" + stamp + "." + ext);
    for (int k = 1; std::filesystem::exists(p); ++k)
        p = dir / (experiment + "-" + stamp + "-" + std::to_string(k) + "." + ext);
    return p;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

}  // namespace contactflow
