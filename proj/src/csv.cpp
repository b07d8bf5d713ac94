// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/csv.hpp"

#include <charconv>

#include "thetaflow/errors.hpp"

namespace thetaflow {

CsvWriter::CsvWriter(const std::string& path, const std::string& schema,
                     const std::vector<std::string>& header)
    : out_(path, std::ios::trunc), width_(header.size()) {
    if (!out_) throw IoError("csv: cannot open " + path + " for writing");
    out_ << "# schema: " << schema << "\r\n";
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw PreconditionError("csv: row width mismatch");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << escape(fields[i]);
    }
    out_ << "\r\n";
}

std::string CsvWriter::field(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::string CsvWriter::field(long v) { return std::to_string(v); }

std::string CsvWriter::escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace thetaflow
