// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace thetaflow {

/// Minimal RFC-4180 CSV writer. Each file starts with a schema comment line
/// so downstream tooling can detect reordering.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& schema,
              const std::vector<std::string>& header);

    void row(const std::vector<std::string>& fields);

    static std::string field(double v);
    static std::string field(long v);
    static std::string field(int v) { return field(static_cast<long>(v)); }
    static std::string escape(const std::string& s);

  private:
    std::ofstream out_;
    std::size_t width_;
};

}  // namespace thetaflow
