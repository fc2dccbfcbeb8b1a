#pragma once

#include <string>

#include "sublab/classify.hpp"

namespace sublab {

inline constexpr const char* kToolVersion = "1.0.0";

// Machine-readable report. Top-level keys: "version", "map", "params", "J",
// "sampling", "tolerances", "verdict", "theta", "dims", "points", "checks".
// Byte-stable for fixed inputs, seed, and version.
std::string report_json(const ClassificationReport& report, const std::string& map_label,
                        const ParamMap& params, const Eigen::MatrixXd& J);

// Human-readable rendering of the same data, plus annotations.
std::string report_text(const ClassificationReport& report, const std::string& map_label,
                        const ParamMap& params);

}  // namespace sublab
