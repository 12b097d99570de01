#pragma once

// Runs the analyses of a configuration and collects their results.

#include <string>
#include <vector>

#include "bjm/config.hpp"
#include "bjm/operator.hpp"

namespace bjm {

inline constexpr const char* kToolVersion = "0.1.0";

/// A CSV table; cells are preformatted.
struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct AnalysisReport {
    std::string tool_version = kToolVersion;
    Json config;
    /// One object per analysis, in config order.
    Json results = Json::array();
    std::vector<Table> tables;
    /// Seconds per analysis; excluded from the determinism contract.
    Json wall_times = Json::object();
};

/// Throws ValidationError when the family fails validation on the analysed
/// range. Failures inside one analysis are recorded and the run continues.
AnalysisReport run(const AnalysisConfig& cfg);

/// Unit vectors in C^{2d}, uniform on the sphere, from a seeded generator.
std::vector<Vector> random_unit_vectors(int dim, std::size_t count, std::uint64_t seed);

/// The report document; wall_times is omitted when include_times is false.
Json report_json(const AnalysisReport& report, bool include_times = true);

Json to_json(const Operator& op);
Json to_json(const BlockOperator& op);

std::string format_double(double v);

}  // namespace bjm
