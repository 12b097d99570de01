#pragma once

// Analysis configuration: JSON ingestion, validation and emission.
//
// Complex numbers are either a plain number or a [re, im] pair; matrices are
// row-major nested arrays.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bjm/coefficients.hpp"

namespace bjm {

using Json = nlohmann::ordered_json;
using MatrixSpec = std::vector<std::vector<std::complex<double>>>;

struct WeightSpec {
    /// power | block_sqrt_log | block_inv_klog | log_product | reciprocal_log_product |
    /// geometric | tabulated | constant
    std::string kind = "constant";
    double exponent = 1.0;
    double offset = 1.0;
    int K = 1;
    double ratio = 2.0;
    double value = 1.0;
    std::vector<double> values;
    double scale = 1.0;

    bool operator==(const WeightSpec&) const = default;
};

struct FamilySpec {
    /// constant | scaled_periodic | tabulated
    std::string kind = "constant";
    int dim = 1;
    /// Period used by the Turán analyses.
    std::size_t N = 1;
    std::string description;
    MatrixSpec a, b;                      // constant
    WeightSpec x, y;                      // scaled_periodic
    std::vector<MatrixSpec> X, Y;         // scaled_periodic
    std::vector<MatrixSpec> a_list, b_list;  // tabulated

    bool operator==(const FamilySpec&) const = default;
};

struct AnalysisSpec {
    /// validate | carleman | variation | lambda_scan | coupling_scan | band |
    /// turan_convergence | commutator | spec2 | spec3 | indeterminacy |
    /// exact_asymptotics | christoffel
    std::string type;
    std::pair<double, double> range{-10.0, 10.0};
    std::size_t grid = 1001;
    double eps = 1e-9;
    double lambda = 0.0;
    std::vector<std::complex<double>> z;
    std::vector<std::vector<std::complex<double>>> alphas;
    std::size_t random_alphas = 0;
    std::string strategy = "identity";
    int K = 1;
    std::size_t n_start = 3;
    std::vector<double> lambdas;
    std::optional<std::size_t> horizon;

    bool operator==(const AnalysisSpec&) const = default;
};

struct AnalysisConfig {
    FamilySpec family;
    std::vector<AnalysisSpec> analyses;
    std::size_t horizon = kDefaultHorizon;
    std::uint64_t seed = 0;
    std::string out_dir = "bjm-out";
    std::string format = "json";

    bool operator==(const AnalysisConfig&) const = default;
};

/// Parses and validates a configuration. Unknown keys are rejected.
/// Throws ParseError naming the offending path, e.g. "$.family.dim".
AnalysisConfig parse_config(const std::string& text);
AnalysisConfig parse_config(const Json& doc);
inline AnalysisConfig parse_config(const char* text) { return parse_config(std::string(text)); }

/// A family object alone, or {"fixture": name}.
FamilySpec parse_family(const Json& doc, const std::string& path = "$.family");

Json to_json(const AnalysisConfig& cfg);
Json to_json(const FamilySpec& fam);
Json to_json(const AnalysisSpec& spec);
std::string emit_config(const AnalysisConfig& cfg);

/// Builds the coefficient family described by a spec.
CoefficientFamily build_family(const FamilySpec& spec);
Operator to_operator(const MatrixSpec& m);

}  // namespace bjm
