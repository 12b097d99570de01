#include "bjm/fixtures.hpp"

#include "bjm/errors.hpp"

namespace bjm {

namespace {

struct Fixture {
    const char* name;
    const char* description;
    const char* json;
};

const Fixture kFixtures[] = {
    {"paper-constant", "constant coefficients a_n = A, b_n = B",
     R"({"kind": "constant", "dim": 2,
         "a": [[1, 1], [1, 2]], "b": [[2, 1], [1, 1]]})"},
    {"paper-unbounded", "a_n = (n+1) X, b_n = q (n+1) Y with q = 1/2",
     R"({"kind": "scaled_periodic", "dim": 2,
         "x": {"kind": "power", "exponent": 1, "offset": 1},
         "y": {"kind": "power", "exponent": 1, "offset": 1, "scale": 0.5},
         "X": [[[1, 1], [1, 2]]], "Y": [[[2, 1], [1, 1]]]})"},
    {"paper-blockrepeat", "block-repeated weights k sqrt(log(k+1)) and 1/(k log(k+1))",
     R"({"kind": "scaled_periodic", "dim": 2,
         "x": {"kind": "block_sqrt_log"}, "y": {"kind": "block_inv_klog"},
         "X": [[[1, 1], [1, 2]]], "Y": [[[2, 1], [1, 1]]]})"},
    {"paper-logweight", "a_n = (n+3) log(n+3) X, b_n = Y / log(n+3)",
     R"({"kind": "scaled_periodic", "dim": 2,
         "x": {"kind": "log_product", "K": 1, "offset": 3},
         "y": {"kind": "reciprocal_log_product", "K": 1, "offset": 3},
         "X": [[[1, 1], [1, 2]]], "Y": [[[2, 1], [1, 1]]]})"},
    {"geometric-indeterminate", "a_n = 2^n X, b_n = 0; use horizons below ~1000",
     R"({"kind": "scaled_periodic", "dim": 2,
         "x": {"kind": "geometric", "ratio": 2}, "y": {"kind": "constant", "value": 0},
         "X": [[[1, 1], [1, 2]]], "Y": [[[0, 0], [0, 0]]]})"},
    {"sqrt-exact", "a_n = sqrt(n+1) X, b_n = 0",
     R"({"kind": "scaled_periodic", "dim": 2,
         "x": {"kind": "power", "exponent": 0.5, "offset": 1},
         "y": {"kind": "constant", "value": 0},
         "X": [[[1, 1], [1, 2]]], "Y": [[[0, 0], [0, 0]]]})"},
};

const Fixture& find(const std::string& name) {
    for (const auto& f : kFixtures) {
        if (name == f.name) return f;
    }
    throw ParseError("fixture", "unknown fixture '" + name + "'");
}

}  // namespace

std::vector<FixtureInfo> fixture_list() {
    std::vector<FixtureInfo> out;
    for (const auto& f : kFixtures) out.push_back({f.name, f.description});
    return out;
}

Json fixture_json(const std::string& name) {
    const Fixture& f = find(name);
    Json j = Json::parse(f.json);
    j["description"] = f.description;
    return j;
}

FamilySpec fixture_family(const std::string& name) {
    return parse_family(fixture_json(name), "fixture:" + name);
}

}  // namespace bjm
