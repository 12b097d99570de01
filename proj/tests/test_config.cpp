#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bjm/config.hpp"
#include "bjm/errors.hpp"
#include "bjm/fixtures.hpp"
#include "bjm/pipeline.hpp"
#include "bjm/report.hpp"

using namespace bjm;

namespace {

const char* kMinimal = R"({
  "family": {"kind": "constant", "dim": 2,
             "a": [[1, 1], [1, 2]], "b": [[2, 1], [1, 1]]},
  "analyses": [{"type": "lambda_scan", "range": [-5, 10], "grid": 1501}]
})";

std::string parse_error_path(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.path();
    }
    return "";
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("parse a minimal config") {
    const AnalysisConfig cfg = parse_config(kMinimal);
    CHECK(cfg.family.dim == 2);
    CHECK(cfg.horizon == kDefaultHorizon);
    REQUIRE(cfg.analyses.size() == 1);
    CHECK(cfg.analyses[0].grid == 1501);
    CHECK(cfg.analyses[0].range.first == -5);
}

TEST_CASE("invalid configs name the offending path") {
    CHECK(parse_error_path(R"({"family": {"kind": "constant", "dim": 0, "a": [], "b": []}})") == "$.family.dim");
    CHECK(parse_error_path(R"({"family": {"fixture": "paper-constant"}, "colour": 1})") == "$.colour");
    CHECK(parse_error_path(R"({"family": {"fixture": "nope"}})") == "$.family.fixture");
    CHECK(parse_error_path(R"({"family": {"fixture": "paper-constant"}, "horizon": 10})") == "$.horizon");
    CHECK(parse_error_path(R"({"family": {"fixture": "paper-constant"},
        "analyses": [{"type": "lambda_scan", "grid": 1}]})") == "$.analyses[0].grid");
    CHECK(parse_error_path(R"({"family": {"fixture": "paper-constant"},
        "analyses": [{"type": "lambda_scan", "range": [2, 1]}]})") == "$.analyses[0].range");
    CHECK(parse_error_path(R"({"family": {"kind": "constant", "dim": 2,
        "a": [[1, 1], [1, 2]], "b": [[2, 1]]}})") == "$.family.b");
    CHECK(parse_error_path(R"({"family": {"fixture": "paper-constant"},
        "analyses": [{"type": "band", "z": [1], "alphas": [[1, 0, 0]]}]})") == "$.analyses[0].alphas[0]");
    CHECK(parse_error_path(R"({"family": {"fixture": "paper-constant"},
        "analyses": [{"type": "fourier"}]})") == "$.analyses[0].type");
    CHECK(parse_error_path("{not json") == "$");
}

TEST_CASE("complex entries") {
    const auto cfg = parse_config(R"({"family": {"kind": "constant", "dim": 1, "a": [[[0, 2]]], "b": [[1]]},
        "analyses": [{"type": "band", "z": [[0, 1], 2], "alphas": [[1, [0, 1]]]}]})");
    CHECK(cfg.family.a[0][0] == std::complex<double>(0, 2));
    CHECK(cfg.analyses[0].z[0] == std::complex<double>(0, 1));
    CHECK(cfg.analyses[0].alphas[0][1] == std::complex<double>(0, 1));
}

TEST_CASE("emit then parse gives an equal config") {
    const auto cfg = parse_config(R"({"family": {"fixture": "paper-logweight"}, "horizon": 500, "seed": 9,
        "output": {"dir": "x", "format": "csv"},
        "analyses": [{"type": "lambda_scan"}, {"type": "commutator", "strategy": "log", "lambdas": [0, 1.5]},
                     {"type": "band", "z": [[1, 0.5]], "random_alphas": 3, "horizon": 200},
                     {"type": "spec3", "K": 1, "n_start": 4}, {"type": "coupling_scan", "lambda": 2}]})");
    const AnalysisConfig again = parse_config(emit_config(cfg));
    CHECK(again == cfg);
    CHECK(emit_config(again) == emit_config(cfg));
}

TEST_CASE("fixtures reproduce the example families") {
    CHECK(fixture_list().size() >= 4);
    for (const auto& f : fixture_list()) {
        const FamilySpec spec = fixture_family(f.name);
        const Json cfg = {{"family", {{"fixture", f.name}}}};
        CHECK(parse_config(cfg).family == spec);
        CHECK(parse_family(to_json(spec)) == spec);
    }
    const auto c = build_family(fixture_family("paper-constant"));
    CHECK(op_norm(c.a(7) - Operator{{1, 1}, {1, 2}}) == 0.0);
    const auto u = build_family(fixture_family("paper-unbounded"));
    CHECK(op_norm(u.b(3) - Operator(Matrix(2.0 * Operator{{2, 1}, {1, 1}}.matrix()))) < 1e-12);
    const auto l = build_family(fixture_family("paper-logweight"));
    CHECK(op_norm(l.a(0)) == doctest::Approx(3 * std::log(3.0) * (3 + std::sqrt(5.0)) / 2));
    CHECK_THROWS_AS(fixture_family("missing"), ParseError);
}

TEST_CASE("run reports the constant example interval") {
    AnalysisConfig cfg = parse_config(kMinimal);
    cfg.analyses.push_back(parse_config(R"({"family": {"fixture": "paper-constant"},
        "analyses": [{"type": "band", "z": [1], "random_alphas": 3, "horizon": 1000}]})").analyses[0]);
    const AnalysisReport rep = run(cfg);
    REQUIRE(rep.results.size() == 2);
    const Json& iv = rep.results[0]["lambda_set"]["intervals"];
    REQUIRE(iv.size() == 1);
    CHECK(std::abs(iv[0]["lo"].get<double>() - 0.3027756377) < 1e-6);
    CHECK(std::abs(iv[0]["hi"].get<double>() - 1.4586187349) < 1e-6);
    CHECK(rep.results[1]["status"] == "ok");
    CHECK(std::isfinite(rep.results[1]["per_z"][0]["ratio"].get<double>()));
}

TEST_CASE("run with no analyses echoes the config") {
    const auto cfg = parse_config(R"({"family": {"fixture": "paper-constant"}})");
    const AnalysisReport rep = run(cfg);
    CHECK(rep.results.empty());
    CHECK(rep.config == to_json(cfg));
}

TEST_CASE("run records per-analysis failures and rejects invalid families") {
    const auto cfg = parse_config(R"({"family": {"fixture": "paper-constant"}, "horizon": 500,
        "analyses": [{"type": "exact_asymptotics", "z": [0], "random_alphas": 1}, {"type": "carleman"}]})");
    const AnalysisReport rep = run(cfg);
    CHECK(rep.results[0]["status"] == "error");
    CHECK(rep.results[1]["status"] == "ok");

    const auto geo = parse_config(R"({"family": {"fixture": "geometric-indeterminate"}, "horizon": 5000})");
    CHECK_THROWS_AS(run(geo), ValidationError);
}

TEST_CASE("emit is deterministic and writes header-only tables") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "bjm_test_emit";
    fs::remove_all(dir);
    auto cfg = parse_config(R"({"family": {"fixture": "paper-constant"}, "seed": 3, "horizon": 400,
        "analyses": [{"type": "lambda_scan", "grid": 101}, {"type": "band", "z": [1], "random_alphas": 2}]})");
    const AnalysisReport a = run(cfg), b = run(cfg);
    CHECK(report_json(a, false).dump() == report_json(b, false).dump());

    AnalysisReport withEmpty = a;
    withEmpty.tables.push_back({"empty_trace", {"n", "S"}, {}});
    emit(withEmpty, dir.string(), "csv");
    CHECK(fs::exists(dir / "report.json"));
    CHECK(slurp(dir / "empty_trace.csv") == "n,S\n");
    CHECK(fs::exists(dir / "lambda_scan_0.csv"));
    const Json back = Json::parse(slurp(dir / "report.json"));
    CHECK(back["results"][0]["lambda_set"]["intervals"].size() == 1);

    CHECK_THROWS_AS(emit(a, "/proc/definitely/not/writable", "json"), IOError);
    fs::remove_all(dir);
}

TEST_CASE("random unit vectors") {
    const auto v = random_unit_vectors(2, 5, 42);
    REQUIRE(v.size() == 5);
    for (const auto& x : v) CHECK(x.norm() == doctest::Approx(1.0));
    CHECK((random_unit_vectors(2, 5, 42)[3] - v[3]).norm() == 0.0);
}
