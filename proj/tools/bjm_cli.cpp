// bjm: command line front end.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bjm/config.hpp"
#include "bjm/errors.hpp"
#include "bjm/fixtures.hpp"
#include "bjm/pipeline.hpp"
#include "bjm/recurrence.hpp"
#include "bjm/report.hpp"

namespace {

using namespace bjm;

constexpr int kExitInvalid = 2;
constexpr int kExitIO = 3;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IOError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError(what, "not a number: '" + item + "'");
        }
    }
    return out;
}

/// A fixture name, or a JSON file holding a family object or a whole config.
FamilySpec load_family(const std::string& ref) {
    for (const auto& f : fixture_list()) {
        if (f.name == ref) return fixture_family(ref);
    }
    Json doc;
    try {
        doc = Json::parse(read_file(ref));
    } catch (const Json::parse_error& e) {
        throw ParseError(ref, std::string("invalid JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("family")) return parse_family(doc["family"], "$.family");
    return parse_family(doc, "$");
}

struct Common {
    std::optional<std::size_t> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;

    void add(CLI::App* app) {
        app->add_option("--horizon", horizon, "Largest index analysed (>= 100)");
        app->add_option("--seed", seed, "Seed for random initial conditions");
        app->add_option("--out-dir", out_dir, "Output directory");
        app->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    }
    void apply(AnalysisConfig& cfg) const {
        if (horizon) {
            if (*horizon < 100) throw ParseError("--horizon", "must be at least 100");
            cfg.horizon = *horizon;
        }
        if (seed) cfg.seed = *seed;
        if (out_dir) cfg.out_dir = *out_dir;
        if (format) cfg.format = *format;
    }
};

void print_summary(const AnalysisReport& rep, const std::string& out_dir) {
    for (const auto& r : rep.results) {
        std::cout << r["type"].get<std::string>() << ": " << r["status"].get<std::string>();
        if (r["status"] == "error") std::cout << " (" << r["error"].get<std::string>() << ")";
        if (r.contains("lambda_set")) {
            for (const auto& iv : r["lambda_set"]["intervals"]) {
                std::cout << " [" << iv["lo"].get<double>() << ", " << iv["hi"].get<double>()
                          << "] " << iv["sign"].get<std::string>();
            }
        }
        if (r.contains("coupling_set")) {
            for (const auto& iv : r["coupling_set"]["intervals"]) {
                std::cout << " [" << iv["lo"].get<double>() << ", " << iv["hi"].get<double>()
                          << "] " << iv["sign"].get<std::string>();
            }
        }
        if (r.contains("verdict")) std::cout << " " << r["verdict"].get<std::string>();
        std::cout << "\n";
    }
    std::cout << "wrote " << out_dir << "\n";
}

int run_config(const AnalysisConfig& cfg) {
    const AnalysisReport rep = run(cfg);
    emit(rep, cfg.out_dir, cfg.format);
    print_summary(rep, cfg.out_dir);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral diagnostics for block Jacobi matrices"};
    app.require_subcommand(1);

    Common analyze_opts;
    std::string config_path;
    auto* analyze = app.add_subcommand("analyze", "Run the analyses of a JSON config");
    analyze->add_option("config", config_path, "Config file")->required();
    analyze_opts.add(analyze);

    Common scan_opts;
    std::string scan_family, scan_range = "-10,10", scan_over = "lambda";
    std::size_t scan_grid = 1001;
    double scan_eps = kDefiniteEps, scan_lambda = 0.0;
    auto* scan = app.add_subcommand("scan", "Scan for the set where the limit form is definite");
    scan->add_option("--family", scan_family, "Fixture name or JSON file")->required();
    scan->add_option("--range", scan_range, "lo,hi");
    scan->add_option("--grid", scan_grid, "Grid points");
    scan->add_option("--eps", scan_eps, "Definiteness margin");
    scan->add_option("--over", scan_over, "lambda or coupling")
        ->check(CLI::IsMember({"lambda", "coupling"}));
    scan->add_option("--lambda", scan_lambda, "Spectral parameter for --over coupling");
    scan_opts.add(scan);

    Common traj_opts;
    std::string traj_family, traj_z = "0,0", traj_alpha;
    auto* traj = app.add_subcommand("trajectory", "Compute one generalised eigenvector");
    traj->add_option("--family", traj_family, "Fixture name or JSON file")->required();
    traj->add_option("--z", traj_z, "re,im");
    traj->add_option("--alpha", traj_alpha, "(u_0, u_1): 2d reals or 4d interleaved re,im")
        ->required();
    traj_opts.add(traj);

    auto* fixtures = app.add_subcommand("fixtures", "Built-in families");
    auto* list = fixtures->add_subcommand("list", "List fixture names");
    fixtures->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (analyze->parsed()) {
            AnalysisConfig cfg = parse_config(read_file(config_path));
            analyze_opts.apply(cfg);
            return run_config(cfg);
        }
        if (scan->parsed()) {
            AnalysisConfig cfg;
            cfg.family = load_family(scan_family);
            scan_opts.apply(cfg);
            const auto r = parse_numbers(scan_range, "--range");
            if (r.size() != 2 || !(r[0] < r[1])) throw ParseError("--range", "expected lo,hi with lo < hi");
            if (scan_grid < 2) throw ParseError("--grid", "must be at least 2");
            AnalysisSpec a;
            a.type = scan_over == "lambda" ? "lambda_scan" : "coupling_scan";
            a.range = {r[0], r[1]};
            a.grid = scan_grid;
            a.eps = scan_eps;
            a.lambda = scan_lambda;
            cfg.analyses.push_back(a);
            return run_config(cfg);
        }
        if (traj->parsed()) {
            AnalysisConfig cfg;
            cfg.family = load_family(traj_family);
            traj_opts.apply(cfg);
            const auto zv = parse_numbers(traj_z, "--z");
            if (zv.size() != 2) throw ParseError("--z", "expected re,im");
            const auto av = parse_numbers(traj_alpha, "--alpha");
            const int d = cfg.family.dim;
            Vector alpha(2 * d);
            if (av.size() == static_cast<std::size_t>(2 * d)) {
                for (int i = 0; i < 2 * d; ++i) alpha(i) = av[i];
            } else if (av.size() == static_cast<std::size_t>(4 * d)) {
                for (int i = 0; i < 2 * d; ++i) alpha(i) = Complex(av[2 * i], av[2 * i + 1]);
            } else {
                throw ParseError("--alpha", "expected " + std::to_string(2 * d) + " or " +
                                                std::to_string(4 * d) + " numbers");
            }
            const CoefficientFamily fam = build_family(cfg.family);
            if (!validate_family(fam, {0, std::min(cfg.horizon + 2, fam.available())}).empty()) {
                throw ValidationError("family violates the standing assumptions");
            }
            const Trajectory t = propagate(fam, Complex(zv[0], zv[1]), alpha, cfg.horizon);
            const auto s = weighted_norm_trace(fam, t);
            const auto l2 = l2_tail_diagnostic(t);
            AnalysisReport rep;
            rep.config = to_json(cfg);
            rep.results.push_back({{"type", "trajectory"},
                                   {"status", "ok"},
                                   {"horizon", t.horizon()},
                                   {"overflow", t.overflow},
                                   {"verdict", std::string(to_string(l2.verdict))},
                                   {"l2_partial_sum", l2.partial_sum}});
            Table tab{"trajectory", {"n", "norm_u", "s_n"}, {}};
            for (std::size_t n = 0; n <= t.horizon(); ++n) {
                tab.rows.push_back({std::to_string(n), format_double(t.u[n].norm()),
                                    n >= 1 && n - 1 < s.size() ? format_double(s[n - 1]) : ""});
            }
            rep.tables.push_back(std::move(tab));
            emit(rep, cfg.out_dir, cfg.format);
            print_summary(rep, cfg.out_dir);
            return 0;
        }
        if (list->parsed()) {
            for (const auto& f : fixture_list()) std::cout << f.name << "\t" << f.description << "\n";
            return 0;
        }
    } catch (const IOError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIO;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
