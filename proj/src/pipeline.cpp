#include "bjm/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <random>

#include "bjm/commutator.hpp"
#include "bjm/errors.hpp"
#include "bjm/turan.hpp"

namespace bjm {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json to_json(const Operator& op) {
    Json rows = Json::array();
    const Matrix& m = op.matrix();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) {
            const Complex v = m(r, c);
            if (v.imag() == 0.0) {
                row.push_back(v.real());
            } else {
                row.push_back(Json::array({v.real(), v.imag()}));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const BlockOperator& op) { return to_json(op.as_operator()); }

std::vector<Vector> random_unit_vectors(int dim, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<Vector> out;
    for (std::size_t k = 0; k < count; ++k) {
        Vector v(2 * dim);
        for (int i = 0; i < 2 * dim; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            v(i) = Complex(re, im);
        }
        out.push_back(v / v.norm());
    }
    return out;
}

Json report_json(const AnalysisReport& report, bool include_times) {
    Json j;
    j["tool_version"] = report.tool_version;
    j["config"] = report.config;
    j["results"] = report.results;
    if (include_times) j["wall_times"] = report.wall_times;
    return j;
}

namespace {

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json vector_json(const Vector& v) {
    Json out = Json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
    return out;
}

Json evidence_json(const SeriesEvidence& e) {
    return {{"verdict", std::string(to_string(e.verdict))},
            {"partial_sum", e.partial_sum},
            {"power", e.power},
            {"log_power", e.log_power},
            {"tail_estimate", e.tail_estimate},
            {"last_decade_share", e.last_decade_share}};
}

Json lambda_set_json(const LambdaSet& s) {
    Json iv = Json::array();
    for (const auto& i : s.intervals) {
        iv.push_back({{"lo", i.lo}, {"hi", i.hi}, {"sign", std::string(to_string(i.sign))}});
    }
    return {{"intervals", iv},
            {"eps", s.eps},
            {"grid", s.grid},
            {"range", Json::array({s.range.first, s.range.second})}};
}

Table scan_table(const std::string& name, const std::string& param, const LambdaSet& s) {
    Table t{name, {param, "min_eig", "max_eig"}, {}};
    for (const auto& g : s.samples) {
        t.rows.push_back(
            {format_double(g.parameter), format_double(g.min_eig), format_double(g.max_eig)});
    }
    return t;
}

Json limits_json(const PeriodicLimitData& lim) {
    Json j;
    j["N"] = lim.N;
    j["converged"] = lim.converged();
    j["not_convergent"] = lim.not_convergent;
    auto list = [](const std::vector<Operator>& ops) {
        Json out = Json::array();
        for (const auto& o : ops) out.push_back(to_json(o));
        return out;
    };
    j["T"] = list(lim.T);
    j["Q"] = list(lim.Q);
    j["R"] = list(lim.R);
    j["C"] = list(lim.C);
    j["r"] = lim.r;
    return j;
}

class Runner {
public:
    Runner(const AnalysisConfig& cfg, AnalysisReport& rep)
        : cfg_(cfg), rep_(rep), fam_(build_family(cfg.family)) {}

    void validate_all() {
        std::size_t top = cfg_.horizon;
        for (const auto& a : cfg_.analyses) top = std::max(top, a.horizon.value_or(cfg_.horizon));
        IndexRange range{0, std::min(top + cfg_.family.N + 2, fam_.available())};
        const auto v = validate_family(fam_, range);
        if (!v.empty()) {
            throw ValidationError("family violates the standing assumptions at n = " +
                                  std::to_string(v.front().index) + " (" +
                                  std::string(to_string(v.front().kind)) + "); " +
                                  std::to_string(v.size()) + " violation(s) in [0, " +
                                  std::to_string(range.end) + ")");
        }
    }

    Json run_one(const AnalysisSpec& a, std::size_t index) {
        const std::size_t h = a.horizon.value_or(cfg_.horizon);
        const std::string tag = a.type + "_" + std::to_string(index);
        Json out;
        out["type"] = a.type;
        out["horizon"] = h;
        if (a.type == "validate") {
            const auto v = validate_family(fam_, {0, std::min(h + 1, fam_.available())});
            out["violations"] = v.size();
        } else if (a.type == "carleman") {
            const auto c = carleman_diagnostic(fam_, h);
            out["partial_sum"] = c.partial_sum;
            out["evidence"] = evidence_json(c.evidence);
        } else if (a.type == "variation") {
            out["variation"] = variation(h);
        } else if (a.type == "lambda_scan") {
            const auto& lim = limits(h);
            out["limits"] = limits_json(lim);
            const auto s = lambda_scan(lim, a.range, a.grid, a.eps);
            out["lambda_set"] = lambda_set_json(s);
            rep_.tables.push_back(scan_table(tag, "lambda", s));
        } else if (a.type == "coupling_scan") {
            const auto& lim = limits(h);
            out["lambda"] = a.lambda;
            const auto s = coupling_scan(lim, a.lambda, a.range, a.grid, a.eps);
            out["coupling_set"] = lambda_set_json(s);
            rep_.tables.push_back(scan_table(tag, "t", s));
        } else if (a.type == "band") {
            out["per_z"] = band(a, h, tag);
        } else if (a.type == "turan_convergence") {
            out["per_z"] = turan(a, h, tag);
        } else if (a.type == "commutator") {
            out.update(commutator(a, h, tag));
        } else if (a.type == "spec2") {
            out["report"] = hypothesis_json(check_spec2(fam_, h));
        } else if (a.type == "spec3") {
            out["report"] = hypothesis_json(check_spec3(fam_, a.K, a.n_start, h));
        } else if (a.type == "indeterminacy") {
            out.update(indeterminacy(a, h));
        } else if (a.type == "exact_asymptotics") {
            out["per_z"] = exact(a, h);
        } else if (a.type == "christoffel") {
            out["per_z"] = christoffel(a, h, tag);
        }
        return out;
    }

private:
    const PeriodicLimitData& limits(std::size_t h) {
        auto it = limits_.find(h);
        if (it == limits_.end()) {
            it = limits_.emplace(h, extract_periodic_limits(fam_, cfg_.family.N, h)).first;
        }
        return it->second;
    }

    std::vector<Vector> alphas(const AnalysisSpec& a) const {
        std::vector<Vector> out;
        for (const auto& v : a.alphas) {
            Vector x(static_cast<int>(v.size()));
            for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<int>(i)) = v[i];
            out.push_back(x);
        }
        auto r = random_unit_vectors(fam_.dim(), a.random_alphas, cfg_.seed);
        out.insert(out.end(), r.begin(), r.end());
        return out;
    }

    Json variation(std::size_t h) {
        const std::size_t N = cfg_.family.N;
        const IndexRange w{1, h - N};
        const auto& f = fam_;
        Json out;
        auto put = [&](const char* name, std::function<Operator(std::size_t)> seq) {
            const auto r = total_variation(seq, N, w);
            out[name] = {{"partial_sum", r.partial_sum},
                         {"tail_estimate", r.tail_estimate},
                         {"converged", r.converged}};
        };
        put("a_inv_a_prev_adj", [&](std::size_t n) { return f.a_inv(n) * f.a(n - 1).adjoint(); });
        put("a_inv", [&](std::size_t n) { return f.a_inv(n); });
        put("a_inv_b", [&](std::size_t n) { return f.a_inv(n) * f.b(n); });
        return out;
    }

    Json band(const AnalysisSpec& a, std::size_t h, const std::string& tag) {
        const auto al = alphas(a);
        Json per = Json::array();
        for (std::size_t zi = 0; zi < a.z.size(); ++zi) {
            const auto b = asymptotic_band(fam_, a.z[zi], al, h);
            per.push_back({{"z", complex_json(a.z[zi])},
                           {"c1", b.c1},
                           {"c2", b.c2},
                           {"ratio", b.ratio},
                           {"burn_in", b.burn_in},
                           {"overflow", b.overflow}});
            Table t{tag + "_z" + std::to_string(zi), {"n"}, {}};
            for (std::size_t k = 0; k < b.traces.size(); ++k) {
                t.header.push_back("alpha" + std::to_string(k));
            }
            std::size_t len = 0;
            for (const auto& tr : b.traces) len = std::max(len, tr.size());
            for (std::size_t i = 0; i < len; ++i) {
                std::vector<std::string> row{std::to_string(i + 1)};
                for (const auto& tr : b.traces) row.push_back(i < tr.size() ? format_double(tr[i]) : "");
                t.rows.push_back(std::move(row));
            }
            rep_.tables.push_back(std::move(t));
        }
        return per;
    }

    Json turan(const AnalysisSpec& a, std::size_t h, const std::string& tag) {
        const auto al = alphas(a);
        Json per = Json::array();
        for (std::size_t zi = 0; zi < a.z.size(); ++zi) {
            const auto tc = turan_convergence(fam_, cfg_.family.N, a.z[zi], al, h);
            per.push_back({{"z", complex_json(a.z[zi])},
                           {"g", tc.g},
                           {"residuals", tc.residuals},
                           {"converged", tc.converged},
                           {"m_values", tc.m_values},
                           {"deviations", tc.deviations},
                           {"tail_variations", tc.tail_variations},
                           {"fitted_c", tc.fitted_c},
                           {"rate_bound_check", tc.rate_bound_check}});
            Table t{tag + "_z" + std::to_string(zi), {"n"}, {}};
            for (std::size_t k = 0; k < tc.traces.size(); ++k) {
                t.header.push_back("S_alpha" + std::to_string(k));
            }
            if (!tc.traces.empty()) {
                const std::size_t start = tc.traces.front().n_start;
                std::size_t len = 0;
                for (const auto& tr : tc.traces) len = std::max(len, tr.values.size());
                for (std::size_t i = 0; i < len; ++i) {
                    std::vector<std::string> row{std::to_string(start + i)};
                    for (const auto& tr : tc.traces) {
                        row.push_back(i < tr.values.size() ? format_double(tr.values[i]) : "");
                    }
                    t.rows.push_back(std::move(row));
                }
            }
            rep_.tables.push_back(std::move(t));
        }
        return per;
    }

    Json commutator(const AnalysisSpec& a, std::size_t h, const std::string& tag) {
        AlphaStrategy s;
        if (a.strategy == "an") {
            s = AlphaStrategy(alpha::AN{});
        } else if (a.strategy == "log") {
            s = AlphaStrategy(alpha::Log{a.K, a.n_start});
        }
        Json out;
        out["strategy"] = s.name();
        Json lims = Json::array();
        for (double lambda : a.lambdas) {
            const auto c = c_limit(fam_, s, lambda, h);
            lims.push_back({{"lambda", lambda},
                            {"value", to_json(c.value)},
                            {"cauchy_residual", c.cauchy_residual},
                            {"extrapolation_residual", c.extrapolation_residual},
                            {"converged", c.converged},
                            {"definiteness", std::string(to_string(c.definiteness))}});
        }
        out["c_limits"] = lims;
        const auto rep = thmA_conditions(fam_, s, h);
        Json conds = Json::array();
        Table t{tag + "_terms", {"n"}, {}};
        std::size_t first = SIZE_MAX, last = 0;
        for (const auto& c : rep.conditions) {
            conds.push_back({{"label", c.label},
                             {"first_index", c.first_index},
                             {"satisfied", c.satisfied},
                             {"evidence", evidence_json(c.evidence)}});
            t.header.push_back(c.label);
            first = std::min(first, c.first_index);
            last = std::max(last, c.first_index + c.terms.size());
        }
        for (std::size_t n = first; n < last; ++n) {
            std::vector<std::string> row{std::to_string(n)};
            for (const auto& c : rep.conditions) {
                const bool in = n >= c.first_index && n - c.first_index < c.terms.size();
                row.push_back(in ? format_double(c.terms[n - c.first_index]) : "");
            }
            t.rows.push_back(std::move(row));
        }
        rep_.tables.push_back(std::move(t));
        out["conditions"] = conds;
        out["all_satisfied"] = rep.all_satisfied();
        return out;
    }

    static Json hypothesis_json(const HypothesisReport& r) {
        Json checks = Json::array();
        for (const auto& c : r.checks) {
            Json j{{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"detail", c.detail}};
            if (c.evidence) j["evidence"] = evidence_json(*c.evidence);
            checks.push_back(std::move(j));
        }
        return {{"theorem", r.theorem}, {"passed", r.passed()}, {"checks", checks}};
    }

    Json indeterminacy(const AnalysisSpec& a, std::size_t h) {
        IndeterminacyOptions opts;
        opts.N = cfg_.family.N;
        opts.scan_range = a.range;
        opts.scan_grid = a.grid;
        const auto r = indeterminacy_probe(fam_, a.z, h, opts);
        Json out;
        out["verdict"] = std::string(to_string(r.verdict));
        out["reason"] = r.reason;
        out["carleman"] = {{"partial_sum", r.carleman.partial_sum},
                           {"evidence", evidence_json(r.carleman.evidence)}};
        out["limits_converged"] = r.limits_converged;
        if (r.lambda) out["lambda_set"] = lambda_set_json(*r.lambda);
        Json per = Json::array();
        for (const auto& e : r.per_z) {
            Json basis = Json::array();
            for (const auto& b : e.basis) {
                basis.push_back({{"verdict", std::string(to_string(b.verdict))},
                                 {"partial_sum", b.partial_sum}});
            }
            per.push_back({{"z", complex_json(e.z)}, {"solution_dim", e.solution_dim}, {"basis", basis}});
        }
        out["per_z"] = per;
        return out;
    }

    Json exact(const AnalysisSpec& a, std::size_t h) {
        const auto al = alphas(a);
        const auto& lim = limits(h);
        Json per = Json::array();
        for (Complex z : a.z) {
            const auto e = exact_asymptotics(fam_, lim, z, al, h);
            per.push_back({{"z", complex_json(z)},
                           {"c_hermitian", e.c_hermitian},
                           {"C", to_json(e.C)},
                           {"g", e.g},
                           {"weighted_limit", e.weighted_limit},
                           {"rel_diff", e.rel_diff},
                           {"max_rel_diff", e.max_rel_diff}});
        }
        return per;
    }

    Json christoffel(const AnalysisSpec& a, std::size_t h, const std::string& tag) {
        const auto al = alphas(a);
        const auto& lim = limits(h);
        Json per = Json::array();
        for (std::size_t zi = 0; zi < a.z.size(); ++zi) {
            const Complex z = a.z[zi];
            const auto tc = turan_convergence(fam_, cfg_.family.N, z, al, h);
            Json items = Json::array();
            Table t{tag + "_z" + std::to_string(zi), {"n"}, {}};
            std::vector<std::vector<double>> ratios;
            for (std::size_t k = 0; k < al.size(); ++k) {
                const auto traj = propagate(fam_, z, al[k], h);
                const auto c = christoffel_limit(fam_, lim.C.front(), traj);
                const double half = tc.g[k] / 2.0;
                items.push_back({{"alpha", vector_json(al[k])},
                                 {"limit", c.limit},
                                 {"half_g", half},
                                 {"rel_diff", std::abs(c.limit - half) / std::abs(half)}});
                t.header.push_back("ratio_alpha" + std::to_string(k));
                ratios.push_back(c.ratio);
            }
            std::size_t len = 0;
            for (const auto& r : ratios) len = std::max(len, r.size());
            for (std::size_t i = 0; i < len; ++i) {
                std::vector<std::string> row{std::to_string(i)};
                for (const auto& r : ratios) row.push_back(i < r.size() ? format_double(r[i]) : "");
                t.rows.push_back(std::move(row));
            }
            rep_.tables.push_back(std::move(t));
            per.push_back({{"z", complex_json(z)}, {"items", items}});
        }
        return per;
    }

    const AnalysisConfig& cfg_;
    AnalysisReport& rep_;
    CoefficientFamily fam_;
    std::map<std::size_t, PeriodicLimitData> limits_;
};

}  // namespace

AnalysisReport run(const AnalysisConfig& cfg) {
    AnalysisReport rep;
    rep.config = to_json(cfg);
    Runner runner(cfg, rep);
    runner.validate_all();
    for (std::size_t i = 0; i < cfg.analyses.size(); ++i) {
        const auto& a = cfg.analyses[i];
        const auto t0 = std::chrono::steady_clock::now();
        Json res;
        try {
            res = runner.run_one(a, i);
            res["status"] = "ok";
        } catch (const std::exception& e) {
            res = {{"type", a.type}, {"status", "error"}, {"error", e.what()}};
        }
        rep.results.push_back(std::move(res));
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        rep.wall_times[a.type + "_" + std::to_string(i)] = dt.count();
    }
    return rep;
}

}  // namespace bjm
