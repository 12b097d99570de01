#include "bjm/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bjm/errors.hpp"
#include "bjm/fixtures.hpp"

namespace bjm {

namespace {

// Object reader that remembers which keys were consumed.
class Reader {
public:
    Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ParseError(path_, "expected an object");
    }

    const std::string& path() const { return path_; }
    std::string sub(const std::string& key) const { return path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& get(const std::string& key) {
        if (!j_.contains(key)) throw ParseError(sub(key), "missing required key");
        seen_.insert(key);
        return j_.at(key);
    }
    const Json* maybe(const std::string& key) {
        if (!j_.contains(key)) return nullptr;
        seen_.insert(key);
        return &j_.at(key);
    }

    /// Rejects keys that were not consumed and are not in `allowed`.
    void finish(std::initializer_list<const char*> allowed = {}) const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (seen_.count(it.key())) continue;
            if (std::any_of(allowed.begin(), allowed.end(),
                            [&](const char* a) { return it.key() == a; })) {
                continue;
            }
            throw ParseError(sub(it.key()), "unknown key");
        }
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

double as_double(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(path, "expected a finite number");
    return v;
}

std::int64_t as_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
    return j.get<std::int64_t>();
}

std::size_t as_count(const Json& j, const std::string& path) {
    const std::int64_t v = as_int(j, path);
    if (v < 0) throw ParseError(path, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::string as_string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ParseError(path, "expected a string");
    return j.get<std::string>();
}

std::complex<double> as_complex(const Json& j, const std::string& path) {
    if (j.is_number()) return {as_double(j, path), 0.0};
    if (j.is_array() && j.size() == 2) {
        return {as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]")};
    }
    throw ParseError(path, "expected a number or a [re, im] pair");
}

const Json& as_array(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array");
    return j;
}

std::vector<std::complex<double>> as_complex_list(const Json& j, const std::string& path) {
    std::vector<std::complex<double>> out;
    const Json& arr = as_array(j, path);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(as_complex(arr[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

MatrixSpec as_matrix(const Json& j, const std::string& path, int dim) {
    const Json& rows = as_array(j, path);
    if (rows.size() != static_cast<std::size_t>(dim)) {
        throw ParseError(path, "expected " + std::to_string(dim) + " rows");
    }
    MatrixSpec m;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        auto row = as_complex_list(rows[r], rp);
        if (row.size() != static_cast<std::size_t>(dim)) {
            throw ParseError(rp, "expected " + std::to_string(dim) + " columns");
        }
        m.push_back(std::move(row));
    }
    return m;
}

std::vector<MatrixSpec> as_matrix_list(const Json& j, const std::string& path, int dim) {
    std::vector<MatrixSpec> out;
    const Json& arr = as_array(j, path);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(as_matrix(arr[i], path + "[" + std::to_string(i) + "]", dim));
    }
    return out;
}

std::pair<double, double> as_range(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw ParseError(path, "expected [lo, hi]");
    std::pair<double, double> r{as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]")};
    if (!(r.first < r.second)) throw ParseError(path, "range must be non-empty");
    return r;
}

WeightSpec parse_weight(const Json& j, const std::string& path) {
    Reader rd(j, path);
    WeightSpec w;
    w.kind = as_string(rd.get("kind"), rd.sub("kind"));
    if (const Json* s = rd.maybe("scale")) w.scale = as_double(*s, rd.sub("scale"));
    if (w.kind == "power") {
        w.exponent = as_double(rd.get("exponent"), rd.sub("exponent"));
        if (const Json* o = rd.maybe("offset")) w.offset = as_double(*o, rd.sub("offset"));
        if (!(w.exponent > 0.0)) throw ParseError(rd.sub("exponent"), "must be positive");
        if (!(w.offset >= 1.0)) throw ParseError(rd.sub("offset"), "must be >= 1");
    } else if (w.kind == "log_product" || w.kind == "reciprocal_log_product") {
        w.offset = 3.0;
        const std::int64_t K = as_int(rd.get("K"), rd.sub("K"));
        if (K < 1) throw ParseError(rd.sub("K"), "must be positive");
        w.K = static_cast<int>(K);
        if (const Json* o = rd.maybe("offset")) w.offset = as_double(*o, rd.sub("offset"));
        try {
            if (!(iter_log(w.K, w.offset) > 0.0)) throw DomainError("");
        } catch (const DomainError&) {
            throw ParseError(rd.sub("offset"), "log^{(K)}(offset) must be positive");
        }
    } else if (w.kind == "geometric") {
        w.ratio = as_double(rd.get("ratio"), rd.sub("ratio"));
        if (!(w.ratio > 0.0)) throw ParseError(rd.sub("ratio"), "must be positive");
    } else if (w.kind == "tabulated") {
        const Json& vals = as_array(rd.get("values"), rd.sub("values"));
        for (std::size_t i = 0; i < vals.size(); ++i) {
            w.values.push_back(as_double(vals[i], rd.sub("values") + "[" + std::to_string(i) + "]"));
        }
    } else if (w.kind == "constant") {
        w.value = as_double(rd.get("value"), rd.sub("value"));
    } else if (w.kind != "block_sqrt_log" && w.kind != "block_inv_klog") {
        throw ParseError(rd.sub("kind"), "unknown weight kind '" + w.kind + "'");
    }
    rd.finish();
    return w;
}

Json complex_json(std::complex<double> c) {
    if (c.imag() == 0.0) return c.real();
    return Json::array({c.real(), c.imag()});
}

Json matrix_json(const MatrixSpec& m) {
    Json rows = Json::array();
    for (const auto& r : m) {
        Json row = Json::array();
        for (auto c : r) row.push_back(complex_json(c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json matrix_list_json(const std::vector<MatrixSpec>& ms) {
    Json out = Json::array();
    for (const auto& m : ms) out.push_back(matrix_json(m));
    return out;
}

Json weight_json(const WeightSpec& w) {
    Json j;
    j["kind"] = w.kind;
    if (w.kind == "power") {
        j["exponent"] = w.exponent;
        j["offset"] = w.offset;
    } else if (w.kind == "log_product" || w.kind == "reciprocal_log_product") {
        j["K"] = w.K;
        j["offset"] = w.offset;
    } else if (w.kind == "geometric") {
        j["ratio"] = w.ratio;
    } else if (w.kind == "tabulated") {
        j["values"] = w.values;
    } else if (w.kind == "constant") {
        j["value"] = w.value;
    }
    j["scale"] = w.scale;
    return j;
}

ScalarWeight build_weight(const WeightSpec& w) {
    if (w.kind == "power") return ScalarWeight(weight::Power{w.exponent, w.offset}, w.scale);
    if (w.kind == "block_sqrt_log") return ScalarWeight(weight::BlockRepeatedSqrtLog{}, w.scale);
    if (w.kind == "block_inv_klog") return ScalarWeight(weight::BlockRepeatedInvKLog{}, w.scale);
    if (w.kind == "log_product") return ScalarWeight(weight::LogProduct{w.K, w.offset}, w.scale);
    if (w.kind == "reciprocal_log_product") {
        return ScalarWeight(weight::ReciprocalLogProduct{w.K, w.offset}, w.scale);
    }
    if (w.kind == "geometric") return ScalarWeight(weight::Geometric{w.ratio}, w.scale);
    if (w.kind == "tabulated") return ScalarWeight(weight::Tabulated{w.values}, w.scale);
    return ScalarWeight(weight::Constant{w.value}, w.scale);
}

const std::set<std::string>& analysis_types() {
    static const std::set<std::string> t{
        "validate",   "carleman",          "variation",     "lambda_scan", "coupling_scan",
        "band",       "turan_convergence", "commutator",    "spec2",       "spec3",
        "indeterminacy", "exact_asymptotics", "christoffel"};
    return t;
}

bool uses_z(const std::string& t) {
    return t == "band" || t == "turan_convergence" || t == "indeterminacy" ||
           t == "exact_asymptotics" || t == "christoffel";
}
bool uses_alphas(const std::string& t) {
    return t == "band" || t == "turan_convergence" || t == "exact_asymptotics" ||
           t == "christoffel";
}
bool uses_scan(const std::string& t) {
    return t == "lambda_scan" || t == "coupling_scan" || t == "indeterminacy";
}
bool uses_strategy(const std::string& t) { return t == "commutator"; }
bool uses_log_params(const std::string& t) { return t == "commutator" || t == "spec3"; }

AnalysisSpec parse_analysis(const Json& j, const std::string& path, int dim) {
    Reader rd(j, path);
    AnalysisSpec a;
    a.type = as_string(rd.get("type"), rd.sub("type"));
    if (!analysis_types().count(a.type)) {
        throw ParseError(rd.sub("type"), "unknown analysis type '" + a.type + "'");
    }
    if (const Json* h = rd.maybe("horizon")) {
        a.horizon = as_count(*h, rd.sub("horizon"));
        if (*a.horizon < 100) throw ParseError(rd.sub("horizon"), "must be at least 100");
    }
    if (uses_scan(a.type)) {
        if (const Json* r = rd.maybe("range")) a.range = as_range(*r, rd.sub("range"));
        if (const Json* g = rd.maybe("grid")) a.grid = as_count(*g, rd.sub("grid"));
        if (a.grid < 2) throw ParseError(rd.sub("grid"), "must be at least 2");
        if (const Json* e = rd.maybe("eps")) a.eps = as_double(*e, rd.sub("eps"));
        if (!(a.eps > 0.0)) throw ParseError(rd.sub("eps"), "must be positive");
    }
    if (a.type == "coupling_scan") {
        if (const Json* l = rd.maybe("lambda")) a.lambda = as_double(*l, rd.sub("lambda"));
    }
    if (uses_z(a.type)) {
        a.z = as_complex_list(rd.get("z"), rd.sub("z"));
        if (a.z.empty()) throw ParseError(rd.sub("z"), "must not be empty");
    }
    if (uses_alphas(a.type)) {
        if (const Json* al = rd.maybe("alphas")) {
            const Json& arr = as_array(*al, rd.sub("alphas"));
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string p = rd.sub("alphas") + "[" + std::to_string(i) + "]";
                auto v = as_complex_list(arr[i], p);
                if (v.size() != static_cast<std::size_t>(2 * dim)) {
                    throw ParseError(p, "expected " + std::to_string(2 * dim) + " entries");
                }
                if (std::all_of(v.begin(), v.end(), [](auto c) { return c == 0.0; })) {
                    throw ParseError(p, "initial condition must be non-zero");
                }
                a.alphas.push_back(std::move(v));
            }
        }
        if (const Json* r = rd.maybe("random_alphas")) {
            a.random_alphas = as_count(*r, rd.sub("random_alphas"));
        }
        if (a.alphas.empty() && a.random_alphas == 0) {
            throw ParseError(rd.sub("alphas"), "give alphas or random_alphas");
        }
    }
    if (uses_strategy(a.type)) {
        if (const Json* s = rd.maybe("strategy")) a.strategy = as_string(*s, rd.sub("strategy"));
        if (a.strategy != "identity" && a.strategy != "an" && a.strategy != "log") {
            throw ParseError(rd.sub("strategy"), "expected identity, an or log");
        }
        if (const Json* l = rd.maybe("lambdas")) {
            const Json& arr = as_array(*l, rd.sub("lambdas"));
            for (std::size_t i = 0; i < arr.size(); ++i) {
                a.lambdas.push_back(as_double(arr[i], rd.sub("lambdas") + "[" + std::to_string(i) + "]"));
            }
        }
        if (a.lambdas.empty()) a.lambdas = {0.0};
    }
    if (uses_log_params(a.type)) {
        if (const Json* k = rd.maybe("K")) {
            const std::int64_t K = as_int(*k, rd.sub("K"));
            if (K < 1) throw ParseError(rd.sub("K"), "must be positive");
            a.K = static_cast<int>(K);
        }
        if (const Json* s = rd.maybe("n_start")) a.n_start = as_count(*s, rd.sub("n_start"));
        try {
            if (!(iter_log(a.K, static_cast<double>(a.n_start)) > 0.0)) throw DomainError("");
        } catch (const DomainError&) {
            throw ParseError(rd.sub("n_start"), "log^{(K)}(n_start) must be positive");
        }
    }
    rd.finish();
    return a;
}

}  // namespace

FamilySpec parse_family(const Json& doc, const std::string& path) {
    Reader rd(doc, path);
    if (rd.has("fixture")) {
        const std::string name = as_string(rd.get("fixture"), rd.sub("fixture"));
        rd.finish();
        try {
            return fixture_family(name);
        } catch (const ParseError&) {
            throw ParseError(rd.sub("fixture"), "unknown fixture '" + name + "'");
        }
    }
    FamilySpec f;
    f.kind = as_string(rd.get("kind"), rd.sub("kind"));
    const std::int64_t dim = as_int(rd.get("dim"), rd.sub("dim"));
    if (dim < 1 || dim > 64) throw ParseError(rd.sub("dim"), "must be between 1 and 64");
    f.dim = static_cast<int>(dim);
    if (const Json* n = rd.maybe("N")) {
        f.N = as_count(*n, rd.sub("N"));
        if (f.N < 1) throw ParseError(rd.sub("N"), "must be positive");
    }
    if (const Json* d = rd.maybe("description")) f.description = as_string(*d, rd.sub("description"));
    if (f.kind == "constant") {
        f.a = as_matrix(rd.get("a"), rd.sub("a"), f.dim);
        f.b = as_matrix(rd.get("b"), rd.sub("b"), f.dim);
    } else if (f.kind == "scaled_periodic") {
        f.x = parse_weight(rd.get("x"), rd.sub("x"));
        f.y = parse_weight(rd.get("y"), rd.sub("y"));
        f.X = as_matrix_list(rd.get("X"), rd.sub("X"), f.dim);
        f.Y = as_matrix_list(rd.get("Y"), rd.sub("Y"), f.dim);
        if (f.X.empty() || f.X.size() != f.Y.size()) {
            throw ParseError(rd.sub("Y"), "X and Y must be non-empty lists of equal length");
        }
    } else if (f.kind == "tabulated") {
        f.a_list = as_matrix_list(rd.get("a"), rd.sub("a"), f.dim);
        f.b_list = as_matrix_list(rd.get("b"), rd.sub("b"), f.dim);
        if (f.a_list.size() != f.b_list.size()) {
            throw ParseError(rd.sub("b"), "a and b must have equal length");
        }
    } else {
        throw ParseError(rd.sub("kind"), "unknown family kind '" + f.kind + "'");
    }
    rd.finish();
    return f;
}

AnalysisConfig parse_config(const Json& doc) {
    Reader rd(doc, "$");
    AnalysisConfig cfg;
    cfg.family = parse_family(rd.get("family"), "$.family");
    if (const Json* h = rd.maybe("horizon")) {
        cfg.horizon = as_count(*h, "$.horizon");
        if (cfg.horizon < 100) throw ParseError("$.horizon", "must be at least 100");
    }
    if (const Json* s = rd.maybe("seed")) {
        if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<std::int64_t>() >= 0)) {
            throw ParseError("$.seed", "expected a non-negative integer");
        }
        cfg.seed = s->get<std::uint64_t>();
    }
    if (const Json* o = rd.maybe("output")) {
        Reader out(*o, "$.output");
        if (const Json* d = out.maybe("dir")) cfg.out_dir = as_string(*d, "$.output.dir");
        if (const Json* f = out.maybe("format")) cfg.format = as_string(*f, "$.output.format");
        if (cfg.format != "json" && cfg.format != "csv") {
            throw ParseError("$.output.format", "expected json or csv");
        }
        out.finish();
    }
    if (const Json* an = rd.maybe("analyses")) {
        const Json& arr = as_array(*an, "$.analyses");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            cfg.analyses.push_back(
                parse_analysis(arr[i], "$.analyses[" + std::to_string(i) + "]", cfg.family.dim));
        }
    }
    rd.finish();
    return cfg;
}

AnalysisConfig parse_config(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError("$", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

Json to_json(const FamilySpec& f) {
    Json j;
    j["kind"] = f.kind;
    j["dim"] = f.dim;
    j["N"] = f.N;
    if (!f.description.empty()) j["description"] = f.description;
    if (f.kind == "constant") {
        j["a"] = matrix_json(f.a);
        j["b"] = matrix_json(f.b);
    } else if (f.kind == "scaled_periodic") {
        j["x"] = weight_json(f.x);
        j["y"] = weight_json(f.y);
        j["X"] = matrix_list_json(f.X);
        j["Y"] = matrix_list_json(f.Y);
    } else {
        j["a"] = matrix_list_json(f.a_list);
        j["b"] = matrix_list_json(f.b_list);
    }
    return j;
}

Json to_json(const AnalysisSpec& a) {
    Json j;
    j["type"] = a.type;
    if (a.horizon) j["horizon"] = *a.horizon;
    if (uses_scan(a.type)) {
        j["range"] = Json::array({a.range.first, a.range.second});
        j["grid"] = a.grid;
        j["eps"] = a.eps;
    }
    if (a.type == "coupling_scan") j["lambda"] = a.lambda;
    if (uses_z(a.type)) {
        Json z = Json::array();
        for (auto c : a.z) z.push_back(complex_json(c));
        j["z"] = std::move(z);
    }
    if (uses_alphas(a.type)) {
        if (!a.alphas.empty()) {
            Json al = Json::array();
            for (const auto& v : a.alphas) {
                Json row = Json::array();
                for (auto c : v) row.push_back(complex_json(c));
                al.push_back(std::move(row));
            }
            j["alphas"] = std::move(al);
        }
        if (a.random_alphas) j["random_alphas"] = a.random_alphas;
    }
    if (uses_strategy(a.type)) {
        j["strategy"] = a.strategy;
        j["lambdas"] = a.lambdas;
    }
    if (uses_log_params(a.type)) {
        j["K"] = a.K;
        j["n_start"] = a.n_start;
    }
    return j;
}

Json to_json(const AnalysisConfig& cfg) {
    Json j;
    j["family"] = to_json(cfg.family);
    j["horizon"] = cfg.horizon;
    j["seed"] = cfg.seed;
    j["output"] = {{"dir", cfg.out_dir}, {"format", cfg.format}};
    Json an = Json::array();
    for (const auto& a : cfg.analyses) an.push_back(to_json(a));
    j["analyses"] = std::move(an);
    return j;
}

std::string emit_config(const AnalysisConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

Operator to_operator(const MatrixSpec& m) {
    const int d = static_cast<int>(m.size());
    Matrix out(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) out(r, c) = m[r][c];
    }
    return Operator(std::move(out));
}

CoefficientFamily build_family(const FamilySpec& f) {
    auto ops = [](const std::vector<MatrixSpec>& ms) {
        std::vector<Operator> out;
        for (const auto& m : ms) out.push_back(to_operator(m));
        return out;
    };
    if (f.kind == "constant") {
        return CoefficientFamily(f.dim, family::Constant{to_operator(f.a), to_operator(f.b)},
                                 f.description);
    }
    if (f.kind == "scaled_periodic") {
        return CoefficientFamily(
            f.dim, family::ScaledPeriodic{build_weight(f.x), build_weight(f.y), ops(f.X), ops(f.Y)},
            f.description);
    }
    if (f.kind == "tabulated") {
        return CoefficientFamily(f.dim, family::Tabulated{ops(f.a_list), ops(f.b_list)},
                                 f.description);
    }
    throw PreconditionError("build_family: unknown kind '" + f.kind + "'");
}

}  // namespace bjm
