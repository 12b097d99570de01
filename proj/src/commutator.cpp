#include "bjm/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "bjm/errors.hpp"

namespace bjm {

AlphaStrategy::AlphaStrategy(Kind kind) : kind_(std::move(kind)) {
    if (const auto* l = std::get_if<alpha::Log>(&kind_)) {
        if (l->K < 1) throw DomainError("log weights need K >= 1");
        if (!(iter_log(l->K, static_cast<double>(l->n_start)) > 0.0)) {
            throw DomainError("log weights need log^{(K)}(n_start) > 0");
        }
    }
    if (const auto* c = std::get_if<alpha::Custom>(&kind_)) {
        if (!c->f) throw PreconditionError("custom weights need a callable");
    }
}

std::string AlphaStrategy::name() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, alpha::Identity>) return "identity";
            else if constexpr (std::is_same_v<K, alpha::AN>) return "an";
            else if constexpr (std::is_same_v<K, alpha::Log>) {
                return "log(K=" + std::to_string(k.K) + ",n_start=" + std::to_string(k.n_start) + ")";
            } else return "custom";
        },
        kind_);
}

Operator AlphaStrategy::operator()(const CoefficientFamily& fam, std::size_t n) const {
    return std::visit(
        [&](const auto& k) -> Operator {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, alpha::Identity>) {
                return Operator::identity(fam.dim());
            } else if constexpr (std::is_same_v<K, alpha::AN>) {
                return fam.a(n);
            } else if constexpr (std::is_same_v<K, alpha::Log>) {
                if (n < k.n_start) return Operator::identity(fam.dim());
                const double nd = static_cast<double>(n);
                return Complex(nd * g_product(k.K, nd)) * fam.a_inv(n).adjoint();
            } else {
                return k.f(n);
            }
        },
        kind_);
}

namespace {

void require_index(std::size_t n, const char* who) {
    if (n < 1) throw PreconditionError(std::string(who) + ": n must be >= 1");
}

// a_{n-1}^{-1} alpha_{n-1} a_n.
Operator carried(const CoefficientFamily& fam, const AlphaStrategy& s, std::size_t n) {
    return fam.a_inv(n - 1) * s(fam, n - 1) * fam.a(n);
}

Operator shifted(const CoefficientFamily& fam, std::size_t n, double lambda) {
    return Operator(Complex(lambda) * Matrix::Identity(fam.dim(), fam.dim())) - fam.b(n);
}

double quad(const BlockOperator& x, const Vector& v) { return v.dot(x.matrix() * v).real(); }

}  // namespace

BlockOperator commutator_form(const CoefficientFamily& fam, const AlphaStrategy& s, std::size_t n,
                              double lambda) {
    require_index(n, "commutator_form");
    const Operator a = fam.a(n);
    const Operator c = carried(fam, s, n);
    return sym(BlockOperator(s(fam, n) * a.adjoint(), -(shifted(fam, n, lambda) * c),
                             Operator::zero(fam.dim()), a.adjoint() * c));
}

BlockOperator commutator_form_direct(const CoefficientFamily& fam, const AlphaStrategy& s,
                                     std::size_t n, double lambda) {
    require_index(n, "commutator_form_direct");
    const Operator prev_alpha = s(fam, n - 1);
    return sym(BlockOperator(prev_alpha * fam.a(n - 1).adjoint(),
                             -(prev_alpha * shifted(fam, n, lambda)), Operator::zero(fam.dim()),
                             s(fam, n) * fam.a(n).adjoint()));
}

double commutator_value(const CoefficientFamily& fam, const AlphaStrategy& s, std::size_t n,
                        const Trajectory& traj) {
    if (n + 1 > traj.horizon()) throw PreconditionError("commutator_value: index outside trajectory");
    if (traj.z.imag() != 0.0) throw PreconditionError("commutator_value: lambda must be real");
    return quad(commutator_form(fam, s, n, traj.z.real()), traj.pair(n + 1));
}

double commutator_value_direct(const CoefficientFamily& fam, const AlphaStrategy& s, std::size_t n,
                               const Trajectory& traj) {
    if (n < 1 || n > traj.horizon()) {
        throw PreconditionError("commutator_value_direct: index outside trajectory");
    }
    if (traj.z.imag() != 0.0) throw PreconditionError("commutator_value_direct: lambda must be real");
    return quad(commutator_form_direct(fam, s, n, traj.z.real()), traj.pair(n));
}

double commutator_increment_bound(const CoefficientFamily& fam, const AlphaStrategy& s,
                                  std::size_t n, double lambda) {
    require_index(n, "commutator_increment_bound");
    const Operator c = carried(fam, s, n);
    const Operator alpha_n = s(fam, n);
    const Operator lead = s(fam, n + 1) * fam.a(n + 1).adjoint() - fam.a(n).adjoint() * c;
    return op_norm(neg_part(sym(lead))) + std::abs(lambda) * op_norm(c - alpha_n) +
           op_norm(alpha_n * fam.b(n + 1) - fam.b(n) * c);
}

CLimit c_limit(const CoefficientFamily& fam, const AlphaStrategy& s, double lambda,
               std::size_t horizon, double eps) {
    if (horizon < 100) throw PreconditionError("c_limit: horizon must be >= 100");
    auto normalized = [&](std::size_t n) {
        const double w = op_norm(s(fam, n) * fam.a(n).adjoint());
        return Operator(commutator_form(fam, s, n, lambda).matrix() / w);
    };
    const LimitEstimate e = sequence_limit(normalized, 1, 1, horizon - 1);
    CLimit out;
    out.value = BlockOperator(Matrix(e.value.matrix()));
    out.cauchy_residual = e.cauchy_residual;
    out.extrapolation_residual = e.extrapolation_residual;
    out.converged = e.converged;
    out.definiteness = classify_definiteness(sym(e.value), eps);
    return out;
}

bool ConditionReport::all_satisfied() const {
    return std::all_of(conditions.begin(), conditions.end(),
                       [](const Condition& c) { return c.satisfied; });
}

ConditionReport thmA_conditions(const CoefficientFamily& fam, const AlphaStrategy& s,
                                std::size_t horizon) {
    if (horizon < 10) throw PreconditionError("thmA_conditions: horizon too short");
    ConditionReport rep;
    rep.strategy = s.name();
    Condition a{"a", 1, {}, {}, false}, b{"b", 1, {}, {}, false}, c{"c", 1, {}, {}, false},
        d{"d", 0, {}, {}, false};
    for (std::size_t n = 0; n < horizon; ++n) {
        const Operator alpha_n = s(fam, n);
        const double w = op_norm(alpha_n * fam.a(n).adjoint());
        d.terms.push_back(1.0 / w);
        if (n == 0) continue;
        const Operator car = carried(fam, s, n);
        const Operator lead = s(fam, n + 1) * fam.a(n + 1).adjoint() - fam.a(n).adjoint() * car;
        a.terms.push_back(op_norm(neg_part(sym(lead))) / w);
        b.terms.push_back(op_norm(car - alpha_n) / w);
        c.terms.push_back(op_norm(alpha_n * fam.b(n + 1) - fam.b(n) * car) / w);
    }
    for (Condition* k : {&a, &b, &c}) {
        k->evidence = classify_series(k->terms, k->first_index);
        k->satisfied = k->evidence.verdict == SeriesVerdict::Converges;
    }
    d.evidence = classify_series(d.terms, 0, SeriesOptions{.abs_floor = 0.0});
    d.satisfied = d.evidence.verdict == SeriesVerdict::Diverges;
    rep.conditions = {std::move(a), std::move(b), std::move(c), std::move(d)};
    return rep;
}

bool HypothesisReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check& HypothesisReport::at(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    throw PreconditionError("no check named " + name);
}

namespace {

Check decay_check(std::string name, const std::vector<double>& v, std::size_t first) {
    const DecayEvidence e = decays_to_zero(v, first);
    Check c;
    c.name = std::move(name);
    c.passed = e.tends_to_zero;
    c.value = e.last_value;
    c.detail = "log-log slope " + std::to_string(e.slope);
    return c;
}

Check series_check(std::string name, const std::vector<double>& terms, std::size_t first,
                   SeriesVerdict wanted, const SeriesOptions& opts = {}) {
    Check c;
    c.name = std::move(name);
    const SeriesEvidence e = classify_series(terms, first, opts);
    c.passed = e.verdict == wanted;
    c.value = e.partial_sum;
    c.evidence = e;
    c.detail = std::string("verdict ") + std::string(to_string(e.verdict));
    return c;
}

}  // namespace

HypothesisReport check_spec2(const CoefficientFamily& fam, std::size_t horizon) {
    if (horizon < 100) throw PreconditionError("check_spec2: horizon must be >= 100");
    HypothesisReport rep;
    rep.theorem = "spec2";
    std::vector<double> inv, inv_b, ta, tb, tc;
    for (std::size_t n = 0; n < horizon; ++n) {
        const Operator ai = fam.a_inv(n);
        const double norm2 = fam.a_norm(n) * fam.a_norm(n);
        inv.push_back(op_norm(ai));
        inv_b.push_back(op_norm(ai * fam.b(n)));
        tc.push_back(1.0 / norm2);
        if (n == 0) continue;
        const Operator a = fam.a(n), a1 = fam.a(n + 1);
        const Operator diff = a1 * a1.adjoint() - a.adjoint() * a;
        ta.push_back(op_norm(neg_part(sym(diff))) / norm2);
        tb.push_back(op_norm(a * fam.b(n + 1) - fam.b(n) * a) / norm2);
    }
    rep.checks.push_back(decay_check("a_inv_to_zero", inv, 0));
    rep.checks.push_back(decay_check("a_inv_b_to_zero", inv_b, 0));
    rep.checks.push_back(series_check("a", ta, 1, SeriesVerdict::Converges));
    rep.checks.push_back(series_check("b", tb, 1, SeriesVerdict::Converges));
    rep.checks.push_back(series_check("c", tc, 0, SeriesVerdict::Diverges, {.abs_floor = 0.0}));

    Check lim;
    lim.name = "C_invertible";
    const LimitEstimate e = sequence_limit(
        [&](std::size_t n) { return Operator(fam.a(n).matrix() / fam.a_norm(n)); }, 0, 1,
        horizon - 1);
    lim.value = e.cauchy_residual;
    lim.passed = e.converged;
    if (!e.converged) {
        lim.detail = "a_n / ||a_n|| does not converge";
    } else {
        try {
            const Inversion inv_c = invert_with_condition(e.value);
            lim.detail = "condition " + std::to_string(inv_c.condition);
        } catch (const SingularError& err) {
            lim.passed = false;
            lim.detail = err.what();
        }
    }
    rep.checks.push_back(std::move(lim));
    return rep;
}

HypothesisReport check_spec3(const CoefficientFamily& fam, int K, std::size_t n_start,
                             std::size_t horizon) {
    if (horizon < 100) throw PreconditionError("check_spec3: horizon must be >= 100");
    if (K < 1 || !(iter_log(K, static_cast<double>(n_start)) > 0.0)) {
        throw PreconditionError("check_spec3: need K >= 1 and log^{(K)}(n_start) > 0");
    }
    HypothesisReport rep;
    rep.theorem = "spec3";
    std::vector<double> inv, slack, b_norm, comm, weighted_inv;
    for (std::size_t n = 0; n < horizon; ++n) {
        const Operator ai = fam.a_inv(n);
        inv.push_back(op_norm(ai));
        b_norm.push_back(op_norm(fam.b(n)));
        comm.push_back(op_norm(ai * fam.b(n) - fam.b(n + 1) * ai));
        if (n >= 1) weighted_inv.push_back(inv.back() / static_cast<double>(n));
        if (n > n_start) {
            const double nd = static_cast<double>(n);
            double env = 1.0 + 1.0 / nd;
            for (int j = 1; j <= K; ++j) env += 1.0 / (nd * g_product(j, nd));
            const auto [lo, hi] =
                hermitian_extremes(abs_val(fam.a_inv(n - 1).adjoint() * fam.a(n)));
            slack.push_back(std::max({0.0, 1.0 - lo, hi - env}));
        }
    }
    rep.checks.push_back(decay_check("a", inv, 0));
    rep.checks.push_back(series_check("b", slack, n_start + 1, SeriesVerdict::Converges));
    rep.checks.back().detail += " (summability of the envelope slack c_n)";

    const BoundEvidence bounded = stays_bounded(b_norm, 0);
    Check cb;
    cb.name = "c_bounded";
    cb.passed = bounded.bounded;
    cb.value = bounded.sup;
    cb.detail = "log-log slope " + std::to_string(bounded.slope);
    rep.checks.push_back(std::move(cb));
    rep.checks.push_back(series_check("c_sum", comm, 0, SeriesVerdict::Converges));
    rep.checks.push_back(series_check("d", weighted_inv, 1, SeriesVerdict::Converges));
    return rep;
}

}  // namespace bjm
