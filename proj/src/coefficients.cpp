#include "bjm/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "bjm/errors.hpp"

namespace bjm {

double iter_log(int i, double x) {
    if (i < 0) throw DomainError("iter_log: negative iteration count");
    double v = x;
    for (int k = 0; k < i; ++k) {
        if (!(v > 0.0)) throw DomainError("iter_log: logarithm of a non-positive value");
        v = std::log(v);
    }
    return v;
}

double g_product(int j, double x) {
    double prod = 1.0;
    double v = x;
    for (int i = 1; i <= j; ++i) {
        if (!(v > 0.0)) throw DomainError("g_product: logarithm of a non-positive value");
        v = std::log(v);
        prod *= v;
    }
    return prod;
}

std::size_t block_index(std::size_t n) {
    // Block k covers positions [k(k-1)/2, k(k+1)/2).
    auto k = static_cast<std::size_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(n))) / 2.0);
    while (k > 1 && k * (k - 1) / 2 > n) --k;
    while (k * (k + 1) / 2 <= n) ++k;
    return k;
}

ScalarWeight::ScalarWeight(Kind kind, double scale) : kind_(std::move(kind)), scale_(scale) {
    if (const auto* lp = std::get_if<weight::LogProduct>(&kind_)) {
        if (lp->K < 0 || !(iter_log(lp->K, lp->offset) > 0.0)) {
            throw DomainError("LogProduct weight requires log^{(K)}(offset) > 0");
        }
    }
    if (const auto* rl = std::get_if<weight::ReciprocalLogProduct>(&kind_)) {
        if (rl->K < 0 || !(iter_log(rl->K, rl->offset) > 0.0)) {
            throw DomainError("ReciprocalLogProduct weight requires log^{(K)}(offset) > 0");
        }
    }
    if (const auto* p = std::get_if<weight::Power>(&kind_)) {
        if (!(p->exponent > 0.0) || !(p->offset >= 1.0)) {
            throw PreconditionError("Power weight requires exponent > 0 and offset >= 1");
        }
    }
}

double ScalarWeight::operator()(std::size_t n) const {
    const double nd = static_cast<double>(n);
    const double base = std::visit(
        [&](const auto& w) -> double {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, weight::Power>) {
                return std::pow(nd + w.offset, w.exponent);
            } else if constexpr (std::is_same_v<W, weight::BlockRepeatedSqrtLog>) {
                const double k = static_cast<double>(block_index(n));
                return k * std::sqrt(std::log(k + 1.0));
            } else if constexpr (std::is_same_v<W, weight::BlockRepeatedInvKLog>) {
                const double k = static_cast<double>(block_index(n));
                return 1.0 / (k * std::log(k + 1.0));
            } else if constexpr (std::is_same_v<W, weight::LogProduct>) {
                const double m = nd + w.offset;
                return m * g_product(w.K, m);
            } else if constexpr (std::is_same_v<W, weight::ReciprocalLogProduct>) {
                return 1.0 / iter_log(w.K, nd + w.offset);
            } else if constexpr (std::is_same_v<W, weight::Geometric>) {
                return std::pow(w.ratio, nd);
            } else if constexpr (std::is_same_v<W, weight::Tabulated>) {
                if (n >= w.values.size()) {
                    throw PreconditionError("tabulated weight: index past the end");
                }
                return w.values[n];
            } else {
                return w.value;
            }
        },
        kind_);
    return scale_ * base;
}

CoefficientFamily::CoefficientFamily(int dim, Kind kind, std::string description)
    : dim_(dim), kind_(std::move(kind)), description_(std::move(description)) {
    if (dim_ < 1) throw PreconditionError("CoefficientFamily: dim must be positive");
    auto check = [&](const Operator& op, const char* what) {
        if (op.dim() != dim_) {
            throw PreconditionError(std::string("CoefficientFamily: ") + what +
                                    " has the wrong dimension");
        }
    };
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, family::Constant>) {
                check(f.a, "a");
                check(f.b, "b");
            } else if constexpr (std::is_same_v<F, family::ScaledPeriodic>) {
                if (f.X.empty() || f.X.size() != f.Y.size()) {
                    throw PreconditionError(
                        "CoefficientFamily: X and Y must be non-empty lists of equal period");
                }
                for (const auto& x : f.X) check(x, "X");
                for (const auto& y : f.Y) check(y, "Y");
            } else if constexpr (std::is_same_v<F, family::Tabulated>) {
                if (f.a.size() != f.b.size()) {
                    throw PreconditionError("CoefficientFamily: a and b lists differ in length");
                }
                for (const auto& x : f.a) check(x, "a");
                for (const auto& y : f.b) check(y, "b");
            } else {
                if (!f.a || !f.b) throw PreconditionError("CoefficientFamily: empty callable");
            }
        },
        kind_);
}

std::size_t CoefficientFamily::available() const noexcept {
    if (const auto* t = std::get_if<family::Tabulated>(&kind_)) return t->a.size();
    return std::numeric_limits<std::size_t>::max();
}

Operator CoefficientFamily::eval_a(std::size_t n) const {
    return std::visit(
        [&](const auto& f) -> Operator {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, family::Constant>) {
                return f.a;
            } else if constexpr (std::is_same_v<F, family::ScaledPeriodic>) {
                return Complex(f.x(n)) * f.X[n % f.X.size()];
            } else if constexpr (std::is_same_v<F, family::Tabulated>) {
                if (n >= f.a.size()) throw PreconditionError("tabulated family: index past the end");
                return f.a[n];
            } else {
                return f.a(n);
            }
        },
        kind_);
}

Operator CoefficientFamily::eval_b(std::size_t n) const {
    return std::visit(
        [&](const auto& f) -> Operator {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, family::Constant>) {
                return f.b;
            } else if constexpr (std::is_same_v<F, family::ScaledPeriodic>) {
                return Complex(f.y(n)) * f.Y[n % f.Y.size()];
            } else if constexpr (std::is_same_v<F, family::Tabulated>) {
                if (n >= f.b.size()) throw PreconditionError("tabulated family: index past the end");
                return f.b[n];
            } else {
                return f.b(n);
            }
        },
        kind_);
}

const CoefficientFamily::Entry& CoefficientFamily::entry(std::size_t n) const {
    {
        std::lock_guard lock(mutex_);
        if (n < cache_.size() && cache_[n]) return *cache_[n];
    }
    auto e = std::make_unique<Entry>();
    e->a = eval_a(n);
    e->b = eval_b(n);
    if (e->a.dim() != dim_ || e->b.dim() != dim_) {
        throw PreconditionError("CoefficientFamily: generator returned the wrong dimension");
    }
    if (e->a.is_finite()) {
        e->a_norm = op_norm(e->a);
        try {
            e->a_inv = invert(e->a);
            e->has_inv = true;
        } catch (const SingularError&) {
            e->has_inv = false;
        }
    } else {
        e->a_norm = std::numeric_limits<double>::infinity();
    }
    std::lock_guard lock(mutex_);
    if (cache_.size() <= n) cache_.resize(n + 1);
    if (!cache_[n]) cache_[n] = std::move(e);
    return *cache_[n];
}

Operator CoefficientFamily::a(std::size_t n) const { return entry(n).a; }

Operator CoefficientFamily::b(std::size_t n) const { return entry(n).b; }

Operator CoefficientFamily::a_inv(std::size_t n) const {
    const Entry& e = entry(n);
    if (!e.has_inv) {
        throw SingularError("a_" + std::to_string(n) + " is not invertible",
                            std::numeric_limits<double>::infinity());
    }
    return e.a_inv;
}

double CoefficientFamily::a_norm(std::size_t n) const { return entry(n).a_norm; }

VariationReport total_variation(const std::function<Operator(std::size_t)>& seq, std::size_t N,
                                IndexRange window) {
    if (N == 0) throw PreconditionError("total_variation: N must be positive");
    VariationReport rep;
    rep.N = N;
    rep.window = window;
    std::vector<double> incr;
    incr.reserve(window.size());
    for (std::size_t n = window.start; n < window.end; ++n) {
        incr.push_back(op_norm(seq(n + N) - seq(n)));
        rep.partial_sum += incr.back();
        rep.running.push_back(rep.partial_sum);
    }
    if (incr.empty() || rep.partial_sum == 0.0) {
        rep.converged = true;
        return rep;
    }
    const std::size_t m = incr.size();
    const std::size_t tenth = std::max<std::size_t>(1, m / 10);
    double last = 0.0, before = 0.0;
    for (std::size_t i = m - tenth; i < m; ++i) last += incr[i];
    if (m >= 2 * tenth) {
        for (std::size_t i = m - 2 * tenth; i < m - tenth; ++i) before += incr[i];
    }
    rep.converged = last < 1e-8 * rep.partial_sum;
    if (before > 0.0 && last < before) {
        const double rho = last / before;
        rep.tail_estimate = last * rho / (1.0 - rho);
    } else {
        rep.tail_estimate = last > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return rep;
}

CarlemanReport carleman_diagnostic(const CoefficientFamily& fam, std::size_t horizon) {
    std::vector<double> terms;
    terms.reserve(horizon);
    for (std::size_t n = 0; n < horizon; ++n) {
        const double norm = fam.a_norm(n);
        terms.push_back(norm > 0.0 ? 1.0 / norm : std::numeric_limits<double>::infinity());
    }
    CarlemanReport rep;
    rep.evidence = classify_series(terms, 0, SeriesOptions{.abs_floor = 0.0});
    rep.partial_sum = rep.evidence.partial_sum;
    rep.verdict = rep.evidence.verdict;
    return rep;
}

std::string_view to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::SingularA: return "SingularA";
        case ViolationKind::NonHermitianB: return "NonHermitianB";
        case ViolationKind::NonFinite: return "NonFinite";
    }
    return "?";
}

std::vector<Violation> validate_family(const CoefficientFamily& fam, IndexRange range) {
    std::vector<Violation> out;
    for (std::size_t n = range.start; n < range.end; ++n) {
        const Operator a = fam.a(n);
        const Operator b = fam.b(n);
        if (!a.is_finite() || !b.is_finite()) {
            out.push_back({n, ViolationKind::NonFinite});
            continue;
        }
        try {
            (void)fam.a_inv(n);
        } catch (const SingularError&) {
            out.push_back({n, ViolationKind::SingularA});
        }
        if (!is_hermitian(b)) out.push_back({n, ViolationKind::NonHermitianB});
    }
    return out;
}

}  // namespace bjm
