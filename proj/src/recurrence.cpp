#include "bjm/recurrence.hpp"

#include <algorithm>
#include <cmath>

#include "bjm/errors.hpp"

namespace bjm {

namespace {

void require_positive_index(std::size_t n, const char* who) {
    if (n < 1) throw PreconditionError(std::string(who) + ": index must be >= 1");
}

}  // namespace

BlockOperator transfer(const CoefficientFamily& fam, std::size_t n, Complex z) {
    require_positive_index(n, "transfer");
    const int d = fam.dim();
    const Operator a_inv = fam.a_inv(n);
    const Operator shift = Operator(z * Matrix::Identity(d, d)) - fam.b(n);
    return BlockOperator(Operator::zero(d), Operator::identity(d),
                         -(a_inv * fam.a(n - 1).adjoint()), a_inv * shift);
}

BlockOperator transfer_inv(const CoefficientFamily& fam, std::size_t n, Complex z) {
    require_positive_index(n, "transfer_inv");
    const int d = fam.dim();
    const Operator prev_adj_inv = fam.a_inv(n - 1).adjoint();  // (a_{n-1}^*)^{-1}
    const Operator shift = Operator(z * Matrix::Identity(d, d)) - fam.b(n);
    return BlockOperator(prev_adj_inv * shift, -(prev_adj_inv * fam.a(n)), Operator::identity(d),
                         Operator::zero(d));
}

BlockOperator window_product(const CoefficientFamily& fam, Complex z, std::size_t n,
                             std::size_t N) {
    require_positive_index(n, "window_product");
    BlockOperator prod = BlockOperator::identity(fam.dim());
    for (std::size_t j = n; j < n + N; ++j) prod = transfer(fam, j, z) * prod;
    return prod;
}

Trajectory propagate(const CoefficientFamily& fam, Complex z, const Vector& alpha,
                     std::size_t M) {
    const int d = fam.dim();
    if (alpha.size() != 2 * d) throw PreconditionError("propagate: alpha must lie in H (+) H");
    if (alpha.norm() == 0.0) throw PreconditionError("propagate: alpha must be non-zero");
    if (M < 2) throw PreconditionError("propagate: horizon must be at least 2");

    Trajectory t;
    t.z = z;
    t.alpha = alpha;
    t.u.reserve(M + 1);
    t.u.push_back(alpha.head(d));
    t.u.push_back(alpha.tail(d));
    t.residuals.reserve(M);

    for (std::size_t n = 1; n < M; ++n) {
        const Matrix a_prev = fam.a(n - 1).matrix();
        const Matrix b = fam.b(n).matrix();
        const Operator a = fam.a(n);
        const Vector& um = t.u[n - 1];
        const Vector& u = t.u[n];
        const Vector rhs = z * u - b * u - a_prev.adjoint() * um;
        Vector next = fam.a_inv(n) * rhs;

        const double scale = std::max({um.norm(), u.norm(), next.norm()}) *
                             std::max({fam.a_norm(n - 1), b.norm(), fam.a_norm(n), std::abs(z),
                                       1e-300});
        const double res = (a_prev.adjoint() * um + b * u + a.matrix() * next - z * u).norm();
        t.residuals.push_back(scale > 0.0 ? res / scale : res);

        if (!next.allFinite() || next.norm() > kOverflowNorm) {
            t.overflow = true;
            t.residuals.pop_back();
            break;
        }
        t.u.push_back(std::move(next));
    }
    return t;
}

Vector formal_eigenvector_start(const CoefficientFamily& fam, Complex z, const Vector& u0) {
    if (u0.size() != fam.dim()) throw PreconditionError("formal_eigenvector_start: bad size");
    if (u0.norm() == 0.0) throw PreconditionError("formal_eigenvector_start: u0 must be non-zero");
    const Vector u1 = fam.a_inv(0) * (z * u0 - fam.b(0) * u0);
    return stack(u0, u1);
}

std::vector<double> weighted_norm_trace(const CoefficientFamily& fam, const Trajectory& traj) {
    std::vector<double> s;
    const std::size_t m = traj.horizon();
    s.reserve(m);
    for (std::size_t n = 1; n <= m; ++n) {
        s.push_back(fam.a_norm(n) * (traj.u[n - 1].squaredNorm() + traj.u[n].squaredNorm()));
    }
    return s;
}

std::string_view to_string(L2Verdict v) {
    switch (v) {
        case L2Verdict::SquareSummable: return "SquareSummable";
        case L2Verdict::NotSquareSummable: return "NotSquareSummable";
        case L2Verdict::Undecided: return "Undecided";
    }
    return "?";
}

L2Report l2_tail_diagnostic(const Trajectory& traj) {
    std::vector<double> terms;
    terms.reserve(traj.u.size());
    for (const auto& v : traj.u) terms.push_back(v.squaredNorm());
    L2Report rep;
    rep.evidence = classify_series(terms, 0, SeriesOptions{.abs_floor = 0.0});
    rep.partial_sum = rep.evidence.partial_sum;
    if (traj.overflow) {
        rep.verdict = L2Verdict::NotSquareSummable;
        return rep;
    }
    switch (rep.evidence.verdict) {
        case SeriesVerdict::Converges: rep.verdict = L2Verdict::SquareSummable; break;
        case SeriesVerdict::Diverges: rep.verdict = L2Verdict::NotSquareSummable; break;
        case SeriesVerdict::Undecided: rep.verdict = L2Verdict::Undecided; break;
    }
    return rep;
}

}  // namespace bjm
