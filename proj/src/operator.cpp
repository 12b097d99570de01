#include "bjm/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bjm/errors.hpp"

namespace bjm {

Operator::Operator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
        throw PreconditionError("Operator: matrix must be square");
    }
}

Operator::Operator(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto d = static_cast<Eigen::Index>(rows.size());
    m_.resize(d, d);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != d) {
            throw PreconditionError("Operator: ragged initializer");
        }
        Eigen::Index j = 0;
        for (const auto& value : row) m_(i, j++) = value;
        ++i;
    }
}

Operator Operator::identity(int d) { return Operator(Matrix::Identity(d, d)); }

Operator Operator::zero(int d) { return Operator(Matrix::Zero(d, d)); }

Operator Operator::diagonal(const std::vector<Complex>& entries) {
    const auto d = static_cast<Eigen::Index>(entries.size());
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
    return Operator(std::move(m));
}

bool Operator::is_finite() const { return m_.allFinite(); }

Operator& Operator::operator+=(const Operator& o) {
    m_ += o.m_;
    return *this;
}

Operator& Operator::operator-=(const Operator& o) {
    m_ -= o.m_;
    return *this;
}

Operator& Operator::operator*=(Complex s) {
    m_ *= s;
    return *this;
}

BlockOperator::BlockOperator(const Operator& tl, const Operator& tr, const Operator& bl,
                             const Operator& br) {
    const int d = tl.dim();
    if (tr.dim() != d || bl.dim() != d || br.dim() != d) {
        throw PreconditionError("BlockOperator: blocks of different dimension");
    }
    m_.resize(2 * d, 2 * d);
    m_.topLeftCorner(d, d) = tl.matrix();
    m_.topRightCorner(d, d) = tr.matrix();
    m_.bottomLeftCorner(d, d) = bl.matrix();
    m_.bottomRightCorner(d, d) = br.matrix();
}

BlockOperator::BlockOperator(Matrix full) : m_(std::move(full)) {
    if (m_.rows() != m_.cols() || m_.rows() % 2 != 0) {
        throw PreconditionError("BlockOperator: matrix must be square of even size");
    }
}

BlockOperator BlockOperator::identity(int d) {
    return BlockOperator(Matrix(Matrix::Identity(2 * d, 2 * d)));
}

BlockOperator BlockOperator::symplectic(int d) {
    const Operator id = Operator::identity(d);
    const Operator z = Operator::zero(d);
    return BlockOperator(z, -id, id, z);
}

BlockOperator BlockOperator::block_diagonal(const Operator& x, const Operator& y) {
    const Operator z = Operator::zero(x.dim());
    return BlockOperator(x, z, z, y);
}

Operator BlockOperator::block(int row, int col) const {
    const int d = dim();
    return Operator(Matrix(m_.block(row * d, col * d, d, d)));
}

Vector stack(const Vector& top, const Vector& bottom) {
    Vector v(top.size() + bottom.size());
    v << top, bottom;
    return v;
}

Operator sym(const Operator& x) { return Operator(0.5 * (x.matrix() + x.matrix().adjoint())); }

BlockOperator sym(const BlockOperator& x) {
    return BlockOperator(Matrix(0.5 * (x.matrix() + x.matrix().adjoint())));
}

bool is_hermitian(const Operator& x, double tol) {
    const double asym = (x.matrix() - x.matrix().adjoint()).norm();
    return asym <= tol * x.matrix().norm();
}

namespace {

void require_hermitian(const Operator& x, const char* who) {
    if (!is_hermitian(x)) {
        throw NotHermitianError(std::string(who) + ": operator is not Hermitian");
    }
}

Eigen::SelfAdjointEigenSolver<Matrix> eigen_hermitian(const Operator& x) {
    // Symmetrize so roundoff asymmetry does not leak into the decomposition.
    const Matrix h = 0.5 * (x.matrix() + x.matrix().adjoint());
    return Eigen::SelfAdjointEigenSolver<Matrix>(h);
}

}  // namespace

Operator neg_part(const Operator& x) {
    require_hermitian(x, "neg_part");
    const auto es = eigen_hermitian(x);
    const Eigen::VectorXd mapped = (-es.eigenvalues().array()).max(0.0).matrix();
    const Matrix& v = es.eigenvectors();
    return Operator(Matrix(v * mapped.cast<Complex>().asDiagonal() * v.adjoint()));
}

Operator abs_val(const Operator& x) {
    const Operator gram(x.matrix().adjoint() * x.matrix());
    const auto es = eigen_hermitian(gram);
    const Eigen::VectorXd roots = es.eigenvalues().array().max(0.0).sqrt().matrix();
    const Matrix& v = es.eigenvectors();
    return Operator(Matrix(v * roots.cast<Complex>().asDiagonal() * v.adjoint()));
}

double op_norm(const Operator& x) {
    if (x.dim() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(x.matrix());
    return svd.singularValues()(0);
}

double op_norm(const BlockOperator& x) { return op_norm(x.as_operator()); }

std::vector<double> hermitian_eigenvalues(const Operator& x) {
    require_hermitian(x, "hermitian_eigenvalues");
    const auto es = eigen_hermitian(x);
    const Eigen::VectorXd& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

std::pair<double, double> hermitian_extremes(const Operator& x) {
    require_hermitian(x, "hermitian_extremes");
    const auto es = eigen_hermitian(x);
    const Eigen::VectorXd& ev = es.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

std::string_view to_string(Definiteness d) {
    switch (d) {
        case Definiteness::StrictlyPositive: return "StrictlyPositive";
        case Definiteness::StrictlyNegative: return "StrictlyNegative";
        case Definiteness::Indefinite: return "Indefinite";
        case Definiteness::Degenerate: return "Degenerate";
    }
    return "?";
}

Definiteness classify_definiteness(const Operator& x, double eps) {
    require_hermitian(x, "classify_definiteness");
    const auto es = eigen_hermitian(x);
    const Eigen::VectorXd& ev = es.eigenvalues();
    if (ev.minCoeff() > eps) return Definiteness::StrictlyPositive;
    if (ev.maxCoeff() < -eps) return Definiteness::StrictlyNegative;
    if ((ev.array().abs() <= eps).any()) return Definiteness::Degenerate;
    return Definiteness::Indefinite;
}

Inversion invert_with_condition(const Operator& x) {
    Eigen::JacobiSVD<Matrix> svd(x.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond <= kSingularCondition)) {
        throw SingularError("invert: condition number exceeds 1e12", cond);
    }
    Matrix inv = svd.matrixV() * s.cwiseInverse().cast<Complex>().asDiagonal() *
                 svd.matrixU().adjoint();
    return {Operator(std::move(inv)), cond};
}

Operator invert(const Operator& x) { return invert_with_condition(x).inverse; }

std::vector<double> principal_minors(const Operator& x) {
    require_hermitian(x, "principal_minors");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(x.dim()));
    for (int k = 1; k <= x.dim(); ++k) {
        out.push_back(x.matrix().topLeftCorner(k, k).determinant().real());
    }
    return out;
}

std::vector<double> principal_minors(const BlockOperator& x) {
    return principal_minors(x.as_operator());
}

}  // namespace bjm
