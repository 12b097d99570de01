#pragma once

// Finite-dimensional operator calculus on H = C^d and on H (+) H.

#include <complex>
#include <initializer_list>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bjm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Relative tolerance used for every Hermiticity check.
inline constexpr double kHermitianTol = 1e-10;
/// Condition number above which an operator is treated as singular.
inline constexpr double kSingularCondition = 1e12;
/// Default margin for definiteness classification.
inline constexpr double kDefiniteEps = 1e-9;

/// A d x d complex matrix standing for a bounded operator on C^d.
class Operator {
public:
    Operator() = default;
    explicit Operator(Matrix m);
    /// Row-major nested initializer, convenient for fixtures and tests.
    Operator(std::initializer_list<std::initializer_list<Complex>> rows);

    static Operator identity(int d);
    static Operator zero(int d);
    static Operator diagonal(const std::vector<Complex>& entries);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const noexcept { return m_; }
    Complex operator()(int i, int j) const { return m_(i, j); }

    Operator adjoint() const { return Operator(m_.adjoint()); }
    bool is_finite() const;

    Operator& operator+=(const Operator& o);
    Operator& operator-=(const Operator& o);
    Operator& operator*=(Complex s);

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator-(const Operator& a) { return Operator(-a.m_); }
    friend Operator operator*(const Operator& a, const Operator& b) {
        return Operator(a.m_ * b.m_);
    }
    friend Operator operator*(Complex s, Operator a) { return a *= s; }
    friend Operator operator*(Operator a, Complex s) { return a *= s; }
    friend Vector operator*(const Operator& a, const Vector& v) { return a.m_ * v; }

private:
    Matrix m_;
};

/// A 2 x 2 arrangement of Operators, i.e. an operator on H (+) H.
class BlockOperator {
public:
    BlockOperator() = default;
    BlockOperator(const Operator& top_left, const Operator& top_right,
                  const Operator& bottom_left, const Operator& bottom_right);
    /// Wraps a 2d x 2d matrix; throws PreconditionError on odd or non-square sizes.
    explicit BlockOperator(Matrix full);

    static BlockOperator identity(int d);
    /// E = (0, -Id; Id, 0).
    static BlockOperator symplectic(int d);
    /// diag(X, Y).
    static BlockOperator block_diagonal(const Operator& x, const Operator& y);

    int dim() const noexcept { return static_cast<int>(m_.rows() / 2); }
    Operator block(int row, int col) const;
    const Matrix& matrix() const noexcept { return m_; }
    /// The same matrix viewed as an operator on C^{2d}.
    Operator as_operator() const { return Operator(m_); }

    BlockOperator adjoint() const { return BlockOperator(Matrix(m_.adjoint())); }

    friend BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
        return BlockOperator(Matrix(a.m_ * b.m_));
    }
    friend BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) {
        return BlockOperator(Matrix(a.m_ + b.m_));
    }
    friend BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) {
        return BlockOperator(Matrix(a.m_ - b.m_));
    }
    friend BlockOperator operator*(Complex s, const BlockOperator& a) {
        return BlockOperator(Matrix(s * a.m_));
    }
    friend Vector operator*(const BlockOperator& a, const Vector& v) { return a.m_ * v; }

private:
    Matrix m_;
};

/// Concatenates (v1, v2) into a vector of H (+) H.
Vector stack(const Vector& top, const Vector& bottom);

// --- calculus -------------------------------------------------------------

/// (X + X*) / 2.
Operator sym(const Operator& x);
BlockOperator sym(const BlockOperator& x);

/// True when ||X - X*||_F <= tol * ||X||_F.
bool is_hermitian(const Operator& x, double tol = kHermitianTol);

/// Negative part X^- of a Hermitian operator, via its eigendecomposition.
/// Throws NotHermitianError.
Operator neg_part(const Operator& x);

/// |X| = (X* X)^{1/2}.
Operator abs_val(const Operator& x);

/// Spectral norm (largest singular value).
double op_norm(const Operator& x);
double op_norm(const BlockOperator& x);

/// Smallest and largest eigenvalue of a Hermitian operator. Throws NotHermitianError.
std::pair<double, double> hermitian_extremes(const Operator& x);
/// All eigenvalues of a Hermitian operator in increasing order.
std::vector<double> hermitian_eigenvalues(const Operator& x);

enum class Definiteness { StrictlyPositive, StrictlyNegative, Indefinite, Degenerate };
std::string_view to_string(Definiteness d);

Definiteness classify_definiteness(const Operator& x, double eps = kDefiniteEps);

struct Inversion {
    Operator inverse;
    double condition = 0.0;
};

/// Inverse together with its 2-norm condition number. Throws SingularError
/// when the condition number exceeds kSingularCondition.
Inversion invert_with_condition(const Operator& x);
Operator invert(const Operator& x);

/// Leading principal minors det(X[0..k, 0..k]) for k = 1..dim of a Hermitian matrix.
std::vector<double> principal_minors(const Operator& x);
std::vector<double> principal_minors(const BlockOperator& x);

}  // namespace bjm
