#pragma once

// Transfer matrices and generalised eigenvectors of the three-term recurrence
//   a_{n-1}^* u_{n-1} + b_n u_n + a_n u_{n+1} = z u_n   (n >= 1).

#include <cstddef>
#include <string_view>
#include <vector>

#include "bjm/coefficients.hpp"
#include "bjm/operator.hpp"
#include "bjm/series.hpp"

namespace bjm {

/// Norm above which propagation stops and the trajectory is flagged.
inline constexpr double kOverflowNorm = 1e150;

/// B_n(z) = (0, Id; -a_n^{-1} a_{n-1}^*, a_n^{-1}(z - b_n)), n >= 1.
BlockOperator transfer(const CoefficientFamily& fam, std::size_t n, Complex z);

/// B_n(z)^{-1} = ((a_{n-1}^*)^{-1}(z - b_n), -(a_{n-1}^*)^{-1} a_n; Id, 0), n >= 1.
BlockOperator transfer_inv(const CoefficientFamily& fam, std::size_t n, Complex z);

/// B_{n+N-1}(z) ... B_n(z), highest index leftmost; the identity for N = 0.
BlockOperator window_product(const CoefficientFamily& fam, Complex z, std::size_t n,
                             std::size_t N);

struct Trajectory {
    Complex z;
    Vector alpha;                 // (u_0, u_1)
    std::vector<Vector> u;        // u_0 .. u_M (fewer when overflowed)
    std::vector<double> residuals;  // relative residual of the recurrence at n = 1..M-1
    bool overflow = false;

    std::size_t horizon() const noexcept { return u.empty() ? 0 : u.size() - 1; }
    /// (u_{n-1}, u_n).
    Vector pair(std::size_t n) const { return stack(u[n - 1], u[n]); }
};

/// Generalised eigenvector with (u_0, u_1) = alpha, computed up to index M.
/// Throws PreconditionError for alpha = 0 or M < 2; stops early on overflow.
Trajectory propagate(const CoefficientFamily& fam, Complex z, const Vector& alpha,
                     std::size_t M);

/// (u_0, a_0^{-1}(z - b_0) u_0): initial condition of a formal eigenvector.
Vector formal_eigenvector_start(const CoefficientFamily& fam, Complex z, const Vector& u0);

/// s_n = ||a_n|| (||u_{n-1}||^2 + ||u_n||^2) for n = 1 .. horizon; entry i holds s_{i+1}.
std::vector<double> weighted_norm_trace(const CoefficientFamily& fam, const Trajectory& traj);

enum class L2Verdict { SquareSummable, NotSquareSummable, Undecided };
std::string_view to_string(L2Verdict v);

struct L2Report {
    double partial_sum = 0.0;
    L2Verdict verdict = L2Verdict::Undecided;
    SeriesEvidence evidence;
};

/// Square-summability evidence for sum ||u_n||^2.
L2Report l2_tail_diagnostic(const Trajectory& traj);

}  // namespace bjm
