#pragma once

// N-shifted Turán determinants, periodic limits of the coefficients, the
// limit form F(lambda), scanning for the set where it is definite, and the
// eigenvector asymptotics that follow from it.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bjm/coefficients.hpp"
#include "bjm/operator.hpp"
#include "bjm/recurrence.hpp"

namespace bjm {

// --- periodic limits ------------------------------------------------------

struct LimitResidual {
    double T = 0.0, Q = 0.0, R = 0.0, C = 0.0;
};

/// N-periodic limits T_i, Q_i, R_i, C_i of a_n^{-1}, a_n^{-1} b_n,
/// a_n^{-1} a_{n-1}^*, a_n / ||a_n|| along n = i (mod N).
struct PeriodicLimitData {
    std::size_t N = 1;
    std::vector<Operator> T, Q, R, C;
    /// r_i = ||C_i^{-1} C_{i-1}^* R_i^{-1}||.
    std::vector<double> r;
    std::optional<std::vector<Operator>> D;
    std::vector<LimitResidual> residuals;
    /// Names of limits that did not pass the acceptance test, e.g. "T[0]".
    std::vector<std::string> not_convergent;

    bool converged() const noexcept { return not_convergent.empty(); }
    int dim() const { return C.front().dim(); }
};

/// Assembles limit data from explicit operators; computes r_i. Throws
/// SingularError when some R_i or C_i is not invertible.
PeriodicLimitData make_limit_data(std::vector<Operator> T, std::vector<Operator> Q,
                                  std::vector<Operator> R, std::vector<Operator> C);

/// Numerical limits from the family sampled up to `horizon`. Limits failing
/// the convergence test are listed in not_convergent (soft failure).
PeriodicLimitData extract_periodic_limits(const CoefficientFamily& fam, std::size_t N,
                                          std::size_t horizon);

// --- Turán forms and values -----------------------------------------------

/// (1/||a_{n+N-1}||) sym(diag(a_{n+N-1}, a_{n+N-1}^*) E X_n(z)), n >= 1.
BlockOperator turan_form(const CoefficientFamily& fam, std::size_t N, std::size_t n, Complex z);

/// S_n = ||a_{n+N-1}|| <form (u_{n-1}, u_n), (u_{n-1}, u_n)> at z = traj.z.
double turan_value(const CoefficientFamily& fam, std::size_t N, std::size_t n,
                   const Trajectory& traj);

struct TuranTrace {
    Complex z;
    Vector alpha;
    std::size_t n_start = 1;
    /// values[i] = S_{n_start + i}.
    std::vector<double> values;
};

/// S_n for n = n_start .. traj.horizon().
TuranTrace turan_trace(const CoefficientFamily& fam, std::size_t N, const Trajectory& traj,
                       std::size_t n_start = 1);

// --- the limit form -------------------------------------------------------

/// (0, -C_{j+N-1}; C_{j+N-1}^*, 0) prod_{k=j}^{j+N-1} (0, Id; -R_k, z T_k - Q_k)
/// with indices mod N and the highest index leftmost. Not symmetrized.
BlockOperator f_matrix_raw(const PeriodicLimitData& lim, Complex z, std::size_t window_start = 0);

/// sym of f_matrix_raw; Hermitian 2d x 2d.
BlockOperator f_matrix(const PeriodicLimitData& lim, Complex z, std::size_t window_start = 0);

/// The shifted forms F^j, j = 0..N-1, obtained from F^0 = f_matrix(lim, lambda, 0)
/// by the conjugation r_j F^{j+1} = (B_j^{-1})^* F^j B_j^{-1}, where
/// B_j = (0, Id; -R_j, lambda T_j - Q_j). Should agree with f_matrix(lim, lambda, j).
std::vector<BlockOperator> conjugated_f_matrices(const PeriodicLimitData& lim, double lambda);

enum class Sign { Positive, Negative };
std::string_view to_string(Sign s);

struct SignedInterval {
    double lo = 0.0;
    double hi = 0.0;
    Sign sign = Sign::Positive;
};

struct GridSample {
    double parameter = 0.0;
    double min_eig = 0.0;
    double max_eig = 0.0;
};

struct LambdaSet {
    std::vector<SignedInterval> intervals;
    double eps = kDefiniteEps;
    std::size_t grid = 0;
    std::pair<double, double> range{0.0, 0.0};
    std::vector<GridSample> samples;

    bool empty() const noexcept { return intervals.empty(); }
};

/// Scans a Hermitian-valued family on a uniform grid, merges runs of strictly
/// definite points of the same sign and bisects every interior endpoint to
/// width <= 1e-8.
LambdaSet definiteness_scan(const std::function<BlockOperator(double)>& form,
                            std::pair<double, double> range, std::size_t grid,
                            double eps = kDefiniteEps);

/// definiteness_scan of lambda -> F(lambda).
LambdaSet lambda_scan(const PeriodicLimitData& lim, std::pair<double, double> range,
                      std::size_t grid, double eps = kDefiniteEps);

/// definiteness_scan of t -> F(lambda) with every Q_i replaced by t Q_i.
LambdaSet coupling_scan(const PeriodicLimitData& lim, double lambda,
                        std::pair<double, double> range, std::size_t grid,
                        double eps = kDefiniteEps);

// --- eigenvector asymptotics ----------------------------------------------

/// Default number of leading indices ignored in band statistics.
inline constexpr std::size_t kBurnIn = 10;

struct BandReport {
    double c1 = 0.0;
    double c2 = 0.0;
    double ratio = 0.0;
    std::size_t burn_in = kBurnIn;
    bool overflow = false;
    /// Per alpha: s_n / ||alpha||^2 for n = 1 .. horizon.
    std::vector<std::vector<double>> traces;
};

/// Empirical constants of c1 |alpha|^2 <= ||a_n|| (|u_{n-1}|^2 + |u_n|^2) <= c2 |alpha|^2
/// over n in [burn_in, horizon].
BandReport asymptotic_band(const CoefficientFamily& fam, Complex z,
                           const std::vector<Vector>& alphas, std::size_t horizon,
                           std::size_t burn_in = kBurnIn);

struct TuranConvergence {
    /// Limit estimates g(alpha, z): mean of S_n over the final tenth of the horizon.
    std::vector<double> g;
    /// max |S_n - g| over the same window.
    std::vector<double> residuals;
    bool converged = false;
    /// Sample points m, the sup-deviation sup_alpha |g - S_m| and the tail variation at m.
    std::vector<std::size_t> m_values;
    std::vector<double> deviations;
    std::vector<double> tail_variations;
    double fitted_c = 0.0;
    bool rate_bound_check = false;
    std::vector<TuranTrace> traces;
};

TuranConvergence turan_convergence(const CoefficientFamily& fam, std::size_t N, Complex z,
                                   const std::vector<Vector>& alphas, std::size_t horizon);

/// The bracket of the increment bound at n:
///   ||a_{n+N}^{-1} a_{n+N-1}^* - a_n^{-1} a_{n-1}^*|| + |z| ||a_{n+N}^{-1} - a_n^{-1}||
///   + |z - conj z| ||a_{n+N}^{-1}|| + ||a_{n+N}^{-1} b_{n+N} - a_n^{-1} b_n||.
double turan_variation_term(const CoefficientFamily& fam, std::size_t N, Complex z, std::size_t n);

/// ||X_n(z)|| ||a_{n+N}|| times turan_variation_term; bounds
/// |S_{n+1} - S_n| / (||u_{n-1}||^2 + ||u_n||^2).
double turan_increment_bound(const CoefficientFamily& fam, std::size_t N, Complex z,
                             std::size_t n);

/// sum_{n=m}^{last} turan_variation_term(n).
double turan_tail_variation(const CoefficientFamily& fam, std::size_t N, Complex z,
                            std::size_t m, std::size_t last);

// --- indeterminacy --------------------------------------------------------

enum class IndeterminacyVerdict { CompleteIndeterminate, SelfAdjointRegime, Undecided };
std::string_view to_string(IndeterminacyVerdict v);

struct ZEvidence {
    Complex z;
    std::vector<L2Report> basis;   // the 2d trajectories with alpha = e_i
    std::size_t solution_dim = 0;  // numerical rank of the formal eigenvectors
};

struct IndeterminacyResult {
    IndeterminacyVerdict verdict = IndeterminacyVerdict::Undecided;
    CarlemanReport carleman;
    bool limits_converged = false;
    std::optional<LambdaSet> lambda;
    std::vector<ZEvidence> per_z;
    std::string reason;
};

struct IndeterminacyOptions {
    std::size_t N = 1;
    std::pair<double, double> scan_range{-10.0, 10.0};
    std::size_t scan_grid = 201;
    double rank_tol = 1e-8;
};

/// Requires the samples to include i and -i.
IndeterminacyResult indeterminacy_probe(const CoefficientFamily& fam,
                                        const std::vector<Complex>& z_samples,
                                        std::size_t horizon,
                                        const IndeterminacyOptions& opts = {});

// --- exact asymptotics ----------------------------------------------------

struct ExactAsymptotics {
    bool c_hermitian = false;
    Operator C;
    std::vector<double> g;
    /// Final-tenth mean of ||a_n|| (<C u_{n-1}, u_{n-1}> + <C u_n, u_n>), per alpha.
    std::vector<double> weighted_limit;
    std::vector<double> rel_diff;
    double max_rel_diff = 0.0;
};

/// Requires N odd and T = 0, Q = 0, R = Id, C_i = C within hypothesis_tol;
/// throws HypothesisViolated naming the failed limit otherwise.
ExactAsymptotics exact_asymptotics(const CoefficientFamily& fam, const PeriodicLimitData& lim,
                                   Complex z, const std::vector<Vector>& alphas,
                                   std::size_t horizon, double hypothesis_tol = 1e-6);

struct ChristoffelTrace {
    /// ratio[n] = [sum_{k<=n} 1/||a_k||]^{-1} sum_{k<=n} <C u_k, u_k>.
    std::vector<double> ratio;
    double limit = 0.0;
};

/// Throws HypothesisViolated when the Carleman sum does not diverge on the
/// trajectory's range or C is not Hermitian.
ChristoffelTrace christoffel_limit(const CoefficientFamily& fam, const Operator& C,
                                   const Trajectory& traj);

}  // namespace bjm
