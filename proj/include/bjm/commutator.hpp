#pragma once

// Weighted commutator functionals S_n for a weight sequence alpha_n, their
// limit form C(lambda), the four summability conditions, and checkers for
// the two unbounded special cases.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bjm/coefficients.hpp"
#include "bjm/operator.hpp"
#include "bjm/recurrence.hpp"
#include "bjm/series.hpp"

namespace bjm {

namespace alpha {

/// alpha_n = Id.
struct Identity {};
/// alpha_n = a_n.
struct AN {};
/// alpha_n = Id for n < n_start, n g_K(n) (a_n^*)^{-1} otherwise.
struct Log {
    int K = 1;
    std::size_t n_start = 3;
};
struct Custom {
    std::function<Operator(std::size_t)> f;
};

}  // namespace alpha

class AlphaStrategy {
public:
    using Kind = std::variant<alpha::Identity, alpha::AN, alpha::Log, alpha::Custom>;

    AlphaStrategy() = default;
    /// Throws DomainError for Log with log^{(K)}(n_start) <= 0.
    AlphaStrategy(Kind kind);

    const Kind& kind() const noexcept { return kind_; }
    std::string name() const;
    Operator operator()(const CoefficientFamily& fam, std::size_t n) const;

private:
    Kind kind_ = alpha::Identity{};
};

/// sym (alpha_n a_n^*, -(lambda - b_n) a_{n-1}^{-1} alpha_{n-1} a_n; 0, a_n^* a_{n-1}^{-1} alpha_{n-1} a_n).
BlockOperator commutator_form(const CoefficientFamily& fam, const AlphaStrategy& s, std::size_t n,
                              double lambda);

/// sym (alpha_{n-1} a_{n-1}^*, -alpha_{n-1}(lambda - b_n); 0, alpha_n a_n^*).
BlockOperator commutator_form_direct(const CoefficientFamily& fam, const AlphaStrategy& s,
                                     std::size_t n, double lambda);

/// S_n from commutator_form at (u_n, u_{n+1}); needs n + 1 <= traj.horizon().
double commutator_value(const CoefficientFamily& fam, const AlphaStrategy& s, std::size_t n,
                        const Trajectory& traj);

/// S_n from commutator_form_direct at (u_{n-1}, u_n).
double commutator_value_direct(const CoefficientFamily& fam, const AlphaStrategy& s, std::size_t n,
                               const Trajectory& traj);

/// Right-hand side of the bound on [S_{n+1} - S_n]^- / (||u_n||^2 + ||u_{n+1}||^2).
double commutator_increment_bound(const CoefficientFamily& fam, const AlphaStrategy& s,
                                  std::size_t n, double lambda);

struct CLimit {
    BlockOperator value;
    double cauchy_residual = 0.0;
    double extrapolation_residual = 0.0;
    bool converged = false;
    Definiteness definiteness = Definiteness::Degenerate;
};

/// Limit of commutator_form(n) / ||alpha_n a_n^*||.
CLimit c_limit(const CoefficientFamily& fam, const AlphaStrategy& s, double lambda,
               std::size_t horizon, double eps = kDefiniteEps);

struct Condition {
    std::string label;
    std::size_t first_index = 0;
    std::vector<double> terms;
    SeriesEvidence evidence;
    /// Whether the condition holds: convergence for (a)-(c), divergence for (d).
    bool satisfied = false;
};

struct ConditionReport {
    std::string strategy;
    std::vector<Condition> conditions;  // a, b, c, d
    bool all_satisfied() const;
};

ConditionReport thmA_conditions(const CoefficientFamily& fam, const AlphaStrategy& s,
                                std::size_t horizon);

struct Check {
    std::string name;
    bool passed = false;
    /// Partial sum, last value or residual, depending on the check.
    double value = 0.0;
    std::optional<SeriesEvidence> evidence;
    std::string detail;
};

struct HypothesisReport {
    std::string theorem;
    std::vector<Check> checks;
    bool passed() const;
    const Check& at(const std::string& name) const;
};

HypothesisReport check_spec2(const CoefficientFamily& fam, std::size_t horizon);

/// Requires log^{(K)}(n_start) > 0.
HypothesisReport check_spec3(const CoefficientFamily& fam, int K, std::size_t n_start,
                             std::size_t horizon);

}  // namespace bjm
