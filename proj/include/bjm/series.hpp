#pragma once

// Heuristics for the asymptotic behaviour of sampled sequences: summability
// verdicts for nonnegative series and limits of operator-valued sequences.
//
// No finite computation proves divergence, so every verdict comes with the
// evidence it was derived from.

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "bjm/operator.hpp"

namespace bjm {

enum class SeriesVerdict { Diverges, Converges, Undecided };
std::string_view to_string(SeriesVerdict v);

struct SeriesEvidence {
    SeriesVerdict verdict = SeriesVerdict::Undecided;
    double partial_sum = 0.0;
    /// Fitted model t_n ~ c n^{-power} (log n)^{-log_power} over the last decade.
    double power = 0.0;
    double log_power = 0.0;
    /// Extrapolated remainder beyond the sampled range (infinite when diverging).
    double tail_estimate = 0.0;
    /// Ratio of the last-decade term sum to the partial sum.
    double last_decade_share = 0.0;
};

struct SeriesOptions {
    /// Terms at or below this are treated as exact zeros (roundoff floor).
    double abs_floor = 1e-13;
    /// Half-width of the band around power 1 in which the log exponent decides.
    double power_band = 0.05;
    /// Log exponent at or below which a borderline series is declared divergent.
    double log_diverge = 1.02;
    /// Log exponent at or above which a borderline series is declared convergent.
    double log_converge = 1.1;
    /// Geometric tail acceptance: remainder / partial sum below this converges.
    double geometric_rel = 1e-10;
};

/// Classifies sum_{n >= first_index} terms[n - first_index] from its sampled prefix.
/// terms must be nonnegative.
SeriesEvidence classify_series(std::span<const double> terms, std::size_t first_index = 0,
                               const SeriesOptions& opts = {});

/// Decay verdict for a nonnegative scalar sequence: true when it tends to zero.
struct DecayEvidence {
    bool tends_to_zero = false;
    double last_value = 0.0;
    double slope = 0.0;  // log-log slope over the last decade
};
DecayEvidence decays_to_zero(std::span<const double> values, std::size_t first_index = 0);

/// Growth verdict: true when the sequence stays bounded (no power-law growth).
struct BoundEvidence {
    bool bounded = false;
    double sup = 0.0;
    double slope = 0.0;
};
BoundEvidence stays_bounded(std::span<const double> values, std::size_t first_index = 0);

/// Limit of an operator-valued sequence along one residue class.
struct LimitEstimate {
    Operator value;
    /// max ||x_n - x_{n-step}|| over the last decade of the sampled range.
    double cauchy_residual = 0.0;
    /// Disagreement between two successive Aitken extrapolations.
    double extrapolation_residual = 0.0;
    bool extrapolated = false;
    bool converged = false;
};

struct LimitOptions {
    double cauchy_tol = 1e-8;
    double extrapolation_tol = 1e-6;
    /// Upper bound on the Cauchy residual for the extrapolated route.
    double extrapolation_gate = 1e-4;
};

/// Estimates lim_k x(first + k*step) from samples up to index last (inclusive).
/// Uses Aitken extrapolation on geometrically spaced samples when the raw
/// Cauchy criterion is not yet met.
LimitEstimate sequence_limit(const std::function<Operator(std::size_t)>& x, std::size_t first,
                             std::size_t step, std::size_t last, const LimitOptions& opts = {});

}  // namespace bjm
