#include "bjm/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bjm/errors.hpp"

namespace bjm {

std::string_view to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Diverges: return "Diverges";
        case SeriesVerdict::Converges: return "Converges";
        case SeriesVerdict::Undecided: return "Undecided";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

// First index (into a sampled prefix of length m starting at first_index) of the
// last logarithmic decade [n_end / 10, n_end).
std::size_t decade_start(std::size_t m, std::size_t first_index) {
    const std::size_t n_end = first_index + m;
    const std::size_t n0 = std::max<std::size_t>(n_end / 10, first_index);
    return n0 - first_index;
}

double log_log_slope(std::span<const double> values, std::size_t first_index) {
    const std::size_t start = decade_start(values.size(), first_index);
    std::vector<double> x, y;
    for (std::size_t i = start; i < values.size(); ++i) {
        const double n = static_cast<double>(first_index + i);
        if (n < 1.0 || !(values[i] > 0.0)) continue;
        x.push_back(std::log(n));
        y.push_back(std::log(values[i]));
    }
    if (x.size() < 3) return 0.0;
    return slope(x, y);
}

}  // namespace

SeriesEvidence classify_series(std::span<const double> terms, std::size_t first_index,
                               const SeriesOptions& opts) {
    SeriesEvidence ev;
    std::vector<double> t(terms.begin(), terms.end());
    for (double& v : t) {
        if (!(v > opts.abs_floor)) v = 0.0;
    }
    ev.partial_sum = std::accumulate(terms.begin(), terms.end(), 0.0);
    if (t.size() < 10) {
        ev.verdict = SeriesVerdict::Undecided;
        ev.tail_estimate = kInf;
        return ev;
    }

    const std::size_t start = decade_start(t.size(), first_index);
    const double decade_sum = std::accumulate(t.begin() + static_cast<std::ptrdiff_t>(start),
                                              t.end(), 0.0);
    ev.last_decade_share = ev.partial_sum > 0.0 ? decade_sum / ev.partial_sum : 0.0;

    std::vector<std::size_t> nz;
    for (std::size_t i = start; i < t.size(); ++i) {
        if (t[i] > 0.0) nz.push_back(i);
    }
    if (nz.size() < 3) {
        // The tail has vanished below the roundoff floor.
        ev.verdict = SeriesVerdict::Converges;
        ev.tail_estimate = 0.0;
        ev.power = kInf;
        return ev;
    }

    // Geometric decay: per-step ratio between the middle and the end of the decade.
    const std::size_t i_last = nz.back();
    const std::size_t i_mid = nz[nz.size() / 2];
    const double t_last = t[i_last];
    if (i_last > i_mid) {
        const double rho =
            std::pow(t_last / t[i_mid], 1.0 / static_cast<double>(i_last - i_mid));
        if (rho < 0.99) {
            ev.verdict = SeriesVerdict::Converges;
            ev.tail_estimate = t_last * rho / (1.0 - rho);
            ev.power = kInf;
            return ev;
        }
    }

    // Power-log model: log t = c - p log n - q log log n.
    Eigen::MatrixXd a(static_cast<Eigen::Index>(nz.size()), 3);
    Eigen::VectorXd b(static_cast<Eigen::Index>(nz.size()));
    Eigen::Index row = 0;
    for (std::size_t i : nz) {
        const double n = std::max(3.0, static_cast<double>(first_index + i));
        const double ln = std::log(n);
        a(row, 0) = -ln;
        a(row, 1) = -std::log(ln);
        a(row, 2) = 1.0;
        b(row) = std::log(t[i]);
        ++row;
    }
    const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(b);
    double p = sol(0);
    double q = sol(1);
    const double n_end = static_cast<double>(first_index + t.size());
    if (n_end < 100.0) {
        // Too short a range to separate n from log n; fall back to a plain slope.
        std::vector<double> x, y;
        for (std::size_t i : nz) {
            x.push_back(std::log(std::max(1.0, static_cast<double>(first_index + i))));
            y.push_back(std::log(t[i]));
        }
        p = -slope(x, y);
        q = 0.0;
    }
    ev.power = p;
    ev.log_power = q;

    const double n_last = static_cast<double>(first_index + i_last);
    if (p < 1.0 - opts.power_band) {
        ev.verdict = SeriesVerdict::Diverges;
    } else if (p > 1.0 + opts.power_band) {
        ev.verdict = SeriesVerdict::Converges;
        ev.tail_estimate = t_last * n_last / (p - 1.0);
    } else if (q <= opts.log_diverge) {
        ev.verdict = SeriesVerdict::Diverges;
    } else if (q >= opts.log_converge) {
        ev.verdict = SeriesVerdict::Converges;
        ev.tail_estimate = t_last * n_last * std::log(n_last) / (q - 1.0);
    } else {
        ev.verdict = SeriesVerdict::Undecided;
    }
    if (ev.verdict != SeriesVerdict::Converges) ev.tail_estimate = kInf;
    return ev;
}

DecayEvidence decays_to_zero(std::span<const double> values, std::size_t first_index) {
    DecayEvidence ev;
    if (values.empty()) return ev;
    ev.last_value = values.back();
    ev.slope = log_log_slope(values, first_index);
    ev.tends_to_zero = ev.last_value <= 1e-12 || ev.slope < -0.05;
    return ev;
}

BoundEvidence stays_bounded(std::span<const double> values, std::size_t first_index) {
    BoundEvidence ev;
    if (values.empty()) return ev;
    ev.sup = *std::max_element(values.begin(), values.end());
    ev.slope = log_log_slope(values, first_index);
    ev.bounded = std::isfinite(ev.sup) && ev.slope <= 0.05;
    return ev;
}

namespace {

// Aitken extrapolation from three samples spaced by a factor of two.
bool aitken(const Operator& x1, const Operator& x2, const Operator& x3, Operator& out) {
    const Operator d1 = x2 - x1;
    const Operator d2 = x3 - x2;
    const double n1 = op_norm(d1);
    const double n2 = op_norm(d2);
    if (n1 <= 1e-15 * std::max(1.0, op_norm(x3))) {
        out = x3;
        return true;
    }
    const double r = n2 / n1;
    if (!(r < 1.0)) {
        out = x3;
        return false;
    }
    out = x3 + d2 * Complex(r / (1.0 - r));
    return true;
}

}  // namespace

LimitEstimate sequence_limit(const std::function<Operator(std::size_t)>& x, std::size_t first,
                             std::size_t step, std::size_t last, const LimitOptions& opts) {
    if (step == 0 || last < first) {
        throw PreconditionError("sequence_limit: empty sample range");
    }
    LimitEstimate est;
    const std::size_t k_last = (last - first) / step;
    auto at = [&](std::size_t k) { return x(first + k * step); };

    // Final tenth of the sampled indices.
    const std::size_t k_from = std::max<std::size_t>(1, k_last - k_last / 10);
    Operator prev = at(k_from - 1);
    for (std::size_t k = k_from; k <= k_last; ++k) {
        Operator cur = at(k);
        est.cauchy_residual = std::max(est.cauchy_residual, op_norm(cur - prev));
        prev = std::move(cur);
    }
    const Operator x_last = prev;
    est.value = x_last;

    if (k_last >= 16) {
        Operator l1, l2;
        const bool ok1 = aitken(at(k_last / 4), at(k_last / 2), x_last, l1);
        const bool ok2 = aitken(at(k_last / 8), at(k_last / 4), at(k_last / 2), l2);
        est.extrapolation_residual = op_norm(l1 - l2);
        if (ok1 && ok2) {
            est.value = l1;
            est.extrapolated = true;
        } else {
            est.extrapolation_residual = std::numeric_limits<double>::infinity();
        }
    } else {
        est.extrapolation_residual = std::numeric_limits<double>::infinity();
    }

    const double scale = 1.0 + op_norm(est.value);
    est.converged = est.cauchy_residual < opts.cauchy_tol ||
                    (est.cauchy_residual < opts.extrapolation_gate &&
                     est.extrapolation_residual < opts.extrapolation_tol * scale);
    if (est.cauchy_residual < opts.cauchy_tol && !est.extrapolated) est.value = x_last;
    return est;
}

}  // namespace bjm
