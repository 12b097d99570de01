#include "bjm/turan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

#include "bjm/errors.hpp"

namespace bjm {

namespace {

std::size_t mod(std::size_t j, std::size_t N) { return j % N; }

double last_tenth_mean(const std::vector<double>& v, double& max_dev) {
    const std::size_t m = v.size();
    const std::size_t tenth = std::max<std::size_t>(1, m / 10);
    double sum = 0.0;
    for (std::size_t i = m - tenth; i < m; ++i) sum += v[i];
    const double mean = sum / static_cast<double>(tenth);
    max_dev = 0.0;
    for (std::size_t i = m - tenth; i < m; ++i) max_dev = std::max(max_dev, std::abs(v[i] - mean));
    return mean;
}

double quad(const Operator& x, const Vector& v) { return v.dot(x.matrix() * v).real(); }

}  // namespace

// --- periodic limits ------------------------------------------------------

PeriodicLimitData make_limit_data(std::vector<Operator> T, std::vector<Operator> Q,
                                  std::vector<Operator> R, std::vector<Operator> C) {
    const std::size_t N = C.size();
    if (N == 0 || T.size() != N || Q.size() != N || R.size() != N) {
        throw PreconditionError("make_limit_data: T, Q, R, C must be non-empty of equal length");
    }
    PeriodicLimitData lim;
    lim.N = N;
    lim.T = std::move(T);
    lim.Q = std::move(Q);
    lim.R = std::move(R);
    lim.C = std::move(C);
    lim.residuals.assign(N, {});
    for (std::size_t i = 0; i < N; ++i) {
        const Operator prev_adj = lim.C[mod(i + N - 1, N)].adjoint();
        lim.r.push_back(op_norm(invert(lim.C[i]) * prev_adj * invert(lim.R[i])));
    }
    return lim;
}

PeriodicLimitData extract_periodic_limits(const CoefficientFamily& fam, std::size_t N,
                                          std::size_t horizon) {
    if (N == 0) throw PreconditionError("extract_periodic_limits: N must be positive");
    if (horizon < 20 * N + 1) throw PreconditionError("extract_periodic_limits: horizon too short");

    std::vector<Operator> T, Q, R, C;
    std::vector<LimitResidual> res(N);
    std::vector<std::string> failed;
    auto limit = [&](const char* name, std::size_t j, double& residual,
                     const std::function<Operator(std::size_t)>& seq) {
        const std::size_t first = j == 0 ? N : j;
        const std::size_t last = horizon - 1 - mod(horizon - 1 + N - j, N);
        LimitEstimate e = sequence_limit(seq, first, N, last);
        residual = e.cauchy_residual;
        if (!e.converged) failed.push_back(std::string(name) + "[" + std::to_string(j) + "]");
        return e.value;
    };
    for (std::size_t j = 0; j < N; ++j) {
        T.push_back(limit("T", j, res[j].T, [&](std::size_t n) { return fam.a_inv(n); }));
        Q.push_back(limit("Q", j, res[j].Q, [&](std::size_t n) { return fam.a_inv(n) * fam.b(n); }));
        R.push_back(limit("R", j, res[j].R,
                          [&](std::size_t n) { return fam.a_inv(n) * fam.a(n - 1).adjoint(); }));
        C.push_back(limit("C", j, res[j].C, [&](std::size_t n) {
            return Operator(fam.a(n).matrix() / fam.a_norm(n));
        }));
    }
    PeriodicLimitData lim = make_limit_data(std::move(T), std::move(Q), std::move(R), std::move(C));
    lim.residuals = std::move(res);
    lim.not_convergent = std::move(failed);
    return lim;
}

// --- Turán forms and values -----------------------------------------------

BlockOperator turan_form(const CoefficientFamily& fam, std::size_t N, std::size_t n, Complex z) {
    if (n < 1) throw PreconditionError("turan_form: n must be >= 1");
    if (N < 1) throw PreconditionError("turan_form: N must be positive");
    const std::size_t top = n + N - 1;
    const Operator a = fam.a(top);
    const BlockOperator lead = BlockOperator::block_diagonal(a, a.adjoint());
    const BlockOperator raw = lead * BlockOperator::symplectic(fam.dim()) * window_product(fam, z, n, N);
    return Complex(1.0 / fam.a_norm(top)) * sym(raw);
}

double turan_value(const CoefficientFamily& fam, std::size_t N, std::size_t n,
                   const Trajectory& traj) {
    if (n < 1 || n > traj.horizon()) throw PreconditionError("turan_value: index outside trajectory");
    const Vector v = traj.pair(n);
    const BlockOperator form = turan_form(fam, N, n, traj.z);
    return fam.a_norm(n + N - 1) * v.dot(form.matrix() * v).real();
}

TuranTrace turan_trace(const CoefficientFamily& fam, std::size_t N, const Trajectory& traj,
                       std::size_t n_start) {
    if (n_start < 1) throw PreconditionError("turan_trace: n_start must be >= 1");
    TuranTrace t;
    t.z = traj.z;
    t.alpha = traj.alpha;
    t.n_start = n_start;
    for (std::size_t n = n_start; n <= traj.horizon(); ++n) t.values.push_back(turan_value(fam, N, n, traj));
    return t;
}

// --- the limit form -------------------------------------------------------

namespace {

BlockOperator limit_transfer(const PeriodicLimitData& lim, std::size_t k, Complex z) {
    const int d = lim.dim();
    return BlockOperator(Operator::zero(d), Operator::identity(d), -lim.R[k],
                         z * lim.T[k] - lim.Q[k]);
}

BlockOperator limit_transfer_inv(const PeriodicLimitData& lim, std::size_t k, Complex z) {
    const int d = lim.dim();
    const Operator r_inv = invert(lim.R[k]);
    return BlockOperator(r_inv * (z * lim.T[k] - lim.Q[k]), -r_inv, Operator::identity(d),
                         Operator::zero(d));
}

}  // namespace

BlockOperator f_matrix_raw(const PeriodicLimitData& lim, Complex z, std::size_t window_start) {
    const std::size_t N = lim.N;
    const int d = lim.dim();
    BlockOperator prod = BlockOperator::identity(d);
    for (std::size_t k = window_start; k < window_start + N; ++k) {
        prod = limit_transfer(lim, mod(k, N), z) * prod;
    }
    const Operator& c = lim.C[mod(window_start + N - 1, N)];
    const BlockOperator lead(Operator::zero(d), -c, c.adjoint(), Operator::zero(d));
    return lead * prod;
}

BlockOperator f_matrix(const PeriodicLimitData& lim, Complex z, std::size_t window_start) {
    return sym(f_matrix_raw(lim, z, window_start));
}

std::vector<BlockOperator> conjugated_f_matrices(const PeriodicLimitData& lim, double lambda) {
    std::vector<BlockOperator> out;
    out.push_back(f_matrix(lim, lambda, 0));
    for (std::size_t j = 0; j + 1 < lim.N; ++j) {
        const BlockOperator inv = limit_transfer_inv(lim, j, lambda);
        out.push_back(Complex(1.0 / lim.r[j]) * (inv.adjoint() * out.back() * inv));
    }
    return out;
}

std::string_view to_string(Sign s) { return s == Sign::Positive ? "Positive" : "Negative"; }

LambdaSet definiteness_scan(const std::function<BlockOperator(double)>& form,
                            std::pair<double, double> range, std::size_t grid, double eps) {
    if (grid < 2) throw PreconditionError("definiteness_scan: grid must be at least 2");
    if (!(range.first < range.second)) throw PreconditionError("definiteness_scan: empty range");
    LambdaSet set;
    set.eps = eps;
    set.grid = grid;
    set.range = range;

    // +1 strictly positive, -1 strictly negative, 0 otherwise.
    auto label = [&](double p, GridSample* sample) {
        const auto [lo, hi] = hermitian_extremes(form(p).as_operator());
        if (sample) *sample = {p, lo, hi};
        if (lo > eps) return 1;
        if (hi < -eps) return -1;
        return 0;
    };
    const double h = (range.second - range.first) / static_cast<double>(grid - 1);
    std::vector<int> labels(grid);
    set.samples.resize(grid);
    for (std::size_t k = 0; k < grid; ++k) {
        const double p = k + 1 == grid ? range.second : range.first + h * static_cast<double>(k);
        labels[k] = label(p, &set.samples[k]);
    }
    // Bisect between inside point and outside point until width <= 1e-8.
    auto edge = [&](double inside, double outside, int s) {
        while (std::abs(outside - inside) > 1e-8) {
            const double mid = 0.5 * (inside + outside);
            (label(mid, nullptr) == s ? inside : outside) = mid;
        }
        return 0.5 * (inside + outside);
    };
    std::size_t k = 0;
    while (k < grid) {
        if (labels[k] == 0) {
            ++k;
            continue;
        }
        const int s = labels[k];
        std::size_t e = k;
        while (e + 1 < grid && labels[e + 1] == s) ++e;
        SignedInterval iv;
        iv.sign = s > 0 ? Sign::Positive : Sign::Negative;
        iv.lo = k == 0 ? range.first : edge(set.samples[k].parameter, set.samples[k - 1].parameter, s);
        iv.hi = e + 1 == grid ? range.second
                              : edge(set.samples[e].parameter, set.samples[e + 1].parameter, s);
        set.intervals.push_back(iv);
        k = e + 1;
    }
    return set;
}

LambdaSet lambda_scan(const PeriodicLimitData& lim, std::pair<double, double> range,
                      std::size_t grid, double eps) {
    return definiteness_scan([&](double l) { return f_matrix(lim, l); }, range, grid, eps);
}

LambdaSet coupling_scan(const PeriodicLimitData& lim, double lambda,
                        std::pair<double, double> range, std::size_t grid, double eps) {
    return definiteness_scan(
        [&](double t) {
            PeriodicLimitData scaled = lim;
            for (auto& q : scaled.Q) q = Complex(t) * q;
            return f_matrix(scaled, lambda);
        },
        range, grid, eps);
}

// --- eigenvector asymptotics ----------------------------------------------

BandReport asymptotic_band(const CoefficientFamily& fam, Complex z,
                           const std::vector<Vector>& alphas, std::size_t horizon,
                           std::size_t burn_in) {
    if (alphas.empty()) throw PreconditionError("asymptotic_band: no initial conditions");
    BandReport rep;
    rep.burn_in = burn_in;
    rep.c1 = std::numeric_limits<double>::infinity();
    rep.c2 = 0.0;
    for (const Vector& alpha : alphas) {
        const Trajectory traj = propagate(fam, z, alpha, horizon);
        rep.overflow = rep.overflow || traj.overflow;
        std::vector<double> s = weighted_norm_trace(fam, traj);
        const double norm2 = alpha.squaredNorm();
        for (double& v : s) v /= norm2;
        for (std::size_t n = std::max<std::size_t>(burn_in, 1); n <= s.size(); ++n) {
            rep.c1 = std::min(rep.c1, s[n - 1]);
            rep.c2 = std::max(rep.c2, s[n - 1]);
        }
        rep.traces.push_back(std::move(s));
    }
    rep.ratio = rep.c1 > 0.0 ? rep.c2 / rep.c1 : std::numeric_limits<double>::infinity();
    return rep;
}

double turan_variation_term(const CoefficientFamily& fam, std::size_t N, Complex z, std::size_t n) {
    if (n < 1) throw PreconditionError("turan_variation_term: n must be >= 1");
    const Operator far_inv = fam.a_inv(n + N);
    const Operator near_inv = fam.a_inv(n);
    const double r = op_norm(far_inv * fam.a(n + N - 1).adjoint() - near_inv * fam.a(n - 1).adjoint());
    const double t = std::abs(z) * op_norm(far_inv - near_inv);
    const double c = std::abs(z - std::conj(z)) * op_norm(far_inv);
    const double q = op_norm(far_inv * fam.b(n + N) - near_inv * fam.b(n));
    return r + t + c + q;
}

double turan_increment_bound(const CoefficientFamily& fam, std::size_t N, Complex z,
                             std::size_t n) {
    return op_norm(window_product(fam, z, n, N)) * fam.a_norm(n + N) *
           turan_variation_term(fam, N, z, n);
}

double turan_tail_variation(const CoefficientFamily& fam, std::size_t N, Complex z,
                            std::size_t m, std::size_t last) {
    double sum = 0.0;
    for (std::size_t n = std::max<std::size_t>(m, 1); n <= last; ++n) {
        sum += turan_variation_term(fam, N, z, n);
    }
    return sum;
}

TuranConvergence turan_convergence(const CoefficientFamily& fam, std::size_t N, Complex z,
                                   const std::vector<Vector>& alphas, std::size_t horizon) {
    if (alphas.empty()) throw PreconditionError("turan_convergence: no initial conditions");
    if (horizon < 100) throw PreconditionError("turan_convergence: horizon must be >= 100");
    TuranConvergence out;
    out.converged = true;
    double noise = 0.0;
    for (const Vector& alpha : alphas) {
        const Trajectory traj = propagate(fam, z, alpha, horizon);
        TuranTrace tr = turan_trace(fam, N, traj);
        if (traj.overflow || tr.values.size() < 10) {
            out.g.push_back(std::numeric_limits<double>::quiet_NaN());
            out.residuals.push_back(std::numeric_limits<double>::infinity());
            out.converged = false;
            out.traces.push_back(std::move(tr));
            continue;
        }
        double dev = 0.0;
        const double g = last_tenth_mean(tr.values, dev);
        out.g.push_back(g);
        out.residuals.push_back(dev);
        if (!(dev <= 1e-6 * std::abs(g))) out.converged = false;
        noise = std::max(noise, (2.0 * dev + 1e-12 * std::abs(g)) / alpha.squaredNorm());
        out.traces.push_back(std::move(tr));
    }
    if (!out.converged) return out;

    // sup over alpha of |g - S_m| / |alpha|^2 against the variation tail beyond m.
    const std::size_t last = horizon - 1;
    for (std::size_t i = 1; i <= 5; ++i) {
        const std::size_t m = horizon * i / 10;
        double dev = 0.0;
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            const auto& tr = out.traces[a];
            dev = std::max(dev, std::abs(out.g[a] - tr.values[m - tr.n_start]) / alphas[a].squaredNorm());
        }
        out.m_values.push_back(m);
        out.deviations.push_back(dev);
        out.tail_variations.push_back(turan_tail_variation(fam, N, z, m, last));
    }
    const double v0 = out.tail_variations.front();
    out.fitted_c = v0 > 0.0 ? 10.0 * out.deviations.front() / v0 : 0.0;
    out.rate_bound_check = std::isfinite(out.fitted_c);
    for (std::size_t i = 0; i < out.m_values.size(); ++i) {
        const double bound = out.fitted_c * out.tail_variations[i] * (1.0 + 1e-6) + noise;
        if (!(out.deviations[i] <= bound)) out.rate_bound_check = false;
    }
    return out;
}

// --- indeterminacy --------------------------------------------------------

std::string_view to_string(IndeterminacyVerdict v) {
    switch (v) {
        case IndeterminacyVerdict::CompleteIndeterminate: return "CompleteIndeterminate";
        case IndeterminacyVerdict::SelfAdjointRegime: return "SelfAdjointRegime";
        case IndeterminacyVerdict::Undecided: return "Undecided";
    }
    return "?";
}

IndeterminacyResult indeterminacy_probe(const CoefficientFamily& fam,
                                        const std::vector<Complex>& z_samples,
                                        std::size_t horizon, const IndeterminacyOptions& opts) {
    auto has = [&](Complex w) {
        return std::any_of(z_samples.begin(), z_samples.end(),
                           [&](Complex z) { return std::abs(z - w) < 1e-12; });
    };
    if (!has({0.0, 1.0}) || !has({0.0, -1.0})) {
        throw PreconditionError("indeterminacy_probe: samples must include i and -i");
    }
    IndeterminacyResult res;
    res.carleman = carleman_diagnostic(fam, horizon);
    if (res.carleman.verdict == SeriesVerdict::Diverges) {
        res.verdict = IndeterminacyVerdict::SelfAdjointRegime;
        res.reason = "Carleman sum diverges";
        return res;
    }

    bool ok = res.carleman.verdict == SeriesVerdict::Converges;
    if (!ok) res.reason = "Carleman verdict undecided";
    try {
        const PeriodicLimitData lim = extract_periodic_limits(fam, opts.N, horizon);
        res.limits_converged = lim.converged();
        if (res.limits_converged) res.lambda = lambda_scan(lim, opts.scan_range, opts.scan_grid);
    } catch (const Error& e) {
        res.limits_converged = false;
        if (res.reason.empty()) res.reason = std::string("limit extraction failed: ") + e.what();
    }
    if (!res.limits_converged) {
        ok = false;
        if (res.reason.empty()) res.reason = "periodic limits do not converge";
    } else if (!res.lambda || res.lambda->empty()) {
        ok = false;
        if (res.reason.empty()) res.reason = "no definite parameter in the scan range";
    }

    const int d = fam.dim();
    try {
        for (Complex z : z_samples) {
            ZEvidence ev;
            ev.z = z;
            for (int i = 0; i < 2 * d; ++i) {
                const Vector alpha = Vector::Unit(2 * d, i);
                ev.basis.push_back(l2_tail_diagnostic(propagate(fam, z, alpha, horizon)));
                if (ev.basis.back().verdict != L2Verdict::SquareSummable) ok = false;
            }
            // Rank of the formal eigenvectors u_0 = e_k, stacked over the whole range.
            Matrix span(static_cast<Eigen::Index>(d) * static_cast<Eigen::Index>(horizon + 1), d);
            span.setZero();
            for (int k = 0; k < d; ++k) {
                const Trajectory t = propagate(fam, z, formal_eigenvector_start(fam, z, Vector::Unit(d, k)), horizon);
                for (std::size_t n = 0; n < t.u.size(); ++n) {
                    span.block(static_cast<Eigen::Index>(n) * d, k, d, 1) = t.u[n];
                }
            }
            Eigen::JacobiSVD<Matrix> svd(span);
            const auto& sv = svd.singularValues();
            const double top = sv.size() ? sv(0) : 0.0;
            for (Eigen::Index i = 0; i < sv.size(); ++i) {
                if (sv(i) > opts.rank_tol * top) ++ev.solution_dim;
            }
            if (ev.solution_dim != static_cast<std::size_t>(d)) ok = false;
            res.per_z.push_back(std::move(ev));
        }
    } catch (const Error& e) {
        ok = false;
        if (res.reason.empty()) res.reason = std::string("trajectory failed: ") + e.what();
    }
    if (ok) {
        res.verdict = IndeterminacyVerdict::CompleteIndeterminate;
        res.reason = "Carleman sum converges and every sampled solution is square-summable";
    } else if (res.reason.empty()) {
        res.reason = "some basis trajectory is not square-summable";
    }
    return res;
}

// --- exact asymptotics ----------------------------------------------------

ExactAsymptotics exact_asymptotics(const CoefficientFamily& fam, const PeriodicLimitData& lim,
                                   Complex z, const std::vector<Vector>& alphas,
                                   std::size_t horizon, double hypothesis_tol) {
    const std::size_t N = lim.N;
    if (N % 2 == 0) throw HypothesisViolated("N must be odd");
    const int d = lim.dim();
    for (std::size_t i = 0; i < N; ++i) {
        const std::string idx = "[" + std::to_string(i) + "]";
        if (op_norm(lim.T[i]) > hypothesis_tol) throw HypothesisViolated("T" + idx + " is not 0");
        if (op_norm(lim.Q[i]) > hypothesis_tol) throw HypothesisViolated("Q" + idx + " is not 0");
        if (op_norm(lim.R[i] - Operator::identity(d)) > hypothesis_tol) {
            throw HypothesisViolated("R" + idx + " is not Id");
        }
        if (op_norm(lim.C[i] - lim.C[0]) > hypothesis_tol) {
            throw HypothesisViolated("C" + idx + " differs from C[0]");
        }
    }
    ExactAsymptotics out;
    out.C = lim.C[0];
    out.c_hermitian = op_norm(out.C - out.C.adjoint()) <= hypothesis_tol * std::max(1.0, op_norm(out.C));
    if (!out.c_hermitian) throw HypothesisViolated("C is not Hermitian");

    // F = (-1)^{(N-1)/2} diag(C, C), so S_n tracks the weighted trace up to that sign.
    const double sign = (N / 2) % 2 == 0 ? 1.0 : -1.0;
    for (const Vector& alpha : alphas) {
        const Trajectory traj = propagate(fam, z, alpha, horizon);
        if (traj.overflow) throw HypothesisViolated("trajectory overflowed");
        const TuranTrace tr = turan_trace(fam, N, traj);
        std::vector<double> w;
        w.reserve(traj.horizon());
        for (std::size_t n = 1; n <= traj.horizon(); ++n) {
            w.push_back(fam.a_norm(n) * (quad(out.C, traj.u[n - 1]) + quad(out.C, traj.u[n])));
        }
        double dev = 0.0;
        const double g = last_tenth_mean(tr.values, dev);
        const double wl = last_tenth_mean(w, dev);
        out.g.push_back(g);
        out.weighted_limit.push_back(wl);
        out.rel_diff.push_back(std::abs(wl - sign * g) / std::max(std::abs(g), 1e-300));
        out.max_rel_diff = std::max(out.max_rel_diff, out.rel_diff.back());
    }
    return out;
}

ChristoffelTrace christoffel_limit(const CoefficientFamily& fam, const Operator& C,
                                   const Trajectory& traj) {
    if (!is_hermitian(C)) throw HypothesisViolated("C is not Hermitian");
    const CarlemanReport car = carleman_diagnostic(fam, traj.horizon() + 1);
    if (car.verdict != SeriesVerdict::Diverges) {
        throw HypothesisViolated("Carleman sum is not divergent on the trajectory range");
    }
    ChristoffelTrace out;
    double num = 0.0, den = 0.0;
    out.ratio.reserve(traj.u.size());
    for (std::size_t k = 0; k < traj.u.size(); ++k) {
        num += quad(C, traj.u[k]);
        den += 1.0 / fam.a_norm(k);
        out.ratio.push_back(num / den);
    }
    out.limit = out.ratio.empty() ? 0.0 : out.ratio.back();
    return out;
}

}  // namespace bjm
