#include <doctest.h>

#include <cmath>

#include "bjm/errors.hpp"
#include "bjm/turan.hpp"
#include "support.hpp"

using namespace bjm;
using bjm::testing::dist;
using bjm::testing::Rng;

namespace {

const Operator kX{{1, 1}, {1, 2}};
const Operator kY{{2, 1}, {1, 1}};
const double kNormX = (3 + std::sqrt(5.0)) / 2;

CoefficientFamily free_scalar() {
    return CoefficientFamily(1, family::Constant{Operator{{1}}, Operator{{0}}});
}
CoefficientFamily constant_example() { return CoefficientFamily(2, family::Constant{kX, kY}); }
CoefficientFamily unbounded(double q) {
    return CoefficientFamily(2, family::ScaledPeriodic{ScalarWeight(weight::Power{1, 1}),
                                                       ScalarWeight(weight::Power{1, 1}, q),
                                                       {kX}, {kY}});
}
CoefficientFamily sqrt_family() {
    return CoefficientFamily(2, family::ScaledPeriodic{ScalarWeight(weight::Power{0.5, 1}),
                                                       ScalarWeight(weight::Constant{0}),
                                                       {kX}, {Operator::zero(2)}});
}
CoefficientFamily geometric() {
    return CoefficientFamily(2, family::ScaledPeriodic{ScalarWeight(weight::Geometric{2}),
                                                       ScalarWeight(weight::Constant{0}),
                                                       {kX}, {Operator::zero(2)}});
}

Vector v2(Complex a, Complex b) {
    Vector v(2);
    v << a, b;
    return v;
}

BlockOperator display_constant(double l) {
    return BlockOperator(Matrix{{1, 1, 1 - l / 2, 0.5},
                                {1, 2, 0.5, (1 - l) / 2},
                                {1 - l / 2, 0.5, 1, 1},
                                {0.5, (1 - l) / 2, 1, 2}});
}

PeriodicLimitData with_q(const PeriodicLimitData& lim, double q) {
    PeriodicLimitData out = lim;
    for (auto& Q : out.Q) Q = Complex(q) * Q;
    return out;
}

/// N-periodic family with well-conditioned a and Hermitian b.
CoefficientFamily periodic(Rng& rng, int d, std::size_t N) {
    std::vector<Operator> X, Y;
    for (std::size_t i = 0; i < N; ++i) {
        X.push_back(rng.well_conditioned(d));
        Y.push_back(rng.hermitian(d));
    }
    return CoefficientFamily(d, family::ScaledPeriodic{ScalarWeight(weight::Constant{1}),
                                                       ScalarWeight(weight::Constant{1}), X, Y});
}

}  // namespace

TEST_CASE("turan_form examples") {
    CHECK(dist(turan_form(free_scalar(), 1, 3, 0.0), BlockOperator::identity(1)) < 1e-15);
    const double l = 0.7;
    CHECK(dist(turan_form(free_scalar(), 1, 3, l), BlockOperator(Matrix{{1, -l / 2}, {-l / 2, 1}})) < 1e-15);
    for (double lam : {-1.0, 0.0, 1.0, 2.5}) {
        CHECK(dist(Complex(kNormX) * turan_form(constant_example(), 1, 4, lam), display_constant(lam)) < 1e-12);
    }
}

TEST_CASE("turan_value examples") {
    const Trajectory t = propagate(free_scalar(), 0.0, v2(1, 0), 50);
    for (double s : turan_trace(free_scalar(), 1, t).values) CHECK(s == doctest::Approx(1.0));

    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
        const Vector a = rng.vec(4);
        const double tscale = rng.uniform(0.1, 3.0);
        const Trajectory t1 = propagate(constant_example(), 1.0, a, 30);
        const Trajectory t2 = propagate(constant_example(), 1.0, tscale * a, 30);
        const double s1 = turan_value(constant_example(), 2, 10, t1);
        const double s2 = turan_value(constant_example(), 2, 10, t2);
        CHECK(std::abs(s2 - tscale * tscale * s1) <= 1e-12 * (1 + std::abs(s2)));
    }
}

TEST_CASE("extract_periodic_limits examples") {
    const auto c = extract_periodic_limits(constant_example(), 1, 2000);
    CHECK(c.converged());
    CHECK(dist(c.T[0], invert(kX)) < 1e-12);
    CHECK(dist(c.Q[0], invert(kX) * kY) < 1e-12);
    CHECK(dist(c.R[0], Operator::identity(2)) < 1e-12);
    CHECK(dist(c.C[0], Operator(kX.matrix() / kNormX)) < 1e-12);

    const auto u = extract_periodic_limits(unbounded(0.5), 1, 10000);
    CHECK(u.converged());
    const Operator C = u.C[0];
    const Operator D = Operator(0.5 * kY.matrix() / kNormX);
    CHECK(op_norm(u.T[0]) < 1e-6);
    CHECK(dist(u.Q[0], invert(C) * D) < 1e-6);
    CHECK(dist(u.R[0], invert(C) * C.adjoint()) < 1e-6);

    CoefficientFamily osc(1, family::Custom{[](std::size_t n) { return Operator{{n % 2 ? -1.0 : 1.0}}; },
                                            [](std::size_t) { return Operator{{0}}; }});
    CHECK_FALSE(extract_periodic_limits(osc, 1, 1000).converged());
    CHECK(extract_periodic_limits(osc, 2, 1000).converged());
}

TEST_CASE("f_matrix examples") {
    const auto c = extract_periodic_limits(constant_example(), 1, 2000);
    Rng rng(23);
    for (int k = 0; k < 10; ++k) {
        const double l = rng.uniform(-5, 10);
        CHECK(dist(Complex(kNormX) * f_matrix(c, l), display_constant(l)) < 1e-12);
    }

    const auto u = extract_periodic_limits(unbounded(1.0), 1, 10000);
    for (double q : {0.0, 0.3, -0.6}) {
        const BlockOperator expected(Matrix{{1, 1, q, q / 2}, {1, 2, q / 2, q / 2},
                                            {q, q / 2, 1, 1}, {q / 2, q / 2, 1, 2}});
        CHECK(dist(Complex(kNormX) * f_matrix(with_q(u, q), 0.4), expected) < 1e-6);
    }

    for (std::size_t N : {1u, 3u, 5u}) {
        const Operator C(kX.matrix() / kNormX);
        const PeriodicLimitData lim = make_limit_data(std::vector<Operator>(N, Operator::zero(2)),
                                                      std::vector<Operator>(N, Operator::zero(2)),
                                                      std::vector<Operator>(N, Operator::identity(2)),
                                                      std::vector<Operator>(N, C));
        const double sign = (N / 2) % 2 == 0 ? 1.0 : -1.0;
        CHECK(dist(f_matrix(lim, 0.9), Complex(sign) * BlockOperator::block_diagonal(C, C)) < 1e-12);
    }
}

TEST_CASE("principal_minors match the printed polynomials") {
    const auto c = extract_periodic_limits(constant_example(), 1, 2000);
    auto p3 = [](double l) { return -l * l / 2 + 1.5 * l - 0.25; };
    auto p4 = [](double l) {
        return std::pow(l, 4) / 16 - 3 * std::pow(l, 3) / 8 - 17 * l * l / 16 + 21 * l / 8 - 11.0 / 16;
    };
    Rng rng(29);
    for (int k = 0; k < 20; ++k) {
        const double l = rng.uniform(-5, 10);
        const auto m = principal_minors(Complex(kNormX) * f_matrix(c, l));
        CHECK(std::abs(m[0] - 1) < 1e-9);
        CHECK(std::abs(m[1] - 1) < 1e-9);
        CHECK(std::abs(m[2] - p3(l)) < 1e-9);
        CHECK(std::abs(m[3] - p4(l)) < 1e-9);
    }
    const auto id = principal_minors(BlockOperator::identity(2));
    for (double v : id) CHECK(v == doctest::Approx(1));

    const auto u = extract_periodic_limits(unbounded(1.0), 1, 10000);
    const auto m0 = principal_minors(Complex(kNormX) * f_matrix(with_q(u, 0.0), 0.0));
    for (double v : m0) CHECK(v == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("lambda_scan examples") {
    const auto c = extract_periodic_limits(constant_example(), 1, 2000);
    const auto s = lambda_scan(c, {-5, 10}, 1501);
    REQUIRE(s.intervals.size() == 1);
    CHECK(s.intervals[0].sign == Sign::Positive);
    CHECK(std::abs(s.intervals[0].lo - (-3 + std::sqrt(13.0)) / 2) < 1e-6);
    CHECK(std::abs(s.intervals[0].hi - (9 - std::sqrt(37.0)) / 2) < 1e-6);

    const auto s2 = lambda_scan(c, {-5, 10}, 3001);
    REQUIRE(s2.intervals.size() == 1);
    CHECK(std::abs(s2.intervals[0].lo - s.intervals[0].lo) < 1e-7);
    CHECK(std::abs(s2.intervals[0].hi - s.intervals[0].hi) < 1e-7);

    const PeriodicLimitData idlim = make_limit_data({Operator::zero(2)}, {Operator::zero(2)},
                                                    {Operator::identity(2)}, {Operator::identity(2)});
    const auto all = lambda_scan(idlim, {-3, 3}, 11);
    REQUIRE(all.intervals.size() == 1);
    CHECK(all.intervals[0].lo == -3);
    CHECK(all.intervals[0].hi == 3);

    const auto u = extract_periodic_limits(unbounded(1.0), 1, 10000);
    const auto qs = coupling_scan(u, 0.0, {-2, 2}, 401);
    REQUIRE(qs.intervals.size() == 1);
    CHECK(std::abs(qs.intervals[0].lo - (std::sqrt(5.0) - 3)) < 1e-6);
    CHECK(std::abs(qs.intervals[0].hi - (3 - std::sqrt(5.0))) < 1e-6);
}

TEST_CASE("conjugated forms agree with shifted windows and keep their sign") {
    Rng rng(31);
    for (std::size_t N : {1u, 2u, 3u}) {
        int tested = 0;
        for (int k = 0; k < 60 && tested < 10; ++k) {
            const CoefficientFamily f = periodic(rng, 2, N);
            const auto lim = extract_periodic_limits(f, N, 40 * N + 1);
            REQUIRE(lim.converged());
            const double l = rng.uniform(-3, 3);
            const auto conj = conjugated_f_matrices(lim, l);
            for (std::size_t j = 0; j < N; ++j) {
                CHECK(dist(conj[j], f_matrix(lim, l, j)) <= 1e-9 * (1 + op_norm(conj[j])));
            }
            const Definiteness d0 = classify_definiteness(conj[0].as_operator());
            if (d0 != Definiteness::StrictlyPositive && d0 != Definiteness::StrictlyNegative) continue;
            ++tested;
            for (const auto& F : conj) CHECK(classify_definiteness(F.as_operator(), 0.0) == d0);
        }
    }
}

TEST_CASE("periodic families have constant Turán values") {
    Rng rng(37);
    for (std::size_t N : {1u, 2u, 3u}) {
        const CoefficientFamily f = periodic(rng, 2, N);
        const Trajectory t = propagate(f, rng.uniform(-1, 1), rng.vec(4), 60);
        const auto tr = turan_trace(f, N, t);
        const auto s = weighted_norm_trace(f, t);
        for (std::size_t i = 21; i < tr.values.size(); ++i) {
            CHECK(std::abs(tr.values[i] - tr.values[i - 1]) <= 1e-10 * (s[i] + s[i - 1]));
        }
    }
}

TEST_CASE("Turán increment bound on random families") {
    Rng rng(41);
    for (int k = 0; k < 120; ++k) {
        const int d = rng.integer(1, 3);
        const std::size_t N = rng.integer(1, 3);
        const CoefficientFamily f = rng.family(d, 40);
        const Complex z = k % 2 ? Complex(rng.uniform(-2, 2), 0) : rng.complex();
        const Trajectory t = propagate(f, z, rng.vec(2 * d), 30);
        const std::size_t n = rng.integer(1, 25);
        const double lhs = std::abs(turan_value(f, N, n + 1, t) - turan_value(f, N, n, t)) /
                           (t.u[n - 1].squaredNorm() + t.u[n].squaredNorm());
        CHECK(lhs <= turan_increment_bound(f, N, z, n) * (1 + 1e-6));
    }
}

TEST_CASE("asymptotic_band examples") {
    const auto b = asymptotic_band(free_scalar(), 0.0, {v2(1, 0)}, 200);
    CHECK(b.c1 == doctest::Approx(1));
    CHECK(b.c2 == doctest::Approx(1));

    Rng rng(43);
    std::vector<Vector> alphas;
    for (int k = 0; k < 5; ++k) alphas.push_back(rng.vec(4).normalized());
    const auto in = asymptotic_band(constant_example(), 1.0, alphas, 2000);
    CHECK(std::isfinite(in.ratio));
    CHECK(in.ratio < 100);
    const auto out1 = asymptotic_band(constant_example(), 10.0, alphas, 40);
    const auto out2 = asymptotic_band(constant_example(), 10.0, alphas, 80);
    CHECK(out2.ratio > 10 * out1.ratio);
}

TEST_CASE("turan_convergence examples") {
    const auto c = turan_convergence(free_scalar(), 1, 0.0, {v2(1, 0)}, 500);
    CHECK(c.converged);
    CHECK(c.g[0] == doctest::Approx(1));
    CHECK(c.residuals[0] < 1e-12);

    Rng rng(47);
    std::vector<Vector> alphas;
    for (int k = 0; k < 5; ++k) alphas.push_back(rng.vec(4).normalized());
    const auto k1 = turan_convergence(constant_example(), 1, 1.0, alphas, 2000);
    CHECK(k1.converged);
    for (double g : k1.g) CHECK(std::abs(g) > 1e-3);

    const auto per = turan_convergence(periodic(rng, 2, 2), 2, 0.3, alphas, 500);
    for (double r : per.residuals) CHECK(r < 1e-12 * (1 + std::abs(per.g[0])) * 1e3);
}

TEST_CASE("indeterminacy_probe examples") {
    const std::vector<Complex> zs{{0, 1}, {0, -1}, 0.0, {1, 1}};
    const auto g = indeterminacy_probe(geometric(), zs, 200);
    CHECK(g.verdict == IndeterminacyVerdict::CompleteIndeterminate);
    for (const auto& e : g.per_z) CHECK(e.solution_dim == 2);

    const auto c = indeterminacy_probe(constant_example(), zs, 2000);
    CHECK(c.verdict == IndeterminacyVerdict::SelfAdjointRegime);

    CoefficientFamily osc(1, family::Custom{[](std::size_t n) {
                                                return Operator{{std::ldexp(n % 2 ? 1.0 : 3.0, n)}};
                                            },
                                            [](std::size_t) { return Operator{{0}}; }});
    CHECK(indeterminacy_probe(osc, zs, 200).verdict == IndeterminacyVerdict::Undecided);
    CHECK_THROWS_AS(indeterminacy_probe(geometric(), {0.0}, 200), PreconditionError);
}

TEST_CASE("exact_asymptotics and christoffel on the square-root family") {
    const auto f = sqrt_family();
    const auto lim = extract_periodic_limits(f, 1, 10000);
    Rng rng(53);
    std::vector<Vector> alphas;
    for (int k = 0; k < 3; ++k) alphas.push_back(rng.vec(4).normalized());
    const auto e = exact_asymptotics(f, lim, 0.0, alphas, 10000);
    CHECK(e.c_hermitian);
    CHECK(e.max_rel_diff < 0.02);

    const Trajectory t = propagate(f, 0.0, alphas[0], 10000);
    const auto ch = christoffel_limit(f, lim.C[0], t);
    CHECK(std::abs(ch.limit - e.g[0] / 2) < 0.05 * std::abs(e.g[0]));

    const Trajectory t2 = propagate(f, 0.0, 2.0 * alphas[0], 10000);
    CHECK(christoffel_limit(f, lim.C[0], t2).limit == doctest::Approx(4 * ch.limit).epsilon(1e-9));

    const PeriodicLimitData bad = make_limit_data({Operator::zero(2)}, {Operator::zero(2)},
                                                  {Operator::identity(2)}, {Operator{{1, 1}, {0, 1}}});
    CHECK_THROWS_AS(exact_asymptotics(f, bad, 0.0, alphas, 1000), HypothesisViolated);
    const auto c2 = extract_periodic_limits(constant_example(), 1, 2000);
    CHECK_THROWS_AS(exact_asymptotics(constant_example(), c2, 0.0, alphas, 1000), HypothesisViolated);
}

TEST_CASE("christoffel on the free scalar family") {
    const Trajectory t = propagate(free_scalar(), 0.0, v2(1, 0), 4000);
    const auto ch = christoffel_limit(free_scalar(), Operator{{1}}, t);
    CHECK(ch.limit == doctest::Approx(0.5).epsilon(1e-3));
    CHECK_THROWS_AS(christoffel_limit(geometric(), Operator::identity(2),
                                      propagate(geometric(), 0.0, Vector::Ones(4), 200)),
                    HypothesisViolated);
}

TEST_CASE("block-diagonal limit form reduces the Turán value") {
    const auto f = sqrt_family();
    const Operator C = extract_periodic_limits(f, 1, 10000).C[0];
    const Trajectory t = propagate(f, 0.0, Vector::Ones(4).normalized(), 10000);
    auto gap = [&](std::size_t n) {
        const Vector u0 = t.u[n - 1], u1 = t.u[n];
        const double reduced = f.a_norm(n) * (u0.dot(C.matrix() * u0).real() + u1.dot(C.matrix() * u1).real());
        return std::abs(turan_value(f, 1, n, t) - reduced);
    };
    CHECK(gap(10000) < gap(100));
    CHECK(gap(10000) < 0.01);
}
