#include <doctest.h>

#include <cmath>

#include "bjm/commutator.hpp"
#include "bjm/errors.hpp"
#include "support.hpp"

using namespace bjm;
using bjm::testing::dist;
using bjm::testing::Rng;

namespace {

const Operator kX{{1, 1}, {1, 2}};
const Operator kY{{2, 1}, {1, 1}};

CoefficientFamily example1() {
    return CoefficientFamily(2, family::ScaledPeriodic{ScalarWeight(weight::BlockRepeatedSqrtLog{}),
                                                       ScalarWeight(weight::BlockRepeatedInvKLog{}),
                                                       {kX}, {kY}});
}
CoefficientFamily example2() {
    return CoefficientFamily(2, family::ScaledPeriodic{ScalarWeight(weight::LogProduct{1, 3}),
                                                       ScalarWeight(weight::ReciprocalLogProduct{1, 3}),
                                                       {kX}, {kY}});
}
CoefficientFamily scaled(ScalarWeight x, Operator X, ScalarWeight y, Operator Y) {
    return CoefficientFamily(static_cast<int>(X.dim()),
                             family::ScaledPeriodic{std::move(x), std::move(y), {X}, {Y}});
}

Vector v2(Complex a, Complex b) {
    Vector v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("commutator_form examples") {
    CoefficientFamily c(2, family::Constant{kX, Operator::zero(2)});
    const AlphaStrategy an(alpha::AN{});
    CHECK(dist(commutator_form(c, an, 3, 0.0), BlockOperator::block_diagonal(kX * kX, kX * kX)) < 1e-12);

    CoefficientFamily s(1, family::Constant{Operator{{1}}, Operator{{0}}});
    const double l = 1.3;
    CHECK(dist(commutator_form(s, AlphaStrategy(), 2, l), BlockOperator(Matrix{{1, -l / 2}, {-l / 2, 1}})) < 1e-15);

    Rng rng(61);
    CoefficientFamily r(2, family::Tabulated{{rng.well_conditioned(2), rng.well_conditioned(2),
                                              rng.well_conditioned(2), rng.well_conditioned(2)},
                                             std::vector<Operator>(4, Operator::zero(2))});
    for (const AlphaStrategy& st : {AlphaStrategy(), an}) {
        const BlockOperator f = commutator_form(r, st, 2, 0.0);
        CHECK(op_norm(f.block(0, 1)) < 1e-15);
        CHECK(op_norm(f.block(1, 0)) < 1e-15);
    }
}

TEST_CASE("AlphaStrategy") {
    CHECK(AlphaStrategy().name() == "identity");
    CHECK(AlphaStrategy(alpha::AN{}).name() == "an");
    CHECK_THROWS_AS(AlphaStrategy(alpha::Log{2, 2}), DomainError);
    const AlphaStrategy lg(alpha::Log{1, 3});
    CoefficientFamily c(2, family::Constant{kX, kY});
    CHECK(dist(lg(c, 2), Operator::identity(2)) == 0.0);
    CHECK(dist(lg(c, 5), Complex(5 * std::log(5.0)) * invert(kX.adjoint())) < 1e-12);
}

TEST_CASE("commutator_value examples") {
    CoefficientFamily s(1, family::Constant{Operator{{1}}, Operator{{0}}});
    const Trajectory t = propagate(s, 0.0, v2(1, 0), 30);
    for (std::size_t n = 1; n < 29; ++n) CHECK(commutator_value(s, AlphaStrategy(), n, t) == doctest::Approx(1));

    CoefficientFamily c(2, family::Constant{kX, kY});
    Rng rng(67);
    const Vector a = rng.vec(4);
    const Trajectory t1 = propagate(c, 0.5, a, 20), t2 = propagate(c, 0.5, 3.0 * a, 20);
    CHECK(commutator_value(c, AlphaStrategy(), 5, t2) ==
          doctest::Approx(9 * commutator_value(c, AlphaStrategy(), 5, t1)).epsilon(1e-12));
    CHECK_THROWS_AS(commutator_value(c, AlphaStrategy(), 5, propagate(c, Complex(0, 1), a, 20)),
                    PreconditionError);
}

TEST_CASE("dual representations agree and the increment bound holds") {
    Rng rng(71);
    for (int k = 0; k < 150; ++k) {
        const int d = rng.integer(1, 3);
        const CoefficientFamily f = rng.family(d, 40);
        AlphaStrategy s;
        switch (k % 4) {
            case 0: s = AlphaStrategy(); break;
            case 1: s = AlphaStrategy(alpha::AN{}); break;
            case 2: s = AlphaStrategy(alpha::Log{1, 3}); break;
            default: {
                std::vector<Operator> w;
                for (int i = 0; i < 40; ++i) w.push_back(rng.op(d));
                s = AlphaStrategy(alpha::Custom{[w](std::size_t n) { return w[n]; }});
            }
        }
        const double l = rng.uniform(-3, 3);
        const Trajectory t = propagate(f, l, rng.vec(2 * d), 30);
        const std::size_t n = rng.integer(1, 25);
        const double p4 = commutator_value(f, s, n, t);
        const double e8 = commutator_value_direct(f, s, n, t);
        CHECK(std::abs(p4 - e8) <= 1e-9 * std::max(1.0, std::abs(p4)));

        const double next = commutator_value(f, s, n + 1, t);
        const double drop = std::max(0.0, -(next - p4));
        const double denom = t.u[n].squaredNorm() + t.u[n + 1].squaredNorm();
        CHECK(drop / denom <= commutator_increment_bound(f, s, n, l) * (1 + 1e-6) + 1e-12);
    }
}

TEST_CASE("c_limit examples") {
    const auto f = scaled(ScalarWeight(weight::Power{1, 1}), kX, ScalarWeight(weight::Constant{0}), Operator::zero(2));
    const auto an = c_limit(f, AlphaStrategy(alpha::AN{}), 0.7, 5000);
    CHECK(an.converged);
    const double w = op_norm(kX * kX.adjoint());
    const BlockOperator expected(Matrix(BlockOperator::block_diagonal(kX * kX.adjoint(), kX.adjoint() * kX).matrix() / w));
    CHECK(dist(sym(an.value), expected) < 1e-6);
    CHECK(an.definiteness == Definiteness::StrictlyPositive);

    const auto lg = c_limit(example2(), AlphaStrategy(alpha::Log{1, 3}), 0.5, 10000);
    CHECK(dist(sym(lg.value), BlockOperator::identity(2)) < 1e-2);
    CHECK(lg.definiteness == Definiteness::StrictlyPositive);

    CoefficientFamily osc(1, family::Custom{[](std::size_t n) { return Operator{{n % 2 ? 1.0 : 2.0}}; },
                                            [](std::size_t) { return Operator{{0}}; }});
    CHECK_FALSE(c_limit(osc, AlphaStrategy(), 0.0, 1000).converged);
}

TEST_CASE("thmA_conditions examples") {
    CoefficientFamily c(2, family::Constant{kX, Operator{{0.5, 1}, {1, 1.5}}});
    const auto r = thmA_conditions(c, AlphaStrategy(alpha::AN{}), 2000);
    REQUIRE(r.conditions.size() == 4);
    for (int i = 0; i < 3; ++i) {
        CHECK(r.conditions[i].satisfied);
        for (double t : r.conditions[i].terms) CHECK(t < 1e-12);
    }
    CHECK(r.conditions[3].satisfied);
    CHECK(r.all_satisfied());

    const auto e1 = thmA_conditions(example1(), AlphaStrategy(alpha::AN{}), 10000);
    CHECK(e1.conditions[0].satisfied);
    CHECK(e1.conditions[2].satisfied);
    for (const auto& cond : e1.conditions)
        for (double t : cond.terms) CHECK(t >= 0.0);

    const auto e2 = thmA_conditions(example2(), AlphaStrategy(alpha::Log{1, 3}), 10000);
    CHECK(e2.all_satisfied());
}

TEST_CASE("check_spec2 examples") {
    const auto ok = check_spec2(example1(), 10000);
    CHECK(ok.passed());
    CHECK(check_spec2(CoefficientFamily(2, family::Constant{kX, kY}), 2000).at("a_inv_to_zero").passed == false);
    const auto lin = scaled(ScalarWeight(weight::Power{1, 1}), Operator::identity(2),
                            ScalarWeight(weight::Power{1, 1}), kY);
    CHECK_FALSE(check_spec2(lin, 5000).at("a_inv_b_to_zero").passed);
    CHECK_THROWS_AS(check_spec2(example1(), 50), PreconditionError);
}

TEST_CASE("check_spec3 examples") {
    const auto ok = check_spec3(example2(), 1, 3, 10000);
    CHECK(ok.passed());
    const auto geo = scaled(ScalarWeight(weight::Geometric{2}), Operator::identity(2),
                            ScalarWeight(weight::Constant{0}), Operator::zero(2));
    CHECK_FALSE(check_spec3(geo, 1, 3, 300).at("b").passed);
    const auto unb = scaled(ScalarWeight(weight::LogProduct{1, 3}), kX, ScalarWeight(weight::Power{1, 1}), kY);
    CHECK_FALSE(check_spec3(unb, 1, 3, 5000).at("c_bounded").passed);
    CHECK_THROWS_AS(check_spec3(example2(), 2, 2, 1000), PreconditionError);
}
