#pragma once

// Random inputs shared by the tests.

#include <cmath>
#include <random>
#include <vector>

#include "bjm/coefficients.hpp"
#include "bjm/operator.hpp"

namespace bjm::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo = -1.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    Complex complex() { return {uniform(), uniform()}; }

    Operator op(int d) {
        Matrix m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = complex();
        return Operator(m);
    }
    Operator hermitian(int d) { return sym(op(d)); }
    /// Identity plus a perturbation of norm below 1/2: invertible, cond <= 3.
    Operator well_conditioned(int d, double scale = 1.0) {
        Operator p = op(d);
        const double n = op_norm(p);
        return scale * (Operator::identity(d) + (0.45 / n) * p);
    }
    Vector vec(int n) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v(i) = complex();
        return v;
    }

    /// Tabulated family with well-conditioned a_n and Hermitian b_n.
    CoefficientFamily family(int d, std::size_t len) {
        family::Tabulated t;
        for (std::size_t n = 0; n < len; ++n) {
            t.a.push_back(well_conditioned(d, uniform(0.5, 2.0)));
            t.b.push_back(hermitian(d));
        }
        return CoefficientFamily(d, std::move(t), "random");
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

inline double dist(const Operator& x, const Operator& y) { return op_norm(x - y); }
inline double dist(const BlockOperator& x, const BlockOperator& y) { return op_norm(x - y); }

inline Operator mat(std::initializer_list<std::initializer_list<Complex>> rows) {
    return Operator(rows);
}

}  // namespace bjm::testing
