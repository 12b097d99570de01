#pragma once

// Coefficient families (a_n, b_n) of a block Jacobi matrix, scalar weight
// sequences and sequence diagnostics.

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bjm/operator.hpp"
#include "bjm/series.hpp"

namespace bjm {

/// Half-open index range [start, end).
struct IndexRange {
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t size() const noexcept { return end > start ? end - start : 0; }
};

/// Default analysis horizon.
inline constexpr std::size_t kDefaultHorizon = 10000;

// --- iterated logarithms --------------------------------------------------

/// log^{(i)}(x): i-fold iterated natural logarithm, log^{(0)}(x) = x.
/// Throws DomainError if an intermediate value is not positive.
double iter_log(int i, double x);

/// g_j(x) = prod_{i=1}^{j} log^{(i)}(x); g_0 = 1.
double g_product(int j, double x);

// --- scalar weights -------------------------------------------------------

namespace weight {

/// x_n = (n + offset)^exponent.
struct Power {
    double exponent = 1.0;
    double offset = 1.0;
};
/// k sqrt(log(k+1)) repeated k times, k = 1, 2, ...
struct BlockRepeatedSqrtLog {};
/// 1 / (k log(k+1)) repeated k times, k = 1, 2, ...
struct BlockRepeatedInvKLog {};
/// x_n = (n + offset) g_K(n + offset).
struct LogProduct {
    int K = 1;
    double offset = 3.0;
};
/// x_n = 1 / log^{(K)}(n + offset).
struct ReciprocalLogProduct {
    int K = 1;
    double offset = 3.0;
};
/// x_n = ratio^n.
struct Geometric {
    double ratio = 2.0;
};
struct Tabulated {
    std::vector<double> values;
};
struct Constant {
    double value = 1.0;
};

}  // namespace weight

/// Real scalar sequence n -> scale * base(n).
class ScalarWeight {
public:
    using Kind = std::variant<weight::Power, weight::BlockRepeatedSqrtLog,
                              weight::BlockRepeatedInvKLog, weight::LogProduct,
                              weight::ReciprocalLogProduct, weight::Geometric,
                              weight::Tabulated, weight::Constant>;

    ScalarWeight() : ScalarWeight(weight::Constant{}) {}
    ScalarWeight(Kind kind, double scale = 1.0);

    double operator()(std::size_t n) const;

    const Kind& kind() const noexcept { return kind_; }
    double scale() const noexcept { return scale_; }

private:
    Kind kind_;
    double scale_ = 1.0;
};

/// Block index k (k >= 1) of position n in the sequence 1, 2,2, 3,3,3, ...
std::size_t block_index(std::size_t n);

// --- coefficient families -------------------------------------------------

namespace family {

struct Constant {
    Operator a;
    Operator b;
};
/// a_n = x_n X_{n mod N}, b_n = y_n Y_{n mod N}.
struct ScaledPeriodic {
    ScalarWeight x;
    ScalarWeight y;
    std::vector<Operator> X;
    std::vector<Operator> Y;
};
/// Explicit finite lists; indices past the end raise PreconditionError.
struct Tabulated {
    std::vector<Operator> a;
    std::vector<Operator> b;
};
struct Custom {
    std::function<Operator(std::size_t)> a;
    std::function<Operator(std::size_t)> b;
};

}  // namespace family

/// The sequences (a_n) and (b_n). Immutable after construction; evaluations
/// are memoized behind a mutex so a family can be shared across threads.
class CoefficientFamily {
public:
    using Kind = std::variant<family::Constant, family::ScaledPeriodic, family::Tabulated,
                              family::Custom>;

    CoefficientFamily(int dim, Kind kind, std::string description = {});

    int dim() const noexcept { return dim_; }
    const Kind& kind() const noexcept { return kind_; }
    const std::string& description() const noexcept { return description_; }
    /// Number of available indices for tabulated families, otherwise SIZE_MAX.
    std::size_t available() const noexcept;

    Operator a(std::size_t n) const;
    Operator b(std::size_t n) const;
    /// a_n^{-1}; throws SingularError.
    Operator a_inv(std::size_t n) const;
    double a_norm(std::size_t n) const;

private:
    struct Entry {
        Operator a, b, a_inv;
        double a_norm = 0.0;
        bool has_inv = false;
    };
    const Entry& entry(std::size_t n) const;
    Operator eval_a(std::size_t n) const;
    Operator eval_b(std::size_t n) const;

    int dim_;
    Kind kind_;
    std::string description_;
    mutable std::mutex mutex_;
    mutable std::vector<std::unique_ptr<Entry>> cache_;
};

// --- diagnostics ----------------------------------------------------------

struct VariationReport {
    std::size_t N = 1;
    IndexRange window;
    double partial_sum = 0.0;
    /// Geometric extrapolation of the remainder from the final increments.
    double tail_estimate = 0.0;
    bool converged = false;
    /// Running partial sums, one per window index.
    std::vector<double> running;
};

/// Windowed total N-variation sum_{n in window} ||seq(n+N) - seq(n)||.
VariationReport total_variation(const std::function<Operator(std::size_t)>& seq, std::size_t N,
                                IndexRange window);

struct CarlemanReport {
    double partial_sum = 0.0;
    SeriesVerdict verdict = SeriesVerdict::Undecided;
    SeriesEvidence evidence;
};

/// sum_{n < horizon} 1 / ||a_n|| with a divergence verdict.
CarlemanReport carleman_diagnostic(const CoefficientFamily& fam, std::size_t horizon);

enum class ViolationKind { SingularA, NonHermitianB, NonFinite };
std::string_view to_string(ViolationKind k);

struct Violation {
    std::size_t index = 0;
    ViolationKind kind = ViolationKind::SingularA;
};

/// Checks the standing assumptions (a_n invertible, b_n Hermitian) on a range.
std::vector<Violation> validate_family(const CoefficientFamily& fam, IndexRange range);

}  // namespace bjm
