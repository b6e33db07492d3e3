#pragma once

/**
 * Arithmetic backends for partition-function accumulation.
 *
 * Partition functions on trees grow doubly exponentially in the depth, so
 * there are two ways to hold their values:
 *
 *  - ExactWeight: a nonnegative big rational. Exact, but magnitudes become
 *    impractical past depth ~8 on small trees. Used wherever tests demand
 *    bit-for-bit equality with the brute-force oracle.
 *  - LogWeight: a nonnegative real represented by its natural log, with
 *    -inf standing for zero. Addition is the stable log-sum-exp rule, so
 *    each add/multiply stays within a few machine epsilons relative error.
 *
 * Both model the same commutative semiring interface (Weight concept),
 * which is all the transfer recursion needs.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <concepts>
#include <limits>

#include "treepressure/errors.hpp"

namespace treepressure {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class BackendKind { exact_rational, log_real };
enum class Mode { extendable, local };

// ============================================================================
// Logarithms of big values
// ============================================================================

// Natural log of a nonnegative big integer (-inf for 0). Splits off the top
// 64 bits so the result is accurate to a few ulp even for huge operands.
inline double log_of(const BigInt& v) {
    if (v == 0) return -std::numeric_limits<double>::infinity();
    const auto bits = boost::multiprecision::msb(v);  // index of highest set bit
    if (bits <= 62) return std::log(v.convert_to<double>());
    const BigInt top = v >> (bits - 63);  // in [2^63, 2^64)
    return std::log(top.convert_to<double>()) +
           static_cast<double>(bits - 63) * std::log(2.0);
}

inline double log_of(const Rational& v) {
    return log_of(numerator(v)) - log_of(denominator(v));
}

// Exact rational value of a finite double (every finite double is rational).
inline Rational rational_of(double x) {
    if (!std::isfinite(x)) throw invalid_input("cannot convert non-finite value to rational");
    return Rational(x);  // boost converts floating point exactly
}

// ============================================================================
// Weight semiring
// ============================================================================

template <typename W>
concept Weight = requires(W a, W b, const Rational& q) {
    { W::zero() } -> std::same_as<W>;
    { W::one() } -> std::same_as<W>;
    { W::from_rational(q) } -> std::same_as<W>;
    { a + b } -> std::same_as<W>;
    { a * b } -> std::same_as<W>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.log_value() } -> std::convertible_to<double>;
};

// Exact nonnegative rational weight.
struct ExactWeight {
    Rational value;

    static ExactWeight zero() { return {Rational(0)}; }
    static ExactWeight one() { return {Rational(1)}; }
    static ExactWeight from_rational(const Rational& q) { return {q}; }

    friend ExactWeight operator+(const ExactWeight& a, const ExactWeight& b) {
        return {a.value + b.value};
    }
    friend ExactWeight operator*(const ExactWeight& a, const ExactWeight& b) {
        return {a.value * b.value};
    }
    friend bool operator==(const ExactWeight& a, const ExactWeight& b) {
        return a.value == b.value;
    }

    bool is_zero() const { return value == 0; }
    double log_value() const { return log_of(value); }
};

// Log-domain nonnegative real weight; lg == -inf represents zero.
struct LogWeight {
    double lg = -std::numeric_limits<double>::infinity();

    static LogWeight zero() { return {-std::numeric_limits<double>::infinity()}; }
    static LogWeight one() { return {0.0}; }
    static LogWeight from_rational(const Rational& q) { return {log_of(q)}; }
    static LogWeight from_real(double x) {
        if (x < 0 || std::isnan(x)) throw invalid_input("weights must be nonnegative");
        return {std::log(x)};
    }
    static LogWeight from_log(double lg) { return {lg}; }

    friend LogWeight operator*(const LogWeight& a, const LogWeight& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return {a.lg + b.lg};
    }
    friend LogWeight operator+(const LogWeight& a, const LogWeight& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const double hi = a.lg > b.lg ? a.lg : b.lg;
        const double lo = a.lg > b.lg ? b.lg : a.lg;
        return {hi + std::log1p(std::exp(lo - hi))};
    }

    bool is_zero() const { return lg == -std::numeric_limits<double>::infinity(); }
    double log_value() const { return lg; }
};

static_assert(Weight<ExactWeight>);
static_assert(Weight<LogWeight>);

}  // namespace treepressure
