#pragma once

// Exact arbitrary-precision arithmetic: Rational, Natural, ceilings, powers.
//
// Every Rational is kept in lowest terms with a positive denominator, so
// numerator() and denominator() are well defined. Nothing in this header
// ever rounds.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace karnrto {

/// Arbitrary-precision signed integer.
using Integer = mpz_class;

/// Raised for precondition violations (division by zero, out-of-range
/// parameters, malformed literals).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ParseError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Arbitrary-precision non-negative integer.
class Natural {
public:
    Natural() = default;
    Natural(std::uint64_t v);  // NOLINT(google-explicit-constructor)
    explicit Natural(Integer v);

    const Integer& value() const noexcept { return value_; }

    /// The value as a machine word, or nullopt if it does not fit.
    std::optional<std::uint64_t> to_u64() const;
    std::string to_string() const { return value_.get_str(); }

    friend bool operator==(const Natural& a, const Natural& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Natural& a, const Natural& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    Integer value_{0};
};

std::ostream& operator<<(std::ostream& os, const Natural& n);

class Rational {
public:
    Rational() = default;
    Rational(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : value_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
    explicit Rational(const Integer& v) : value_(v) {}
    /// num/den; throws DomainError when den == 0.
    Rational(const Integer& num, const Integer& den);

    /// Accepts "p", "p/q" and finite decimals such as "-67.5"; decimals are
    /// converted exactly ("67.5" -> 135/2).
    static Rational parse(std::string_view text);

    Integer numerator() const { return value_.get_num(); }
    Integer denominator() const { return value_.get_den(); }

    int sign() const { return sgn(value_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return value_.get_den() == 1; }

    /// "p/q", or "p" when q == 1. The sign sits on the numerator.
    std::string to_string() const;
    /// Decimal approximation rounded half away from zero to `digits`
    /// fractional digits.
    std::string to_decimal(unsigned digits) const;
    double to_double() const { return value_.get_d(); }

    const mpq_class& raw() const noexcept { return value_; }

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a);

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    explicit Rational(mpq_class v) : value_(std::move(v)) {}
    friend Rational abs(const Rational& x);
    friend Rational pow(const Rational& x, std::uint64_t n);

    mpq_class value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational abs(const Rational& x);
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// x^n by repeated squaring. 0^0 == 1.
Rational pow(const Rational& x, std::uint64_t n);

/// Smallest integer >= x.
Integer ceil(const Rational& x);
/// Largest integer <= x.
Integer floor(const Rational& x);

/// ceil(x / y); requires y > 0.
Integer ceil_div(const Rational& x, const Rational& y);

/// Converts a non-negative integer to a machine word; throws DomainError
/// if it is negative or too large.
std::uint64_t to_u64(const Integer& v);

/// Decides base^exponent < bound exactly, for base >= 0 and bound > 0.
///
/// Small instances are evaluated with exact integer powers. Large ones
/// (where base^exponent would have millions of digits) are decided from
/// outward-rounded MPFR enclosures of both sides; the precision is raised
/// until the enclosures separate, and the exact route is the last resort.
/// The answer is always the exact truth value.
bool pow_less(const Rational& base, std::uint64_t exponent, const Rational& bound);

}  // namespace karnrto
