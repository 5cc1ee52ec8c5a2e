#pragma once

// Constructive witnesses for lim_{n->oo} alpha^n = 0 over the rationals.
//
// A witness is a natural delta with alpha^n < epsilon for every n > delta.
// Two independent constructions are provided (ceiling and binomial), plus
// a brute-force linear scan used as an oracle.

#include <cstdint>
#include <optional>
#include <string_view>

#include "karnrto/exactnum.hpp"

namespace karnrto::limitwit {

enum class Method { Ceiling, BinomialManual, BinomialSemiAuto, BruteForce };

std::string_view to_string(Method m);

struct WitnessResult {
    Natural delta;
    Method method = Method::Ceiling;
    Rational alpha;
    Rational epsilon;
};

/// k * alpha^k / n with k = ceil(alpha / (1 - alpha)). Requires 0 < alpha < 1
/// and n >= 1.
Rational f_alpha(const Rational& alpha, std::uint64_t n);

/// ceil(alpha / (1 - alpha)) for 0 < alpha < 1.
Integer ceiling_k(const Rational& alpha);

/// delta = max(k, ceil(k alpha^k / eps')) where eps' = min(eps, 1) / 2.
/// alpha == 0 gives delta = 0.
WitnessResult ceiling_delta(const Rational& alpha, const Rational& epsilon);

/// Smallest b' >= b with q < 2^b'.
Natural mu(const Natural& b, const Natural& q);

/// mu(0, denominator(eps)); guarantees 1/2^d < eps.
Natural d_of_eps(const Rational& epsilon);

/// delta = numerator(alpha) * d_of_eps(min(eps, 1)). Valid because
/// alpha^numerator(alpha) <= 1/2, so for n > p*d:
///   alpha^n <= (alpha^p)^floor(n/p) <= (1/2)^d < eps.
WitnessResult binomial_delta(const Rational& alpha, const Rational& epsilon);

/// Smallest delta <= cap with alpha^(delta+1) < eps, by linear scan.
std::optional<std::uint64_t> brute_force_min_delta(const Rational& alpha, const Rational& epsilon,
                                                   std::uint64_t cap);

/// 2 n^n <= (1 + n)^n, evaluated exactly. Requires n >= 1.
bool check_binomial_inequality(std::uint64_t n);

/// Dispatches on method; BinomialManual and BinomialSemiAuto share one
/// construction (they differ only in how d is derived).
WitnessResult witness(Method method, const Rational& alpha, const Rational& epsilon);

/// Checks alpha^n < eps exactly for n = delta+1 .. delta+horizon. Returns the
/// first failing n, or nullopt when all pass.
std::optional<std::uint64_t> first_violation(const WitnessResult& w, std::uint64_t horizon);

}  // namespace karnrto::limitwit
