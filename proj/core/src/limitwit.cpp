#include "karnrto/limitwit.hpp"

namespace karnrto::limitwit {

namespace {

void require_unit_interval(const Rational& alpha, const Rational& epsilon, const char* who) {
    if (alpha.sign() < 0 || alpha >= Rational(1)) {
        throw DomainError(std::string(who) + ": alpha must lie in [0, 1), got " + alpha.to_string());
    }
    if (epsilon.sign() <= 0) {
        throw DomainError(std::string(who) + ": epsilon must be positive, got " +
                          epsilon.to_string());
    }
}

}  // namespace

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Ceiling: return "ceiling";
        case Method::BinomialManual: return "binomial-manual";
        case Method::BinomialSemiAuto: return "binomial";
        case Method::BruteForce: return "brute-force";
    }
    return "unknown";
}

Integer ceiling_k(const Rational& alpha) {
    if (alpha.sign() <= 0 || alpha >= Rational(1)) {
        throw DomainError("ceiling_k: alpha must lie in (0, 1), got " + alpha.to_string());
    }
    return ceil(alpha / (Rational(1) - alpha));
}

Rational f_alpha(const Rational& alpha, std::uint64_t n) {
    if (n == 0) {
        throw DomainError("f_alpha: n must be at least 1");
    }
    const Integer k = ceiling_k(alpha);
    return Rational(k) * pow(alpha, to_u64(k)) / Rational(Natural(n).value());
}

WitnessResult ceiling_delta(const Rational& alpha, const Rational& epsilon) {
    require_unit_interval(alpha, epsilon, "ceiling_delta");
    WitnessResult out{Natural(0), Method::Ceiling, alpha, epsilon};
    if (alpha.is_zero()) {
        return out;
    }
    // Halving turns the intermediary alpha^n <= f(n) <= eps' into a strict bound.
    const Rational eps_half = min(epsilon, Rational(1)) / Rational(2);
    const Integer k = ceiling_k(alpha);
    const Integer d = ceil_div(Rational(k) * pow(alpha, to_u64(k)), eps_half);
    out.delta = Natural(k > d ? k : d);
    return out;
}

Natural mu(const Natural& b, const Natural& q) {
    // (b, q) -> b if q < 2^b else mu(b + 1, q); unrolled.
    Integer bits = b.value();
    if (bits >= static_cast<unsigned long>(mpz_sizeinbase(q.value().get_mpz_t(), 2))) {
        return b;
    }
    Integer power;
    mpz_ui_pow_ui(power.get_mpz_t(), 2, to_u64(bits));
    while (!(q.value() < power)) {
        bits += 1;
        power *= 2;
    }
    return Natural(bits);
}

Natural d_of_eps(const Rational& epsilon) {
    if (epsilon.sign() <= 0) {
        throw DomainError("d_of_eps: epsilon must be positive, got " + epsilon.to_string());
    }
    return mu(Natural(0), Natural(epsilon.denominator()));
}

WitnessResult binomial_delta(const Rational& alpha, const Rational& epsilon) {
    require_unit_interval(alpha, epsilon, "binomial_delta");
    WitnessResult out{Natural(0), Method::BinomialSemiAuto, alpha, epsilon};
    if (alpha.is_zero()) {
        return out;
    }
    const Natural d = d_of_eps(min(epsilon, Rational(1)));
    out.delta = Natural(alpha.numerator() * d.value());
    return out;
}

std::optional<std::uint64_t> brute_force_min_delta(const Rational& alpha, const Rational& epsilon,
                                                   std::uint64_t cap) {
    require_unit_interval(alpha, epsilon, "brute_force_min_delta");
    // alpha^n is non-increasing, so the first hit is the minimum.
    const Integer p = alpha.numerator();
    const Integer q = alpha.denominator();
    const Integer a = epsilon.numerator();
    const Integer b = epsilon.denominator();
    Integer p_pow = p;
    Integer q_pow = q;
    for (std::uint64_t delta = 0; delta <= cap; ++delta) {
        if (p_pow * b < a * q_pow) {
            return delta;
        }
        p_pow *= p;
        q_pow *= q;
    }
    return std::nullopt;
}

bool check_binomial_inequality(std::uint64_t n) {
    if (n == 0) {
        throw DomainError("check_binomial_inequality: n must be at least 1");
    }
    Integer lhs;
    Integer rhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), n, n);
    mpz_ui_pow_ui(rhs.get_mpz_t(), n + 1, n);
    return 2 * lhs <= rhs;
}

WitnessResult witness(Method method, const Rational& alpha, const Rational& epsilon) {
    switch (method) {
        case Method::Ceiling:
            return ceiling_delta(alpha, epsilon);
        case Method::BinomialManual:
        case Method::BinomialSemiAuto: {
            auto w = binomial_delta(alpha, epsilon);
            w.method = method;
            return w;
        }
        case Method::BruteForce: {
            // cap keeps the scan bounded; callers wanting the oracle use
            // brute_force_min_delta directly.
            constexpr std::uint64_t kCap = 1'000'000;
            const auto delta = brute_force_min_delta(alpha, epsilon, kCap);
            if (!delta) {
                throw DomainError("brute force found no witness below 10^6");
            }
            return {Natural(*delta), Method::BruteForce, alpha, epsilon};
        }
    }
    throw DomainError("unknown witness method");
}

std::optional<std::uint64_t> first_violation(const WitnessResult& w, std::uint64_t horizon) {
    const auto delta = w.delta.to_u64();
    if (!delta || *delta > UINT64_MAX - horizon) {
        throw DomainError("first_violation: delta too large to verify");
    }
    for (std::uint64_t n = *delta + 1; n <= *delta + horizon; ++n) {
        if (!pow_less(w.alpha, n, w.epsilon)) {
            return n;
        }
    }
    return std::nullopt;
}

}  // namespace karnrto::limitwit
