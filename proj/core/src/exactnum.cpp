#include "karnrto/exactnum.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <ostream>

#include <mpfr.h>

namespace karnrto {

Natural::Natural(std::uint64_t v) {
    // mpz_class has no portable uint64_t constructor on every platform.
    mpz_import(value_.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
}

Natural::Natural(Integer v) : value_(std::move(v)) {
    if (sgn(value_) < 0) {
        throw DomainError("Natural: negative value " + value_.get_str());
    }
}

std::optional<std::uint64_t> Natural::to_u64() const {
    if (mpz_sizeinbase(value_.get_mpz_t(), 2) > 64) {
        return std::nullopt;
    }
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, value_.get_mpz_t());
    return out;
}

std::ostream& operator<<(std::ostream& os, const Natural& n) { return os << n.to_string(); }

std::uint64_t to_u64(const Integer& v) {
    if (sgn(v) < 0) {
        throw DomainError("to_u64: negative value " + v.get_str());
    }
    auto out = Natural(v).to_u64();
    if (!out) {
        throw DomainError("to_u64: value does not fit in 64 bits");
    }
    return *out;
}

Rational::Rational(const Integer& num, const Integer& den) {
    if (sgn(den) == 0) {
        throw DomainError("Rational: zero denominator");
    }
    value_.get_num() = num;
    value_.get_den() = den;
    value_.canonicalize();
}

namespace {

Integer parse_digits(std::string_view digits, std::string_view whole) {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                       [](unsigned char c) { return std::isdigit(c); })) {
        throw ParseError("not a rational literal: '" + std::string(whole) + "'");
    }
    return Integer(std::string(digits), 10);
}

Integer pow10(unsigned long e) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), 10, e);
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    const std::string_view whole = trim(text);
    std::string_view s = whole;
    if (s.empty()) {
        throw ParseError("empty rational literal");
    }
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    Rational out;
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const Integer num = parse_digits(s.substr(0, slash), whole);
        const Integer den = parse_digits(s.substr(slash + 1), whole);
        if (sgn(den) == 0) {
            throw ParseError("zero denominator in '" + std::string(whole) + "'");
        }
        out = Rational(num, den);
    } else {
        long exponent = 0;
        if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            std::string_view exp_part = s.substr(e + 1);
            bool exp_negative = false;
            if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
                exp_negative = exp_part.front() == '-';
                exp_part.remove_prefix(1);
            }
            const Integer mag = parse_digits(exp_part, whole);
            if (mag > 100000) {
                throw ParseError("exponent out of range in '" + std::string(whole) + "'");
            }
            exponent = mag.get_si() * (exp_negative ? -1 : 1);
            s = s.substr(0, e);
        }
        std::string_view int_part = s;
        std::string_view frac_part;
        if (const auto dot = s.find('.'); dot != std::string_view::npos) {
            int_part = s.substr(0, dot);
            frac_part = s.substr(dot + 1);
            if (int_part.empty() && frac_part.empty()) {
                throw ParseError("not a rational literal: '" + std::string(whole) + "'");
            }
        }
        Integer num = int_part.empty() ? Integer(0) : parse_digits(int_part, whole);
        if (!frac_part.empty()) {
            num = num * pow10(frac_part.size()) + parse_digits(frac_part, whole);
        }
        exponent -= static_cast<long>(frac_part.size());
        out = exponent >= 0 ? Rational(Integer(num * pow10(static_cast<unsigned long>(exponent))))
                            : Rational(num, pow10(static_cast<unsigned long>(-exponent)));
    }
    return negative ? -out : out;
}

std::string Rational::to_string() const {
    if (is_integer()) {
        return value_.get_num().get_str();
    }
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::to_decimal(unsigned digits) const {
    const Integer scale = pow10(digits);
    // round(|x| * 10^d) half away from zero
    mpq_class scaled = abs(*this).value_ * scale + mpq_class(1, 2);
    Integer rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());

    std::string body = rounded.get_str();
    if (digits > 0) {
        if (body.size() <= digits) {
            body.insert(0, digits + 1 - body.size(), '0');
        }
        body.insert(body.size() - digits, ".");
    }
    const bool negative = sign() < 0 && sgn(rounded) != 0;
    return negative ? "-" + body : body;
}

Rational& Rational::operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) {
        throw DomainError("Rational: division by zero");
    }
    value_ /= o.value_;
    return *this;
}

Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

Rational abs(const Rational& x) { return Rational(mpq_class(::abs(x.value_))); }

Rational pow(const Rational& x, std::uint64_t n) {
    static_assert(sizeof(unsigned long) >= sizeof(std::uint64_t),
                  "mpz_pow_ui needs a 64-bit exponent");
    // num and den are coprime, so their powers are too: no canonicalize needed.
    mpq_class out;
    mpz_pow_ui(out.get_num_mpz_t(), x.value_.get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(out.get_den_mpz_t(), x.value_.get_den_mpz_t(), static_cast<unsigned long>(n));
    return Rational(std::move(out));
}

Integer ceil(const Rational& x) {
    Integer out;
    mpz_cdiv_q(out.get_mpz_t(), x.raw().get_num_mpz_t(), x.raw().get_den_mpz_t());
    return out;
}

Integer floor(const Rational& x) {
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), x.raw().get_num_mpz_t(), x.raw().get_den_mpz_t());
    return out;
}

Integer ceil_div(const Rational& x, const Rational& y) {
    if (y.sign() <= 0) {
        throw DomainError("ceil_div: divisor must be positive, got " + y.to_string());
    }
    return ceil(x / y);
}

namespace {

// Above this many bits in base^exponent the exact route gets slow.
constexpr double kExactBitBudget = 4.0e6;
constexpr mpfr_prec_t kMaxEnclosurePrecision = 1 << 16;

bool pow_less_exact(const Rational& base, std::uint64_t exponent, const Rational& bound) {
    // (p/q)^n < a/b  <=>  p^n * b < a * q^n
    Integer lhs;
    Integer rhs;
    mpz_pow_ui(lhs.get_mpz_t(), base.raw().get_num_mpz_t(), exponent);
    mpz_pow_ui(rhs.get_mpz_t(), base.raw().get_den_mpz_t(), exponent);
    lhs *= bound.denominator();
    rhs *= bound.numerator();
    return lhs < rhs;
}

class MpfrExponentRange {
public:
    MpfrExponentRange() : emin_(mpfr_get_emin()), emax_(mpfr_get_emax()) {
        mpfr_set_emin(mpfr_get_emin_min());
        mpfr_set_emax(mpfr_get_emax_max());
    }
    ~MpfrExponentRange() {
        mpfr_set_emin(emin_);
        mpfr_set_emax(emax_);
    }
    MpfrExponentRange(const MpfrExponentRange&) = delete;
    MpfrExponentRange& operator=(const MpfrExponentRange&) = delete;

private:
    mpfr_exp_t emin_;
    mpfr_exp_t emax_;
};

struct Mpfr {
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v, prec); }
    ~Mpfr() { mpfr_clear(v); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_t v;
};

// 1 = certainly less, 0 = certainly not less, -1 = undecided at this precision.
int pow_less_enclosure(const Rational& base, std::uint64_t exponent, const Rational& bound,
                       mpfr_prec_t prec) {
    Mpfr base_lo(prec), base_hi(prec), pow_lo(prec), pow_hi(prec), bound_lo(prec), bound_hi(prec);
    mpfr_set_q(base_lo.v, base.raw().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(base_hi.v, base.raw().get_mpq_t(), MPFR_RNDU);
    mpfr_pow_ui(pow_lo.v, base_lo.v, exponent, MPFR_RNDD);
    mpfr_pow_ui(pow_hi.v, base_hi.v, exponent, MPFR_RNDU);
    mpfr_set_q(bound_lo.v, bound.raw().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(bound_hi.v, bound.raw().get_mpq_t(), MPFR_RNDU);
    if (mpfr_less_p(pow_hi.v, bound_lo.v)) {
        return 1;
    }
    if (mpfr_greaterequal_p(pow_lo.v, bound_hi.v)) {
        return 0;
    }
    return -1;
}

}  // namespace

bool pow_less(const Rational& base, std::uint64_t exponent, const Rational& bound) {
    if (base.sign() < 0) {
        throw DomainError("pow_less: base must be non-negative");
    }
    if (bound.sign() <= 0) {
        throw DomainError("pow_less: bound must be positive");
    }
    if (exponent == 0) {
        return Rational(1) < bound;
    }
    if (base.is_zero()) {
        return true;
    }
    const double bits =
        static_cast<double>(exponent) *
        static_cast<double>(mpz_sizeinbase(base.raw().get_num_mpz_t(), 2) +
                            mpz_sizeinbase(base.raw().get_den_mpz_t(), 2));
    if (bits <= kExactBitBudget) {
        return pow_less_exact(base, exponent, bound);
    }

    const MpfrExponentRange range;
    for (mpfr_prec_t prec = 128; prec <= kMaxEnclosurePrecision; prec *= 2) {
        if (const int verdict = pow_less_enclosure(base, exponent, bound, prec); verdict >= 0) {
            return verdict == 1;
        }
    }
    return pow_less_exact(base, exponent, bound);
}

}  // namespace karnrto
