#include <gtest/gtest.h>

#include "gen.hpp"
#include "karnrto/limitwit.hpp"
#include "oracle.hpp"

namespace karnrto::limitwit {
namespace {

using testgen::Gen;

const Rational kHalf(1, 2);

Rational epsilon(Gen& g, std::uint64_t max_den) { return g.positive_below(2, max_den); }

TEST(LimitwitProps, WitnessesHoldOnHorizon) {
    Gen g(11);
    for (int i = 0; i < 300; ++i) {
        const Rational a = g.unit_open(1000);
        const Rational e = epsilon(g, 1000);
        for (const auto m : {Method::Ceiling, Method::BinomialSemiAuto}) {
            const auto w = witness(m, a, e);
            EXPECT_EQ(first_violation(w, 10), std::nullopt) << a << ' ' << e;
        }
    }
}

TEST(LimitwitProps, WitnessesAreAtLeastTheMinimum) {
    Gen g(12);
    int checked = 0;
    while (checked < 150) {
        const Rational a = g.unit_open(60);
        const Rational e = epsilon(g, 200);
        const auto dmin = brute_force_min_delta(a, e, 5000);
        if (!dmin) {
            continue;
        }
        ++checked;
        EXPECT_EQ(static_cast<std::int64_t>(*dmin), oracle::min_delta_scan(a.raw(), e.raw(), 5000));
        EXPECT_GE(ceiling_delta(a, e).delta, Natural(*dmin));
        EXPECT_GE(binomial_delta(a, e).delta, Natural(*dmin));
    }
}

TEST(LimitwitProps, MuIsMinimalBound) {
    Gen g(13);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t b = g.range(0, 40);
        const std::uint64_t q = g.coin() ? g.range(0, 1000) : g.u64() >> g.range(0, 63);
        const auto m = to_u64(mu(b, q).value());
        const Integer qi = Natural(q).value();
        EXPECT_GE(m, b);
        EXPECT_LT(qi, Integer(1) << m);
        if (m > b) {
            EXPECT_GE(qi, Integer(1) << (m - 1));
        }
        if (q >= 1) {
            const auto m0 = to_u64(mu(0, q).value());
            EXPECT_LT(Rational(Integer(1), Integer(1) << m0), Rational(Integer(1), qi));
        }
    }
}

TEST(LimitwitProps, HalfPowerOfDBelowEpsilon) {
    Gen g(14);
    for (int i = 0; i < 1000; ++i) {
        const Rational e = g.positive_below(3, 100000);
        const auto d = to_u64(d_of_eps(e).value());
        EXPECT_LT(pow(kHalf, d), e);
    }
}

TEST(LimitwitProps, ExponentMonotone) {
    Gen g(15);
    for (int i = 0; i < 500; ++i) {
        const Rational a = g.unit_open(100);
        const std::uint64_t k = g.range(1, 60);
        const std::uint64_t n = g.range(k, 80);
        EXPECT_LE(pow(a, n), pow(a, k));
    }
}

TEST(LimitwitProps, NumeratorPowerAtMostHalf) {
    Gen g(16);
    for (int i = 0; i < 500; ++i) {
        const Rational a = g.unit_open(300);
        EXPECT_LE(pow(a, to_u64(a.numerator())), kHalf) << a;
    }
}

TEST(LimitwitProps, RationalBelowNumeratorOverSuccessor) {
    Gen g(17);
    for (int i = 0; i < 1000; ++i) {
        const Rational a = g.unit_open(1000000);
        const Integer x = a.numerator();
        EXPECT_LE(a, Rational(x, x + 1));
    }
}

TEST(LimitwitProps, HalfBoundedBaseBelowEpsilonAtDenominator) {
    Gen g(18);
    for (int i = 0; i < 400; ++i) {
        const Rational a = kHalf * g.unit_open(100);
        const Rational e = g.positive_below(3, 60);
        const std::uint64_t d = g.range(1, 60);
        EXPECT_LE(pow(a, d), pow(kHalf, d));
        EXPECT_LE(pow(a, to_u64(e.denominator())), e) << a << ' ' << e;
        const auto de = to_u64(d_of_eps(e).value());
        EXPECT_LT(pow(a, de + g.range(0, 5)), e);
    }
}

TEST(LimitwitProps, CeilingIntermediaries) {
    Gen g(19);
    for (int i = 0; i < 300; ++i) {
        const Rational a = g.unit_open(60);
        const Integer ki = ceiling_k(a);
        const auto k = to_u64(ki);
        EXPECT_LE(a, Rational(ki, ki + 1));
        const std::uint64_t n = k + g.range(0, 50);
        const Rational nr(Natural(n).value());
        EXPECT_LE(Rational(ki, ki + 1), nr / (nr + Rational(1)));
        EXPECT_LE(pow(a, n), f_alpha(a, n));
    }
}

TEST(LimitwitProps, BinomialInequalitySweep) {
    for (std::uint64_t n = 1; n <= 200; ++n) {
        EXPECT_TRUE(check_binomial_inequality(n)) << n;
    }
}

}  // namespace
}  // namespace karnrto::limitwit
