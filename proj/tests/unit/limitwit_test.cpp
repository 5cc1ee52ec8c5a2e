#include <gtest/gtest.h>

#include "karnrto/limitwit.hpp"
#include "oracle.hpp"

namespace karnrto::limitwit {
namespace {

Rational R(long p, long q = 1) { return Rational(Integer(p), Integer(q)); }

TEST(FAlpha, ClosedForm) {
    EXPECT_EQ(f_alpha(R(1, 2), 1), R(1, 2));
    EXPECT_EQ(f_alpha(R(1, 2), 4), R(1, 8));
    for (const auto& a : {R(1, 3), R(3, 4), R(9, 10), R(99, 100)}) {
        const auto k = to_u64(ceiling_k(a));
        EXPECT_EQ(f_alpha(a, k), pow(a, k));
    }
    EXPECT_THROW(f_alpha(R(0), 1), DomainError);
    EXPECT_THROW(f_alpha(R(1), 1), DomainError);
    EXPECT_THROW(f_alpha(R(1, 2), 0), DomainError);
}

TEST(CeilingDelta, Examples) {
    EXPECT_EQ(ceiling_delta(R(0), R(1, 100)).delta, Natural(0));

    // k = 1, eps' = 1/16, d = ceil((1/2) / (1/16)).
    const auto w = ceiling_delta(R(1, 2), R(1, 8));
    EXPECT_EQ(w.delta.value(), oracle::ceil_scan(oracle::q(1, 2) / oracle::q(1, 16)));
    EXPECT_EQ(w.delta, Natural(8));
    EXPECT_LT(oracle::pow_naive(oracle::q(1, 2), 9), oracle::q(1, 8));
    EXPECT_EQ(w.method, Method::Ceiling);

    const auto w2 = ceiling_delta(R(3, 4), R(1, 10));
    const auto d2 = to_u64(w2.delta.value());
    EXPECT_LT(oracle::pow_naive(oracle::q(3, 4), d2 + 1), oracle::q(1, 10));
    EXPECT_GE(static_cast<std::int64_t>(d2),
              oracle::min_delta_scan(oracle::q(3, 4), oracle::q(1, 10), 1000));
}

TEST(CeilingDelta, LargeEpsilonIsClamped) {
    const auto w = ceiling_delta(R(1, 2), R(5));
    EXPECT_EQ(w.delta, ceiling_delta(R(1, 2), R(1)).delta);
}

TEST(CeilingDelta, RejectsBadInputs) {
    EXPECT_THROW(ceiling_delta(R(1), R(1, 2)), DomainError);
    EXPECT_THROW(ceiling_delta(R(-1, 2), R(1, 2)), DomainError);
    EXPECT_THROW(ceiling_delta(R(1, 2), R(0)), DomainError);
    EXPECT_THROW(binomial_delta(R(3, 2), R(1, 2)), DomainError);
    EXPECT_THROW(binomial_delta(R(1, 2), R(-1)), DomainError);
}

TEST(Mu, Unrolled) {
    EXPECT_EQ(mu(3, 5), Natural(3));
    EXPECT_EQ(mu(0, 1), Natural(1));
    EXPECT_EQ(mu(0, 8), Natural(4));
    EXPECT_EQ(mu(0, 0), Natural(0));
    EXPECT_EQ(mu(70, 5), Natural(70));
}

TEST(DOfEps, Examples) {
    EXPECT_EQ(d_of_eps(R(1, 10)), Natural(4));
    EXPECT_EQ(d_of_eps(R(1)), Natural(1));
    EXPECT_EQ(d_of_eps(R(3, 7)), Natural(3));
    EXPECT_LT(oracle::q(1, 16), oracle::q(1, 10));
    EXPECT_LT(oracle::q(1, 8), oracle::q(3, 7));
    EXPECT_THROW(d_of_eps(R(0)), DomainError);
}

TEST(BinomialDelta, Examples) {
    EXPECT_EQ(binomial_delta(R(3, 4), R(1, 10)).delta, Natural(12));
    EXPECT_EQ(oracle::pow_naive(oracle::q(3, 4), 13), oracle::q(1594323, 67108864));
    EXPECT_LT(oracle::q(1594323, 67108864), oracle::q(1, 10));
    EXPECT_EQ(binomial_delta(R(1, 2), R(1, 10)).delta, Natural(4));
    EXPECT_EQ(oracle::pow_naive(oracle::q(1, 2), 5), oracle::q(1, 32));
    EXPECT_EQ(binomial_delta(R(0), R(5)).delta, Natural(0));
}

TEST(BruteForce, Examples) {
    EXPECT_EQ(brute_force_min_delta(R(1, 2), R(1, 8), 100), 3u);
    EXPECT_EQ(brute_force_min_delta(R(0), R(1), 10), 0u);
    EXPECT_EQ(brute_force_min_delta(R(9, 10), R(1, 2), 100), 6u);
    EXPECT_EQ(oracle::min_delta_scan(oracle::q(9, 10), oracle::q(1, 2), 100), 6);
    EXPECT_EQ(brute_force_min_delta(R(99, 100), R(1, 1000), 10), std::nullopt);
}

TEST(BinomialInequality, Examples) {
    EXPECT_TRUE(check_binomial_inequality(1));
    EXPECT_TRUE(check_binomial_inequality(2));
    EXPECT_TRUE(check_binomial_inequality(5));
    EXPECT_EQ(2 * 5 * 5 * 5 * 5 * 5, 6250);
    EXPECT_EQ(6 * 6 * 6 * 6 * 6, 7776);
    EXPECT_THROW(check_binomial_inequality(0), DomainError);
}

TEST(Witness, DispatchAndVerification) {
    const auto both = {Method::Ceiling, Method::BinomialSemiAuto, Method::BinomialManual,
                       Method::BruteForce};
    for (const auto m : both) {
        const auto w = witness(m, R(3, 4), R(1, 10));
        EXPECT_EQ(w.method, m);
        EXPECT_EQ(first_violation(w, 10), std::nullopt) << to_string(m);
    }
    EXPECT_EQ(witness(Method::BruteForce, R(3, 4), R(1, 10)).delta, Natural(8));
}

TEST(Witness, FirstViolationCatchesBadDelta) {
    WitnessResult w{Natural(1), Method::Ceiling, R(1, 2), R(1, 8)};
    EXPECT_EQ(first_violation(w, 10), 2u);
}

TEST(Witness, Names) {
    EXPECT_EQ(to_string(Method::Ceiling), "ceiling");
    EXPECT_EQ(to_string(Method::BinomialSemiAuto), "binomial");
    EXPECT_EQ(to_string(Method::BruteForce), "brute-force");
}

}  // namespace
}  // namespace karnrto::limitwit
