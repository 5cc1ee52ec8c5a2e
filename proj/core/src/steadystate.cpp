#include "karnrto/steadystate.hpp"

#include <cassert>

namespace karnrto::steadystate {

void SteadySpec::validate() const {
    params.validate();
    if (r.sign() <= 0) {
        throw DomainError("SteadySpec: radius must be positive, got " + r.to_string());
    }
    if (r >= c) {
        throw DomainError("SteadySpec: need r < c so samples stay positive");
    }
    if (srtt_prior.sign() <= 0 || rttvar_prior.sign() <= 0) {
        throw DomainError("SteadySpec: priors must be positive");
    }
}

bool is_steady_state(std::span<const Rational> samples, const Rational& c, const Rational& r) {
    if (r.sign() <= 0) {
        throw DomainError("is_steady_state: radius must be positive");
    }
    const Rational lo = c - r;
    const Rational hi = c + r;
    for (const auto& s : samples) {
        if (s < lo || s > hi) {
            return false;
        }
    }
    return true;
}

Rational geometric_weight(const Rational& alpha, std::uint64_t k) {
    if (alpha.sign() <= 0 || alpha >= Rational(1)) {
        throw DomainError("geometric_weight: alpha must lie in (0, 1)");
    }
    Rational out = Rational(1) - pow(Rational(1) - alpha, k + 1);
    assert(k > 8 || out == geometric_weight_literal(alpha, k));
    return out;
}

Rational geometric_weight_literal(const Rational& alpha, std::uint64_t k) {
    const Rational decay = Rational(1) - alpha;
    Rational term = alpha;
    Rational sum;
    for (std::uint64_t j = 0; j <= k; ++j) {
        sum += term;
        term *= decay;
    }
    return sum;
}

namespace {

// (1-a)^(t+1) for t >= -1, with t passed as t+1.
Rational contraction(const SteadySpec& spec, std::uint64_t t_plus_one) {
    return pow(Rational(1) - spec.params.alpha, t_plus_one);
}

Rational convex(const Rational& weight_on_prior, const Rational& prior, const Rational& target) {
    return weight_on_prior * prior + (Rational(1) - weight_on_prior) * target;
}

// max(|L(t) - (c+r)|, |H(t) - (c-r)|) with u = (1-a)^(t+1).
Rational deviation_at(const SteadySpec& spec, const Rational& u) {
    const Rational lo = convex(u, spec.srtt_prior, spec.low());
    const Rational hi = convex(u, spec.srtt_prior, spec.high());
    return max(abs(lo - spec.high()), abs(hi - spec.low()));
}

}  // namespace

SrttBounds srtt_bounds(const SteadySpec& spec, std::uint64_t n) {
    const Rational u = contraction(spec, n + 1);
    return {convex(u, spec.srtt_prior, spec.low()), convex(u, spec.srtt_prior, spec.high())};
}

Rational delta_m(const SteadySpec& spec, std::uint64_t m) {
    const Rational u = contraction(spec, m + 1);
    return u * spec.srtt_prior + Rational(2) * spec.r - u * spec.high();
}

Rational deviation_bound(const SteadySpec& spec, std::uint64_t m, std::uint64_t n) {
    if (m > n) {
        throw DomainError("deviation_bound: need m <= n");
    }
    return max(deviation_at(spec, contraction(spec, m)), deviation_at(spec, contraction(spec, n)));
}

Rational rttvar_bound(const Rational& beta, std::uint64_t steps, const Rational& start,
                      const Rational& delta) {
    return convex(pow(Rational(1) - beta, steps), start, delta);
}

Rational rttvar_upper(const SteadySpec& spec, std::uint64_t n) {
    return rttvar_bound(spec.params.beta, n + 1, spec.rttvar_prior, deviation_bound(spec, 0, n));
}

Rational rttvar_upper(const SteadySpec& spec, std::uint64_t n, std::uint64_t m,
                      const Rational& rttvar_before_m) {
    if (m >= n) {
        throw DomainError("rttvar_upper: need m < n");
    }
    return rttvar_bound(spec.params.beta, n + 1 - m, rttvar_before_m, deviation_bound(spec, m, n));
}

Rational steady_rttvar_bound(const SteadySpec& spec, std::uint64_t n) {
    return rttvar_bound(spec.params.beta, n + 1, spec.rttvar_prior, Rational(2) * spec.r);
}

BoundReport report(const SteadySpec& spec, std::uint64_t n, std::uint64_t m) {
    const auto [low, high] = srtt_bounds(spec, n);
    return {n, low, high, delta_m(spec, m), rttvar_upper(spec, n)};
}

Rational target_value(const SteadySpec& spec, Target target, std::uint64_t n) {
    switch (target) {
        case Target::LowToCMinusR: return srtt_bounds(spec, n).low;
        case Target::HighToCPlusR: return srtt_bounds(spec, n).high;
        case Target::RttvarBoundTo2R: return steady_rttvar_bound(spec, n);
    }
    throw DomainError("unknown convergence target");
}

Rational target_limit(const SteadySpec& spec, Target target) {
    switch (target) {
        case Target::LowToCMinusR: return spec.low();
        case Target::HighToCPlusR: return spec.high();
        case Target::RttvarBoundTo2R: return Rational(2) * spec.r;
    }
    throw DomainError("unknown convergence target");
}

Natural convergence_n_for(const SteadySpec& spec, Target target, const Rational& eps,
                          limitwit::Method method) {
    if (eps.sign() <= 0) {
        throw DomainError("convergence_n_for: eps must be positive");
    }
    // |value(n) - limit| = factor^(n+1) * gap
    const Rational& gain =
        target == Target::RttvarBoundTo2R ? spec.params.beta : spec.params.alpha;
    const Rational start = target == Target::RttvarBoundTo2R ? spec.rttvar_prior : spec.srtt_prior;
    const Rational gap = abs(start - target_limit(spec, target));
    if (gap.is_zero()) {
        return Natural(0);
    }
    const Rational scale = max(Rational(1), gap);
    return limitwit::witness(method, Rational(1) - gain, eps / scale).delta;
}

}  // namespace karnrto::steadystate
