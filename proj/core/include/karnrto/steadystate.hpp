#pragma once

// Closed-form bounds on srtt and rttvar while samples stay inside a c/r
// steady state, i.e. every sample lies in [c - r, c + r], and the finite-n
// convergence certificates for those bounds.
//
// Indexing: the priors are srtt_{i-1} and rttvar_{i-1}; "n" refers to the
// state after samples S_i .. S_{i+n}, so n = 0 is one step past the priors.

#include <cstdint>
#include <span>

#include "karnrto/exactnum.hpp"
#include "karnrto/limitwit.hpp"
#include "karnrto/rtocalc.hpp"

namespace karnrto::steadystate {

struct SteadySpec {
    Rational c;
    Rational r;
    rtocalc::RtoParams params;
    Rational srtt_prior;
    Rational rttvar_prior;

    /// Requires 0 < r < c, positive priors and valid params.
    void validate() const;

    Rational low() const { return c - r; }
    Rational high() const { return c + r; }
};

struct SrttBounds {
    Rational low;
    Rational high;
};

struct BoundReport {
    std::uint64_t n = 0;
    Rational low;
    Rational high;
    Rational delta_m;
    Rational rttvar_upper;
};

enum class Target { LowToCMinusR, HighToCPlusR, RttvarBoundTo2R };

/// True iff every sample lies in [c - r, c + r]. Requires r > 0.
bool is_steady_state(std::span<const Rational> samples, const Rational& c, const Rational& r);

/// sum_{j=0}^{k} (1-alpha)^j alpha in closed form: 1 - (1-alpha)^(k+1).
Rational geometric_weight(const Rational& alpha, std::uint64_t k);

/// The same sum evaluated term by term.
Rational geometric_weight_literal(const Rational& alpha, std::uint64_t k);

/// L = (1-a)^(n+1) srtt_prior + (1 - (1-a)^(n+1)) (c - r), H likewise with c + r.
SrttBounds srtt_bounds(const SteadySpec& spec, std::uint64_t n);

/// Delta_m = (1-a)^(m+1) srtt_prior + 2r - (1-a)^(m+1) (c + r), i.e. H(m) - (c - r).
Rational delta_m(const SteadySpec& spec, std::uint64_t m);

/// Bound on |srtt_{j-1} - S_j| over j = i+m .. i+n: the larger of
/// |L(t) - (c + r)| and |H(t) - (c - r)| over t = m-1 .. n-1, where
/// t = -1 denotes the prior itself. Both branches are affine in
/// (1-a)^(t+1), so their absolute values peak at the range endpoints.
Rational deviation_bound(const SteadySpec& spec, std::uint64_t m, std::uint64_t n);

/// (1-b)^steps start + (1 - (1-b)^steps) delta.
Rational rttvar_bound(const Rational& beta, std::uint64_t steps, const Rational& start,
                      const Rational& delta);

/// Upper bound on rttvar_{i+n} from the prior rttvar_{i-1}, with
/// Delta = deviation_bound(spec, 0, n).
Rational rttvar_upper(const SteadySpec& spec, std::uint64_t n);

/// Upper bound on rttvar_{i+n} from rttvar_{i+m-1} (taken from a trace),
/// 0 <= m < n, with Delta = deviation_bound(spec, m, n).
Rational rttvar_upper(const SteadySpec& spec, std::uint64_t n, std::uint64_t m,
                      const Rational& rttvar_before_m);

/// (1-b)^(n+1) rttvar_prior + (1 - (1-b)^(n+1)) 2r. An upper bound on
/// rttvar_{i+n} whenever srtt_prior lies in [c - r, c + r]; tends to 2r.
Rational steady_rttvar_bound(const SteadySpec& spec, std::uint64_t n);

BoundReport report(const SteadySpec& spec, std::uint64_t n, std::uint64_t m);

/// The quantity tracked by `target` at n, and its limit.
Rational target_value(const SteadySpec& spec, Target target, std::uint64_t n);
Rational target_limit(const SteadySpec& spec, Target target);

/// N such that |target_value(n) - target_limit| < eps for every n >= N,
/// obtained from a limitwit witness for the contraction factor.
Natural convergence_n_for(const SteadySpec& spec, Target target, const Rational& eps,
                          limitwit::Method method = limitwit::Method::Ceiling);

}  // namespace karnrto::steadystate
