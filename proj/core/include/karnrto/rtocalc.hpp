#pragma once

// The retransmission-timeout recursion over RTT samples S_1, S_2, ...:
//
//   rto_i    = srtt_i + max(G, 4 rttvar_i)
//   rttvar_1 = S_1 / 2        rttvar_i = (1-beta) rttvar_{i-1} + beta |srtt_{i-1} - S_i|
//   srtt_1   = S_1            srtt_i   = (1-alpha) srtt_{i-1} + alpha S_i
//
// No RTO floor, no backoff, no rounding of samples.

#include <cstdint>
#include <span>
#include <vector>

#include "karnrto/exactnum.hpp"

namespace karnrto::rtocalc {

struct RtoParams {
    Rational alpha{Rational(1, 8)};
    Rational beta{Rational(1, 4)};
    /// Clock granularity; has no default on purpose.
    Rational g;

    /// Throws DomainError unless 0 < alpha < 1, 0 < beta < 1 and g > 0.
    void validate() const;
};

/// Builds validated parameters.
RtoParams make_params(Rational alpha, Rational beta, Rational g);

struct RtoState {
    std::uint64_t step = 0;
    Rational srtt;
    Rational rttvar;
    Rational rto;

    friend bool operator==(const RtoState&, const RtoState&) = default;
};

/// srtt + max(g, 4 rttvar).
Rational timeout_of(const RtoParams& params, const Rational& srtt, const Rational& rttvar);

RtoState init(const RtoParams& params, const Rational& first_sample);

/// Applies one sample. The rttvar update reads the previous srtt, so it is
/// evaluated before srtt moves.
RtoState step(const RtoParams& params, const RtoState& prev, const Rational& sample);

std::vector<RtoState> run(const RtoParams& params, std::span<const Rational> samples);

/// A state standing in for (srtt_{i-1}, rttvar_{i-1}) at step 0, used to
/// resume the recursion from arbitrary priors.
RtoState from_priors(const RtoParams& params, const Rational& srtt, const Rational& rttvar);

/// Folds step() over samples starting from `prior`.
std::vector<RtoState> resume(const RtoParams& params, const RtoState& prior,
                             std::span<const Rational> samples);

}  // namespace karnrto::rtocalc
