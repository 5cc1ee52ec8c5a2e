#include "karnrto/rtocalc.hpp"

namespace karnrto::rtocalc {

namespace {

void require_positive_sample(const Rational& s) {
    if (s.sign() <= 0) {
        throw DomainError("rtocalc: samples must be positive, got " + s.to_string());
    }
}

}  // namespace

void RtoParams::validate() const {
    const Rational one(1);
    if (alpha.sign() <= 0 || alpha >= one) {
        throw DomainError("RtoParams: alpha must lie in (0, 1), got " + alpha.to_string());
    }
    if (beta.sign() <= 0 || beta >= one) {
        throw DomainError("RtoParams: beta must lie in (0, 1), got " + beta.to_string());
    }
    if (g.sign() <= 0) {
        throw DomainError("RtoParams: g must be positive, got " + g.to_string());
    }
}

RtoParams make_params(Rational alpha, Rational beta, Rational g) {
    RtoParams p{std::move(alpha), std::move(beta), std::move(g)};
    p.validate();
    return p;
}

Rational timeout_of(const RtoParams& params, const Rational& srtt, const Rational& rttvar) {
    return srtt + max(params.g, Rational(4) * rttvar);
}

RtoState init(const RtoParams& params, const Rational& first_sample) {
    params.validate();
    require_positive_sample(first_sample);
    RtoState s;
    s.step = 1;
    s.srtt = first_sample;
    s.rttvar = first_sample / Rational(2);
    s.rto = timeout_of(params, s.srtt, s.rttvar);
    return s;
}

RtoState step(const RtoParams& params, const RtoState& prev, const Rational& sample) {
    require_positive_sample(sample);
    const Rational one(1);
    RtoState s;
    s.step = prev.step + 1;
    s.rttvar = (one - params.beta) * prev.rttvar + params.beta * abs(prev.srtt - sample);
    s.srtt = (one - params.alpha) * prev.srtt + params.alpha * sample;
    s.rto = timeout_of(params, s.srtt, s.rttvar);
    return s;
}

std::vector<RtoState> run(const RtoParams& params, std::span<const Rational> samples) {
    if (samples.empty()) {
        throw DomainError("rtocalc::run: empty sample sequence");
    }
    std::vector<RtoState> out;
    out.reserve(samples.size());
    out.push_back(init(params, samples.front()));
    for (const auto& s : samples.subspan(1)) {
        out.push_back(step(params, out.back(), s));
    }
    return out;
}

RtoState from_priors(const RtoParams& params, const Rational& srtt, const Rational& rttvar) {
    params.validate();
    if (srtt.sign() <= 0 || rttvar.sign() < 0) {
        throw DomainError("rtocalc::from_priors: srtt must be positive and rttvar non-negative");
    }
    return {0, srtt, rttvar, timeout_of(params, srtt, rttvar)};
}

std::vector<RtoState> resume(const RtoParams& params, const RtoState& prior,
                             std::span<const Rational> samples) {
    params.validate();
    std::vector<RtoState> out;
    out.reserve(samples.size());
    const RtoState* prev = &prior;
    for (const auto& s : samples) {
        out.push_back(step(params, *prev, s));
        prev = &out.back();
    }
    return out;
}

}  // namespace karnrto::rtocalc
