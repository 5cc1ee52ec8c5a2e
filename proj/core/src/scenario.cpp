#include "karnrto/scenario.hpp"

#include <random>

namespace karnrto::scenario {

namespace {

struct Validator {
    void operator()(const Pathological& p) const {
        if (p.period < 2) {
            throw DomainError("pathological scenario: period must be at least 2");
        }
        if (p.base.sign() <= 0 || p.spike < p.base) {
            throw DomainError("pathological scenario: need spike >= base > 0");
        }
    }
    void operator()(const Uniform& u) const {
        if (u.lo.sign() <= 0 || u.hi <= u.lo) {
            throw DomainError("uniform scenario: need hi > lo > 0");
        }
    }
};

struct Generator {
    std::uint64_t length;

    std::vector<Rational> operator()(const Pathological& p) const {
        std::vector<Rational> out;
        out.reserve(length);
        for (std::uint64_t j = 1; j <= length; ++j) {
            out.push_back(j % p.period == 0 ? p.spike : p.base);
        }
        return out;
    }

    std::vector<Rational> operator()(const Uniform& u) const {
        std::mt19937_64 rng(u.seed);
        Integer two_53;
        mpz_ui_pow_ui(two_53.get_mpz_t(), 2, 53);
        const Rational width = u.hi - u.lo;
        std::vector<Rational> out;
        out.reserve(length);
        for (std::uint64_t j = 0; j < length; ++j) {
            const Integer draw = Natural(rng() >> 11).value();
            out.push_back(u.lo + width * Rational(draw, two_53));
        }
        return out;
    }
};

}  // namespace

void ScenarioSpec::validate() const {
    params.validate();
    if (length < 1) {
        throw DomainError("scenario: length must be at least 1");
    }
    std::visit(Validator{}, kind);
}

std::vector<Rational> generate(const ScenarioSpec& spec) {
    spec.validate();
    return std::visit(Generator{spec.length}, spec.kind);
}

TimeoutReport detect_timeouts(std::span<const Rational> samples, const rtocalc::RtoParams& params) {
    const auto states = rtocalc::run(params, samples);
    TimeoutReport out;
    for (std::size_t j = 1; j < samples.size(); ++j) {
        // S_{j+1} against the timer armed after step j (both 1-based).
        if (samples[j] > states[j - 1].rto) {
            out.timeout_steps.push_back(j + 1);
        }
    }
    out.trace = make_trace(samples, states);
    add_timeouts(out.trace, out.timeout_steps);
    return out;
}

TimeoutReport run(const ScenarioSpec& spec) {
    const auto samples = generate(spec);
    TimeoutReport out = detect_timeouts(samples, spec.params);
    if (const auto* p = std::get_if<Pathological>(&spec.kind)) {
        for (std::uint64_t j = p->period; j <= spec.length; j += p->period) {
            out.spike_steps.push_back(j);
        }
    }
    return out;
}

}  // namespace karnrto::scenario
