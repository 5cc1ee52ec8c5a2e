#pragma once

// Preset sample sequences and spike-timeout analysis.

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "karnrto/exactnum.hpp"
#include "karnrto/rtocalc.hpp"
#include "karnrto/trace.hpp"

namespace karnrto::scenario {

/// Every period-th sample is `spike`, the rest are `base`.
struct Pathological {
    std::uint64_t period = 100;
    Rational base{60};
    Rational spike{75};
};

/// i.i.d. samples lo + (hi - lo) * u / 2^53 with u a 53-bit draw from
/// std::mt19937_64 seeded with `seed` (top 53 bits of each output).
struct Uniform {
    Rational lo{60};
    Rational hi{75};
    std::uint64_t seed = 0;
};

struct ScenarioSpec {
    std::variant<Pathological, Uniform> kind;
    std::uint64_t length = 0;
    rtocalc::RtoParams params;

    void validate() const;
};

struct TimeoutReport {
    std::vector<std::uint64_t> timeout_steps;
    std::vector<std::uint64_t> spike_steps;
    Trace trace;
};

std::vector<Rational> generate(const ScenarioSpec& spec);

/// Runs the recursion from S_1 and flags step j >= 2 when S_j > rto_{j-1}.
TimeoutReport detect_timeouts(std::span<const Rational> samples, const rtocalc::RtoParams& params);

/// generate + detect_timeouts; spike_steps lists the pathological spike
/// positions (empty for uniform).
TimeoutReport run(const ScenarioSpec& spec);

}  // namespace karnrto::scenario
