#pragma once

// Per-step trace of the RTO recursion and its CSV form.
//
// Columns, in order:
//   step,sample,srtt,rttvar,rto            always
//   L,H,rttvar_upper                       when bounds were computed
//   timeout                                when timeouts were analysed (0/1)
//   sample_dec,srtt_dec,rttvar_dec,rto_dec with a decimal precision
// Rationals are written as "p/q" (or "p"); header row; LF line endings.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "karnrto/exactnum.hpp"
#include "karnrto/rtocalc.hpp"
#include "karnrto/steadystate.hpp"

namespace karnrto {

struct TraceRow {
    std::uint64_t step = 0;
    Rational sample;
    Rational srtt;
    Rational rttvar;
    Rational rto;
    std::optional<Rational> low;
    std::optional<Rational> high;
    std::optional<Rational> rttvar_upper;
    std::optional<bool> timeout;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct Trace {
    std::vector<TraceRow> rows;
    bool has_bounds = false;
    bool has_timeout = false;

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// Pairs samples with the states they produced; rows are numbered from 1.
Trace make_trace(std::span<const Rational> samples, std::span<const rtocalc::RtoState> states);

/// Fills L, H and rttvar_upper; row k (0-based) is n = k past the priors.
void add_bounds(Trace& trace, const steadystate::SteadySpec& spec);

/// Marks the listed (1-based) steps as timeouts and all others as not.
void add_timeouts(Trace& trace, std::span<const std::uint64_t> timeout_steps);

std::string trace_csv_header(const Trace& trace, std::optional<unsigned> decimal_digits = {});
void write_trace_csv(std::ostream& os, const Trace& trace,
                     std::optional<unsigned> decimal_digits = {});

/// Parses a CSV produced by write_trace_csv (decimal columns are ignored).
Trace read_trace_csv(std::istream& is);

/// Reads RTT samples: one rational per line, blank lines and '#' comments
/// skipped. A CSV with a header naming a "sample" column is also accepted.
std::vector<Rational> read_samples(std::istream& is);

}  // namespace karnrto
