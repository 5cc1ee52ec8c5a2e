#include "karnrto/trace.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace karnrto {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

}  // namespace

Trace make_trace(std::span<const Rational> samples, std::span<const rtocalc::RtoState> states) {
    if (samples.size() != states.size()) {
        throw DomainError("make_trace: sample and state counts differ");
    }
    Trace trace;
    trace.rows.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        TraceRow row;
        row.step = k + 1;
        row.sample = samples[k];
        row.srtt = states[k].srtt;
        row.rttvar = states[k].rttvar;
        row.rto = states[k].rto;
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

void add_bounds(Trace& trace, const steadystate::SteadySpec& spec) {
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
        const auto bounds = steadystate::srtt_bounds(spec, k);
        trace.rows[k].low = bounds.low;
        trace.rows[k].high = bounds.high;
        trace.rows[k].rttvar_upper = steadystate::rttvar_upper(spec, k);
    }
    trace.has_bounds = true;
}

void add_timeouts(Trace& trace, std::span<const std::uint64_t> timeout_steps) {
    const std::unordered_set<std::uint64_t> flagged(timeout_steps.begin(), timeout_steps.end());
    for (auto& row : trace.rows) {
        row.timeout = flagged.contains(row.step);
    }
    trace.has_timeout = true;
}

std::string trace_csv_header(const Trace& trace, std::optional<unsigned> decimal_digits) {
    std::string h = "step,sample,srtt,rttvar,rto";
    if (trace.has_bounds) {
        h += ",L,H,rttvar_upper";
    }
    if (trace.has_timeout) {
        h += ",timeout";
    }
    if (decimal_digits) {
        h += ",sample_dec,srtt_dec,rttvar_dec,rto_dec";
    }
    return h;
}

void write_trace_csv(std::ostream& os, const Trace& trace, std::optional<unsigned> decimal_digits) {
    os << trace_csv_header(trace, decimal_digits) << '\n';
    const auto opt = [](const std::optional<Rational>& r) { return r ? r->to_string() : ""; };
    for (const auto& row : trace.rows) {
        os << row.step << ',' << row.sample << ',' << row.srtt << ',' << row.rttvar << ','
           << row.rto;
        if (trace.has_bounds) {
            os << ',' << opt(row.low) << ',' << opt(row.high) << ',' << opt(row.rttvar_upper);
        }
        if (trace.has_timeout) {
            os << ',' << (row.timeout.value_or(false) ? 1 : 0);
        }
        if (decimal_digits) {
            const unsigned d = *decimal_digits;
            os << ',' << row.sample.to_decimal(d) << ',' << row.srtt.to_decimal(d) << ','
               << row.rttvar.to_decimal(d) << ',' << row.rto.to_decimal(d);
        }
        os << '\n';
    }
}

Trace read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw ParseError("trace CSV: missing header");
    }
    const auto header = split_csv(strip_cr(line));
    const auto col = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    for (const char* required : {"step", "sample", "srtt", "rttvar", "rto"}) {
        if (!col(required)) {
            throw ParseError(std::string("trace CSV: missing column ") + required);
        }
    }
    Trace trace;
    trace.has_bounds = col("L").has_value();
    trace.has_timeout = col("timeout").has_value();

    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != header.size()) {
            throw ParseError("trace CSV: wrong field count on line " + std::to_string(line_no));
        }
        const auto get = [&](const char* name) { return Rational::parse(fields[*col(name)]); };
        const auto get_opt = [&](const char* name) -> std::optional<Rational> {
            const auto& f = fields[*col(name)];
            return f.empty() ? std::nullopt : std::optional<Rational>(Rational::parse(f));
        };
        TraceRow row;
        row.step = to_u64(Rational::parse(fields[*col("step")]).numerator());
        row.sample = get("sample");
        row.srtt = get("srtt");
        row.rttvar = get("rttvar");
        row.rto = get("rto");
        if (trace.has_bounds) {
            row.low = get_opt("L");
            row.high = get_opt("H");
            row.rttvar_upper = get_opt("rttvar_upper");
        }
        if (trace.has_timeout) {
            row.timeout = fields[*col("timeout")] == "1";
        }
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

std::vector<Rational> read_samples(std::istream& is) {
    std::vector<Rational> out;
    std::optional<std::size_t> sample_col;
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        line = strip_cr(line);
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        if (first) {
            first = false;
            if (line.find(',') != std::string::npos) {
                const auto header = split_csv(line);
                const auto it = std::find(header.begin(), header.end(), "sample");
                if (it == header.end()) {
                    throw ParseError("samples CSV: header has no 'sample' column");
                }
                sample_col = static_cast<std::size_t>(it - header.begin());
                continue;
            }
        }
        try {
            if (sample_col) {
                const auto fields = split_csv(line);
                if (*sample_col >= fields.size()) {
                    throw ParseError("missing sample field");
                }
                out.push_back(Rational::parse(fields[*sample_col]));
            } else {
                out.push_back(Rational::parse(line));
            }
        } catch (const ParseError& e) {
            throw ParseError("samples line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace karnrto
