#pragma once

// Serialized forms of simulation, witness and timeout results.
//
// JSON is emitted with sorted keys and no insignificant whitespace variation,
// so equal reports serialize to equal bytes.

#include <iosfwd>
#include <string>

#include "karnrto/limitwit.hpp"
#include "karnrto/netsim.hpp"
#include "karnrto/scenario.hpp"

namespace karnrto::report {

/// [{"invariant_name", "tick", "details"}, ...]; "[]" when clean.
std::string invariant_log_json(const netsim::SimReport& r);

/// Ambiguous ACKs with their candidate RTTs.
std::string ambiguity_log_json(const netsim::SimReport& r);

/// Header "packet,ack,tick,rtt".
void write_samples_csv(std::ostream& os, const netsim::SimReport& r);

/// Trace of the RTO recursion over the simulation's samples (no rows when
/// nothing was sampled).
Trace simulation_trace(const netsim::SimReport& r);

/// Everything in the report, for determinism checks and archival.
std::string sim_report_json(const netsim::SimReport& r);

/// {"count", "steps", "spike_steps"}.
std::string timeout_report_json(const scenario::TimeoutReport& r);

/// {"method", "alpha", "epsilon", "delta", ...}.
std::string witness_json(const limitwit::WitnessResult& w, std::uint64_t verified,
                         std::uint64_t horizon, bool ok);

}  // namespace karnrto::report
