#include "karnrto/report.hpp"

#include <ostream>

#include <json.hpp>

namespace karnrto::report {

using nlohmann::json;

namespace {

json state_json(const rtocalc::RtoState& s) {
    return {{"step", s.step},
            {"srtt", s.srtt.to_string()},
            {"rttvar", s.rttvar.to_string()},
            {"rto", s.rto.to_string()}};
}

json violations(const netsim::SimReport& r) {
    json out = json::array();
    for (const auto& v : r.violations) {
        out.push_back({{"invariant_name", v.invariant}, {"tick", v.tick}, {"details", v.details}});
    }
    return out;
}

json ambiguities(const netsim::SimReport& r) {
    json out = json::array();
    for (const auto& a : r.ambiguities) {
        out.push_back({{"tick", a.tick},
                       {"ack", a.ack},
                       {"packet", a.packet},
                       {"transmit_ticks", a.transmit_ticks},
                       {"candidate_rtts", a.candidate_rtts()},
                       {"details", "ACK " + std::to_string(a.ack) + " covers packet " +
                                       std::to_string(a.packet) + " which was transmitted " +
                                       std::to_string(a.transmit_ticks.size()) +
                                       " times; RTT is ambiguous, no sample taken"}});
    }
    return out;
}

}  // namespace

std::string invariant_log_json(const netsim::SimReport& r) { return violations(r).dump(2); }

std::string ambiguity_log_json(const netsim::SimReport& r) { return ambiguities(r).dump(2); }

void write_samples_csv(std::ostream& os, const netsim::SimReport& r) {
    os << "packet,ack,tick,rtt\n";
    for (const auto& s : r.samples) {
        os << s.packet << ',' << s.ack << ',' << s.tick << ',' << s.rtt << '\n';
    }
}

Trace simulation_trace(const netsim::SimReport& r) {
    std::vector<Rational> samples;
    samples.reserve(r.samples.size());
    for (const auto& s : r.samples) {
        samples.emplace_back(Natural(s.rtt).value());
    }
    return make_trace(samples, r.rto_states);
}

std::string sim_report_json(const netsim::SimReport& r) {
    json samples = json::array();
    for (const auto& s : r.samples) {
        samples.push_back({{"packet", s.packet},
                           {"ack", s.ack},
                           {"tick", s.tick},
                           {"rtt", s.rtt},
                           {"prev_highest_ack", s.prev_highest_ack}});
    }
    json states = json::array();
    for (const auto& s : r.rto_states) {
        states.push_back(state_json(s));
    }
    const auto final_state = r.final_state();
    json out = {
        {"sample_attribution", "previous-highest-ack"},
        {"samples", samples},
        {"rto_states", states},
        {"final_state", final_state ? state_json(*final_state) : json(nullptr)},
        {"invariant_log", violations(r)},
        {"ambiguities", ambiguities(r)},
        {"packets_transmitted", r.packets_transmitted},
        {"retransmissions", r.retransmissions},
        {"acks_emitted", r.acks_emitted},
        {"acks_received", r.acks_received},
        {"timeouts", r.timeouts},
        {"end_tick", r.end_tick},
        {"completed", r.completed},
    };
    return out.dump(2);
}

std::string timeout_report_json(const scenario::TimeoutReport& r) {
    json out = {{"count", r.timeout_steps.size()},
                {"steps", r.timeout_steps},
                {"spike_steps", r.spike_steps}};
    return out.dump(2);
}

std::string witness_json(const limitwit::WitnessResult& w, std::uint64_t verified,
                         std::uint64_t horizon, bool ok) {
    json out = {{"method", std::string(limitwit::to_string(w.method))},
                {"alpha", w.alpha.to_string()},
                {"epsilon", w.epsilon.to_string()},
                {"delta", w.delta.to_string()},
                {"verified", verified},
                {"horizon", horizon},
                {"ok", ok}};
    return out.dump(2);
}

}  // namespace karnrto::report
