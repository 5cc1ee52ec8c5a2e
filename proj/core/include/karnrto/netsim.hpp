#pragma once

// Discrete-event model of a sender and a receiver joined by an unreliable
// channel, with Karn's rule for RTT sampling and runtime invariant monitors.
//
// Model:
//  - One global integer tick clock; the sender's clock is the global clock.
//  - The channel may drop, duplicate and delay datagrams (reordering follows
//    from independent delays). It never creates datagrams. With fifo_acks,
//    ACK deliveries keep emission order.
//  - The receiver answers every delivered packet with the cumulative ACK
//    "smallest id not yet delivered" (1 when nothing is acknowledgeable).
//  - On a new ACK a, the sender samples the packet p equal to its previous
//    highest ACK, and only if p was transmitted exactly once. At most one
//    sample per new ACK. Otherwise the ACK is logged as ambiguous.
//
// RNG: std::mt19937_64 (its output sequence is fixed by the C++ standard).
// Per transmission the draws are: drop (53-bit uniform), delay, duplicate,
// duplicate's delay.

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "karnrto/exactnum.hpp"
#include "karnrto/rtocalc.hpp"

namespace karnrto::netsim {

enum class Kind { Packet, Ack };

struct Datagram {
    std::uint64_t id = 1;
    Kind kind = Kind::Packet;

    friend bool operator==(const Datagram&, const Datagram&) = default;
};

struct ChannelConfig {
    double drop_prob = 0.0;
    double dup_prob = 0.0;
    std::uint64_t min_delay = 1;
    std::uint64_t max_delay = 1;
    bool fifo_acks = false;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Default sending discipline: send the next packet each tick while fewer
/// than `window` packets are unacknowledged; on timeout retransmit the
/// lowest unacknowledged packet (one per timeout).
struct WindowPolicy {
    std::uint64_t window = 1;
    /// RTO before the first sample; defaults to 4 * max_delay.
    std::optional<Rational> initial_rto;
    std::uint64_t max_ticks = 1'000'000;
};

struct Sample {
    std::uint64_t packet = 0;
    std::uint64_t rtt = 0;
    /// Tick at which the triggering ACK arrived.
    std::uint64_t tick = 0;
    std::uint64_t ack = 0;
    std::uint64_t prev_highest_ack = 0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// A new ACK whose designated packet was retransmitted, so no RTT is taken.
struct Ambiguity {
    std::uint64_t tick = 0;
    std::uint64_t ack = 0;
    std::uint64_t packet = 0;
    std::vector<std::uint64_t> transmit_ticks;

    /// tick - t for every transmit tick t.
    std::vector<std::uint64_t> candidate_rtts() const;
};

struct Violation {
    std::string invariant;
    std::uint64_t tick = 0;
    std::string details;
};

struct SimReport {
    std::vector<Sample> samples;
    std::vector<rtocalc::RtoState> rto_states;
    std::vector<Violation> violations;
    std::vector<Ambiguity> ambiguities;
    std::uint64_t packets_transmitted = 0;
    std::uint64_t retransmissions = 0;
    std::uint64_t acks_emitted = 0;
    std::uint64_t acks_received = 0;
    std::uint64_t timeouts = 0;
    std::uint64_t end_tick = 0;
    bool completed = false;

    std::optional<rtocalc::RtoState> final_state() const;
};

/// Min-heap of in-flight datagrams ordered by (delivery tick, schedule order).
class EventQueue {
public:
    struct Event {
        std::uint64_t time = 0;
        std::uint64_t seq = 0;
        Datagram datagram;
        std::uint64_t sent_at = 0;
        /// Emission number of the ACK (identical across duplicates).
        std::uint64_t emission = 0;
    };

    void schedule(std::uint64_t time, Datagram d, std::uint64_t sent_at, std::uint64_t emission = 0);
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    const Event& top() const { return heap_.top(); }
    Event pop();

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

/// Randomised channel; owns the RNG stream.
class Channel {
public:
    explicit Channel(ChannelConfig cfg);

    /// Schedules 0, 1 or 2 deliveries of `d` sent at `now`.
    void transmit(EventQueue& queue, const Datagram& d, std::uint64_t now,
                  std::uint64_t emission = 0);

    const ChannelConfig& config() const { return cfg_; }

private:
    bool chance(double p);
    std::uint64_t draw_delay();
    std::uint64_t ack_time(std::uint64_t t);

    ChannelConfig cfg_;
    std::mt19937_64 rng_;
    std::uint64_t latest_ack_delivery_ = 0;
};

class ReceiverState {
public:
    /// Records delivery of packet `id`; returns the cumulative ACK to emit.
    std::uint64_t on_packet(std::uint64_t id);

    bool delivered(std::uint64_t id) const;
    std::uint64_t next_expected() const { return next_expected_; }

private:
    std::vector<bool> delivered_{false, false};
    std::uint64_t next_expected_ = 1;
};

struct PacketRecord {
    std::vector<std::uint64_t> transmit_ticks;
    std::uint64_t tx_count() const { return transmit_ticks.size(); }
};

struct AckOutcome {
    bool is_new = false;
    std::optional<Sample> sample;
    std::optional<Ambiguity> ambiguity;
    std::optional<Violation> violation;
};

class SenderState {
public:
    /// Packet ids start at 1. highest_ack starts at 1 (the trivial ACK), so
    /// ACK 1 is never new.
    std::uint64_t highest_ack() const { return highest_ack_; }
    std::uint64_t next_to_send() const { return next_to_send_; }
    const PacketRecord* record(std::uint64_t id) const;

    /// Records a (re)transmission of `id` at `now`.
    void on_transmit(std::uint64_t id, std::uint64_t now);

    AckOutcome on_ack(std::uint64_t a, std::uint64_t now);

private:
    std::map<std::uint64_t, PacketRecord> records_;
    std::uint64_t highest_ack_ = 1;
    std::uint64_t next_to_send_ = 1;
};

SimReport run_simulation(const ChannelConfig& cfg, std::uint64_t n_packets,
                         const rtocalc::RtoParams& params, const WindowPolicy& policy = {});

/// A deterministic schedule: every transmission and its fate is given.
struct ScriptedSend {
    std::uint64_t tick = 0;
    std::uint64_t packet = 1;
    /// Delivery tick, or nullopt when the channel drops it.
    std::optional<std::uint64_t> deliver_at;
};

struct Script {
    std::vector<ScriptedSend> sends;
    /// Every ACK is delivered this many ticks after emission.
    std::uint64_t ack_delay = 1;
};

SimReport run_scripted(const Script& script, const rtocalc::RtoParams& params);

/// The ambiguous-ACK timeline: packet 2 sent at tick 3 and lost, resent at
/// tick 6, ACK 4 arrives at tick 7. With `lossless`, the first copy of
/// packet 2 arrives late instead and no retransmission happens.
Script ambiguous_ack_script(bool lossless);

}  // namespace karnrto::netsim
