#include "karnrto/netsim.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace karnrto::netsim {

void ChannelConfig::validate() const {
    if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) {
        throw DomainError("ChannelConfig: drop probability must lie in [0, 1]");
    }
    if (!(dup_prob >= 0.0 && dup_prob <= 1.0)) {
        throw DomainError("ChannelConfig: duplicate probability must lie in [0, 1]");
    }
    if (min_delay < 1) {
        throw DomainError("ChannelConfig: min_delay must be at least 1");
    }
    if (max_delay < min_delay) {
        throw DomainError("ChannelConfig: max_delay must be >= min_delay");
    }
}

std::vector<std::uint64_t> Ambiguity::candidate_rtts() const {
    std::vector<std::uint64_t> out;
    out.reserve(transmit_ticks.size());
    for (auto t : transmit_ticks) {
        out.push_back(tick - t);
    }
    return out;
}

std::optional<rtocalc::RtoState> SimReport::final_state() const {
    if (rto_states.empty()) {
        return std::nullopt;
    }
    return rto_states.back();
}

void EventQueue::schedule(std::uint64_t time, Datagram d, std::uint64_t sent_at,
                          std::uint64_t emission) {
    heap_.push(Event{time, next_seq_++, d, sent_at, emission});
}

EventQueue::Event EventQueue::pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
}

Channel::Channel(ChannelConfig cfg) : cfg_(cfg), rng_(cfg.seed) { cfg_.validate(); }

bool Channel::chance(double p) {
    // 53 random bits mapped onto [0, 1); exact in IEEE double.
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return u < p;
}

std::uint64_t Channel::draw_delay() {
    const std::uint64_t span = cfg_.max_delay - cfg_.min_delay + 1;
    if (span == 1) {
        return cfg_.min_delay;
    }
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t r = rng_();
    while (r >= limit) {
        r = rng_();
    }
    return cfg_.min_delay + r % span;
}

std::uint64_t Channel::ack_time(std::uint64_t t) {
    if (cfg_.fifo_acks) {
        t = std::max(t, latest_ack_delivery_);
        latest_ack_delivery_ = t;
    }
    return t;
}

void Channel::transmit(EventQueue& queue, const Datagram& d, std::uint64_t now,
                       std::uint64_t emission) {
    if (chance(cfg_.drop_prob)) {
        return;
    }
    const auto deliver = [&](std::uint64_t delay) {
        std::uint64_t t = now + delay;
        if (d.kind == Kind::Ack) {
            t = ack_time(t);
        }
        queue.schedule(t, d, now, emission);
    };
    deliver(draw_delay());
    if (chance(cfg_.dup_prob)) {
        deliver(draw_delay());
    }
}

bool ReceiverState::delivered(std::uint64_t id) const {
    return id < delivered_.size() && delivered_[id];
}

std::uint64_t ReceiverState::on_packet(std::uint64_t id) {
    if (id >= delivered_.size()) {
        delivered_.resize(id + 1, false);
    }
    delivered_[id] = true;
    while (delivered(next_expected_)) {
        ++next_expected_;
    }
    return next_expected_;
}

const PacketRecord* SenderState::record(std::uint64_t id) const {
    const auto it = records_.find(id);
    return it == records_.end() ? nullptr : &it->second;
}

void SenderState::on_transmit(std::uint64_t id, std::uint64_t now) {
    records_[id].transmit_ticks.push_back(now);
    next_to_send_ = std::max(next_to_send_, id + 1);
}

AckOutcome SenderState::on_ack(std::uint64_t a, std::uint64_t now) {
    AckOutcome out;
    if (a == 0) {
        out.violation = Violation{"ack-range", now, "ACK id 0"};
        return out;
    }
    if (a > next_to_send_) {
        std::ostringstream msg;
        msg << "ACK " << a << " acknowledges packet " << (a - 1) << " which was never transmitted";
        out.violation = Violation{"no-creation", now, msg.str()};
        return out;
    }
    if (a <= highest_ack_) {
        return out;
    }
    out.is_new = true;
    const std::uint64_t p = highest_ack_;
    const PacketRecord& rec = records_.at(p);
    if (rec.tx_count() == 1) {
        out.sample = Sample{p, now - rec.transmit_ticks.front(), now, a, p};
    } else {
        out.ambiguity = Ambiguity{now, a, p, rec.transmit_ticks};
    }
    highest_ack_ = a;
    return out;
}

namespace {

// Shared event loop plus the invariant monitors. The monitors keep their
// own bookkeeping so they do not trust the state they are checking.
class Engine {
public:
    using AckSender = std::function<void(EventQueue&, std::uint64_t ack, std::uint64_t now,
                                         std::uint64_t emission)>;

    Engine(const rtocalc::RtoParams& params, Rational initial_rto, std::optional<ChannelConfig> cfg)
        : params_(params), rto_(std::move(initial_rto)), cfg_(cfg) {
        params_.validate();
        refresh_rto_floor();
    }

    EventQueue& queue() { return queue_; }
    SenderState& sender() { return sender_; }
    SimReport& report() { return report_; }

    void transmit(std::uint64_t id, std::uint64_t now) {
        if (id > tx_prefix_ + 1) {
            std::ostringstream msg;
            msg << "packet " << id << " sent before packet " << (tx_prefix_ + 1);
            violate("sender-prefix", now, msg.str());
        }
        const bool first = sender_.record(id) == nullptr;
        sender_.on_transmit(id, now);
        transmitted_.insert(id);
        while (transmitted_.contains(tx_prefix_ + 1)) {
            ++tx_prefix_;
        }
        ++report_.packets_transmitted;
        if (!first) {
            ++report_.retransmissions;
        }
        if (!timer_start_) {
            timer_start_ = now;
        }
    }

    void deliver_due(std::uint64_t now, const AckSender& send_ack) {
        while (!queue_.empty() && queue_.top().time <= now) {
            const auto ev = queue_.pop();
            if (ev.datagram.kind == Kind::Packet) {
                on_packet_delivery(ev, now, send_ack);
            } else {
                on_ack_delivery(ev, now);
            }
        }
    }

    bool timer_running() const { return timer_start_.has_value(); }

    std::optional<std::uint64_t> timeout_tick() const {
        if (!timer_start_) {
            return std::nullopt;
        }
        return *timer_start_ + rto_floor_ + 1;
    }

    void restart_timer(std::uint64_t now) { timer_start_ = now; }

    void stop_timer() { timer_start_.reset(); }

private:
    void violate(const char* name, std::uint64_t tick, std::string details) {
        report_.violations.push_back(Violation{name, tick, std::move(details)});
    }

    void on_packet_delivery(const EventQueue::Event& ev, std::uint64_t now,
                            const AckSender& send_ack) {
        const std::uint64_t p = ev.datagram.id;
        if (!transmitted_.contains(p)) {
            std::ostringstream msg;
            msg << "packet " << p << " delivered but never transmitted";
            violate("no-creation", now, msg.str());
        }
        monitor_delivered_.insert(p);
        while (monitor_delivered_.contains(monitor_prefix_ + 1)) {
            ++monitor_prefix_;
        }

        const std::uint64_t a = receiver_.on_packet(p);
        const bool cumulative = a == 1 || (monitor_prefix_ >= a - 1 && !monitor_delivered_.contains(a));
        if (!cumulative) {
            std::ostringstream msg;
            msg << "ACK " << a << " emitted with delivered prefix 1.." << monitor_prefix_;
            violate("receiver-cumulative-ack", now, msg.str());
        }
        emitted_acks_.insert(a);
        ++report_.acks_emitted;
        send_ack(queue_, a, now, ++ack_emissions_);
    }

    void on_ack_delivery(const EventQueue::Event& ev, std::uint64_t now) {
        const std::uint64_t a = ev.datagram.id;
        ++report_.acks_received;
        if (!emitted_acks_.contains(a)) {
            std::ostringstream msg;
            msg << "ACK " << a << " delivered but never emitted";
            violate("no-creation", now, msg.str());
        }
        if (cfg_ && cfg_->fifo_acks && ev.emission < last_ack_emission_) {
            std::ostringstream msg;
            msg << "ACK emission " << ev.emission << " delivered after " << last_ack_emission_;
            violate("fifo-ack-order", now, msg.str());
        }
        last_ack_emission_ = std::max(last_ack_emission_, ev.emission);

        const std::uint64_t prev_highest = sender_.highest_ack();
        AckOutcome outcome = sender_.on_ack(a, now);
        if (outcome.violation) {
            report_.violations.push_back(*outcome.violation);
            return;
        }
        if (sender_.highest_ack() < prev_highest) {
            violate("ack-monotone", now, "highest ACK decreased");
        }
        if (!outcome.is_new) {
            return;
        }
        if (outcome.sample) {
            check_sample(*outcome.sample, prev_highest, now);
            report_.samples.push_back(*outcome.sample);
            const Rational rtt(Natural(outcome.sample->rtt).value());
            report_.rto_states.push_back(report_.rto_states.empty()
                                             ? rtocalc::init(params_, rtt)
                                             : rtocalc::step(params_, report_.rto_states.back(), rtt));
            rto_ = report_.rto_states.back().rto;
            refresh_rto_floor();
        }
        if (outcome.ambiguity) {
            report_.ambiguities.push_back(std::move(*outcome.ambiguity));
        }
        // New ACK: restart the timer if data is outstanding, else stop it.
        if (sender_.next_to_send() > sender_.highest_ack()) {
            restart_timer(now);
        } else {
            stop_timer();
        }
    }

    void check_sample(const Sample& s, std::uint64_t prev_highest, std::uint64_t now) {
        const PacketRecord* rec = sender_.record(s.packet);
        if (rec == nullptr || rec->tx_count() != 1) {
            std::ostringstream msg;
            msg << "sampled packet " << s.packet << " has tx_count "
                << (rec == nullptr ? 0 : rec->tx_count());
            violate("karn-single-transmission", now, msg.str());
        } else if (s.rtt != now - rec->transmit_ticks.front()) {
            std::ostringstream msg;
            msg << "sample " << s.rtt << " differs from " << now << " - "
                << rec->transmit_ticks.front();
            violate("karn-real-rtt", now, msg.str());
        }
        if (cfg_ && s.rtt < 2 * cfg_->min_delay) {
            std::ostringstream msg;
            msg << "sample " << s.rtt << " below minimum round trip " << 2 * cfg_->min_delay;
            violate("pessimism", now, msg.str());
        }
        if (cfg_ && cfg_->fifo_acks && s.packet != prev_highest) {
            std::ostringstream msg;
            msg << "sampled packet " << s.packet << " but previous highest ACK was "
                << prev_highest;
            violate("fifo-sample-id", now, msg.str());
        }
    }

    void refresh_rto_floor() { rto_floor_ = to_u64(floor(rto_)); }

    rtocalc::RtoParams params_;
    Rational rto_;
    std::uint64_t rto_floor_ = 0;
    std::optional<ChannelConfig> cfg_;
    std::optional<std::uint64_t> timer_start_;

    EventQueue queue_;
    SenderState sender_;
    ReceiverState receiver_;
    SimReport report_;

    std::set<std::uint64_t> transmitted_;
    std::uint64_t tx_prefix_ = 0;
    std::set<std::uint64_t> emitted_acks_;
    std::set<std::uint64_t> monitor_delivered_;
    std::uint64_t monitor_prefix_ = 0;
    std::uint64_t ack_emissions_ = 0;
    std::uint64_t last_ack_emission_ = 0;
};

}  // namespace

SimReport run_simulation(const ChannelConfig& cfg, std::uint64_t n_packets,
                         const rtocalc::RtoParams& params, const WindowPolicy& policy) {
    cfg.validate();
    if (n_packets < 1) {
        throw DomainError("run_simulation: need at least one packet");
    }
    if (policy.window < 1) {
        throw DomainError("run_simulation: window must be at least 1");
    }
    Rational initial_rto = policy.initial_rto.value_or(
        Rational(Natural(4 * cfg.max_delay).value()));
    if (initial_rto.sign() <= 0) {
        throw DomainError("run_simulation: initial RTO must be positive");
    }

    Engine engine(params, std::move(initial_rto), cfg);
    Channel channel(cfg);
    const Engine::AckSender send_ack = [&channel](EventQueue& q, std::uint64_t a, std::uint64_t now,
                                                  std::uint64_t emission) {
        channel.transmit(q, Datagram{a, Kind::Ack}, now, emission);
    };

    SenderState& sender = engine.sender();
    std::uint64_t now = 0;
    while (now <= policy.max_ticks) {
        engine.deliver_due(now, send_ack);
        if (sender.highest_ack() > n_packets) {
            engine.report().completed = true;
            break;
        }
        bool sent = false;
        if (const auto due = engine.timeout_tick(); due && now >= *due) {
            ++engine.report().timeouts;
            const std::uint64_t p = sender.highest_ack();
            engine.transmit(p, now);
            channel.transmit(engine.queue(), Datagram{p, Kind::Packet}, now);
            engine.restart_timer(now);
            sent = true;
        }
        const bool window_open = sender.next_to_send() <= n_packets &&
                                 sender.next_to_send() - sender.highest_ack() < policy.window;
        if (!sent && window_open) {
            const std::uint64_t p = sender.next_to_send();
            engine.transmit(p, now);
            channel.transmit(engine.queue(), Datagram{p, Kind::Packet}, now);
            sent = true;
        }

        // Skip idle ticks.
        std::uint64_t next = std::numeric_limits<std::uint64_t>::max();
        const bool can_send_more = sender.next_to_send() <= n_packets &&
                                   sender.next_to_send() - sender.highest_ack() < policy.window;
        if (can_send_more) {
            next = now + 1;
        }
        if (!engine.queue().empty()) {
            next = std::min(next, std::max(engine.queue().top().time, now + 1));
        }
        if (const auto due = engine.timeout_tick()) {
            next = std::min(next, std::max(*due, now + 1));
        }
        if (next == std::numeric_limits<std::uint64_t>::max()) {
            break;
        }
        now = next;
    }
    engine.report().end_tick = std::min(now, policy.max_ticks);
    return std::move(engine.report());
}

SimReport run_scripted(const Script& script, const rtocalc::RtoParams& params) {
    std::vector<ScriptedSend> sends = script.sends;
    std::stable_sort(sends.begin(), sends.end(),
                     [](const ScriptedSend& a, const ScriptedSend& b) { return a.tick < b.tick; });
    for (const auto& s : sends) {
        if (s.deliver_at && *s.deliver_at < s.tick) {
            throw DomainError("run_scripted: delivery scheduled before transmission");
        }
    }

    Engine engine(params, Rational(1), std::nullopt);
    const std::uint64_t ack_delay = script.ack_delay;
    const Engine::AckSender send_ack = [ack_delay](EventQueue& q, std::uint64_t a, std::uint64_t now,
                                                   std::uint64_t emission) {
        q.schedule(now + ack_delay, Datagram{a, Kind::Ack}, now, emission);
    };

    std::size_t next_send = 0;
    std::uint64_t now = 0;
    while (next_send < sends.size() || !engine.queue().empty()) {
        engine.deliver_due(now, send_ack);
        while (next_send < sends.size() && sends[next_send].tick == now) {
            const auto& s = sends[next_send++];
            engine.transmit(s.packet, now);
            if (s.deliver_at) {
                engine.queue().schedule(*s.deliver_at, Datagram{s.packet, Kind::Packet}, now);
            }
        }
        engine.deliver_due(now, send_ack);

        std::uint64_t next = std::numeric_limits<std::uint64_t>::max();
        if (next_send < sends.size()) {
            next = sends[next_send].tick;
        }
        if (!engine.queue().empty()) {
            next = std::min(next, engine.queue().top().time);
        }
        if (next == std::numeric_limits<std::uint64_t>::max()) {
            break;
        }
        now = std::max(next, now + 1);
    }
    SimReport report = std::move(engine.report());
    report.end_tick = now;
    report.completed = true;
    return report;
}

Script ambiguous_ack_script(bool lossless) {
    Script s;
    s.ack_delay = 1;
    s.sends.push_back({1, 1, 2});
    if (lossless) {
        s.sends.push_back({3, 2, 6});
        s.sends.push_back({4, 3, 5});
    } else {
        s.sends.push_back({3, 2, std::nullopt});
        s.sends.push_back({4, 3, 5});
        // The duplicate ACK 2 arriving at tick 6 prompts the resend.
        s.sends.push_back({6, 2, 6});
    }
    return s;
}

}  // namespace karnrto::netsim
