#include "gewi/link.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace gewi {

void LinkConfig::validate() const {
    if (tick_period_ns <= 0) throw std::invalid_argument("link: tick_period_ns must be > 0");
    if (channel_delay_ns < 0) throw std::invalid_argument("link: channel_delay_ns must be >= 0");
    if (qubits_per_tick < 1) throw std::invalid_argument("link: qubits_per_tick must be >= 1");
    if (arrival_prob < 0.0 || arrival_prob > 1.0)
        throw std::invalid_argument("link: arrival_prob must lie in [0, 1]");
    if (job_bits < 1) throw std::invalid_argument("link: job_bits must be >= 1");
    if (buffer_bits < job_bits)
        throw std::invalid_argument("link: buffer_bits must be >= job_bits");
    if (pairs_per_idle_tick < 0)
        throw std::invalid_argument("link: pairs_per_idle_tick must be >= 0");
    if (total_ticks < 0) throw std::invalid_argument("link: total_ticks must be >= 0");
    if (!noise.valid())
        throw std::invalid_argument("link: noise requires t1 > 0, t2 > 0 and t2 <= 2*t1");
}

std::uint8_t consume_and_decode(const EprRecord& record, std::uint8_t symbol, TimeNs now,
                                const NoiseParams& noise, Rng& rng) {
    const TimeNs dt = now - record.last_update_time;
    if (dt < 0) throw std::invalid_argument("consume_and_decode: record from the future");
    QubitPairState s = apply_memory_noise(record.state, PairHalf::Sender,
                                          static_cast<double>(dt), noise);
    s = apply_memory_noise(s, PairHalf::Receiver, static_cast<double>(dt), noise);
    s = superdense_encode(s, symbol);
    return bell_outcome_symbol(bell_measure_sample(s, rng));
}

RunMetrics compute_metrics(const std::vector<TransmissionRecord>& trace, std::int64_t ticks,
                           TimeNs tick_period_ns) {
    RunMetrics m;
    m.ticks = ticks;
    for (const auto& rec : trace) {
        m.messages_delivered++;
        m.bits_delivered += static_cast<std::int64_t>(rec.sent.size());
        if (rec.error) m.wrong_messages++;
        if (rec.mode == TxMode::Assisted)
            m.assisted_messages++;
        else
            m.plain_messages++;
    }
    if (m.messages_delivered == 0) {
        m.no_deliveries = true;
        m.message_error_rate = 0.0;
    } else {
        m.message_error_rate =
            static_cast<double>(m.wrong_messages) / static_cast<double>(m.messages_delivered);
    }
    if (ticks > 0) {
        m.throughput_bits_per_tick = static_cast<double>(m.bits_delivered) /
                                     static_cast<double>(ticks) *
                                     (1.0 - m.message_error_rate);
        m.throughput_mbps =
            m.throughput_bits_per_tick * 1000.0 / static_cast<double>(tick_period_ns);
    }
    return m;
}

LinkSender::LinkSender(const LinkConfig& cfg)
    : cfg_(cfg), ebuf_(cfg.memory_slots, cfg.overflow, cfg.consume) {}

TxMode LinkSender::start_message(BitVec bits, std::uint64_t seq, std::int64_t tick) {
    assert(!active_.has_value());
    const std::size_t pairs_needed = (bits.size() + 1) / 2;
    Active a;
    a.mode = (ebuf_.size() >= pairs_needed && pairs_needed > 0) ? TxMode::Assisted : TxMode::Plain;
    a.bits = std::move(bits);
    a.seq = seq;
    a.start_tick = tick;
    active_ = std::move(a);
    return active_->mode;
}

std::optional<TransmissionRecord> LinkSender::step(TimeNs now, Rng& rng) {
    assert(active_.has_value());
    Active& a = *active_;
    for (int use = 0; use < cfg_.qubits_per_tick && a.next_bit < a.bits.size(); ++use) {
        if (a.mode == TxMode::Assisted) {
            auto rec = ebuf_.take();
            assert(rec.has_value()); // reserved at start_message; nothing else consumes
            pairs_consumed++;
            std::uint8_t sym = static_cast<std::uint8_t>(a.bits[a.next_bit] << 1);
            const bool has_low = a.next_bit + 1 < a.bits.size();
            if (has_low) sym |= a.bits[a.next_bit + 1];
            const std::uint8_t dec = consume_and_decode(*rec, sym, now, cfg_.noise, rng);
            a.decoded.push_back((dec >> 1) & 1u);
            if (has_low) a.decoded.push_back(dec & 1u);
            a.pair_ids.push_back(rec->id);
            a.pair_ages.push_back(now - rec->birth_time);
            a.next_bit += has_low ? 2 : 1;
        } else {
            a.decoded.push_back(classical_encode_measure(a.bits[a.next_bit], rng));
            a.next_bit += 1;
        }
    }
    if (a.next_bit < a.bits.size()) return std::nullopt;

    TransmissionRecord rec;
    rec.seq = a.seq;
    rec.mode = a.mode;
    rec.sent = std::move(a.bits);
    rec.decoded = std::move(a.decoded);
    rec.start_tick = a.start_tick;
    rec.arrival_time_ns = now + cfg_.channel_delay_ns;
    rec.pair_ids = std::move(a.pair_ids);
    rec.pair_ages_ns = std::move(a.pair_ages);
    rec.error = rec.decoded != rec.sent;
    active_.reset();
    return rec;
}

void LinkSender::generate_pairs(TimeNs now) {
    for (int g = 0; g < cfg_.pairs_per_idle_tick; ++g) generate_one(now);
}

void LinkSender::generate_one(TimeNs now) {
    pairs_generated++;
    EprRecord rec{next_pair_id_++, make_bell_pair(), now, now};
    const StoreResult res = ebuf_.store(std::move(rec));
    switch (res.outcome) {
        case StoreOutcome::Stored: pairs_stored++; break;
        case StoreOutcome::DroppedNew: pairs_dropped_new++; break;
        case StoreOutcome::ReplacedOldest:
            pairs_stored++;
            pairs_evicted++;
            break;
    }
}

LinkRunResult run_link(const LinkConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    LinkSender link(cfg);
    MessageBuffer mbuf(cfg.buffer_bits, cfg.job_bits);

    // Warm start: pre-filled fresh pairs at t = 0.
    for (std::size_t i = 0; i < cfg.initial_pairs; ++i) link.generate_one(0);

    LinkRunResult result;
    RunMetrics& m = result.metrics;
    m.ticks = cfg.total_ticks;
    std::uint64_t next_seq = 0;

    auto record_delivery = [&](TransmissionRecord&& rec) {
        m.messages_delivered++;
        m.bits_delivered += static_cast<std::int64_t>(rec.sent.size());
        if (rec.error) m.wrong_messages++;
        if (rec.mode == TxMode::Assisted)
            m.assisted_messages++;
        else
            m.plain_messages++;
        if (cfg.collect_trace) result.trace.push_back(std::move(rec));
    };

    auto transmit_tick = [&](std::int64_t tick, TimeNs now) {
        if (!link.busy()) {
            auto msg = mbuf.pop();
            assert(msg.has_value());
            link.start_message(std::move(*msg), next_seq++, tick);
        }
        if (auto fin = link.step(now, rng)) record_delivery(std::move(*fin));
    };

    for (std::int64_t tick = 0; tick < cfg.total_ticks; ++tick) {
        const TimeNs now = tick * cfg.tick_period_ns;
        // 1. message arrival
        if (rng.uniform() < cfg.arrival_prob) {
            m.messages_offered++;
            BitVec bits(static_cast<std::size_t>(cfg.job_bits));
            for (auto& b : bits) b = rng.bit();
            if (mbuf.offer(std::move(bits)))
                m.messages_accepted++;
            else
                m.messages_dropped++;
        }
        // 2. transmit, or 3. generate entanglement while idle
        if (link.busy() || !mbuf.empty()) {
            transmit_tick(tick, now);
        } else {
            link.generate_pairs(now);
        }
    }

    // Drain: queued and in-progress messages finish transmitting; no new
    // arrivals or entanglement generation. Metrics stay normalized to the
    // configured tick count.
    std::int64_t tick = cfg.total_ticks;
    while (link.busy() || !mbuf.empty()) {
        transmit_tick(tick, tick * cfg.tick_period_ns);
        ++tick;
    }

    if (m.messages_delivered == 0) {
        m.no_deliveries = true;
    } else {
        m.message_error_rate =
            static_cast<double>(m.wrong_messages) / static_cast<double>(m.messages_delivered);
    }
    if (cfg.total_ticks > 0) {
        m.throughput_bits_per_tick = static_cast<double>(m.bits_delivered) /
                                     static_cast<double>(cfg.total_ticks) *
                                     (1.0 - m.message_error_rate);
        m.throughput_mbps =
            m.throughput_bits_per_tick * 1000.0 / static_cast<double>(cfg.tick_period_ns);
    }

    m.pairs_generated = link.pairs_generated;
    m.pairs_stored = link.pairs_stored;
    m.pairs_dropped_new = link.pairs_dropped_new;
    m.pairs_consumed = link.pairs_consumed;
    m.pairs_evicted = link.pairs_evicted;
    m.pairs_remaining = static_cast<std::int64_t>(link.ebuf().size());
    return result;
}

} // namespace gewi
