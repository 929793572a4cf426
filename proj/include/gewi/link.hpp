#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "gewi/buffers.hpp"
#include "gewi/qstate.hpp"
#include "gewi/rng.hpp"

namespace gewi {

enum class TxMode : std::uint8_t { Assisted, Plain };

// Point-to-point GEWI engine configuration. Times in ns.
struct LinkConfig {
    TimeNs tick_period_ns = 10;
    TimeNs channel_delay_ns = 5000; // 1 km of fiber
    int qubits_per_tick = 2;        // Q: channel uses per tick
    double arrival_prob = 0.0;      // r
    int job_bits = 4;               // J
    std::int64_t buffer_bits = 4;   // L
    std::size_t memory_slots = 200; // E
    NoiseParams noise;
    OverflowPolicy overflow = OverflowPolicy::DropNew;
    ConsumePolicy consume = ConsumePolicy::Filo;
    int pairs_per_idle_tick = 1;    // G
    std::int64_t total_ticks = 1'000'000;
    std::size_t initial_pairs = 0;  // pre-filled fresh pairs (warm start)
    bool collect_trace = false;

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

// One delivered (or in-flight) message as seen end to end.
struct TransmissionRecord {
    std::uint64_t seq = 0;
    TxMode mode = TxMode::Plain;
    BitVec sent;
    BitVec decoded;
    std::int64_t start_tick = 0;
    TimeNs arrival_time_ns = 0; // when the last symbol reaches the receiver
    std::vector<std::uint64_t> pair_ids;
    std::vector<TimeNs> pair_ages_ns;
    bool error = false;
};

struct RunMetrics {
    std::int64_t ticks = 0;
    std::int64_t messages_offered = 0;
    std::int64_t messages_accepted = 0;
    std::int64_t messages_dropped = 0;
    std::int64_t messages_delivered = 0;
    std::int64_t assisted_messages = 0;
    std::int64_t plain_messages = 0;
    std::int64_t bits_delivered = 0;
    std::int64_t wrong_messages = 0;
    double message_error_rate = 0.0;
    double throughput_bits_per_tick = 0.0;
    double throughput_mbps = 0.0;
    bool no_deliveries = false; // message_error_rate reported as 0 with this flag
    std::int64_t pairs_generated = 0;
    std::int64_t pairs_stored = 0;
    std::int64_t pairs_dropped_new = 0;
    std::int64_t pairs_consumed = 0;
    std::int64_t pairs_evicted = 0;
    std::int64_t pairs_remaining = 0;
};

struct LinkRunResult {
    RunMetrics metrics;
    std::vector<TransmissionRecord> trace; // only filled when collect_trace
};

// Noise-accounts both halves of a stored pair for (now - last_update_time),
// superdense-encodes the 2-bit symbol and samples the Bell measurement.
// Returns the decoded symbol.
std::uint8_t consume_and_decode(const EprRecord& record, std::uint8_t symbol, TimeNs now,
                                const NoiseParams& noise, Rng& rng);

// Error rate and throughput for a finished trace. Error rate is the
// fraction of delivered messages with at least one wrong bit; throughput is
// delivered bits per tick scaled by the success rate.
RunMetrics compute_metrics(const std::vector<TransmissionRecord>& trace, std::int64_t ticks,
                           TimeNs tick_period_ns);

// Sender-side state machine for one directed GEWI link. Owns the
// entanglement buffer and the in-progress transmission; the caller drives
// ticks and collects finished messages (which arrive channel_delay later).
class LinkSender {
public:
    LinkSender(const LinkConfig& cfg);

    bool busy() const { return active_.has_value(); }

    // Begins transmitting a message this tick. Mode is fixed here: Assisted
    // iff the buffer holds at least ceil(J/2) pairs.
    TxMode start_message(BitVec bits, std::uint64_t seq, std::int64_t tick);

    // Sends up to Q symbols/bits. Returns the finished record once the last
    // symbol has been sent; its arrival_time_ns is send time + delay.
    std::optional<TransmissionRecord> step(TimeNs now, Rng& rng);

    // Entanglement generation for one idle tick (G pairs).
    void generate_pairs(TimeNs now);

    // Creates and stores a single fresh pair.
    void generate_one(TimeNs now);

    EntanglementBuffer& ebuf() { return ebuf_; }
    const EntanglementBuffer& ebuf() const { return ebuf_; }

    std::int64_t pairs_generated = 0;
    std::int64_t pairs_stored = 0;
    std::int64_t pairs_dropped_new = 0;
    std::int64_t pairs_consumed = 0;
    std::int64_t pairs_evicted = 0;

private:
    LinkConfig cfg_;
    EntanglementBuffer ebuf_;
    std::uint64_t next_pair_id_ = 1;

    struct Active {
        BitVec bits;
        BitVec decoded;
        std::uint64_t seq = 0;
        TxMode mode = TxMode::Plain;
        std::size_t next_bit = 0;
        std::int64_t start_tick = 0;
        std::vector<std::uint64_t> pair_ids;
        std::vector<TimeNs> pair_ages;
    };
    std::optional<Active> active_;
};

// Runs the full point-to-point scenario: N ticks of arrivals, GEWI
// transmission and idle-time entanglement generation, then drains in-flight
// messages. Deterministic in (config, seed).
LinkRunResult run_link(const LinkConfig& cfg, std::uint64_t seed);

} // namespace gewi
