#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "gewi/qstate.hpp"

namespace gewi {

using TimeNs = std::int64_t;
using BitVec = std::vector<std::uint8_t>;

enum class OverflowPolicy { DropNew, ReplaceOldest };
enum class ConsumePolicy { Fifo, Filo };

// One stored entangled pair. last_update_time tracks the lazy noise
// bookkeeping: noise for [last_update_time, now] has not been applied yet.
struct EprRecord {
    std::uint64_t id = 0;
    QubitPairState state;
    TimeNs birth_time = 0;
    TimeNs last_update_time = 0;
};

enum class StoreOutcome { Stored, DroppedNew, ReplacedOldest };

struct StoreResult {
    StoreOutcome outcome;
    std::uint64_t evicted_id = 0; // valid when outcome == ReplacedOldest
};

// Capacity-bounded buffer of entangled-pair records. Insertion order is
// kept; ids are strictly increasing in insertion order.
class EntanglementBuffer {
public:
    EntanglementBuffer() = default;
    EntanglementBuffer(std::size_t capacity, OverflowPolicy overflow, ConsumePolicy consume)
        : capacity_(capacity), overflow_(overflow), consume_(consume) {}

    StoreResult store(EprRecord record);
    std::optional<EprRecord> take();

    std::size_t size() const { return slots_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return slots_.empty(); }
    ConsumePolicy consume_policy() const { return consume_; }
    OverflowPolicy overflow_policy() const { return overflow_; }
    const std::deque<EprRecord>& slots() const { return slots_; }
    void clear() { slots_.clear(); }

private:
    std::size_t capacity_ = 0;
    OverflowPolicy overflow_ = OverflowPolicy::DropNew;
    ConsumePolicy consume_ = ConsumePolicy::Filo;
    std::deque<EprRecord> slots_;
};

// FIFO queue of fixed-length classical messages, bounded by total bits.
class MessageBuffer {
public:
    MessageBuffer() = default;
    MessageBuffer(std::int64_t capacity_bits, std::int64_t job_size_bits)
        : capacity_bits_(capacity_bits), job_size_bits_(job_size_bits) {}

    // Accepted iff one more whole job still fits.
    bool offer(BitVec message);
    std::optional<BitVec> pop();

    std::size_t size() const { return queue_.size(); }
    bool empty() const { return queue_.empty(); }
    std::int64_t capacity_bits() const { return capacity_bits_; }
    std::int64_t job_size_bits() const { return job_size_bits_; }

private:
    std::int64_t capacity_bits_ = 0;
    std::int64_t job_size_bits_ = 0;
    std::deque<BitVec> queue_;
};

} // namespace gewi
