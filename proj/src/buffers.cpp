#include "gewi/buffers.hpp"

#include <algorithm>
#include <stdexcept>

namespace gewi {

StoreResult EntanglementBuffer::store(EprRecord record) {
    if (slots_.size() < capacity_) {
        slots_.push_back(std::move(record));
        return {StoreOutcome::Stored};
    }
    if (overflow_ == OverflowPolicy::DropNew || capacity_ == 0) {
        return {StoreOutcome::DroppedNew};
    }
    // ReplaceOldest: evict the record with the smallest birth time. Ids are
    // insertion-ordered and births are non-decreasing, so that is the front.
    auto oldest = std::min_element(slots_.begin(), slots_.end(),
                                   [](const EprRecord& a, const EprRecord& b) {
                                       return a.birth_time < b.birth_time;
                                   });
    const std::uint64_t evicted = oldest->id;
    slots_.erase(oldest);
    slots_.push_back(std::move(record));
    return {StoreOutcome::ReplacedOldest, evicted};
}

std::optional<EprRecord> EntanglementBuffer::take() {
    if (slots_.empty()) return std::nullopt;
    EprRecord rec;
    if (consume_ == ConsumePolicy::Fifo) {
        rec = std::move(slots_.front());
        slots_.pop_front();
    } else {
        rec = std::move(slots_.back());
        slots_.pop_back();
    }
    return rec;
}

bool MessageBuffer::offer(BitVec message) {
    if (static_cast<std::int64_t>(message.size()) != job_size_bits_) {
        throw std::invalid_argument("MessageBuffer::offer: message length != job size");
    }
    const std::int64_t used = static_cast<std::int64_t>(queue_.size()) * job_size_bits_;
    if (used + job_size_bits_ > capacity_bits_) return false;
    queue_.push_back(std::move(message));
    return true;
}

std::optional<BitVec> MessageBuffer::pop() {
    if (queue_.empty()) return std::nullopt;
    BitVec m = std::move(queue_.front());
    queue_.pop_front();
    return m;
}

} // namespace gewi
