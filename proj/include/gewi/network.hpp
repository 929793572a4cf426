#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gewi/link.hpp"

namespace gewi {

enum class NodeRole { Source, Relay, Sink };

// A directed link between two nodes. Settings not overridden come from the
// topology-wide base link config.
struct TopologyLink {
    int from = 0;
    int to = 0;
};

// Single-source DAG of buffered-entanglement links. The default build is
// the diamond: source s feeding two relays a and b, both feeding sink d.
struct Topology {
    std::vector<NodeRole> roles;
    std::vector<TopologyLink> links;
    LinkConfig base;            // per-link settings + source arrival/tick counts
    int relay_buffer_jobs = 64; // relay message buffers hold this many jobs

    void validate() const;
    int source_index() const;
    int sink_index() const;

    static Topology diamond(const LinkConfig& base, int relay_buffer_jobs = 64);
};

struct LinkStats {
    std::int64_t assisted_messages = 0;
    std::int64_t plain_messages = 0;
    std::int64_t pairs_generated = 0;
    std::int64_t pairs_consumed = 0;
    std::int64_t pairs_evicted = 0;
    std::int64_t pairs_remaining = 0;
};

struct NetworkMetrics {
    std::int64_t ticks = 0;
    std::int64_t messages_offered = 0;
    std::int64_t messages_accepted = 0;
    std::int64_t messages_dropped = 0; // at the source buffer
    std::int64_t relay_dropped = 0;    // at relay buffers (should stay 0)
    std::int64_t messages_delivered = 0;
    std::int64_t wrong_messages = 0;
    double message_error_rate = 0.0; // end to end, sink vs. source bits
    double throughput_bits_per_tick = 0.0;
    double throughput_mbps = 0.0;
    bool no_deliveries = false;
    // sink-side sequence numbers arrive in order on every incoming link
    // (relays are FIFO and the channel preserves order)
    bool relay_fifo_order_ok = true;
    std::vector<LinkStats> per_link;
};

// The outgoing link with the most stored entanglement; ties go to the
// lowest index.
std::size_t route_most_entanglement(std::span<const std::size_t> pair_counts);

// Runs the network for topology.base.total_ticks ticks plus drain.
// Deterministic in (topology, seed).
NetworkMetrics run_network(const Topology& topology, std::uint64_t seed);

} // namespace gewi
