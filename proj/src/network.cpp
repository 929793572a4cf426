#include "gewi/network.hpp"

#include <cassert>
#include <deque>
#include <stdexcept>

namespace gewi {

void Topology::validate() const {
    base.validate();
    if (roles.empty()) throw std::invalid_argument("network: no nodes");
    int sources = 0, sinks = 0;
    for (NodeRole r : roles) {
        if (r == NodeRole::Source) sources++;
        if (r == NodeRole::Sink) sinks++;
    }
    if (sources != 1) throw std::invalid_argument("network: exactly one source required");
    if (sinks != 1) throw std::invalid_argument("network: exactly one sink required");
    if (relay_buffer_jobs < 1)
        throw std::invalid_argument("network: relay_buffer_jobs must be >= 1");
    std::vector<int> out_degree(roles.size(), 0);
    for (const auto& l : links) {
        if (l.from < 0 || l.to < 0 || l.from >= static_cast<int>(roles.size()) ||
            l.to >= static_cast<int>(roles.size()))
            throw std::invalid_argument("network: link endpoint out of range");
        if (l.from >= l.to)
            throw std::invalid_argument("network: links must go forward (nodes in topological order)");
        if (roles[static_cast<std::size_t>(l.to)] == NodeRole::Source)
            throw std::invalid_argument("network: source cannot receive");
        if (roles[static_cast<std::size_t>(l.from)] == NodeRole::Sink)
            throw std::invalid_argument("network: sink cannot transmit");
        out_degree[static_cast<std::size_t>(l.from)]++;
    }
    for (std::size_t n = 0; n < roles.size(); ++n) {
        if (roles[n] != NodeRole::Sink && out_degree[n] < 1)
            throw std::invalid_argument("network: every non-sink node needs an outgoing link");
    }
}

int Topology::source_index() const {
    for (std::size_t i = 0; i < roles.size(); ++i)
        if (roles[i] == NodeRole::Source) return static_cast<int>(i);
    return -1;
}

int Topology::sink_index() const {
    for (std::size_t i = 0; i < roles.size(); ++i)
        if (roles[i] == NodeRole::Sink) return static_cast<int>(i);
    return -1;
}

Topology Topology::diamond(const LinkConfig& base, int relay_buffer_jobs) {
    Topology t;
    t.roles = {NodeRole::Source, NodeRole::Relay, NodeRole::Relay, NodeRole::Sink};
    t.links = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
    t.base = base;
    t.relay_buffer_jobs = relay_buffer_jobs;
    return t;
}

std::size_t route_most_entanglement(std::span<const std::size_t> pair_counts) {
    assert(!pair_counts.empty());
    std::size_t best = 0;
    for (std::size_t i = 1; i < pair_counts.size(); ++i) {
        if (pair_counts[i] > pair_counts[best]) best = i;
    }
    return best;
}

namespace {

struct InFlight {
    TimeNs arrive = 0;
    std::size_t link = 0;
    TransmissionRecord rec;
};

struct NodeState {
    std::vector<std::size_t> out_links; // ordered by link index
    MessageBuffer queue;                // relays and source
    std::deque<std::uint64_t> queue_seqs;
};

} // namespace

NetworkMetrics run_network(const Topology& topology, std::uint64_t seed) {
    topology.validate();
    const LinkConfig& base = topology.base;
    Rng rng(seed);

    const std::size_t n_nodes = topology.roles.size();
    const std::size_t n_links = topology.links.size();
    const int source = topology.source_index();
    const int sink = topology.sink_index();

    std::vector<LinkSender> links;
    links.reserve(n_links);
    for (std::size_t i = 0; i < n_links; ++i) links.emplace_back(base);

    std::vector<NodeState> nodes(n_nodes);
    for (std::size_t li = 0; li < n_links; ++li)
        nodes[static_cast<std::size_t>(topology.links[li].from)].out_links.push_back(li);
    for (std::size_t ni = 0; ni < n_nodes; ++ni) {
        const bool is_source = static_cast<int>(ni) == source;
        const std::int64_t jobs = is_source ? (base.buffer_bits / base.job_bits)
                                            : topology.relay_buffer_jobs;
        nodes[ni].queue = MessageBuffer(jobs * base.job_bits, base.job_bits);
    }

    NetworkMetrics m;
    m.ticks = base.total_ticks;
    m.per_link.resize(n_links);

    std::vector<BitVec> source_sent;
    std::deque<InFlight> inflight;
    std::uint64_t next_seq = 0;

    std::vector<std::int64_t> last_sink_seq(n_links, -1);
    auto deliver_due = [&](TimeNs now) {
        while (!inflight.empty() && inflight.front().arrive <= now) {
            InFlight f = std::move(inflight.front());
            inflight.pop_front();
            const int dest = topology.links[f.link].to;
            if (dest == sink) {
                m.messages_delivered++;
                m.wrong_messages +=
                    (f.rec.decoded != source_sent[static_cast<std::size_t>(f.rec.seq)]) ? 1 : 0;
                if (static_cast<std::int64_t>(f.rec.seq) <= last_sink_seq[f.link])
                    m.relay_fifo_order_ok = false;
                last_sink_seq[f.link] = static_cast<std::int64_t>(f.rec.seq);
            } else {
                // Decode and re-prepare: the relay forwards the decoded bits,
                // so hop errors propagate as data corruption.
                if (nodes[static_cast<std::size_t>(dest)].queue.offer(f.rec.decoded)) {
                    nodes[static_cast<std::size_t>(dest)].queue_seqs.push_back(f.rec.seq);
                } else {
                    m.relay_dropped++;
                }
            }
        }
    };

    // One node's transmission turn. Returns the link that carried data.
    auto transmit_turn = [&](std::size_t ni, std::int64_t tick, TimeNs now,
                             std::vector<bool>& sent_data) {
        NodeState& node = nodes[ni];
        std::size_t active_link = n_links;
        for (std::size_t li : node.out_links) {
            if (links[li].busy()) {
                active_link = li;
                break;
            }
        }
        if (active_link == n_links) {
            if (node.queue.empty()) return;
            std::vector<std::size_t> counts;
            counts.reserve(node.out_links.size());
            for (std::size_t li : node.out_links) counts.push_back(links[li].ebuf().size());
            active_link = node.out_links[route_most_entanglement(counts)];
            auto msg = node.queue.pop();
            assert(!node.queue_seqs.empty()); // kept in lockstep with the queue
            const std::uint64_t seq = node.queue_seqs.front();
            node.queue_seqs.pop_front();
            links[active_link].start_message(std::move(*msg), seq, tick);
        }
        sent_data[active_link] = true;
        if (auto fin = links[active_link].step(now, rng)) {
            if (fin->mode == TxMode::Assisted)
                m.per_link[active_link].assisted_messages++;
            else
                m.per_link[active_link].plain_messages++;
            inflight.push_back({fin->arrival_time_ns, active_link, std::move(*fin)});
        }
    };

    const TimeNs period = base.tick_period_ns;
    for (std::int64_t tick = 0; tick < base.total_ticks; ++tick) {
        const TimeNs now = tick * period;
        deliver_due(now);

        // Arrival at the source.
        if (rng.uniform() < base.arrival_prob) {
            m.messages_offered++;
            BitVec bits(static_cast<std::size_t>(base.job_bits));
            for (auto& b : bits) b = rng.bit();
            NodeState& src = nodes[static_cast<std::size_t>(source)];
            BitVec copy = bits;
            if (src.queue.offer(std::move(bits))) {
                src.queue_seqs.push_back(next_seq);
                source_sent.push_back(std::move(copy));
                next_seq++;
                m.messages_accepted++;
            } else {
                m.messages_dropped++;
            }
        }

        std::vector<bool> sent_data(n_links, false);
        for (std::size_t ni = 0; ni < n_nodes; ++ni) {
            if (topology.roles[ni] == NodeRole::Sink) continue;
            transmit_turn(ni, tick, now, sent_data);
        }
        // Idle links build up entanglement.
        for (std::size_t li = 0; li < n_links; ++li) {
            if (!sent_data[li]) links[li].generate_pairs(now);
        }
    }

    // Drain: finish queued/in-flight traffic without new arrivals or
    // entanglement generation.
    std::int64_t tick = base.total_ticks;
    while (true) {
        bool pending = !inflight.empty();
        for (std::size_t ni = 0; ni < n_nodes && !pending; ++ni) {
            pending = !nodes[ni].queue.empty();
        }
        for (std::size_t li = 0; li < n_links && !pending; ++li) pending = links[li].busy();
        if (!pending) break;
        const TimeNs now = tick * period;
        deliver_due(now);
        std::vector<bool> sent_data(n_links, false);
        for (std::size_t ni = 0; ni < n_nodes; ++ni) {
            if (topology.roles[ni] == NodeRole::Sink) continue;
            transmit_turn(ni, tick, now, sent_data);
        }
        ++tick;
    }

    if (m.messages_delivered == 0) {
        m.no_deliveries = true;
    } else {
        m.message_error_rate =
            static_cast<double>(m.wrong_messages) / static_cast<double>(m.messages_delivered);
    }
    if (base.total_ticks > 0) {
        const double bits = static_cast<double>(m.messages_delivered * base.job_bits);
        m.throughput_bits_per_tick =
            bits / static_cast<double>(base.total_ticks) * (1.0 - m.message_error_rate);
        m.throughput_mbps = m.throughput_bits_per_tick * 1000.0 / static_cast<double>(period);
    }
    for (std::size_t li = 0; li < n_links; ++li) {
        m.per_link[li].pairs_generated = links[li].pairs_generated;
        m.per_link[li].pairs_consumed = links[li].pairs_consumed;
        m.per_link[li].pairs_evicted = links[li].pairs_evicted;
        m.per_link[li].pairs_remaining = static_cast<std::int64_t>(links[li].ebuf().size());
    }
    return m;
}

} // namespace gewi
