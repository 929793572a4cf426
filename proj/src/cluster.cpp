#include "gewi/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gewi/link.hpp"

namespace gewi {

void ClusterConfig::validate() const {
    if (n_points < 2 || n_points % 2 != 0)
        throw std::invalid_argument("cluster: n_points must be even and >= 2");
    if (std_dev < 0.0) throw std::invalid_argument("cluster: std_dev must be >= 0");
    if (max_iterations < 1) throw std::invalid_argument("cluster: max_iterations must be >= 1");
    if (pairs_per_iteration < 0)
        throw std::invalid_argument("cluster: pairs_per_iteration must be >= 0");
    if (memory_slots < 0) throw std::invalid_argument("cluster: memory_slots must be >= 0");
    if (pairs_per_iteration > memory_slots)
        throw std::invalid_argument("cluster: pairs_per_iteration exceeds memory_slots");
    if (processing_gap_ns < 0 || pair_stagger_ns < 0 || channel_delay_ns < 0)
        throw std::invalid_argument("cluster: durations must be >= 0");
    if (!noise.valid())
        throw std::invalid_argument("cluster: noise requires t1 > 0, t2 > 0 and t2 <= 2*t1");
}

Dataset generate_dataset(std::uint64_t seed, int n_points, double std_dev,
                         const std::array<Point2, 2>& centers) {
    Rng rng(seed);
    Dataset d;
    d.points.reserve(static_cast<std::size_t>(n_points));
    d.truth.reserve(static_cast<std::size_t>(n_points));
    const int half = n_points / 2;
    for (int i = 0; i < n_points; ++i) {
        const std::uint8_t c = i < half ? 0 : 1;
        d.points.push_back({centers[c][0] + std_dev * rng.gauss(),
                            centers[c][1] + std_dev * rng.gauss()});
        d.truth.push_back(c);
    }
    return d;
}

namespace {

double dist2(const Point2& a, const Point2& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

} // namespace

std::vector<std::uint8_t> kmeans_iteration(std::span<const Point2> points,
                                           const std::array<Point2, 2>& centroids,
                                           std::span<const std::size_t> index_set) {
    std::vector<std::uint8_t> labels;
    labels.reserve(index_set.size());
    for (std::size_t idx : index_set) {
        const double d0 = dist2(points[idx], centroids[0]);
        const double d1 = dist2(points[idx], centroids[1]);
        labels.push_back(d1 < d0 ? 1 : 0); // tie goes to centroid 0
    }
    return labels;
}

ExchangeResult exchange_labels(std::span<const std::uint8_t> labels,
                               std::vector<EprRecord>& pairs, TimeNs now,
                               const NoiseParams& noise, Rng& rng) {
    ExchangeResult out;
    out.received.reserve(labels.size());
    std::size_t i = 0;
    while (i + 1 < labels.size() && !pairs.empty()) {
        EprRecord rec = std::move(pairs.back());
        pairs.pop_back(); // newest first
        const std::uint8_t sym =
            static_cast<std::uint8_t>((labels[i] << 1) | labels[i + 1]);
        const std::uint8_t dec = consume_and_decode(rec, sym, now, noise, rng);
        out.received.push_back((dec >> 1) & 1u);
        out.received.push_back(dec & 1u);
        out.transmissions++;
        out.assisted_chunks++;
        i += 2;
    }
    for (; i < labels.size(); ++i) {
        out.received.push_back(classical_encode_measure(labels[i], rng));
        out.transmissions++;
    }
    return out;
}

double f1_score(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                bool* degenerate) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("f1_score: label vectors must be non-empty and equal length");
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool ra = a[i] != 0, rb = b[i] != 0;
        if (ra && rb) tp++;
        else if (!ra && rb) fp++;
        else if (ra && !rb) fn++;
    }
    if (degenerate) *degenerate = (tp == 0);
    if (tp == 0) return 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    return 2.0 * precision * recall / (precision + recall);
}

namespace {

struct Party {
    std::array<Point2, 2> centroids;
    std::vector<std::uint8_t> labels; // full current view, n entries
};

// Mean of each labelled cluster; an empty cluster keeps its old centroid.
std::array<Point2, 2> update_centroids(std::span<const Point2> points,
                                       std::span<const std::uint8_t> labels,
                                       const std::array<Point2, 2>& previous) {
    std::array<Point2, 2> sums{{{0, 0}, {0, 0}}};
    std::array<std::int64_t, 2> counts{0, 0};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t c = labels[i] ? 1 : 0;
        sums[c][0] += points[i][0];
        sums[c][1] += points[i][1];
        counts[c]++;
    }
    std::array<Point2, 2> out = previous;
    for (std::size_t c = 0; c < 2; ++c) {
        if (counts[c] > 0) {
            out[c] = {sums[c][0] / static_cast<double>(counts[c]),
                      sums[c][1] / static_cast<double>(counts[c])};
        }
    }
    return out;
}

// Pair i of N (1-based) is generated at now - gap - (N - i) * stagger, so
// every pair has aged at least the processing gap when consumed.
std::vector<EprRecord> staged_pairs(int count, TimeNs now, TimeNs gap, TimeNs stagger,
                                    std::uint64_t& next_id) {
    std::vector<EprRecord> pairs;
    pairs.reserve(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) {
        const TimeNs birth = now - gap - static_cast<TimeNs>(count - i) * stagger;
        pairs.push_back({next_id++, make_bell_pair(), birth, birth});
    }
    return pairs;
}

} // namespace

ClusterRunResult run_distributed_kmeans(const ClusterConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    const Dataset data = generate_dataset(rng.next_u64(), cfg.n_points, cfg.std_dev, cfg.centers);
    const std::size_t n = data.points.size();
    const std::size_t half = n / 2;

    std::array<std::vector<std::size_t>, 2> halves;
    for (std::size_t i = 0; i < half; ++i) halves[0].push_back(i);
    for (std::size_t i = half; i < n; ++i) halves[1].push_back(i);

    std::array<Party, 2> party;
    for (auto& p : party) {
        p.centroids = cfg.initial_centroids;
        p.labels.assign(n, 0);
    }

    ClusterRunResult result;
    std::uint64_t next_pair_id = 1;
    const int pairs_count = std::min(cfg.pairs_per_iteration, cfg.memory_slots);

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        result.iterations = iter + 1;
        const std::array<Point2, 2> prev_a = party[0].centroids;
        const std::array<Point2, 2> prev_b = party[1].centroids;

        // Index sets swap every iteration.
        const std::size_t share_a = static_cast<std::size_t>(iter % 2);
        const std::size_t share_b = 1 - share_a;

        const auto labels_a =
            kmeans_iteration(data.points, party[0].centroids, halves[share_a]);
        const auto labels_b =
            kmeans_iteration(data.points, party[1].centroids, halves[share_b]);

        for (std::size_t k = 0; k < halves[share_a].size(); ++k)
            party[0].labels[halves[share_a][k]] = labels_a[k];
        for (std::size_t k = 0; k < halves[share_b].size(); ++k)
            party[1].labels[halves[share_b][k]] = labels_b[k];

        // The exchange happens after the processing gap; both directions use
        // pairs generated during the compute window.
        const TimeNs now = static_cast<TimeNs>(iter + 1) *
                           (cfg.processing_gap_ns +
                            static_cast<TimeNs>(pairs_count) * cfg.pair_stagger_ns);
        auto pairs_ab =
            staged_pairs(pairs_count, now, cfg.processing_gap_ns, cfg.pair_stagger_ns, next_pair_id);
        auto pairs_ba =
            staged_pairs(pairs_count, now, cfg.processing_gap_ns, cfg.pair_stagger_ns, next_pair_id);

        const ExchangeResult from_a = exchange_labels(labels_a, pairs_ab, now, cfg.noise, rng);
        const ExchangeResult from_b = exchange_labels(labels_b, pairs_ba, now, cfg.noise, rng);
        result.total_transmissions += from_a.transmissions + from_b.transmissions;

        // Each party applies the received (possibly corrupted) labels verbatim.
        for (std::size_t k = 0; k < halves[share_a].size(); ++k)
            party[1].labels[halves[share_a][k]] = from_a.received[k];
        for (std::size_t k = 0; k < halves[share_b].size(); ++k)
            party[0].labels[halves[share_b][k]] = from_b.received[k];

        party[0].centroids = update_centroids(data.points, party[0].labels, party[0].centroids);
        party[1].centroids = update_centroids(data.points, party[1].labels, party[1].centroids);

        double movement = 0.0;
        for (std::size_t c = 0; c < 2; ++c) {
            movement = std::max(movement, std::sqrt(dist2(party[0].centroids[c], prev_a[c])));
            movement = std::max(movement, std::sqrt(dist2(party[1].centroids[c], prev_b[c])));
        }
        if (movement < cfg.convergence_eps) break;
    }

    result.f1 = f1_score(party[0].labels, party[1].labels, &result.f1_degenerate);
    result.centroids_a = party[0].centroids;
    result.centroids_b = party[1].centroids;
    return result;
}

} // namespace gewi
