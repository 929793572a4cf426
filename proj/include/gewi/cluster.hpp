#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gewi/buffers.hpp"
#include "gewi/qstate.hpp"
#include "gewi/rng.hpp"

namespace gewi {

using Point2 = std::array<double, 2>;

// Synthetic two-blob dataset with ground-truth labels.
struct Dataset {
    std::vector<Point2> points;
    std::vector<std::uint8_t> truth;
};

struct ClusterConfig {
    int n_points = 500;
    std::array<Point2, 2> centers{{{-1.0, 0.0}, {1.0, 0.0}}};
    double std_dev = 0.1;
    int max_iterations = 10;
    int pairs_per_iteration = 0;          // per direction, capped by memory_slots
    int memory_slots = 500;
    NoiseParams noise;
    TimeNs processing_gap_ns = 1'000'000; // compute time per iteration: 1 ms
    TimeNs pair_stagger_ns = 10;          // generation spacing, one per link tick
    TimeNs channel_delay_ns = 100;        // 20 m of fiber
    double convergence_eps = 1e-9;
    std::array<Point2, 2> initial_centroids{{{-0.5, 0.0}, {0.5, 0.0}}};

    void validate() const;
};

Dataset generate_dataset(std::uint64_t seed, int n_points = 500, double std_dev = 0.1,
                         const std::array<Point2, 2>& centers = {{{-1.0, 0.0}, {1.0, 0.0}}});

// Labels each index in index_set by its nearest centroid (Euclidean);
// ties go to the lower centroid index. Output is ordered like index_set.
std::vector<std::uint8_t> kmeans_iteration(std::span<const Point2> points,
                                           const std::array<Point2, 2>& centroids,
                                           std::span<const std::size_t> index_set);

struct ExchangeResult {
    BitVec received;                  // possibly corrupted on assisted chunks
    std::int64_t transmissions = 0;   // data-qubit sends only
    std::int64_t assisted_chunks = 0;
};

// Sends a label bit-string over the channel: 2-bit chunks ride stored pairs
// (consumed newest-first from the back of `pairs`) while they last, the
// remaining bits go as plain single-bit sends. One assisted chunk or one
// plain bit each count as a single transmission.
ExchangeResult exchange_labels(std::span<const std::uint8_t> labels,
                               std::vector<EprRecord>& pairs, TimeNs now,
                               const NoiseParams& noise, Rng& rng);

// 2 * precision * recall / (precision + recall) for binary label vectors,
// with A as reference and label 1 as the positive class. Returns 0 when
// there are no true positives; `degenerate` reports that case.
double f1_score(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                bool* degenerate = nullptr);

struct ClusterRunResult {
    std::int64_t total_transmissions = 0;
    double f1 = 0.0;
    bool f1_degenerate = false;
    int iterations = 0;
    std::array<Point2, 2> centroids_a{};
    std::array<Point2, 2> centroids_b{};
};

// Two parties run Lloyd iterations over a shared dataset, each labelling
// half the points per iteration (halves swap every iteration) and swapping
// label vectors over the buffered-entanglement channel.
ClusterRunResult run_distributed_kmeans(const ClusterConfig& cfg, std::uint64_t seed);

} // namespace gewi
