#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "gewi/cluster.hpp"

using namespace gewi;

namespace {

ClusterConfig base_config() {
    ClusterConfig cfg;
    cfg.noise = NoiseParams::make_perfect();
    return cfg;
}

// Reference single-node Lloyd iteration over the full dataset, used as the
// oracle for the zero-pair equivalence and convergence checks.
struct LloydReference {
    std::array<Point2, 2> centroids;
    std::vector<std::uint8_t> labels;
    int iterations = 0;
};

LloydReference reference_kmeans(const Dataset& data, std::array<Point2, 2> centroids,
                                int max_iters, double eps) {
    LloydReference out;
    out.centroids = centroids;
    out.labels.assign(data.points.size(), 0);
    for (int iter = 0; iter < max_iters; ++iter) {
        out.iterations = iter + 1;
        const auto prev = out.centroids;
        for (std::size_t i = 0; i < data.points.size(); ++i) {
            const double d0 = std::hypot(data.points[i][0] - out.centroids[0][0],
                                         data.points[i][1] - out.centroids[0][1]);
            const double d1 = std::hypot(data.points[i][0] - out.centroids[1][0],
                                         data.points[i][1] - out.centroids[1][1]);
            out.labels[i] = d1 < d0 ? 1 : 0;
        }
        std::array<Point2, 2> sums{{{0, 0}, {0, 0}}};
        std::array<int, 2> counts{0, 0};
        for (std::size_t i = 0; i < data.points.size(); ++i) {
            sums[out.labels[i]][0] += data.points[i][0];
            sums[out.labels[i]][1] += data.points[i][1];
            counts[out.labels[i]]++;
        }
        double movement = 0.0;
        for (int c = 0; c < 2; ++c) {
            if (counts[c] == 0) continue;
            const Point2 nc{sums[c][0] / counts[c], sums[c][1] / counts[c]};
            movement = std::max(movement, std::hypot(nc[0] - prev[c][0], nc[1] - prev[c][1]));
            out.centroids[c] = nc;
        }
        if (movement < eps) break;
    }
    return out;
}

std::vector<EprRecord> fresh_pairs(int count) {
    std::vector<EprRecord> pairs;
    for (int i = 1; i <= count; ++i)
        pairs.push_back({static_cast<std::uint64_t>(i), make_bell_pair(), 0, 0});
    return pairs;
}

std::vector<EprRecord> mixed_pairs(int count) {
    std::vector<EprRecord> pairs;
    for (int i = 1; i <= count; ++i)
        pairs.push_back({static_cast<std::uint64_t>(i), make_maximally_mixed(), 0, 0});
    return pairs;
}

} // namespace

TEST_CASE("dataset generation is deterministic and centered") {
    const Dataset a = generate_dataset(2024);
    const Dataset b = generate_dataset(2024);
    REQUIRE(a.points.size() == 500);
    CHECK(a.points == b.points);
    CHECK(a.truth == b.truth);

    double mx = 0, my = 0;
    for (int i = 0; i < 250; ++i) {
        mx += a.points[static_cast<std::size_t>(i)][0];
        my += a.points[static_cast<std::size_t>(i)][1];
    }
    CHECK(std::abs(mx / 250.0 + 1.0) <= 0.05);
    CHECK(std::abs(my / 250.0) <= 0.05);

    const Dataset c = generate_dataset(7, 10, 0.0);
    for (int i = 0; i < 5; ++i) {
        CHECK(c.points[static_cast<std::size_t>(i)] == Point2{-1.0, 0.0});
        CHECK(c.points[static_cast<std::size_t>(i + 5)] == Point2{1.0, 0.0});
    }
}

TEST_CASE("nearest-centroid labelling with ties to the lower index") {
    const std::vector<Point2> pts{{-1.0, 0.0}, {0.0, 0.0}, {0.7, 0.1}};
    const std::array<Point2, 2> cents{{{-0.5, 0.0}, {0.5, 0.0}}};
    const std::vector<std::size_t> all{0, 1, 2};
    const auto labels = kmeans_iteration(pts, cents, all);
    CHECK(labels == std::vector<std::uint8_t>{0, 0, 1}); // (0,0) is equidistant -> 0
}

TEST_CASE("reference k-means converges on the synthetic blobs") {
    const Dataset data = generate_dataset(11);
    const auto ref = reference_kmeans(data, {{{-0.5, 0.0}, {0.5, 0.0}}}, 10, 1e-9);
    CHECK(ref.iterations <= 10);
    CHECK(std::abs(ref.centroids[0][0] + 1.0) <= 0.05);
    CHECK(std::abs(ref.centroids[0][1]) <= 0.05);
    CHECK(std::abs(ref.centroids[1][0] - 1.0) <= 0.05);
    CHECK(std::abs(ref.centroids[1][1]) <= 0.05);
}

TEST_CASE("f1 score against hand counts") {
    const BitVec a{1, 1, 0, 0};
    CHECK(f1_score(a, a) == doctest::Approx(1.0));

    const BitVec b{1, 0, 1, 0};
    // TP=1, FP=1, FN=1 -> precision = recall = 1/2
    CHECK(f1_score(a, b) == doctest::Approx(0.5));

    bool degenerate = false;
    const BitVec zeros{0, 0, 0, 0};
    CHECK(f1_score(zeros, zeros, &degenerate) == 0.0);
    CHECK(degenerate);

    CHECK_THROWS_AS(f1_score(a, BitVec{1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(f1_score(BitVec{}, BitVec{}), std::invalid_argument);
}

TEST_CASE("exchange arithmetic: pairs carry 2 bits, the rest goes plain") {
    Rng rng(3);
    BitVec labels(250);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 2;

    auto none = fresh_pairs(0);
    auto r0 = exchange_labels(labels, none, 0, NoiseParams::make_perfect(), rng);
    CHECK(r0.transmissions == 250);
    CHECK(r0.assisted_chunks == 0);
    CHECK(r0.received == labels);

    auto plenty = fresh_pairs(200);
    auto r1 = exchange_labels(labels, plenty, 0, NoiseParams::make_perfect(), rng);
    CHECK(r1.transmissions == 125);
    CHECK(r1.assisted_chunks == 125);
    CHECK(r1.received == labels);
    CHECK(plenty.size() == 75); // 125 consumed, newest first

    auto some = fresh_pairs(50);
    auto r2 = exchange_labels(labels, some, 0, NoiseParams::make_perfect(), rng);
    CHECK(r2.transmissions == 50 + 150);
    CHECK(r2.assisted_chunks == 50);
    CHECK(r2.received == labels);
}

TEST_CASE("fully mixed pairs scramble chunks uniformly") {
    Rng rng(31);
    BitVec labels(250);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = rng.bit();

    int chunk_matches = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        auto pairs = mixed_pairs(125);
        const auto res = exchange_labels(labels, pairs, 0, NoiseParams::make_perfect(), rng);
        CHECK(res.transmissions == 125);
        for (int c = 0; c < 125; ++c) {
            const std::size_t i = static_cast<std::size_t>(2 * c);
            if (res.received[i] == labels[i] && res.received[i + 1] == labels[i + 1])
                chunk_matches++;
        }
    }
    const double rate = static_cast<double>(chunk_matches) / (125.0 * trials);
    CHECK(std::abs(rate - 0.25) <= 0.01);
}

TEST_CASE("perfect memory keeps both parties identical: F1 = 1") {
    ClusterConfig cfg = base_config();
    for (int pairs : {0, 50, 125, 500}) {
        cfg.pairs_per_iteration = pairs;
        const ClusterRunResult res = run_distributed_kmeans(cfg, 17);
        CHECK(res.f1 == 1.0);
        CHECK(!res.f1_degenerate);
        CHECK(res.centroids_a == res.centroids_b);
    }
}

TEST_CASE("zero pairs reproduces the single-node reference run") {
    ClusterConfig cfg = base_config();
    cfg.pairs_per_iteration = 0;
    const ClusterRunResult res = run_distributed_kmeans(cfg, 4242);

    // the distributed run draws its dataset from the first rng draw
    Rng rng(4242);
    const Dataset data = generate_dataset(rng.next_u64(), cfg.n_points, cfg.std_dev, cfg.centers);
    const auto ref = reference_kmeans(data, cfg.initial_centroids, cfg.max_iterations,
                                      cfg.convergence_eps);
    CHECK(res.f1 == 1.0);
    for (std::size_t c = 0; c < 2; ++c) {
        CHECK(res.centroids_a[c][0] == doctest::Approx(ref.centroids[c][0]).epsilon(1e-12));
        CHECK(res.centroids_a[c][1] == doctest::Approx(ref.centroids[c][1]).epsilon(1e-12));
    }
}

TEST_CASE("transmissions decrease as pairs increase, for fixed seed") {
    ClusterConfig cfg = base_config();
    cfg.noise = NoiseParams::t1t2(1e7, 1e7); // 10 ms
    std::int64_t prev = -1;
    for (int pairs : {25, 50, 75, 100, 125, 250, 500}) {
        cfg.pairs_per_iteration = pairs;
        const ClusterRunResult res = run_distributed_kmeans(cfg, 5);
        if (prev >= 0) CHECK(res.total_transmissions <= prev);
        prev = res.total_transmissions;
    }
}

TEST_CASE("aged pairs at short coherence times decorrelate the parties") {
    ClusterConfig cfg = base_config();
    cfg.noise = NoiseParams::t1t2(1100.0, 1000.0); // ages ~1 ms: fully relaxed
    cfg.pairs_per_iteration = 500;
    const ClusterRunResult res = run_distributed_kmeans(cfg, 6);
    CHECK(res.iterations == cfg.max_iterations); // corrupted labels never converge
    CHECK(res.f1 < 1.0);

    cfg.noise = NoiseParams::t1t2(1e7, 1e7); // 10 ms memory stays mostly intact
    const ClusterRunResult good = run_distributed_kmeans(cfg, 6);
    CHECK(good.f1 > res.f1);
}

TEST_CASE("config validation") {
    ClusterConfig cfg = base_config();
    cfg.pairs_per_iteration = 501;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = base_config();
    cfg.n_points = 3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = base_config();
    cfg.noise = NoiseParams::t1t2(10.0, 30.0);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
