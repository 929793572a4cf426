#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>

#include "gewi/qstate.hpp"

using namespace gewi;

namespace {

// Reference path for the oracle checks: full 4x4 operator matrices applied
// as explicit sandwiches, independent of the implementation's per-qubit
// index arithmetic.
using Mat4 = std::array<cplx, 16>;

Mat4 tensor(const std::array<cplx, 4>& a, const std::array<cplx, 4>& b) {
    Mat4 m{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    m[static_cast<std::size_t>((2 * i + k) * 4 + (2 * j + l))] =
                        a[static_cast<std::size_t>(i * 2 + j)] *
                        b[static_cast<std::size_t>(k * 2 + l)];
    return m;
}

Mat4 mul(const Mat4& a, const Mat4& b) {
    Mat4 m{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < 4; ++k)
                s += a[static_cast<std::size_t>(i * 4 + k)] *
                     b[static_cast<std::size_t>(k * 4 + j)];
            m[static_cast<std::size_t>(i * 4 + j)] = s;
        }
    return m;
}

Mat4 dagger(const Mat4& a) {
    Mat4 m{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m[static_cast<std::size_t>(i * 4 + j)] =
                std::conj(a[static_cast<std::size_t>(j * 4 + i)]);
    return m;
}

QubitPairState sandwich_sum(const QubitPairState& rho, const std::vector<Mat4>& kraus) {
    QubitPairState out{};
    for (const auto& k : kraus) {
        Mat4 t = mul(mul(k, rho.m), dagger(k));
        for (std::size_t i = 0; i < 16; ++i) out.m[i] += t[i];
    }
    return out;
}

// Oracle version of the memory channel on one half, built from explicit
// tensor products.
QubitPairState oracle_noise(const QubitPairState& rho, PairHalf half, double p1, double p2) {
    const std::array<cplx, 4> id{1, 0, 0, 1};
    const std::array<cplx, 4> e0{1, 0, 0, std::sqrt(1.0 - p1)};
    const std::array<cplx, 4> e1{0, std::sqrt(p1), 0, 0};
    const std::array<cplx, 4> d0{std::sqrt(1.0 - p2), 0, 0, std::sqrt(1.0 - p2)};
    const std::array<cplx, 4> d1{std::sqrt(p2), 0, 0, -std::sqrt(p2)};
    auto lift = [&](const std::array<cplx, 4>& k) {
        return half == PairHalf::Sender ? tensor(k, id) : tensor(id, k);
    };
    QubitPairState damped = sandwich_sum(rho, {lift(e0), lift(e1)});
    return sandwich_sum(damped, {lift(d0), lift(d1)});
}

QubitPairState random_state(Rng& rng) {
    Mat4 g{};
    for (auto& v : g) v = cplx(rng.gauss(), rng.gauss());
    QubitPairState s{};
    s.m = mul(g, dagger(g));
    const double tr = s.trace_real();
    for (auto& v : s.m) v /= tr;
    return s;
}

QubitPairState ket_bra(int k) {
    QubitPairState s{};
    s.at(k, k) = 1.0;
    return s;
}

double max_entry_diff(const QubitPairState& a, const QubitPairState& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < 16; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
    return d;
}

} // namespace

TEST_CASE("bell pair is PhiPlus") {
    const QubitPairState s = make_bell_pair();
    CHECK(s.at(0, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.at(0, 3).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.at(3, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.at(3, 3).real() == doctest::Approx(0.5).epsilon(1e-15));
    double off = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (!((r == 0 || r == 3) && (c == 0 || c == 3))) off += std::abs(s.at(r, c));
    CHECK(off == 0.0);
    CHECK(fidelity_to_phi_plus(s) == doctest::Approx(1.0).epsilon(1e-15));
    const auto p = bell_probabilities(s);
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p[2] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p[3] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(s.is_valid());
}

TEST_CASE("noise probabilities match the exponential formulas") {
    // dt = 10 ns, T1 = 11 ns
    CHECK(damping_probability(10.0, 11.0) ==
          doctest::Approx(1.0 - std::exp(-10.0 / 11.0)).epsilon(1e-14));
    CHECK(damping_probability(10.0, 11.0) == doctest::Approx(0.59718).epsilon(2e-4));
    // p2 stays within [0, 1/2] for t2 <= 2 t1
    CHECK(dephasing_probability(10.0, 11.0, 10.0) ==
          doctest::Approx(0.5 * (1.0 - std::exp(-10.0 * (1.0 / 10.0 - 1.0 / 22.0))))
              .epsilon(1e-14));
    CHECK(dephasing_probability(1e9, 11.0, 10.0) <= 0.5);
    CHECK(dephasing_probability(0.0, 11.0, 10.0) == 0.0);
}

TEST_CASE("dt = 0 and perfect memory leave the state unchanged") {
    Rng rng(7);
    const QubitPairState s = random_state(rng);
    CHECK(max_entry_diff(apply_memory_noise(s, PairHalf::Sender, 0.0, NoiseParams::t1t2(11, 10)),
                         s) == 0.0);
    CHECK(max_entry_diff(
              apply_memory_noise(s, PairHalf::Receiver, 123.0, NoiseParams::make_perfect()), s) ==
          0.0);
}

TEST_CASE("negative dt is rejected") {
    CHECK_THROWS_AS(
        apply_memory_noise(make_bell_pair(), PairHalf::Sender, -1.0, NoiseParams::t1t2(11, 10)),
        std::invalid_argument);
}

TEST_CASE("fully relaxed pair settles in the ground state") {
    // p1 -> 1, p2 -> 1/2 on both halves maps PhiPlus to |00><00|.
    QubitPairState s = make_bell_pair();
    const NoiseParams noise = NoiseParams::t1t2(11.0, 10.0);
    const double dt = 1e9;
    s = apply_memory_noise(s, PairHalf::Sender, dt, noise);
    s = apply_memory_noise(s, PairHalf::Receiver, dt, noise);

    const QubitPairState oracle =
        oracle_noise(oracle_noise(make_bell_pair(), PairHalf::Sender, 1.0, 0.5),
                     PairHalf::Receiver, 1.0, 0.5);
    CHECK(max_entry_diff(s, oracle) <= 1e-12);
    CHECK(max_entry_diff(s, ket_bra(0)) <= 1e-12);

    const auto p = bell_probabilities(s);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p[3] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("channel agrees with the tensor-product oracle on random states") {
    Rng rng(41);
    const NoiseParams noise = NoiseParams::t1t2(1100.0, 1000.0);
    for (int trial = 0; trial < 50; ++trial) {
        const QubitPairState s = random_state(rng);
        const double dt = rng.uniform() * 5000.0;
        const double p1 = damping_probability(dt, noise.t1_ns);
        const double p2 = dephasing_probability(dt, noise.t1_ns, noise.t2_ns);
        const PairHalf half = trial % 2 == 0 ? PairHalf::Sender : PairHalf::Receiver;
        CHECK(max_entry_diff(apply_memory_noise(s, half, dt, noise),
                             oracle_noise(s, half, p1, p2)) <= 1e-12);
    }
}

TEST_CASE("trace, positivity and hermiticity survive the channel") {
    Rng rng(11);
    const NoiseParams noise = NoiseParams::t1t2(110.0, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        QubitPairState s = random_state(rng);
        const double dt = rng.uniform() * 500.0;
        s = apply_memory_noise(s, PairHalf::Sender, dt, noise);
        s = apply_memory_noise(s, PairHalf::Receiver, dt, noise);
        CHECK(std::abs(s.trace_real() - 1.0) <= 1e-12);
        CHECK(s.max_hermiticity_defect() <= 1e-12);
        CHECK(s.min_eigenvalue() >= -1e-10);
    }
}

TEST_CASE("channel composes as a semigroup") {
    Rng rng(17);
    const NoiseParams noise = NoiseParams::t1t2(1100.0, 1000.0);
    for (int trial = 0; trial < 50; ++trial) {
        const QubitPairState s = random_state(rng);
        const double dt1 = rng.uniform() * 800.0;
        const double dt2 = rng.uniform() * 800.0;
        const PairHalf half = trial % 2 == 0 ? PairHalf::Sender : PairHalf::Receiver;
        const QubitPairState split =
            apply_memory_noise(apply_memory_noise(s, half, dt1, noise), half, dt2, noise);
        const QubitPairState joined = apply_memory_noise(s, half, dt1 + dt2, noise);
        CHECK(max_entry_diff(split, joined) <= 1e-9);
    }
}

TEST_CASE("superdense encoding maps PhiPlus onto the Bell basis") {
    const QubitPairState phi = make_bell_pair();

    const QubitPairState s00 = superdense_encode(phi, 0b00);
    CHECK(max_entry_diff(s00, phi) == 0.0);

    const QubitPairState s01 = superdense_encode(phi, 0b01); // X -> PsiPlus
    auto p = bell_probabilities(s01);
    CHECK(p[2] == doctest::Approx(1.0).epsilon(1e-14));

    const QubitPairState s10 = superdense_encode(phi, 0b10); // Z -> PhiMinus
    p = bell_probabilities(s10);
    CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-14));

    const QubitPairState s11 = superdense_encode(phi, 0b11); // XZ -> PsiMinus
    p = bell_probabilities(s11);
    CHECK(p[3] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("the four encoded states are mutually orthogonal") {
    const QubitPairState phi = make_bell_pair();
    std::array<QubitPairState, 4> enc;
    for (std::uint8_t s = 0; s < 4; ++s) enc[s] = superdense_encode(phi, s);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            // overlap tr(rho_a rho_b): 1 on the diagonal, 0 off it
            cplx overlap = 0.0;
            const Mat4 prod = mul(enc[static_cast<std::size_t>(a)].m,
                                  enc[static_cast<std::size_t>(b)].m);
            for (int i = 0; i < 4; ++i) overlap += prod[static_cast<std::size_t>(i * 4 + i)];
            CHECK(std::abs(overlap - (a == b ? 1.0 : 0.0)) <= 1e-12);
        }
    }
}

TEST_CASE("bell probabilities: explicit inner-product cases") {
    // |00><00|: only the Phi states overlap, each with 1/2
    auto p = bell_probabilities(ket_bra(0));
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p[2] == 0.0);
    CHECK(p[3] == 0.0);
    CHECK(fidelity_to_phi_plus(ket_bra(0)) == doctest::Approx(0.5).epsilon(1e-14));

    p = bell_probabilities(make_maximally_mixed());
    for (double v : p) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(fidelity_to_phi_plus(make_maximally_mixed()) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("bell probabilities sum to one on random states") {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = bell_probabilities(random_state(rng));
        CHECK(std::abs(p[0] + p[1] + p[2] + p[3] - 1.0) <= 1e-10);
        for (double v : p) {
            CHECK(v >= -1e-10);
            CHECK(v <= 1.0 + 1e-10);
        }
    }
}

TEST_CASE("perfect-memory superdense round trip is exact for every symbol") {
    for (std::uint8_t sym = 0; sym < 4; ++sym) {
        const QubitPairState enc = superdense_encode(make_bell_pair(), sym);
        for (std::uint64_t seed = 1; seed <= 64; ++seed) {
            Rng rng(seed);
            CHECK(bell_outcome_symbol(bell_measure_sample(enc, rng)) == sym);
        }
    }
}

TEST_CASE("sampling the maximally mixed state is uniform") {
    Rng rng(99);
    const QubitPairState mixed = make_maximally_mixed();
    std::array<int, 4> counts{};
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        counts[static_cast<std::size_t>(bell_measure_sample(mixed, rng))]++;
    for (int c : counts)
        CHECK(std::abs(static_cast<double>(c) / n - 0.25) <= 0.01);
}

TEST_CASE("sampling is deterministic for a fixed seed") {
    const QubitPairState mixed = make_maximally_mixed();
    for (std::uint64_t seed : {1ULL, 42ULL, 12345ULL}) {
        Rng a(seed), b(seed);
        for (int i = 0; i < 100; ++i)
            CHECK(bell_measure_sample(mixed, a) == bell_measure_sample(mixed, b));
    }
}

TEST_CASE("classical transmission is the identity") {
    Rng rng(5);
    CHECK(classical_encode_measure(0, rng) == 0);
    CHECK(classical_encode_measure(1, rng) == 1);
    for (int i = 0; i < 16; ++i) {
        const std::uint8_t b = static_cast<std::uint8_t>(i & 1);
        CHECK(classical_encode_measure(b, rng) == b);
    }
}

TEST_CASE("outcome-to-symbol decode map is a bijection inverse to encoding") {
    std::array<bool, 4> seen{};
    for (int o = 0; o < 4; ++o) {
        const std::uint8_t s = bell_outcome_symbol(static_cast<BellOutcome>(o));
        CHECK(s < 4);
        CHECK(!seen[s]);
        seen[s] = true;
    }
}

TEST_CASE("noise params reject t2 > 2 t1") {
    CHECK(NoiseParams::t1t2(10.0, 20.0).valid());
    CHECK(!NoiseParams::t1t2(10.0, 30.0).valid());
    CHECK(!NoiseParams::t1t2(0.0, 10.0).valid());
    CHECK(NoiseParams::make_perfect().valid());
}
