#include "gewi/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gewi {

namespace {

// Applies a 2x2 operator K to one tensor factor of rho: rho' += (K x I) rho (K x I)^dag
// (or (I x K) for the receiver half). Accumulates into out.
void accumulate_single_qubit_kraus(const QubitPairState& rho, PairHalf half,
                                   const std::array<cplx, 4>& k, QubitPairState& out) {
    // Qubit bit position within the basis index: sender = bit 1, receiver = bit 0.
    const int mask = (half == PairHalf::Sender) ? 2 : 1;

    // tmp = (K on half) * rho
    std::array<cplx, 16> tmp{};
    for (int r = 0; r < 4; ++r) {
        const int rb = (r & mask) ? 1 : 0;
        const int r0 = r & ~mask;       // row with qubit bit = 0
        const int r1 = r | mask;        // row with qubit bit = 1
        for (int c = 0; c < 4; ++c) {
            tmp[static_cast<std::size_t>(r * 4 + c)] =
                k[static_cast<std::size_t>(rb * 2 + 0)] * rho.at(r0, c) +
                k[static_cast<std::size_t>(rb * 2 + 1)] * rho.at(r1, c);
        }
    }
    // out += tmp * (K on half)^dag
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const int cb = (c & mask) ? 1 : 0;
            const int c0 = c & ~mask;
            const int c1 = c | mask;
            out.at(r, c) += tmp[static_cast<std::size_t>(r * 4 + c0)] *
                                std::conj(k[static_cast<std::size_t>(cb * 2 + 0)]) +
                            tmp[static_cast<std::size_t>(r * 4 + c1)] *
                                std::conj(k[static_cast<std::size_t>(cb * 2 + 1)]);
        }
    }
}

QubitPairState apply_kraus_pair(const QubitPairState& rho, PairHalf half,
                                const std::array<cplx, 4>& k0, const std::array<cplx, 4>& k1) {
    QubitPairState out{};
    accumulate_single_qubit_kraus(rho, half, k0, out);
    accumulate_single_qubit_kraus(rho, half, k1, out);
    return out;
}

} // namespace

double QubitPairState::trace_real() const {
    double t = 0.0;
    for (int i = 0; i < 4; ++i) t += at(i, i).real();
    return t;
}

double QubitPairState::max_hermiticity_defect() const {
    double d = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            d = std::max(d, std::abs(at(r, c) - std::conj(at(c, r))));
    return d;
}

// Smallest eigenvalue via a Jacobi sweep on the real-symmetric embedding
// [[Re, -Im], [Im, Re]]; its spectrum is the complex matrix's, doubled.
double QubitPairState::min_eigenvalue() const {
    constexpr int n = 8;
    double a[n][n];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const cplx v = at(r, c);
            a[r][c] = v.real();
            a[r][c + 4] = -v.imag();
            a[r + 4][c] = v.imag();
            a[r + 4][c + 4] = v.real();
        }
    }
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
        }
    }
    double mn = a[0][0];
    for (int i = 1; i < n; ++i) mn = std::min(mn, a[i][i]);
    return mn;
}

bool QubitPairState::is_valid() const {
    return max_hermiticity_defect() <= 1e-12 && std::abs(trace_real() - 1.0) <= 1e-12 &&
           min_eigenvalue() >= -1e-10;
}

std::uint8_t bell_outcome_symbol(BellOutcome o) {
    switch (o) {
        case BellOutcome::PhiPlus: return 0b00;
        case BellOutcome::PhiMinus: return 0b10;
        case BellOutcome::PsiPlus: return 0b01;
        case BellOutcome::PsiMinus: return 0b11;
    }
    return 0;
}

QubitPairState make_bell_pair() {
    QubitPairState s{};
    s.at(0, 0) = 0.5;
    s.at(0, 3) = 0.5;
    s.at(3, 0) = 0.5;
    s.at(3, 3) = 0.5;
    return s;
}

QubitPairState make_maximally_mixed() {
    QubitPairState s{};
    for (int i = 0; i < 4; ++i) s.at(i, i) = 0.25;
    return s;
}

QubitPairState apply_memory_noise(const QubitPairState& state, PairHalf half,
                                  double dt_ns, const NoiseParams& params) {
    if (dt_ns < 0.0) throw std::invalid_argument("apply_memory_noise: dt must be >= 0");
    if (params.perfect || dt_ns == 0.0) return state;
    if (!params.valid()) throw std::invalid_argument("apply_memory_noise: invalid NoiseParams");

    const double p1 = damping_probability(dt_ns, params.t1_ns);
    const double p2 = dephasing_probability(dt_ns, params.t1_ns, params.t2_ns);

    // Amplitude damping: E0 = |0><0| + sqrt(1-p1)|1><1|, E1 = sqrt(p1)|0><1|.
    const std::array<cplx, 4> e0{1.0, 0.0, 0.0, std::sqrt(1.0 - p1)};
    const std::array<cplx, 4> e1{0.0, std::sqrt(p1), 0.0, 0.0};
    QubitPairState damped = apply_kraus_pair(state, half, e0, e1);

    // Dephasing: rho -> (1-p2) rho + p2 Z rho Z.
    const std::array<cplx, 4> d0{std::sqrt(1.0 - p2), 0.0, 0.0, std::sqrt(1.0 - p2)};
    const std::array<cplx, 4> d1{std::sqrt(p2), 0.0, 0.0, -std::sqrt(p2)};
    return apply_kraus_pair(damped, half, d0, d1);
}

QubitPairState superdense_encode(const QubitPairState& state, std::uint8_t symbol) {
    const bool apply_z = (symbol & 0b10) != 0;
    const bool apply_x = (symbol & 0b01) != 0;
    QubitPairState out = state;
    if (apply_z) {
        const std::array<cplx, 4> z{1.0, 0.0, 0.0, -1.0};
        QubitPairState t{};
        accumulate_single_qubit_kraus(out, PairHalf::Sender, z, t);
        out = t;
    }
    if (apply_x) {
        const std::array<cplx, 4> x{0.0, 1.0, 1.0, 0.0};
        QubitPairState t{};
        accumulate_single_qubit_kraus(out, PairHalf::Sender, x, t);
        out = t;
    }
    return out;
}

std::array<double, 4> bell_probabilities(const QubitPairState& s) {
    const double d00 = s.at(0, 0).real();
    const double d11 = s.at(1, 1).real();
    const double d22 = s.at(2, 2).real();
    const double d33 = s.at(3, 3).real();
    const double c03 = s.at(0, 3).real();
    const double c12 = s.at(1, 2).real();
    return {
        0.5 * (d00 + d33) + c03, // Phi+
        0.5 * (d00 + d33) - c03, // Phi-
        0.5 * (d11 + d22) + c12, // Psi+
        0.5 * (d11 + d22) - c12, // Psi-
    };
}

BellOutcome bell_measure_sample(const QubitPairState& state, Rng& rng) {
    std::array<double, 4> p = bell_probabilities(state);
    double total = 0.0;
    for (double& v : p) {
        v = std::clamp(v, 0.0, 1.0);
        total += v;
    }
    const double u = rng.uniform() * total;
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        acc += p[static_cast<std::size_t>(i)];
        if (u < acc) return static_cast<BellOutcome>(i);
    }
    return BellOutcome::PsiMinus;
}

std::uint8_t classical_encode_measure(std::uint8_t bit, Rng&) {
    return bit & 1u;
}

double fidelity_to_phi_plus(const QubitPairState& state) {
    return 0.5 * (state.at(0, 0).real() + state.at(3, 3).real()) + state.at(0, 3).real();
}

} // namespace gewi
