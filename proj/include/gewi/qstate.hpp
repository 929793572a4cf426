#pragma once

#include <array>
#include <complex>
#include <cstdint>

#include "gewi/rng.hpp"

namespace gewi {

using cplx = std::complex<double>;

// Which tensor factor of a pair an operation acts on. The sender holds the
// first factor, the receiver the second.
enum class PairHalf { Sender, Receiver };

// T1/T2 memory decoherence parameters. Times are in nanoseconds.
// A "perfect" memory applies no noise at all.
struct NoiseParams {
    double t1_ns = 0.0;
    double t2_ns = 0.0;
    bool perfect = true;

    static NoiseParams make_perfect() { return {0.0, 0.0, true}; }
    static NoiseParams t1t2(double t1, double t2) { return {t1, t2, false}; }

    bool valid() const {
        if (perfect) return true;
        return t1_ns > 0.0 && t2_ns > 0.0 && t2_ns <= 2.0 * t1_ns;
    }
};

// Density matrix of one EPR pair, 4x4 complex, row-major, basis order
// |00>, |01>, |10>, |11> with the sender half as the first factor.
struct QubitPairState {
    std::array<cplx, 16> m{};

    cplx& at(int r, int c) { return m[static_cast<std::size_t>(r * 4 + c)]; }
    const cplx& at(int r, int c) const { return m[static_cast<std::size_t>(r * 4 + c)]; }

    double trace_real() const;
    double max_hermiticity_defect() const;
    double min_eigenvalue() const;

    // Hermitian within 1e-12, unit trace within 1e-12, eigenvalues >= -1e-10.
    bool is_valid() const;
};

// The four Bell-measurement outcomes. Each decodes to one 2-bit symbol.
enum class BellOutcome : std::uint8_t { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

// Decoded 2-bit symbol for an outcome: high bit = Z component, low bit = X
// component. Inverse of the superdense_encode convention.
std::uint8_t bell_outcome_symbol(BellOutcome o);

// |Phi+><Phi+| with |Phi+> = (|00> + |11>)/sqrt(2).
QubitPairState make_bell_pair();

// Maximally mixed two-qubit state I/4.
QubitPairState make_maximally_mixed();

// Amplitude damping with p1 = 1 - exp(-dt/T1), then dephasing with
// p2 = (1 - exp(-dt/T2) * exp(dt/(2*T1))) / 2, applied to one half only.
// Requires dt >= 0; perfect params return the state unchanged.
QubitPairState apply_memory_noise(const QubitPairState& state, PairHalf half,
                                  double dt_ns, const NoiseParams& params);

// Applies the Pauli encoding for a 2-bit symbol to the sender half:
// 00 -> I, 01 -> X, 10 -> Z, 11 -> X*Z.
QubitPairState superdense_encode(const QubitPairState& state, std::uint8_t symbol);

// (p_PhiPlus, p_PhiMinus, p_PsiPlus, p_PsiMinus) = <b_i| rho |b_i>.
std::array<double, 4> bell_probabilities(const QubitPairState& state);

// Samples one Bell outcome. Probabilities are clamped to [0,1] and
// renormalized before sampling.
BellOutcome bell_measure_sample(const QubitPairState& state, Rng& rng);

// Plain (non-assisted) transmission of one bit over the lossless, noiseless
// channel: prepare |b>, send, measure in Z. Deterministic identity.
std::uint8_t classical_encode_measure(std::uint8_t bit, Rng& rng);

// <Phi+| rho |Phi+>
double fidelity_to_phi_plus(const QubitPairState& state);

// Helper used by the noise channel and tests: damping probability for a
// storage interval.
inline double damping_probability(double dt_ns, double t1_ns) {
    return -std::expm1(-dt_ns / t1_ns);
}

// Dephasing probability for the T1/T2 model; requires t2 <= 2*t1 so the
// result lies in [0, 1/2].
inline double dephasing_probability(double dt_ns, double t1_ns, double t2_ns) {
    return 0.5 * -std::expm1(-dt_ns * (1.0 / t2_ns - 1.0 / (2.0 * t1_ns)));
}

} // namespace gewi
