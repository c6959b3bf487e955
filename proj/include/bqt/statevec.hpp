// SPDX-License-Identifier: MIT
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "bqt/errors.hpp"

namespace bqt {

using cx = std::complex<double>;

/// Absolute tolerance for elementwise amplitude comparisons.
inline constexpr double kAmpTol = 1e-12;
/// Accepted norm deviation on states handed to measurement/projection.
inline constexpr double kNormTol = 1e-9;
/// A teleported state counts as recovered when fidelity >= 1 - kFidelityTol.
inline constexpr double kFidelityTol = 1e-10;
/// Hard cap on register width (dense vectors; 2^24 amplitudes).
inline constexpr int kMaxQubits = 24;

enum class Basis { Z, X };

/// Dense state vector over the 2^k computational basis states of k qubits.
///
/// Qubit 0 is the LEFTMOST symbol in ket notation (big-endian): the basis
/// ket |q0 q1 ... q(k-1)> has index q0*2^(k-1) + q1*2^(k-2) + ... + q(k-1),
/// so ket strings written left-to-right read off directly as binary indices.
///
/// A 0-qubit register is a single complex scalar (dimension 1).
///
/// Values are immutable once built; every operation returns a new state.
class StateVector {
  public:
    /// The 0-qubit scalar 1.
    StateVector() : amps_(1, cx(1.0, 0.0)) {}

    /// Takes ownership of raw amplitudes; size must be 2^num_qubits.
    /// Does not normalize.
    static StateVector from_amplitudes(int num_qubits, std::vector<cx> amps);

    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return amps_.size(); }
    std::span<const cx> amps() const { return amps_; }
    cx amp(std::uint64_t index) const { return amps_.at(index); }

    double norm_sq() const;
    bool is_normalized(double tol = kNormTol) const;

    /// Bit of `qubit` inside a basis index (big-endian position).
    static int bit_of(std::uint64_t index, int qubit, int num_qubits) {
        return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1u);
    }

  private:
    StateVector(int num_qubits, std::vector<cx> amps)
        : num_qubits_(num_qubits), amps_(std::move(amps)) {}

    int num_qubits_ = 0;
    std::vector<cx> amps_;
};

/// Computational basis ket |index> over num_qubits qubits.
StateVector basis_state(int num_qubits, std::uint64_t index);

/// Hadamard on one qubit.
StateVector apply_h(const StateVector& state, int qubit);
/// Pauli X on one qubit.
StateVector apply_x(const StateVector& state, int qubit);
/// Pauli Z on one qubit.
StateVector apply_z(const StateVector& state, int qubit);
/// CNOT; `control` and `target` must differ.
StateVector apply_cnot(const StateVector& state, int control, int target);

/// One projective single-qubit measurement.
/// X-basis outcomes are encoded 0 <-> |+>, 1 <-> |->.
struct MeasurementRecord {
    int qubit = 0;
    Basis basis = Basis::Z;
    int outcome = 0;
    double probability = 0.0;
};

/// Measures `qubit`, choosing outcome 0 iff rng_draw < P(outcome 0).
/// The measured qubit is REMOVED from the register (it shrinks by one).
std::pair<MeasurementRecord, StateVector> measure(const StateVector& state, int qubit,
                                                  Basis basis, double rng_draw);

/// Deterministic branch selection: forces `outcome` on `qubit`.
/// probability == 0 marks an empty branch; its state is the zero vector and
/// must not be used.
struct ProjectResult {
    double probability = 0.0;
    StateVector state;
};
ProjectResult project(const StateVector& state, int qubit, Basis basis, int outcome);

/// Kronecker product; a's qubits occupy the leftmost positions.
StateVector tensor(const StateVector& a, const StateVector& b);

/// |<a|b>|^2. Ignores global phase. Requires equal qubit counts.
double fidelity(const StateVector& a, const StateVector& b);

/// Seedable deterministic generator; all stochastic behavior flows through
/// explicit seeds so runs are replayable.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1), 53 random bits.
    double uniform();

    /// Standard normal via Box-Muller (pair returned one at a time).
    double gaussian();

    /// Derives an independent stream seed (splitmix64 mix of base and stream id).
    static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Normalized state with complex-Gaussian amplitudes from the given seed.
/// random_state(0, s) is the scalar 1.
StateVector random_state(int num_qubits, std::uint64_t seed);

/// Random GHZ-form state a0|0...0> + a1|1...1> over num_qubits >= 1 qubits.
StateVector random_ghz_state(int num_qubits, std::uint64_t seed);

} // namespace bqt
