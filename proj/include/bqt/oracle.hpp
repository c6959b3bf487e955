// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bqt/protocol.hpp"

namespace bqt {

/// Outcome of enumerating every measurement branch of one protocol instance.
struct VerificationReport {
    ProtocolConfig cfg;
    std::uint64_t num_branches = 0;
    double min_fidelity = 1.0;
    struct FailingBranch {
        std::string control_outcomes;
        std::string sending_outcomes;
        std::optional<int> charlie_outcome;
        double fidelity = 0.0;
        std::string note;
    };
    std::vector<FailingBranch> failing_branches;
    double elapsed_seconds = 0.0;

    bool all_passed() const { return failing_branches.empty(); }
};

/// Forces every outcome combination (controls x sendings x charlie), applies
/// the corrections, extracts both outputs and records fidelities. The protocol
/// is correct for this instance iff min_fidelity >= 1 - kFidelityTol.
/// Refuses instances above 22 total qubits.
VerificationReport verify_all_branches(const ProtocolConfig& cfg, const StateVector& phi_a,
                                       const StateVector& phi_b);

enum class Pauli { I, X, Z, XZ };

std::string to_string(Pauli p);

/// Witness that B = phase * (local_paulis applied to (A relabeled by permutation)).
/// permutation[j] = index of A's qubit that lands on position j.
struct EquivalenceResult {
    bool equivalent = false;
    std::optional<std::vector<int>> permutation;
    std::optional<std::vector<Pauli>> local_paulis;
    std::optional<cx> phase;
};

/// Applies a witness to `a` (permutation, then Paulis, then phase).
StateVector apply_relabeling(const StateVector& a, const std::vector<int>& permutation,
                             const std::vector<Pauli>& paulis, cx phase);

/// Exhaustive search over qubit permutations (and optionally per-qubit
/// I/X/Z/XZ with a global phase) for an exact mapping of a onto b.
/// Deterministic first-found witness. Size bounds: k <= 8 with Paulis,
/// k <= 12 without; beyond that a ConfigError reports the size.
EquivalenceResult equivalent_up_to_relabeling(const StateVector& a, const StateVector& b,
                                              bool allow_local_paulis);

/// True iff the state factorizes across the cut: the largest singular value
/// of the amplitude matrix reshaped over (cut | rest) is 1 within 1e-9.
bool schmidt_product_check(const StateVector& state, const std::vector<int>& cut);

} // namespace bqt
