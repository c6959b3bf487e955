// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bqt/layout.hpp"
#include "bqt/statevec.hpp"

namespace bqt {

// The teleportation pipeline. A channel is prepared over the main/charlie/
// control qubits, the unknown sending states are attached and entangled with
// the controls, and two measurement rounds drive Pauli repairs:
//   Z-outcomes of the control qubits select X corrections on the mirrored
//   main qubits; X-outcomes of the sending qubits select Z corrections.
// With a supervisor, its X-measurement releases the outputs and adds one
// more round of Z corrections on the masked blocks.

/// Pauli repairs applied on the main register for one branch.
/// x_targets come only from control-qubit Z-outcomes; z_targets only from
/// sending-qubit X-outcomes plus the supervisor's X-outcome.
struct CorrectionPlan {
    std::vector<int> x_targets;
    std::vector<int> z_targets;
    bool operator==(const CorrectionPlan&) const = default;
};

/// Full audit trail of one executed measurement branch.
struct BranchReport {
    std::string control_outcomes;       // '0'/'1' per control qubit
    std::string sending_outcomes;       // '0'/'1' per sending qubit, 1 means |->
    std::optional<int> charlie_outcome; // 0 = |+>, 1 = |->
    double probability = 0.0;
    CorrectionPlan corrections;
    StateVector bob_received;   // n qubits; should reproduce phi_a
    StateVector alice_received; // m qubits; should reproduce phi_b
    double fidelity_bob = 0.0;
    double fidelity_alice = 0.0;
};

/// Step 1: Hadamards on the leading main qubit of each block, then the
/// channel CNOTs. Result lives on the channel qubits only.
StateVector build_channel(const RegisterLayout& lay);

/// Appends the sending registers (A then B) to the channel by tensor product.
StateVector attach_inputs(const RegisterLayout& lay, const StateVector& channel,
                          const StateVector& phi_a, const StateVector& phi_b);

/// Step 2: CNOTs with sending qubits as control lines, control qubits as targets.
StateVector step2_entangle(const RegisterLayout& lay, const StateVector& state);

/// Result of measuring out one register (the measured qubits are removed).
struct MeasuredRegister {
    std::string outcomes;
    double probability = 0.0;
    StateVector state;
};

/// Step 3: Z-measure every control qubit, sampling outcomes.
MeasuredRegister step3_measure_controls(const RegisterLayout& lay, const StateVector& state,
                                        Rng& rng);
/// Step 3 with forced outcomes (deterministic branch selection).
MeasuredRegister step3_force_controls(const RegisterLayout& lay, const StateVector& state,
                                      const std::string& outcomes);

/// Step 4: X on every main qubit mirrored by a control whose outcome was 1.
std::pair<StateVector, CorrectionPlan> step4_x_corrections(const RegisterLayout& lay,
                                                           const StateVector& state,
                                                           const std::string& control_outcomes);

/// Step 5: X-measure every sending qubit.
MeasuredRegister step5_measure_sending(const RegisterLayout& lay, const StateVector& state,
                                       Rng& rng);
MeasuredRegister step5_force_sending(const RegisterLayout& lay, const StateVector& state,
                                     const std::string& outcomes);

/// Step 6: Z corrections from the X outcomes. A plain block applies Z to its
/// main qubit when its sending qubit read |->; an entangled block applies Z
/// to its FIRST main qubit when the block's |-> count is odd.
std::pair<StateVector, CorrectionPlan> step6_z_corrections(const RegisterLayout& lay,
                                                           const StateVector& state,
                                                           const std::string& sending_outcomes);

/// Steps 6-1/6-2: the supervisor X-measures its qubit; on |-> each masked
/// block gets a Z on its first main qubit.
struct CharlieRelease {
    int outcome = 0;
    double probability = 0.0;
    StateVector state;
    CorrectionPlan plan;
};
CharlieRelease charlie_release(const RegisterLayout& lay, const StateVector& state, Rng& rng);
CharlieRelease charlie_force(const RegisterLayout& lay, const StateVector& state, int outcome);

/// Step 7: split the main register into Bob's n-qubit and Alice's m-qubit
/// outputs. Requires the state to be a tensor product across that cut;
/// otherwise raises ProtocolError with the residual.
struct ExtractedStates {
    StateVector bob_received;
    StateVector alice_received;
};
ExtractedStates step7_extract(const RegisterLayout& lay, const StateVector& state);

/// Runs the whole pipeline with the config's seed and returns one sampled
/// branch. Entangled sides require GHZ-form inputs (ConfigError otherwise).
BranchReport run(const ProtocolConfig& cfg, const StateVector& phi_a, const StateVector& phi_b);

} // namespace bqt
