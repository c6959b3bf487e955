// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bqt/errors.hpp"

namespace bqt {

/// One protocol instance: Alice sends n qubits to Bob, Bob sends m to Alice.
struct ProtocolConfig {
    int n = 0;
    int m = 0;
    /// Alice's sending state is GHZ-form (a0|0..0> + a1|1..1>); needs n >= 2.
    bool alice_entangled = false;
    /// Bob's sending state is GHZ-form; needs m >= 2.
    bool bob_entangled = false;
    /// Add the supervisor qubit; releasing the outputs then takes its X-measurement.
    bool controlled = false;
    /// One '0'/'1' per control qubit in register order; bit i targets control i.
    std::string charlie_mask;
    std::uint64_t seed = 0;

    bool operator==(const ProtocolConfig&) const = default;
};

struct CnotPair {
    int control = 0;
    int target = 0;
    bool operator==(const CnotPair&) const = default;
};

/// One teleport unit: a destination block of main qubits, the sending qubits
/// feeding it, and the single control qubit serving the block. Non-entangled
/// sides split into one block per qubit; an entangled side is one block.
struct TeleportBlock {
    bool entangled = false;
    std::vector<int> main;
    std::vector<int> sending;
    int control = -1;
};

/// Global register layout and wiring plan. Fixed index order:
///   main_bob (b0..b_{n-1}) | main_alice (a0..a_{m-1}) | charlie (C, optional)
///   | control_a | control_b | sending_a (A0..) | sending_b (B0..)
struct RegisterLayout {
    ProtocolConfig cfg;
    int total_qubits = 0;
    int channel_qubits = 0; // main + charlie + control

    std::vector<int> main_bob;
    std::vector<int> main_alice;
    int charlie = -1; // -1 when not controlled
    std::vector<int> control_a;
    std::vector<int> control_b;
    std::vector<int> sending_a;
    std::vector<int> sending_b;

    /// Alice's block(s) first, then Bob's; block order equals control register order.
    std::vector<TeleportBlock> blocks;

    std::vector<int> hadamard_targets;
    std::vector<CnotPair> channel_cnots;
    std::vector<CnotPair> step2_cnots;

    /// controls[i] is the i-th control qubit; mirror_map[i] lists the main
    /// qubits it mirrors (one for a plain block, the whole block when entangled).
    std::vector<int> controls;
    std::vector<std::vector<int>> mirror_map;
    /// All sending qubits in register order (A block then B block).
    std::vector<int> sendings;

    int main_count() const { return cfg.n + cfg.m; }
    int num_controls() const { return static_cast<int>(controls.size()); }
    int num_sending() const { return static_cast<int>(sendings.size()); }
};

/// Throws ConfigError naming the violated clause.
void validate(const ProtocolConfig& cfg);

RegisterLayout build_layout(const ProtocolConfig& cfg);

/// "n2m1", "n2em1c01" style tag used in reports and filenames.
std::string config_tag(const ProtocolConfig& cfg);

} // namespace bqt
