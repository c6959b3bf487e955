// SPDX-License-Identifier: MIT
#include "bqt/layout.hpp"

#include <algorithm>

#include "bqt/statevec.hpp"

namespace bqt {

namespace {

int control_count(const ProtocolConfig& cfg) {
    return (cfg.alice_entangled ? 1 : cfg.n) + (cfg.bob_entangled ? 1 : cfg.m);
}

} // namespace

void validate(const ProtocolConfig& cfg) {
    if (cfg.n < 0) throw ConfigError("n must be >= 0");
    if (cfg.m < 0) throw ConfigError("m must be >= 0");
    if (cfg.n + cfg.m < 1) throw ConfigError("n + m must be at least 1");
    if (cfg.alice_entangled && cfg.n < 2) {
        throw ConfigError("alice_entangled requires n >= 2 (a 1-qubit entangled block is meaningless)");
    }
    if (cfg.bob_entangled && cfg.m < 2) {
        throw ConfigError("bob_entangled requires m >= 2 (a 1-qubit entangled block is meaningless)");
    }
    if (!cfg.controlled && !cfg.charlie_mask.empty()) {
        throw ConfigError("charlie_mask is only meaningful with controlled");
    }
    if (cfg.controlled) {
        const int nc = control_count(cfg);
        if (static_cast<int>(cfg.charlie_mask.size()) != nc) {
            throw ConfigError("charlie_mask must have one bit per control qubit (expected " +
                              std::to_string(nc) + ", got " +
                              std::to_string(cfg.charlie_mask.size()) + ")");
        }
        for (char c : cfg.charlie_mask) {
            if (c != '0' && c != '1') {
                throw ConfigError("charlie_mask may contain only '0' and '1'");
            }
        }
    }
    // main + sending + controls + charlie
    const int total =
        2 * (cfg.n + cfg.m) + control_count(cfg) + (cfg.controlled ? 1 : 0);
    if (total > kMaxQubits) {
        throw ConfigError("configuration needs " + std::to_string(total) +
                          " qubits; the simulator supports at most " + std::to_string(kMaxQubits));
    }
}

RegisterLayout build_layout(const ProtocolConfig& cfg) {
    validate(cfg);

    RegisterLayout lay;
    lay.cfg = cfg;

    int next = 0;
    for (int i = 0; i < cfg.n; ++i) lay.main_bob.push_back(next++);
    for (int i = 0; i < cfg.m; ++i) lay.main_alice.push_back(next++);
    if (cfg.controlled) lay.charlie = next++;
    const int nc_a = cfg.alice_entangled ? 1 : cfg.n;
    const int nc_b = cfg.bob_entangled ? 1 : cfg.m;
    for (int i = 0; i < nc_a; ++i) lay.control_a.push_back(next++);
    for (int i = 0; i < nc_b; ++i) lay.control_b.push_back(next++);
    lay.channel_qubits = next;
    for (int i = 0; i < cfg.n; ++i) lay.sending_a.push_back(next++);
    for (int i = 0; i < cfg.m; ++i) lay.sending_b.push_back(next++);
    lay.total_qubits = next;

    auto add_side = [&lay](bool entangled, const std::vector<int>& main,
                           const std::vector<int>& sending, const std::vector<int>& ctl) {
        if (entangled) {
            lay.blocks.push_back(TeleportBlock{true, main, sending, ctl[0]});
        } else {
            for (std::size_t i = 0; i < main.size(); ++i) {
                lay.blocks.push_back(TeleportBlock{false, {main[i]}, {sending[i]}, ctl[i]});
            }
        }
    };
    add_side(cfg.alice_entangled, lay.main_bob, lay.sending_a, lay.control_a);
    add_side(cfg.bob_entangled, lay.main_alice, lay.sending_b, lay.control_b);

    for (const TeleportBlock& blk : lay.blocks) {
        lay.hadamard_targets.push_back(blk.main[0]);
        for (std::size_t j = 1; j < blk.main.size(); ++j) {
            lay.channel_cnots.push_back({blk.main[0], blk.main[j]});
        }
        lay.channel_cnots.push_back({blk.main[0], blk.control});
        lay.step2_cnots.push_back({blk.sending[0], blk.control});
        lay.controls.push_back(blk.control);
        lay.mirror_map.push_back(blk.main);
    }
    if (cfg.controlled) {
        for (std::size_t i = 0; i < cfg.charlie_mask.size(); ++i) {
            if (cfg.charlie_mask[i] == '1') {
                lay.channel_cnots.push_back({lay.controls[i], lay.charlie});
            }
        }
    }

    lay.sendings = lay.sending_a;
    lay.sendings.insert(lay.sendings.end(), lay.sending_b.begin(), lay.sending_b.end());
    return lay;
}

std::string config_tag(const ProtocolConfig& cfg) {
    std::string tag = "n" + std::to_string(cfg.n) + (cfg.alice_entangled ? "e" : "") + "m" +
                      std::to_string(cfg.m) + (cfg.bob_entangled ? "e" : "");
    if (cfg.controlled) tag += "c" + cfg.charlie_mask;
    return tag;
}

} // namespace bqt
