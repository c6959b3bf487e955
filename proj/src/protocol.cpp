// SPDX-License-Identifier: MIT
#include "bqt/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bqt {

namespace {

void check_register(const RegisterLayout& lay, const StateVector& state, int expected,
                    const char* step) {
    if (state.num_qubits() != expected) {
        throw ContractError(std::string(step) + ": expected a " + std::to_string(expected) +
                            "-qubit register for " + config_tag(lay.cfg) + ", got " +
                            std::to_string(state.num_qubits()));
    }
}

void check_outcomes(const std::string& outcomes, std::size_t expected, const char* step) {
    if (outcomes.size() != expected) {
        throw ContractError(std::string(step) + ": expected " + std::to_string(expected) +
                            " outcome bits, got " + std::to_string(outcomes.size()));
    }
    for (char c : outcomes) {
        if (c != '0' && c != '1') {
            throw ContractError(std::string(step) + ": outcomes must be '0'/'1'");
        }
    }
}

// Measures `count` qubits starting at a fixed register position `base`.
// Each measurement removes its qubit, so the next one slides into `base`.
MeasuredRegister measure_run(StateVector state, int base, int count, Basis basis, Rng* rng,
                             const std::string* forced) {
    MeasuredRegister out;
    out.probability = 1.0;
    for (int i = 0; i < count; ++i) {
        if (forced) {
            const int outcome = (*forced)[i] - '0';
            ProjectResult branch = project(state, base, basis, outcome);
            out.probability *= branch.probability;
            out.outcomes.push_back(static_cast<char>('0' + outcome));
            if (branch.probability == 0.0) {
                // Empty branch: report it with a zero state of the final size.
                out.probability = 0.0;
                out.outcomes.append(forced->substr(i + 1));
                const int left = state.num_qubits() - count;
                out.state = StateVector::from_amplitudes(
                    left, std::vector<cx>(std::uint64_t{1} << left, cx(0.0, 0.0)));
                return out;
            }
            state = std::move(branch.state);
        } else {
            auto [record, next] = measure(state, base, basis, rng->uniform());
            out.probability *= record.probability;
            out.outcomes.push_back(static_cast<char>('0' + record.outcome));
            state = std::move(next);
        }
    }
    out.state = std::move(state);
    return out;
}

void merge_plan(CorrectionPlan& into, const CorrectionPlan& part) {
    into.x_targets.insert(into.x_targets.end(), part.x_targets.begin(), part.x_targets.end());
    into.z_targets.insert(into.z_targets.end(), part.z_targets.begin(), part.z_targets.end());
}

} // namespace

StateVector build_channel(const RegisterLayout& lay) {
    StateVector state = basis_state(lay.channel_qubits, 0);
    for (int q : lay.hadamard_targets) state = apply_h(state, q);
    for (const CnotPair& g : lay.channel_cnots) state = apply_cnot(state, g.control, g.target);
    return state;
}

StateVector attach_inputs(const RegisterLayout& lay, const StateVector& channel,
                          const StateVector& phi_a, const StateVector& phi_b) {
    check_register(lay, channel, lay.channel_qubits, "attach_inputs(channel)");
    if (phi_a.num_qubits() != lay.cfg.n) {
        throw ContractError("attach_inputs: phi_a has " + std::to_string(phi_a.num_qubits()) +
                            " qubits, config says n = " + std::to_string(lay.cfg.n));
    }
    if (phi_b.num_qubits() != lay.cfg.m) {
        throw ContractError("attach_inputs: phi_b has " + std::to_string(phi_b.num_qubits()) +
                            " qubits, config says m = " + std::to_string(lay.cfg.m));
    }
    return tensor(tensor(channel, phi_a), phi_b);
}

StateVector step2_entangle(const RegisterLayout& lay, const StateVector& state) {
    check_register(lay, state, lay.total_qubits, "step2_entangle");
    StateVector out = state;
    for (const CnotPair& g : lay.step2_cnots) out = apply_cnot(out, g.control, g.target);
    return out;
}

MeasuredRegister step3_measure_controls(const RegisterLayout& lay, const StateVector& state,
                                        Rng& rng) {
    check_register(lay, state, lay.total_qubits, "step3");
    const int base = lay.main_count() + (lay.cfg.controlled ? 1 : 0);
    return measure_run(state, base, lay.num_controls(), Basis::Z, &rng, nullptr);
}

MeasuredRegister step3_force_controls(const RegisterLayout& lay, const StateVector& state,
                                      const std::string& outcomes) {
    check_register(lay, state, lay.total_qubits, "step3");
    check_outcomes(outcomes, lay.controls.size(), "step3");
    const int base = lay.main_count() + (lay.cfg.controlled ? 1 : 0);
    return measure_run(state, base, lay.num_controls(), Basis::Z, nullptr, &outcomes);
}

std::pair<StateVector, CorrectionPlan> step4_x_corrections(const RegisterLayout& lay,
                                                           const StateVector& state,
                                                           const std::string& control_outcomes) {
    check_register(lay, state, lay.total_qubits - lay.num_controls(), "step4");
    check_outcomes(control_outcomes, lay.controls.size(), "step4");
    CorrectionPlan plan;
    for (std::size_t i = 0; i < lay.mirror_map.size(); ++i) {
        if (control_outcomes[i] == '1') {
            for (int q : lay.mirror_map[i]) plan.x_targets.push_back(q);
        }
    }
    std::sort(plan.x_targets.begin(), plan.x_targets.end());
    StateVector out = state;
    for (int q : plan.x_targets) out = apply_x(out, q);
    return {std::move(out), std::move(plan)};
}

MeasuredRegister step5_measure_sending(const RegisterLayout& lay, const StateVector& state,
                                       Rng& rng) {
    const int base = lay.main_count() + (lay.cfg.controlled ? 1 : 0);
    check_register(lay, state, base + lay.num_sending(), "step5");
    return measure_run(state, base, lay.num_sending(), Basis::X, &rng, nullptr);
}

MeasuredRegister step5_force_sending(const RegisterLayout& lay, const StateVector& state,
                                     const std::string& outcomes) {
    const int base = lay.main_count() + (lay.cfg.controlled ? 1 : 0);
    check_register(lay, state, base + lay.num_sending(), "step5");
    check_outcomes(outcomes, lay.sendings.size(), "step5");
    return measure_run(state, base, lay.num_sending(), Basis::X, nullptr, &outcomes);
}

std::pair<StateVector, CorrectionPlan> step6_z_corrections(const RegisterLayout& lay,
                                                           const StateVector& state,
                                                           const std::string& sending_outcomes) {
    check_register(lay, state, lay.main_count() + (lay.cfg.controlled ? 1 : 0), "step6");
    check_outcomes(sending_outcomes, lay.sendings.size(), "step6");
    CorrectionPlan plan;
    std::size_t pos = 0;
    for (const TeleportBlock& blk : lay.blocks) {
        int minus_count = 0;
        for (std::size_t j = 0; j < blk.sending.size(); ++j) {
            if (sending_outcomes[pos + j] == '1') ++minus_count;
        }
        pos += blk.sending.size();
        if (minus_count % 2 == 1) plan.z_targets.push_back(blk.main[0]);
    }
    std::sort(plan.z_targets.begin(), plan.z_targets.end());
    StateVector out = state;
    for (int q : plan.z_targets) out = apply_z(out, q);
    return {std::move(out), std::move(plan)};
}

namespace {

CharlieRelease charlie_apply(const RegisterLayout& lay, StateVector state, int outcome,
                             double probability) {
    CharlieRelease rel;
    rel.outcome = outcome;
    rel.probability = probability;
    if (outcome == 1) {
        for (std::size_t i = 0; i < lay.cfg.charlie_mask.size(); ++i) {
            if (lay.cfg.charlie_mask[i] == '1') {
                rel.plan.z_targets.push_back(lay.mirror_map[i][0]);
            }
        }
        std::sort(rel.plan.z_targets.begin(), rel.plan.z_targets.end());
        for (int q : rel.plan.z_targets) state = apply_z(state, q);
    }
    rel.state = std::move(state);
    return rel;
}

} // namespace

CharlieRelease charlie_release(const RegisterLayout& lay, const StateVector& state, Rng& rng) {
    if (!lay.cfg.controlled) throw ContractError("charlie_release: config is not controlled");
    check_register(lay, state, lay.main_count() + 1, "charlie_release");
    auto [record, next] = measure(state, lay.charlie, Basis::X, rng.uniform());
    return charlie_apply(lay, std::move(next), record.outcome, record.probability);
}

CharlieRelease charlie_force(const RegisterLayout& lay, const StateVector& state, int outcome) {
    if (!lay.cfg.controlled) throw ContractError("charlie_release: config is not controlled");
    check_register(lay, state, lay.main_count() + 1, "charlie_release");
    ProjectResult branch = project(state, lay.charlie, Basis::X, outcome);
    return charlie_apply(lay, std::move(branch.state), outcome, branch.probability);
}

ExtractedStates step7_extract(const RegisterLayout& lay, const StateVector& state) {
    check_register(lay, state, lay.main_count(), "step7_extract");
    const int n = lay.cfg.n;
    const int m = lay.cfg.m;
    const std::uint64_t rows = std::uint64_t{1} << n;
    const std::uint64_t cols = std::uint64_t{1} << m;

    // Rank-1 factorization across the Bob|Alice cut: take the column through
    // the largest amplitude as Bob's vector, divide it out for Alice's, then
    // verify the product reproduces every amplitude.
    std::uint64_t bi = 0, bj = 0;
    double best = -1.0;
    for (std::uint64_t i = 0; i < rows; ++i) {
        for (std::uint64_t j = 0; j < cols; ++j) {
            const double a = std::abs(state.amp(i * cols + j));
            if (a > best) {
                best = a;
                bi = i;
                bj = j;
            }
        }
    }

    if (best <= 0.0) {
        throw ProtocolError("step7_extract: zero main-register state");
    }

    std::vector<cx> bob(rows);
    double bob_norm_sq = 0.0;
    for (std::uint64_t i = 0; i < rows; ++i) {
        bob[i] = state.amp(i * cols + bj);
        bob_norm_sq += std::norm(bob[i]);
    }
    const double bob_norm = std::sqrt(bob_norm_sq);
    for (cx& v : bob) v /= bob_norm;

    std::vector<cx> alice(cols);
    for (std::uint64_t j = 0; j < cols; ++j) {
        alice[j] = state.amp(bi * cols + j) / bob[bi];
    }

    double residual = 0.0;
    for (std::uint64_t i = 0; i < rows; ++i) {
        for (std::uint64_t j = 0; j < cols; ++j) {
            residual = std::max(residual, std::abs(bob[i] * alice[j] - state.amp(i * cols + j)));
        }
    }
    if (residual > kNormTol) {
        std::ostringstream msg;
        msg << "step7_extract: main register is not a tensor product across the Bob|Alice cut "
            << "(max residual " << residual << ")";
        throw ProtocolError(msg.str());
    }

    return {StateVector::from_amplitudes(n, std::move(bob)),
            StateVector::from_amplitudes(m, std::move(alice))};
}

namespace {

bool ghz_form(const StateVector& s) {
    for (std::uint64_t i = 1; i + 1 < s.dim(); ++i) {
        if (std::abs(s.amp(i)) > kAmpTol) return false;
    }
    return true;
}

} // namespace

BranchReport run(const ProtocolConfig& cfg, const StateVector& phi_a, const StateVector& phi_b) {
    const RegisterLayout lay = build_layout(cfg);
    if (cfg.alice_entangled && !ghz_form(phi_a)) {
        throw ConfigError("alice_entangled requires a GHZ-form sending state "
                          "(support on |0...0> and |1...1> only)");
    }
    if (cfg.bob_entangled && !ghz_form(phi_b)) {
        throw ConfigError("bob_entangled requires a GHZ-form sending state "
                          "(support on |0...0> and |1...1> only)");
    }

    Rng rng(cfg.seed);
    BranchReport report;
    try {
        StateVector state = step2_entangle(lay, attach_inputs(lay, build_channel(lay), phi_a, phi_b));

        MeasuredRegister controls = step3_measure_controls(lay, state, rng);
        report.control_outcomes = controls.outcomes;
        report.probability = controls.probability;

        auto [after_x, x_plan] = step4_x_corrections(lay, controls.state, controls.outcomes);
        merge_plan(report.corrections, x_plan);

        MeasuredRegister sendings = step5_measure_sending(lay, after_x, rng);
        report.sending_outcomes = sendings.outcomes;
        report.probability *= sendings.probability;

        auto [after_z, z_plan] = step6_z_corrections(lay, sendings.state, sendings.outcomes);
        merge_plan(report.corrections, z_plan);

        StateVector main = std::move(after_z);
        if (cfg.controlled) {
            CharlieRelease rel = charlie_release(lay, main, rng);
            report.charlie_outcome = rel.outcome;
            report.probability *= rel.probability;
            merge_plan(report.corrections, rel.plan);
            main = std::move(rel.state);
        }

        ExtractedStates out = step7_extract(lay, main);
        report.bob_received = std::move(out.bob_received);
        report.alice_received = std::move(out.alice_received);
        report.fidelity_bob = fidelity(report.bob_received, phi_a);
        report.fidelity_alice = fidelity(report.alice_received, phi_b);
    } catch (const ProtocolError& e) {
        std::ostringstream msg;
        msg << "protocol failure for " << config_tag(cfg) << " [controls="
            << report.control_outcomes << " sendings=" << report.sending_outcomes;
        if (report.charlie_outcome) msg << " charlie=" << *report.charlie_outcome;
        msg << "]: " << e.what();
        throw ProtocolError(msg.str());
    }
    return report;
}

} // namespace bqt
