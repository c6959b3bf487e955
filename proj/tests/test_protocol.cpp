// SPDX-License-Identifier: MIT
#include "bqt/protocol.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "reference.hpp"
#include "test_util.hpp"

using namespace bqt;
using ref::s2i;
using testutil::expect_state_eq_bitwise;
using testutil::expect_state_near;

namespace {

ProtocolConfig make_cfg(int n, int m, bool ea = false, bool eb = false, bool ctrl = false,
                        std::string mask = "", std::uint64_t seed = 0) {
    ProtocolConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.alice_entangled = ea;
    cfg.bob_entangled = eb;
    cfg.controlled = ctrl;
    cfg.charlie_mask = std::move(mask);
    cfg.seed = seed;
    return cfg;
}

StateVector example_phi_a() {
    return StateVector::from_amplitudes(2, ref::example_alpha());
}

StateVector example_phi_b() {
    return StateVector::from_amplitudes(1, ref::example_b());
}

/// Post-step-2 whole system for the worked two-by-one example.
StateVector example_system() {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    return step2_entangle(lay, attach_inputs(lay, build_channel(lay), example_phi_a(),
                                             example_phi_b()));
}

std::string bits(std::uint64_t v, int width) {
    std::string s(width, '0');
    for (int i = 0; i < width; ++i) {
        if ((v >> (width - 1 - i)) & 1u) s[i] = '1';
    }
    return s;
}

} // namespace

TEST(BuildChannel, PlainTwoByOneDiagonalEightTerms) {
    const StateVector ch = build_channel(build_layout(make_cfg(2, 1)));
    ASSERT_EQ(ch.num_qubits(), 6);
    const double amp = 1.0 / std::sqrt(8.0);
    // control register content mirrors the main register content, term by term
    for (std::uint64_t i = 0; i < 8; ++i) {
        EXPECT_NEAR(ch.amp((i << 3) | i).real(), amp, kAmpTol);
        EXPECT_NEAR(ch.amp((i << 3) | i).imag(), 0.0, kAmpTol);
    }
    expect_state_near(ch, ref::channel(make_cfg(2, 1)));
}

TEST(BuildChannel, EntangledAliceTwoByOne) {
    const StateVector ch = build_channel(build_layout(make_cfg(2, 1, true)));
    ASSERT_EQ(ch.num_qubits(), 5);
    // half-weight GHZ pairing: |000>|00>, |001>|01>, |110>|10>, |111>|11>
    std::vector<cx> expected(32, cx(0.0, 0.0));
    for (const char* term : {"00000", "00101", "11010", "11111"}) {
        expected[s2i(term)] = cx(0.5, 0.0);
    }
    expect_state_near(ch, StateVector::from_amplitudes(5, std::move(expected)));
    expect_state_near(ch, ref::channel(make_cfg(2, 1, true)));
}

TEST(BuildChannel, BothEntangledTwoByTwo) {
    const StateVector ch = build_channel(build_layout(make_cfg(2, 2, true, true)));
    ASSERT_EQ(ch.num_qubits(), 6);
    std::vector<cx> expected(64, cx(0.0, 0.0));
    for (const char* term : {"000000", "001101", "110010", "111111"}) {
        expected[s2i(term)] = cx(0.5, 0.0);
    }
    expect_state_near(ch, StateVector::from_amplitudes(6, std::move(expected)));
}

TEST(BuildChannel, MaskedChannelsMatchReferenceConstruction) {
    for (std::uint64_t mask_bits = 0; mask_bits < 8; ++mask_bits) {
        const ProtocolConfig cfg = make_cfg(2, 1, false, false, true, bits(mask_bits, 3));
        expect_state_near(build_channel(build_layout(cfg)), ref::channel(cfg));
    }
}

TEST(BuildChannel, MaskedChannelMirrorsSupervisorParity) {
    const StateVector ch = build_channel(build_layout(make_cfg(2, 1, false, false, true, "001")));
    ASSERT_EQ(ch.num_qubits(), 7);
    const double amp = 1.0 / std::sqrt(8.0);
    for (std::uint64_t w = 0; w < 8; ++w) {
        const std::uint64_t charlie = w & 1u; // mask 001 wires the third control
        const std::uint64_t idx = (w << 4) | (charlie << 3) | w;
        EXPECT_NEAR(ch.amp(idx).real(), amp, kAmpTol) << "w=" << w;
    }
}

TEST(BuildChannel, StructuralPropertiesOfPlainChannels) {
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}}) {
        const StateVector ch = build_channel(build_layout(make_cfg(n, m)));
        const int w = n + m;
        std::size_t nonzero = 0;
        for (std::uint64_t i = 0; i < ch.dim(); ++i) {
            if (std::abs(ch.amp(i)) < kAmpTol) continue;
            ++nonzero;
            // every surviving term has control bits equal to main bits
            EXPECT_EQ(i >> w, i & ((std::uint64_t{1} << w) - 1));
            EXPECT_NEAR(ch.amp(i).real(), 1.0 / std::sqrt(double(1 << w)), kAmpTol);
        }
        EXPECT_EQ(nonzero, std::uint64_t{1} << w);
    }
}

TEST(AttachInputs, ProducesNormalizedWholeSystem) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector sys =
        attach_inputs(lay, build_channel(lay), example_phi_a(), example_phi_b());
    EXPECT_EQ(sys.num_qubits(), 9);
    EXPECT_NEAR(sys.norm_sq(), 1.0, kAmpTol);
}

TEST(AttachInputs, ZeroInputsLeaveChannelTensorZeros) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector ch = build_channel(lay);
    const StateVector sys = attach_inputs(lay, ch, basis_state(2, 0), basis_state(1, 0));
    for (std::uint64_t i = 0; i < ch.dim(); ++i) {
        EXPECT_EQ(sys.amp(i << 3), ch.amp(i));
    }
}

TEST(AttachInputs, WidthMismatchRejected) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    EXPECT_THROW(attach_inputs(lay, build_channel(lay), basis_state(1, 0), basis_state(1, 0)),
                 ContractError);
}

TEST(Step2, ReproducesWholeSystemExpansion) {
    expect_state_near(example_system(),
                      ref::post_step2(2, 1, ref::example_alpha(), ref::example_b()));
}

TEST(Step2, AllZeroInputsFixTheControls) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector sys =
        attach_inputs(lay, build_channel(lay), basis_state(2, 0), basis_state(1, 0));
    expect_state_near(step2_entangle(lay, sys), sys);
}

TEST(Step2, SelfInverse) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector sys =
        attach_inputs(lay, build_channel(lay), example_phi_a(), example_phi_b());
    expect_state_near(step2_entangle(lay, step2_entangle(lay, sys)), sys);
}

TEST(Step3, ForcedBranchesMatchCollapsedRows) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector sys = example_system();
    for (std::uint64_t r = 0; r < 8; ++r) {
        const std::string rc = bits(r, 3);
        const MeasuredRegister ctl = step3_force_controls(lay, sys, rc);
        EXPECT_NEAR(ctl.probability, 0.125, kAmpTol) << "controls " << rc;
        expect_state_near(
            ctl.state, ref::collapsed_after_controls(2, 1, rc, ref::example_alpha(),
                                                     ref::example_b()));
    }
}

// Two collapsed rows typed out verbatim, guarding the rule-generated fixtures.
TEST(Step3, VerbatimRowSpotChecks) {
    const std::vector<cx> alpha = ref::example_alpha();
    const std::vector<cx> b = ref::example_b();
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector sys = example_system();

    struct Term {
        const char* main;
        const char* send;
        cx coeff;
    };
    const std::vector<std::pair<std::string, std::vector<Term>>> rows = {
        {"001",
         {{"001", "000", alpha[0] * b[0]},
          {"000", "001", alpha[0] * b[1]},
          {"011", "010", alpha[1] * b[0]},
          {"010", "011", alpha[1] * b[1]},
          {"101", "100", alpha[2] * b[0]},
          {"100", "101", alpha[2] * b[1]},
          {"111", "110", alpha[3] * b[0]},
          {"110", "111", alpha[3] * b[1]}}},
        {"101",
         {{"101", "000", alpha[0] * b[0]},
          {"100", "001", alpha[0] * b[1]},
          {"111", "010", alpha[1] * b[0]},
          {"110", "011", alpha[1] * b[1]},
          {"001", "100", alpha[2] * b[0]},
          {"000", "101", alpha[2] * b[1]},
          {"011", "110", alpha[3] * b[0]},
          {"010", "111", alpha[3] * b[1]}}},
    };
    for (const auto& [rc, terms] : rows) {
        std::vector<cx> expected(64, cx(0.0, 0.0));
        for (const Term& t : terms) {
            expected[(s2i(t.main) << 3) | s2i(t.send)] = t.coeff;
        }
        const MeasuredRegister ctl = step3_force_controls(lay, sys, rc);
        expect_state_near(ctl.state, StateVector::from_amplitudes(6, std::move(expected)));
    }
}

TEST(Step3, SampledBranchAgreesWithForcedBranch) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector sys = example_system();
    Rng rng(12345);
    const MeasuredRegister sampled = step3_measure_controls(lay, sys, rng);
    const MeasuredRegister forced = step3_force_controls(lay, sys, sampled.outcomes);
    EXPECT_NEAR(sampled.probability, forced.probability, kAmpTol);
    expect_state_near(sampled.state, forced.state);
}

TEST(Step4, PlansMatchOutcomePositions) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector sys = example_system();
    for (std::uint64_t r = 0; r < 8; ++r) {
        const std::string rc = bits(r, 3);
        const MeasuredRegister ctl = step3_force_controls(lay, sys, rc);
        const auto [state, plan] = step4_x_corrections(lay, ctl.state, rc);
        std::vector<int> expected;
        for (int i = 0; i < 3; ++i) {
            if (rc[i] == '1') expected.push_back(i);
        }
        EXPECT_EQ(plan.x_targets, expected) << "controls " << rc;
        EXPECT_TRUE(plan.z_targets.empty());
        // every branch lands on the same canonical state
        expect_state_near(state, ref::collapsed_after_controls(2, 1, "000", ref::example_alpha(),
                                                               ref::example_b()));
    }
}

TEST(Step5, ForcedBranchesMatchSignRows) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector sys = example_system();
    const MeasuredRegister ctl = step3_force_controls(lay, sys, "010");
    const auto [state4, plan4] = step4_x_corrections(lay, ctl.state, "010");
    for (std::uint64_t t = 0; t < 8; ++t) {
        const std::string ts = bits(t, 3);
        const MeasuredRegister snd = step5_force_sending(lay, state4, ts);
        EXPECT_NEAR(snd.probability, 0.125, kAmpTol) << "sendings " << ts;
        expect_state_near(snd.state, ref::main_after_sending(2, 1, ts, ref::example_alpha(),
                                                             ref::example_b()));
    }
}

// Sign-pattern rows typed out verbatim: (-+,-) flips terms with x0 xor y odd,
// (+-,+) flips terms where x1 = 1.
TEST(Step5, VerbatimSignRowSpotChecks) {
    const std::vector<cx> alpha = ref::example_alpha();
    const std::vector<cx> b = ref::example_b();
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector sys = example_system();
    const MeasuredRegister ctl = step3_force_controls(lay, sys, "000");
    const auto [state4, plan4] = step4_x_corrections(lay, ctl.state, "000");

    {
        // outcomes (-+, -) -> "101"
        const MeasuredRegister snd = step5_force_sending(lay, state4, "101");
        std::vector<cx> expected{alpha[0] * b[0], -alpha[0] * b[1], alpha[1] * b[0],
                                 -alpha[1] * b[1], -alpha[2] * b[0], alpha[2] * b[1],
                                 -alpha[3] * b[0], alpha[3] * b[1]};
        expect_state_near(snd.state, StateVector::from_amplitudes(3, std::move(expected)));
    }
    {
        // outcomes (+-, +) -> "010"
        const MeasuredRegister snd = step5_force_sending(lay, state4, "010");
        std::vector<cx> expected{alpha[0] * b[0], alpha[0] * b[1], -alpha[1] * b[0],
                                 -alpha[1] * b[1], alpha[2] * b[0], alpha[2] * b[1],
                                 -alpha[3] * b[0], -alpha[3] * b[1]};
        expect_state_near(snd.state, StateVector::from_amplitudes(3, std::move(expected)));
    }
}

TEST(Step6, PlansMatchMinusPositionsAndRestoreCanonicalState) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector sys = example_system();
    const MeasuredRegister ctl = step3_force_controls(lay, sys, "110");
    const auto [state4, plan4] = step4_x_corrections(lay, ctl.state, "110");
    for (std::uint64_t t = 0; t < 8; ++t) {
        const std::string ts = bits(t, 3);
        const MeasuredRegister snd = step5_force_sending(lay, state4, ts);
        const auto [state6, plan] = step6_z_corrections(lay, snd.state, ts);
        std::vector<int> expected;
        for (int i = 0; i < 3; ++i) {
            if (ts[i] == '1') expected.push_back(i);
        }
        EXPECT_EQ(plan.z_targets, expected) << "sendings " << ts;
        EXPECT_TRUE(plan.x_targets.empty());
        expect_state_near(state6,
                          ref::canonical_main(2, 1, ref::example_alpha(), ref::example_b()));
    }
}

TEST(Step6, EntangledBlockUsesMinusParityOnFirstMainQubit) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1, true));
    // outcomes over (A0, A1, B0); the entangled block covers A0, A1
    const auto plan_for = [&lay](const std::string& outcomes) {
        const StateVector any = basis_state(3, 0);
        return step6_z_corrections(lay, any, outcomes).second;
    };
    EXPECT_EQ(plan_for("100").z_targets, (std::vector<int>{0})); // odd block parity -> b0
    EXPECT_EQ(plan_for("010").z_targets, (std::vector<int>{0}));
    EXPECT_EQ(plan_for("110").z_targets, (std::vector<int>{})); // even parity cancels
    EXPECT_EQ(plan_for("001").z_targets, (std::vector<int>{2})); // plain side -> a0
    EXPECT_EQ(plan_for("111").z_targets, (std::vector<int>{2})); // block parity even again
    EXPECT_EQ(plan_for("101").z_targets, (std::vector<int>{0, 2}));
}

TEST(CharlieRelease, MaskSelectsZTargetsOnMinus) {
    for (const auto& [mask, targets] :
         std::vector<std::pair<std::string, std::vector<int>>>{
             {"000", {}}, {"001", {2}}, {"010", {1}}, {"011", {1, 2}},
             {"100", {0}}, {"101", {0, 2}}, {"110", {0, 1}}, {"111", {0, 1, 2}}}) {
        const ProtocolConfig cfg = make_cfg(2, 1, false, false, true, mask);
        const RegisterLayout lay = build_layout(cfg);
        const StateVector sys =
            step2_entangle(lay, attach_inputs(lay, build_channel(lay), example_phi_a(),
                                              example_phi_b()));
        const MeasuredRegister ctl = step3_force_controls(lay, sys, "000");
        const auto [state4, xplan] = step4_x_corrections(lay, ctl.state, "000");
        const MeasuredRegister snd = step5_force_sending(lay, state4, "000");
        const auto [state6, zplan] = step6_z_corrections(lay, snd.state, "000");

        const CharlieRelease plus = charlie_force(lay, state6, 0);
        EXPECT_NEAR(plus.probability, 0.5, kAmpTol) << "mask " << mask;
        EXPECT_TRUE(plus.plan.z_targets.empty()) << "mask " << mask;

        const CharlieRelease minus = charlie_force(lay, state6, 1);
        EXPECT_NEAR(minus.probability, 0.5, kAmpTol) << "mask " << mask;
        EXPECT_EQ(minus.plan.z_targets, targets) << "mask " << mask;

        // both released states carry the canonical main state (times Charlie removal)
        for (const CharlieRelease* rel : {&plus, &minus}) {
            const ExtractedStates out = step7_extract(lay, rel->state);
            EXPECT_GT(fidelity(out.bob_received, example_phi_a()), 1.0 - kFidelityTol);
            EXPECT_GT(fidelity(out.alice_received, example_phi_b()), 1.0 - kFidelityTol);
        }
    }
}

TEST(Step7, CanonicalBranchReturnsTheInputsExactly) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const StateVector canonical =
        ref::canonical_main(2, 1, ref::example_alpha(), ref::example_b());
    const ExtractedStates out = step7_extract(lay, canonical);
    EXPECT_GT(fidelity(out.bob_received, example_phi_a()), 1.0 - kFidelityTol);
    EXPECT_GT(fidelity(out.alice_received, example_phi_b()), 1.0 - kFidelityTol);
}

TEST(Step7, IdentityInputs) {
    const RegisterLayout lay = build_layout(make_cfg(2, 1));
    const ExtractedStates out = step7_extract(lay, basis_state(3, 0));
    expect_state_near(out.bob_received, basis_state(2, 0));
    expect_state_near(out.alice_received, basis_state(1, 0));
}

TEST(Step7, RejectsEntangledResidual) {
    const RegisterLayout lay = build_layout(make_cfg(1, 1));
    // Bell pair across the cut
    const StateVector bell = apply_cnot(apply_h(basis_state(2, 0), 0), 0, 1);
    EXPECT_THROW(step7_extract(lay, bell), ProtocolError);
}

TEST(Run, PerfectFidelityOnRandomInputs) {
    for (std::uint64_t seed : {1ull, 7ull, 99ull}) {
        const ProtocolConfig cfg = make_cfg(2, 1, false, false, false, "", seed);
        const BranchReport report = run(cfg, random_state(2, seed + 10), random_state(1, seed + 20));
        EXPECT_GT(report.fidelity_bob, 1.0 - kFidelityTol);
        EXPECT_GT(report.fidelity_alice, 1.0 - kFidelityTol);
        EXPECT_NEAR(report.probability, 1.0 / 64.0, kAmpTol);
        EXPECT_EQ(report.bob_received.num_qubits(), 2);
        EXPECT_EQ(report.alice_received.num_qubits(), 1);
    }
}

TEST(Run, EntangledControlledInstance) {
    const ProtocolConfig cfg = make_cfg(2, 1, true, false, true, "01", 5);
    const BranchReport report = run(cfg, random_ghz_state(2, 31), random_state(1, 32));
    EXPECT_GT(report.fidelity_bob, 1.0 - kFidelityTol);
    EXPECT_GT(report.fidelity_alice, 1.0 - kFidelityTol);
    ASSERT_TRUE(report.charlie_outcome.has_value());
    EXPECT_NEAR(report.probability, 1.0 / 64.0, kAmpTol);
}

TEST(Run, UnidirectionalDegenerateCase) {
    const ProtocolConfig cfg = make_cfg(1, 0, false, false, false, "", 3);
    const StateVector plus = apply_h(basis_state(1, 0), 0);
    const BranchReport report = run(cfg, plus, StateVector());
    EXPECT_GT(report.fidelity_bob, 1.0 - kFidelityTol);
    EXPECT_GT(report.fidelity_alice, 1.0 - kFidelityTol);
    EXPECT_GT(fidelity(report.bob_received, plus), 1.0 - kFidelityTol);
}

TEST(Run, SeedDeterminism) {
    const ProtocolConfig cfg = make_cfg(2, 2, false, false, false, "", 77);
    const StateVector phi_a = random_state(2, 1);
    const StateVector phi_b = random_state(2, 2);
    const BranchReport r1 = run(cfg, phi_a, phi_b);
    const BranchReport r2 = run(cfg, phi_a, phi_b);
    EXPECT_EQ(r1.control_outcomes, r2.control_outcomes);
    EXPECT_EQ(r1.sending_outcomes, r2.sending_outcomes);
    EXPECT_EQ(r1.probability, r2.probability);
    EXPECT_EQ(r1.corrections, r2.corrections);
    expect_state_eq_bitwise(r1.bob_received, r2.bob_received);
    expect_state_eq_bitwise(r1.alice_received, r2.alice_received);
    EXPECT_EQ(r1.fidelity_bob, r2.fidelity_bob);
    EXPECT_EQ(r1.fidelity_alice, r2.fidelity_alice);
}

TEST(Run, SampledBranchReplaysThroughForcedSteps) {
    const ProtocolConfig cfg = make_cfg(2, 1, false, false, true, "011", 2024);
    const StateVector phi_a = random_state(2, 8);
    const StateVector phi_b = random_state(1, 9);
    const BranchReport report = run(cfg, phi_a, phi_b);

    const RegisterLayout lay = build_layout(cfg);
    const StateVector sys =
        step2_entangle(lay, attach_inputs(lay, build_channel(lay), phi_a, phi_b));
    const MeasuredRegister ctl = step3_force_controls(lay, sys, report.control_outcomes);
    const auto [s4, xplan] = step4_x_corrections(lay, ctl.state, report.control_outcomes);
    const MeasuredRegister snd = step5_force_sending(lay, s4, report.sending_outcomes);
    const auto [s6, zplan] = step6_z_corrections(lay, snd.state, report.sending_outcomes);
    const CharlieRelease rel = charlie_force(lay, s6, *report.charlie_outcome);

    EXPECT_NEAR(report.probability, ctl.probability * snd.probability * rel.probability, kAmpTol);
    const ExtractedStates out = step7_extract(lay, rel.state);
    expect_state_near(report.bob_received, out.bob_received);
    expect_state_near(report.alice_received, out.alice_received);
    EXPECT_EQ(report.corrections.x_targets, xplan.x_targets);
    std::vector<int> expected_z = zplan.z_targets;
    expected_z.insert(expected_z.end(), rel.plan.z_targets.begin(), rel.plan.z_targets.end());
    EXPECT_EQ(report.corrections.z_targets, expected_z);
}

TEST(Run, CorrectionsArePauliOnlyByConstruction) {
    // x targets stem from the control round, z targets from the sending and
    // supervisor rounds; both live on main qubits.
    const ProtocolConfig cfg = make_cfg(2, 2, false, false, false, "", 4);
    const BranchReport report = run(cfg, random_state(2, 5), random_state(2, 6));
    for (int q : report.corrections.x_targets) {
        EXPECT_GE(q, 0);
        EXPECT_LT(q, 4);
    }
    for (int q : report.corrections.z_targets) {
        EXPECT_GE(q, 0);
        EXPECT_LT(q, 4);
    }
}

TEST(Run, EntangledSideRequiresGhzInput) {
    const ProtocolConfig cfg = make_cfg(2, 1, true, false, false, "", 1);
    EXPECT_THROW(run(cfg, random_state(2, 3), random_state(1, 4)), ConfigError);
    EXPECT_NO_THROW(run(cfg, random_ghz_state(2, 3), random_state(1, 4)));
}

TEST(Run, GhzInputsTeleportBothWays) {
    const ProtocolConfig cfg = make_cfg(2, 2, true, true, false, "", 9);
    const StateVector phi_a = random_ghz_state(2, 21);
    const StateVector phi_b = random_ghz_state(2, 22);
    const BranchReport report = run(cfg, phi_a, phi_b);
    EXPECT_GT(report.fidelity_bob, 1.0 - kFidelityTol);
    EXPECT_GT(report.fidelity_alice, 1.0 - kFidelityTol);
}
