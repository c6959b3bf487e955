// SPDX-License-Identifier: MIT
#include "bqt/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "bqt/layout.hpp"
#include "bqt/oracle.hpp"
#include "bqt/protocol.hpp"
#include "bqt/qsv.hpp"
#include "bqt/report.hpp"

namespace bqt {

namespace {

struct CommonFlags {
    ProtocolConfig cfg;
    std::string out_path;
};

void add_config_flags(CLI::App& cmd, CommonFlags& flags) {
    cmd.add_option("--n", flags.cfg.n, "Alice's sending-qubit count")->required();
    cmd.add_option("--m", flags.cfg.m, "Bob's sending-qubit count")->required();
    cmd.add_flag("--entangled-a", flags.cfg.alice_entangled,
                 "Alice sends a GHZ-form entangled block");
    cmd.add_flag("--entangled-b", flags.cfg.bob_entangled, "Bob sends a GHZ-form entangled block");
    cmd.add_flag("--controlled", flags.cfg.controlled, "add the supervisor (Charlie) qubit");
    cmd.add_option("--charlie-mask", flags.cfg.charlie_mask,
                   "bitstring, one bit per control qubit; set bits wire that control to Charlie");
    cmd.add_option("--seed", flags.cfg.seed, "RNG seed (default 0)");
}

/// Builds the whole document first so a failure never leaves a partial file.
void write_output(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("cannot open " + out_path + " for writing");
    file << text;
    if (!file.good()) throw ConfigError("write failed for " + out_path);
}

StateVector make_input(int qubits, bool entangled, std::uint64_t seed) {
    if (qubits == 0) return StateVector();
    return entangled ? random_ghz_state(qubits, seed) : random_state(qubits, seed);
}

int cmd_run(const CommonFlags& flags, bool random_inputs, const std::string& phi_a_path,
            const std::string& phi_b_path, std::ostream& out, std::ostream& err) {
    validate(flags.cfg);
    if (random_inputs == (!phi_a_path.empty() || !phi_b_path.empty())) {
        throw ConfigError("specify inputs exactly one way: --random-inputs or --phi-a/--phi-b");
    }
    StateVector phi_a, phi_b;
    if (random_inputs) {
        phi_a = make_input(flags.cfg.n, flags.cfg.alice_entangled,
                           Rng::derive_seed(flags.cfg.seed, 0));
        phi_b = make_input(flags.cfg.m, flags.cfg.bob_entangled,
                           Rng::derive_seed(flags.cfg.seed, 1));
    } else {
        if (phi_a_path.empty() || phi_b_path.empty()) {
            throw ConfigError("--phi-a and --phi-b must be given together");
        }
        phi_a = load_qsv(phi_a_path);
        phi_b = load_qsv(phi_b_path);
        if (phi_a.num_qubits() != flags.cfg.n) {
            throw ConfigError("--phi-a has " + std::to_string(phi_a.num_qubits()) +
                              " qubits but --n is " + std::to_string(flags.cfg.n));
        }
        if (phi_b.num_qubits() != flags.cfg.m) {
            throw ConfigError("--phi-b has " + std::to_string(phi_b.num_qubits()) +
                              " qubits but --m is " + std::to_string(flags.cfg.m));
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    report.cfg = flags.cfg;
    report.phi_a = phi_a;
    report.phi_b = phi_b;
    report.branch = run(flags.cfg, phi_a, phi_b);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_output(serialize(report), flags.out_path, out);
    err << "run " << config_tag(flags.cfg) << ": fidelity_bob=" << report.branch.fidelity_bob
        << " fidelity_alice=" << report.branch.fidelity_alice << " (" << elapsed << " s)\n";

    const bool ok = report.branch.fidelity_bob >= 1.0 - kFidelityTol &&
                    report.branch.fidelity_alice >= 1.0 - kFidelityTol;
    return ok ? 0 : 1;
}

int cmd_verify(const CommonFlags& flags, int trials, std::ostream& out, std::ostream& err) {
    validate(flags.cfg);
    if (trials < 1) throw ConfigError("--trials must be at least 1");

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<VerificationReport> reports;
    bool all_ok = true;
    for (int t = 0; t < trials; ++t) {
        const StateVector phi_a = make_input(flags.cfg.n, flags.cfg.alice_entangled,
                                             Rng::derive_seed(flags.cfg.seed, 2 * t));
        const StateVector phi_b = make_input(flags.cfg.m, flags.cfg.bob_entangled,
                                             Rng::derive_seed(flags.cfg.seed, 2 * t + 1));
        reports.push_back(verify_all_branches(flags.cfg, phi_a, phi_b));
        all_ok = all_ok && reports.back().all_passed();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_output(serialize_verification(flags.cfg, reports), flags.out_path, out);
    err << "verify " << config_tag(flags.cfg) << ": " << trials << " trial(s), "
        << reports.front().num_branches << " branches each, min_fidelity=";
    double min_fid = 1.0;
    for (const auto& r : reports) min_fid = std::min(min_fid, r.min_fidelity);
    err << min_fid << " (" << elapsed << " s)\n";
    return all_ok ? 0 : 1;
}

int cmd_channel(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
    validate(flags.cfg);
    const RegisterLayout lay = build_layout(flags.cfg);
    const StateVector channel = build_channel(lay);
    write_output(to_qsv(channel), flags.out_path, out);
    err << "channel " << config_tag(flags.cfg) << ": " << lay.channel_qubits << " qubits\n";
    return 0;
}

int cmd_compare(const std::string& file_a, const std::string& file_b, bool allow_local_paulis,
                const std::string& out_path, std::ostream& out, std::ostream& err) {
    const StateVector a = load_qsv(file_a);
    const StateVector b = load_qsv(file_b);
    const auto t0 = std::chrono::steady_clock::now();
    const EquivalenceResult result = equivalent_up_to_relabeling(a, b, allow_local_paulis);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_output(serialize_equivalence(file_a, file_b, a.num_qubits(), allow_local_paulis, result),
                 out_path, out);
    err << "compare: " << (result.equivalent ? "equivalent" : "not equivalent") << " (" << elapsed
        << " s)\n";
    return result.equivalent ? 0 : 1;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bidirectional quantum teleportation simulator and verifier"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    bool random_inputs = false;
    std::string phi_a_path, phi_b_path;
    CLI::App* run_cmd = app.add_subcommand("run", "execute one protocol instance");
    add_config_flags(*run_cmd, run_flags);
    run_cmd->add_flag("--random-inputs", random_inputs, "sample seeded random sending states");
    run_cmd->add_option("--phi-a", phi_a_path, "Alice's sending state (.qsv)");
    run_cmd->add_option("--phi-b", phi_b_path, "Bob's sending state (.qsv)");
    run_cmd->add_option("--out", run_flags.out_path, "write the report here instead of stdout");

    CommonFlags verify_flags;
    int trials = 5;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "enumerate every measurement branch over random inputs");
    add_config_flags(*verify_cmd, verify_flags);
    verify_cmd->add_option("--trials", trials, "number of random input pairs (default 5)");
    verify_cmd->add_option("--out", verify_flags.out_path,
                           "write the report here instead of stdout");

    CommonFlags channel_flags;
    CLI::App* channel_cmd = app.add_subcommand("channel", "build the quantum channel as .qsv");
    add_config_flags(*channel_cmd, channel_flags);
    channel_cmd->add_option("--out", channel_flags.out_path,
                            "write the .qsv here instead of stdout");

    std::string file_a, file_b, compare_out;
    bool allow_local_paulis = false;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "check two .qsv states for relabeling equivalence");
    compare_cmd->add_option("file_a", file_a, "first state (.qsv)")->required();
    compare_cmd->add_option("file_b", file_b, "second state (.qsv)")->required();
    compare_cmd->add_flag("--allow-local-paulis", allow_local_paulis,
                          "also search per-qubit I/X/Z/XZ frames");
    compare_cmd->add_option("--out", compare_out, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2; // help/version exit 0; any parse failure is a usage error
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(run_flags, random_inputs, phi_a_path, phi_b_path, out, err);
        }
        if (verify_cmd->parsed()) {
            return cmd_verify(verify_flags, trials, out, err);
        }
        if (channel_cmd->parsed()) {
            return cmd_channel(channel_flags, out, err);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(file_a, file_b, allow_local_paulis, compare_out, out, err);
        }
        err << "error: no subcommand\n";
        return 2;
    } catch (const ProtocolError& e) {
        err << "protocol failure: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace bqt
