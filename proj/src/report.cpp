// SPDX-License-Identifier: MIT
#include "bqt/report.hpp"

#include <json.hpp>

namespace bqt {

namespace {

using json = nlohmann::ordered_json;

json state_to_json(const StateVector& s) {
    json amps = json::array();
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
        const cx a = s.amp(i);
        if (a.real() == 0.0 && a.imag() == 0.0) continue;
        amps.push_back(json::array({i, a.real(), a.imag()}));
    }
    return json{{"qubits", s.num_qubits()}, {"amplitudes", std::move(amps)}};
}

StateVector state_from_json(const json& j) {
    const int k = j.at("qubits").get<int>();
    std::vector<cx> amps(std::uint64_t{1} << k, cx(0.0, 0.0));
    for (const json& row : j.at("amplitudes")) {
        amps.at(row.at(0).get<std::uint64_t>()) =
            cx(row.at(1).get<double>(), row.at(2).get<double>());
    }
    return StateVector::from_amplitudes(k, std::move(amps));
}

json config_to_json(const ProtocolConfig& cfg) {
    return json{{"n", cfg.n},
                {"m", cfg.m},
                {"entangled_a", cfg.alice_entangled},
                {"entangled_b", cfg.bob_entangled},
                {"controlled", cfg.controlled},
                {"charlie_mask", cfg.charlie_mask},
                {"seed", cfg.seed}};
}

ProtocolConfig config_from_json(const json& j) {
    ProtocolConfig cfg;
    cfg.n = j.at("n").get<int>();
    cfg.m = j.at("m").get<int>();
    cfg.alice_entangled = j.at("entangled_a").get<bool>();
    cfg.bob_entangled = j.at("entangled_b").get<bool>();
    cfg.controlled = j.at("controlled").get<bool>();
    cfg.charlie_mask = j.at("charlie_mask").get<std::string>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

json plan_to_json(const CorrectionPlan& plan) {
    return json{{"x_targets", plan.x_targets}, {"z_targets", plan.z_targets}};
}

} // namespace

bool operator==(const RunReport& lhs, const RunReport& rhs) {
    auto states_equal = [](const StateVector& a, const StateVector& b) {
        if (a.num_qubits() != b.num_qubits()) return false;
        for (std::uint64_t i = 0; i < a.dim(); ++i) {
            if (a.amp(i) != b.amp(i)) return false;
        }
        return true;
    };
    return lhs.tool == rhs.tool && lhs.cfg == rhs.cfg && states_equal(lhs.phi_a, rhs.phi_a) &&
           states_equal(lhs.phi_b, rhs.phi_b) &&
           lhs.branch.control_outcomes == rhs.branch.control_outcomes &&
           lhs.branch.sending_outcomes == rhs.branch.sending_outcomes &&
           lhs.branch.charlie_outcome == rhs.branch.charlie_outcome &&
           lhs.branch.probability == rhs.branch.probability &&
           lhs.branch.corrections == rhs.branch.corrections &&
           states_equal(lhs.branch.bob_received, rhs.branch.bob_received) &&
           states_equal(lhs.branch.alice_received, rhs.branch.alice_received) &&
           lhs.branch.fidelity_bob == rhs.branch.fidelity_bob &&
           lhs.branch.fidelity_alice == rhs.branch.fidelity_alice;
}

std::string serialize(const RunReport& report) {
    json j;
    j["tool"] = report.tool;
    j["kind"] = "run";
    j["config"] = config_to_json(report.cfg);
    j["inputs"] = json{{"phi_a", state_to_json(report.phi_a)},
                       {"phi_b", state_to_json(report.phi_b)}};
    const BranchReport& br = report.branch;
    json branch;
    branch["control_outcomes"] = br.control_outcomes;
    branch["sending_outcomes"] = br.sending_outcomes;
    if (br.charlie_outcome) {
        branch["charlie_outcome"] = *br.charlie_outcome;
    } else {
        branch["charlie_outcome"] = nullptr;
    }
    branch["probability"] = br.probability;
    branch["corrections"] = plan_to_json(br.corrections);
    branch["bob_received"] = state_to_json(br.bob_received);
    branch["alice_received"] = state_to_json(br.alice_received);
    branch["fidelity_bob"] = br.fidelity_bob;
    branch["fidelity_alice"] = br.fidelity_alice;
    j["branch"] = std::move(branch);
    return j.dump(2) + "\n";
}

RunReport parse_run_report(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run report parse error: ") + e.what());
    }
    try {
        RunReport report;
        report.tool = j.at("tool").get<std::string>();
        if (j.at("kind").get<std::string>() != "run") {
            throw ConfigError("run report parse error: kind is not \"run\"");
        }
        report.cfg = config_from_json(j.at("config"));
        report.phi_a = state_from_json(j.at("inputs").at("phi_a"));
        report.phi_b = state_from_json(j.at("inputs").at("phi_b"));
        const json& branch = j.at("branch");
        report.branch.control_outcomes = branch.at("control_outcomes").get<std::string>();
        report.branch.sending_outcomes = branch.at("sending_outcomes").get<std::string>();
        if (!branch.at("charlie_outcome").is_null()) {
            report.branch.charlie_outcome = branch.at("charlie_outcome").get<int>();
        }
        report.branch.probability = branch.at("probability").get<double>();
        report.branch.corrections.x_targets =
            branch.at("corrections").at("x_targets").get<std::vector<int>>();
        report.branch.corrections.z_targets =
            branch.at("corrections").at("z_targets").get<std::vector<int>>();
        report.branch.bob_received = state_from_json(branch.at("bob_received"));
        report.branch.alice_received = state_from_json(branch.at("alice_received"));
        report.branch.fidelity_bob = branch.at("fidelity_bob").get<double>();
        report.branch.fidelity_alice = branch.at("fidelity_alice").get<double>();
        return report;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run report parse error: ") + e.what());
    }
}

std::string serialize_verification(const ProtocolConfig& cfg,
                                   const std::vector<VerificationReport>& trials) {
    json j;
    j["tool"] = kToolVersion;
    j["kind"] = "verify";
    j["config"] = config_to_json(cfg);
    json arr = json::array();
    for (const VerificationReport& trial : trials) {
        json t;
        t["num_branches"] = trial.num_branches;
        t["min_fidelity"] = trial.min_fidelity;
        json fails = json::array();
        for (const auto& fb : trial.failing_branches) {
            json f;
            f["control_outcomes"] = fb.control_outcomes;
            f["sending_outcomes"] = fb.sending_outcomes;
            if (fb.charlie_outcome) {
                f["charlie_outcome"] = *fb.charlie_outcome;
            } else {
                f["charlie_outcome"] = nullptr;
            }
            f["fidelity"] = fb.fidelity;
            if (!fb.note.empty()) f["note"] = fb.note;
            fails.push_back(std::move(f));
        }
        t["failing_branches"] = std::move(fails);
        arr.push_back(std::move(t));
    }
    j["trials"] = std::move(arr);
    bool all = true;
    for (const VerificationReport& trial : trials) all = all && trial.all_passed();
    j["all_passed"] = all;
    return j.dump(2) + "\n";
}

std::string serialize_equivalence(const std::string& file_a, const std::string& file_b,
                                  int num_qubits, bool allow_local_paulis,
                                  const EquivalenceResult& result) {
    json j;
    j["tool"] = kToolVersion;
    j["kind"] = "compare";
    j["file_a"] = file_a;
    j["file_b"] = file_b;
    j["qubits"] = num_qubits;
    j["allow_local_paulis"] = allow_local_paulis;
    j["equivalent"] = result.equivalent;
    if (result.equivalent) {
        j["permutation"] = *result.permutation;
        std::vector<std::string> paulis;
        for (Pauli p : *result.local_paulis) paulis.push_back(to_string(p));
        j["local_paulis"] = paulis;
        j["phase"] = json::array({result.phase->real(), result.phase->imag()});
    } else {
        j["permutation"] = nullptr;
        j["local_paulis"] = nullptr;
        j["phase"] = nullptr;
    }
    return j.dump(2) + "\n";
}

} // namespace bqt
