// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include "bqt/oracle.hpp"
#include "bqt/protocol.hpp"

namespace bqt {

inline constexpr const char* kToolVersion = "bqtsim 1.0.0";

/// One protocol execution plus everything needed to replay it.
/// Serialized as a JSON document; serialization round-trips losslessly
/// (doubles are emitted with shortest exact representation).
struct RunReport {
    std::string tool = kToolVersion;
    ProtocolConfig cfg;
    StateVector phi_a;
    StateVector phi_b;
    BranchReport branch;
};

bool operator==(const RunReport& lhs, const RunReport& rhs);

std::string serialize(const RunReport& report);
RunReport parse_run_report(const std::string& text);

/// Multi-trial verification document (wall time deliberately excluded so
/// identical invocations serialize byte-identically).
std::string serialize_verification(const ProtocolConfig& cfg,
                                   const std::vector<VerificationReport>& trials);

std::string serialize_equivalence(const std::string& file_a, const std::string& file_b,
                                  int num_qubits, bool allow_local_paulis,
                                  const EquivalenceResult& result);

} // namespace bqt
