// SPDX-License-Identifier: MIT
#pragma once

#include <string>

#include "bqt/statevec.hpp"

namespace bqt {

// Sparse text format for state vectors (".qsv"):
//   line 1:  qsv 1 <num_qubits>
//   then one line per nonzero amplitude, indices ascending:
//     <basis_index_decimal> <re> <im>
// with 17 significant decimal digits (lossless double round-trip).
// Lines starting with '#' are ignored on input and never written.

std::string to_qsv(const StateVector& state);

/// Parses qsv text. Requires a normalized state (norm deviation <= 1e-9).
/// Malformed input raises ConfigError naming the offending line.
StateVector parse_qsv(const std::string& text);

void save_qsv(const StateVector& state, const std::string& path);
StateVector load_qsv(const std::string& path);

} // namespace bqt
