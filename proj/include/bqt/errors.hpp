// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace bqt {

/// Invalid configuration or malformed user input. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an in-process API contract (bad qubit index, dimension
/// mismatch, unnormalized state where one is required).
class ContractError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// The protocol failed to produce a valid result for a branch. Carries the
/// branch's audit trail in the message. The CLI maps this to exit code 1.
class ProtocolError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace bqt
