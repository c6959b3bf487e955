// SPDX-License-Identifier: MIT
#include "bqt/statevec.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bqt {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_qubit(const StateVector& state, int qubit, const char* op) {
    if (qubit < 0 || qubit >= state.num_qubits()) {
        throw ContractError(std::string(op) + ": qubit index " + std::to_string(qubit) +
                            " out of range [0, " + std::to_string(state.num_qubits()) + ")");
    }
}

void check_width(int num_qubits) {
    if (num_qubits < 0) {
        throw ContractError("negative qubit count");
    }
    if (num_qubits > kMaxQubits) {
        throw ConfigError("register of " + std::to_string(num_qubits) +
                          " qubits exceeds the supported maximum of " +
                          std::to_string(kMaxQubits));
    }
}

// Bit position of `qubit` inside a basis index (qubit 0 is the high bit).
inline int bitpos(const StateVector& s, int qubit) { return s.num_qubits() - 1 - qubit; }

} // namespace

StateVector StateVector::from_amplitudes(int num_qubits, std::vector<cx> amps) {
    check_width(num_qubits);
    if (amps.size() != (std::uint64_t{1} << num_qubits)) {
        throw ContractError("amplitude count " + std::to_string(amps.size()) +
                            " does not match 2^" + std::to_string(num_qubits));
    }
    return StateVector(num_qubits, std::move(amps));
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const cx& a : amps_) s += std::norm(a);
    return s;
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm_sq() - 1.0) <= tol; }

StateVector basis_state(int num_qubits, std::uint64_t index) {
    check_width(num_qubits);
    const std::uint64_t n = std::uint64_t{1} << num_qubits;
    if (index >= n) {
        throw ContractError("basis_state: index " + std::to_string(index) +
                            " out of range for " + std::to_string(num_qubits) + " qubits");
    }
    std::vector<cx> amps(n, cx(0.0, 0.0));
    amps[index] = cx(1.0, 0.0);
    return StateVector::from_amplitudes(num_qubits, std::move(amps));
}

StateVector apply_h(const StateVector& state, int qubit) {
    check_qubit(state, qubit, "apply_h");
    const std::uint64_t step = std::uint64_t{1} << bitpos(state, qubit);
    std::vector<cx> amps(state.amps().begin(), state.amps().end());
    for (std::uint64_t base = 0; base < amps.size(); base += 2 * step) {
        for (std::uint64_t off = 0; off < step; ++off) {
            const std::uint64_t i0 = base + off;
            const std::uint64_t i1 = i0 + step;
            const cx a = amps[i0], b = amps[i1];
            amps[i0] = (a + b) * kInvSqrt2;
            amps[i1] = (a - b) * kInvSqrt2;
        }
    }
    return StateVector::from_amplitudes(state.num_qubits(), std::move(amps));
}

StateVector apply_x(const StateVector& state, int qubit) {
    check_qubit(state, qubit, "apply_x");
    const std::uint64_t step = std::uint64_t{1} << bitpos(state, qubit);
    std::vector<cx> amps(state.amps().begin(), state.amps().end());
    for (std::uint64_t base = 0; base < amps.size(); base += 2 * step) {
        for (std::uint64_t off = 0; off < step; ++off) {
            std::swap(amps[base + off], amps[base + off + step]);
        }
    }
    return StateVector::from_amplitudes(state.num_qubits(), std::move(amps));
}

StateVector apply_z(const StateVector& state, int qubit) {
    check_qubit(state, qubit, "apply_z");
    const std::uint64_t mask = std::uint64_t{1} << bitpos(state, qubit);
    std::vector<cx> amps(state.amps().begin(), state.amps().end());
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (i & mask) amps[i] = -amps[i];
    }
    return StateVector::from_amplitudes(state.num_qubits(), std::move(amps));
}

StateVector apply_cnot(const StateVector& state, int control, int target) {
    check_qubit(state, control, "apply_cnot");
    check_qubit(state, target, "apply_cnot");
    if (control == target) {
        throw ContractError("apply_cnot: control and target must differ (got " +
                            std::to_string(control) + ")");
    }
    const std::uint64_t cmask = std::uint64_t{1} << bitpos(state, control);
    const std::uint64_t tmask = std::uint64_t{1} << bitpos(state, target);
    std::vector<cx> amps(state.amps().begin(), state.amps().end());
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) {
            std::swap(amps[i], amps[i | tmask]);
        }
    }
    return StateVector::from_amplitudes(state.num_qubits(), std::move(amps));
}

namespace {

// Z-projection onto `outcome` with the measured qubit removed. No norm check.
ProjectResult project_z(const StateVector& state, int qubit, int outcome) {
    const int k = state.num_qubits();
    const int pos = k - 1 - qubit;
    const std::uint64_t low = (std::uint64_t{1} << pos) - 1;
    double prob = 0.0;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        if (static_cast<int>((i >> pos) & 1u) == outcome) prob += std::norm(state.amp(i));
    }
    if (prob < 1e-24) {
        // Empty branch: zero state, caller must skip it.
        std::vector<cx> zero(std::uint64_t{1} << (k - 1), cx(0.0, 0.0));
        return {0.0, StateVector::from_amplitudes(k - 1, std::move(zero))};
    }
    const double scale = 1.0 / std::sqrt(prob);
    std::vector<cx> amps(std::uint64_t{1} << (k - 1), cx(0.0, 0.0));
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        if (static_cast<int>((i >> pos) & 1u) != outcome) continue;
        const std::uint64_t packed = ((i >> (pos + 1)) << pos) | (i & low);
        amps[packed] = state.amp(i) * scale;
    }
    return {prob, StateVector::from_amplitudes(k - 1, std::move(amps))};
}

} // namespace

ProjectResult project(const StateVector& state, int qubit, Basis basis, int outcome) {
    check_qubit(state, qubit, "project");
    if (outcome != 0 && outcome != 1) {
        throw ContractError("project: outcome must be 0 or 1");
    }
    if (!state.is_normalized()) {
        throw ContractError("project: input state is not normalized (|norm^2 - 1| = " +
                            std::to_string(std::abs(state.norm_sq() - 1.0)) + ")");
    }
    if (basis == Basis::X) {
        return project_z(apply_h(state, qubit), qubit, outcome);
    }
    return project_z(state, qubit, outcome);
}

std::pair<MeasurementRecord, StateVector> measure(const StateVector& state, int qubit,
                                                  Basis basis, double rng_draw) {
    check_qubit(state, qubit, "measure");
    if (!state.is_normalized()) {
        throw ContractError("measure: input state is not normalized (|norm^2 - 1| = " +
                            std::to_string(std::abs(state.norm_sq() - 1.0)) + ")");
    }
    const StateVector& zstate = (basis == Basis::X) ? apply_h(state, qubit) : state;
    const int pos = state.num_qubits() - 1 - qubit;
    double p0 = 0.0;
    for (std::uint64_t i = 0; i < zstate.dim(); ++i) {
        if (((i >> pos) & 1u) == 0) p0 += std::norm(zstate.amp(i));
    }
    const int outcome = (rng_draw < p0) ? 0 : 1;
    ProjectResult branch = project_z(zstate, qubit, outcome);
    return {MeasurementRecord{qubit, basis, outcome, branch.probability}, std::move(branch.state)};
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    check_width(a.num_qubits() + b.num_qubits());
    std::vector<cx> amps(a.dim() * b.dim());
    for (std::uint64_t ia = 0; ia < a.dim(); ++ia) {
        const cx av = a.amp(ia);
        for (std::uint64_t ib = 0; ib < b.dim(); ++ib) {
            amps[(ia << b.num_qubits()) | ib] = av * b.amp(ib);
        }
    }
    return StateVector::from_amplitudes(a.num_qubits() + b.num_qubits(), std::move(amps));
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw ContractError("fidelity: qubit counts differ (" + std::to_string(a.num_qubits()) +
                            " vs " + std::to_string(b.num_qubits()) + ")");
    }
    cx overlap(0.0, 0.0);
    for (std::uint64_t i = 0; i < a.dim(); ++i) {
        overlap += std::conj(a.amp(i)) * b.amp(i);
    }
    return std::norm(overlap);
}

double Rng::uniform() {
    // 53 high bits of the engine output; exactly representable in a double.
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1], keeps log() finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t Rng::derive_seed(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 over base advanced by the stream id
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

StateVector random_state(int num_qubits, std::uint64_t seed) {
    check_width(num_qubits);
    if (num_qubits == 0) {
        return StateVector();
    }
    Rng rng(seed);
    std::vector<cx> amps(std::uint64_t{1} << num_qubits);
    double norm_sq = 0.0;
    for (cx& a : amps) {
        a = cx(rng.gaussian(), rng.gaussian());
        norm_sq += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (cx& a : amps) a *= scale;
    return StateVector::from_amplitudes(num_qubits, std::move(amps));
}

StateVector random_ghz_state(int num_qubits, std::uint64_t seed) {
    if (num_qubits < 1) {
        throw ContractError("random_ghz_state: need at least one qubit");
    }
    check_width(num_qubits);
    StateVector pair = random_state(1, seed);
    std::vector<cx> amps(std::uint64_t{1} << num_qubits, cx(0.0, 0.0));
    amps.front() = pair.amp(0);
    amps.back() = pair.amp(1);
    return StateVector::from_amplitudes(num_qubits, std::move(amps));
}

} // namespace bqt
