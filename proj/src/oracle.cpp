// SPDX-License-Identifier: MIT
#include "bqt/oracle.hpp"

#include <Eigen/Core>
#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <unordered_set>

namespace bqt {

namespace {

constexpr double kEquivTol = 1e-10;  // elementwise witness verification
constexpr double kSupportTol = 1e-10;
constexpr int kOracleMaxQubits = 22;

std::string bits_msb_first(std::uint64_t value, int width) {
    std::string s(width, '0');
    for (int i = 0; i < width; ++i) {
        if ((value >> (width - 1 - i)) & 1u) s[i] = '1';
    }
    return s;
}

void require_ghz_inputs(const ProtocolConfig& cfg, const StateVector& phi_a,
                        const StateVector& phi_b) {
    auto ghz_form = [](const StateVector& s) {
        for (std::uint64_t i = 1; i + 1 < s.dim(); ++i) {
            if (std::abs(s.amp(i)) > kAmpTol) return false;
        }
        return true;
    };
    if (cfg.alice_entangled && !ghz_form(phi_a)) {
        throw ConfigError("alice_entangled requires a GHZ-form sending state");
    }
    if (cfg.bob_entangled && !ghz_form(phi_b)) {
        throw ConfigError("bob_entangled requires a GHZ-form sending state");
    }
}

} // namespace

VerificationReport verify_all_branches(const ProtocolConfig& cfg, const StateVector& phi_a,
                                       const StateVector& phi_b) {
    const auto t0 = std::chrono::steady_clock::now();
    const RegisterLayout lay = build_layout(cfg);
    if (lay.total_qubits > kOracleMaxQubits) {
        throw ConfigError("verify_all_branches: instance needs " +
                          std::to_string(lay.total_qubits) + " qubits (" +
                          std::to_string(std::uint64_t{1}
                                         << (lay.num_controls() + lay.num_sending() +
                                             (cfg.controlled ? 1 : 0))) +
                          " branches); refusing above " + std::to_string(kOracleMaxQubits) +
                          " qubits");
    }
    require_ghz_inputs(cfg, phi_a, phi_b);

    VerificationReport report;
    report.cfg = cfg;
    const int nc = lay.num_controls();
    const int ns = lay.num_sending();
    const int charlie_round = cfg.controlled ? 1 : 0;
    report.num_branches = std::uint64_t{1} << (nc + ns + charlie_round);

    const StateVector base =
        step2_entangle(lay, attach_inputs(lay, build_channel(lay), phi_a, phi_b));

    auto finish_branch = [&](const std::string& rc, const std::string& rs,
                             std::optional<int> charlie, double probability,
                             const StateVector& main) {
        if (probability == 0.0) return;
        double branch_fid = 0.0;
        std::string note;
        try {
            ExtractedStates out = step7_extract(lay, main);
            branch_fid = std::min(fidelity(out.bob_received, phi_a),
                                  fidelity(out.alice_received, phi_b));
        } catch (const ProtocolError& e) {
            branch_fid = 0.0;
            note = e.what();
        }
        report.min_fidelity = std::min(report.min_fidelity, branch_fid);
        if (branch_fid < 1.0 - kFidelityTol) {
            report.failing_branches.push_back({rc, rs, charlie, branch_fid, note});
        }
    };

    for (std::uint64_t vc = 0; vc < (std::uint64_t{1} << nc); ++vc) {
        const std::string rc = bits_msb_first(vc, nc);
        MeasuredRegister ctl = step3_force_controls(lay, base, rc);
        if (ctl.probability == 0.0) continue;
        auto [after_x, x_plan] = step4_x_corrections(lay, ctl.state, rc);
        for (std::uint64_t vs = 0; vs < (std::uint64_t{1} << ns); ++vs) {
            const std::string rs = bits_msb_first(vs, ns);
            MeasuredRegister snd = step5_force_sending(lay, after_x, rs);
            if (snd.probability == 0.0) continue;
            auto [after_z, z_plan] = step6_z_corrections(lay, snd.state, rs);
            const double p = ctl.probability * snd.probability;
            if (cfg.controlled) {
                for (int co = 0; co < 2; ++co) {
                    CharlieRelease rel = charlie_force(lay, after_z, co);
                    finish_branch(rc, rs, co, p * rel.probability, rel.state);
                }
            } else {
                finish_branch(rc, rs, std::nullopt, p, after_z);
            }
        }
    }

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::string to_string(Pauli p) {
    switch (p) {
        case Pauli::I: return "I";
        case Pauli::X: return "X";
        case Pauli::Z: return "Z";
        case Pauli::XZ: return "XZ";
    }
    return "?";
}

StateVector apply_relabeling(const StateVector& a, const std::vector<int>& permutation,
                             const std::vector<Pauli>& paulis, cx phase) {
    const int k = a.num_qubits();
    if (static_cast<int>(permutation.size()) != k || static_cast<int>(paulis.size()) != k) {
        throw ContractError("apply_relabeling: witness arity does not match the state");
    }
    std::uint64_t xmask = 0, zmask = 0;
    for (int j = 0; j < k; ++j) {
        const std::uint64_t bit = std::uint64_t{1} << (k - 1 - j);
        if (paulis[j] == Pauli::X || paulis[j] == Pauli::XZ) xmask |= bit;
        if (paulis[j] == Pauli::Z || paulis[j] == Pauli::XZ) zmask |= bit;
    }
    std::vector<cx> out(a.dim(), cx(0.0, 0.0));
    for (std::uint64_t ia = 0; ia < a.dim(); ++ia) {
        std::uint64_t relabeled = 0;
        for (int j = 0; j < k; ++j) {
            if (StateVector::bit_of(ia, permutation[j], k)) {
                relabeled |= std::uint64_t{1} << (k - 1 - j);
            }
        }
        const double sign = (std::popcount(relabeled & zmask) % 2 == 0) ? 1.0 : -1.0;
        out[relabeled ^ xmask] = phase * sign * a.amp(ia);
    }
    return StateVector::from_amplitudes(k, std::move(out));
}

namespace {

struct EquivSearch {
    const StateVector& a;
    const StateVector& b;
    bool allow_paulis;
    int k;
    std::vector<std::uint64_t> supp_b;
    std::unordered_set<std::uint64_t> supp_b_set;
    std::vector<std::vector<int>> candidates; // per position j: allowed a-qubits
    std::vector<int> perm;
    std::vector<bool> used;
    EquivalenceResult result;

    // Multiset signature of b's support grouped by the bits at positions < depth:
    // pattern -> sorted magnitudes. Permutations of the remaining positions keep
    // every support element inside its group, so a mismatch prunes soundly.
    bool prefix_compatible(int depth) const {
        std::map<std::uint64_t, std::vector<double>> ga, gb;
        for (std::uint64_t i = 0; i < b.dim(); ++i) {
            if (std::abs(b.amp(i)) <= kSupportTol) continue;
            gb[i >> (k - depth)].push_back(std::abs(b.amp(i)));
        }
        for (std::uint64_t i = 0; i < a.dim(); ++i) {
            if (std::abs(a.amp(i)) <= kSupportTol) continue;
            std::uint64_t pattern = 0;
            for (int j = 0; j < depth; ++j) {
                pattern = (pattern << 1) | StateVector::bit_of(i, perm[j], k);
            }
            ga[pattern].push_back(std::abs(a.amp(i)));
        }
        if (ga.size() != gb.size()) return false;
        for (auto ia = ga.begin(), ib = gb.begin(); ia != ga.end(); ++ia, ++ib) {
            if (ia->first != ib->first || ia->second.size() != ib->second.size()) return false;
            std::sort(ia->second.begin(), ia->second.end());
            std::sort(ib->second.begin(), ib->second.end());
            for (std::size_t t = 0; t < ia->second.size(); ++t) {
                if (std::abs(ia->second[t] - ib->second[t]) > 1e-9) return false;
            }
        }
        return true;
    }

    bool search(int depth) {
        if (depth == k) return try_leaf();
        for (int q : candidates[depth]) {
            if (used[q]) continue;
            perm[depth] = q;
            used[q] = true;
            const bool ok = allow_paulis || prefix_compatible(depth + 1);
            if (ok && search(depth + 1)) return true;
            used[q] = false;
        }
        return false;
    }

    // Verifies b == phase * X^xmask Z^zmask (permuted a) elementwise.
    bool verify(const StateVector& pa, std::uint64_t xmask, std::uint64_t zmask, cx phase) const {
        for (std::uint64_t i = 0; i < pa.dim(); ++i) {
            const double sign = (std::popcount(i & zmask) % 2 == 0) ? 1.0 : -1.0;
            if (std::abs(phase * sign * pa.amp(i) - b.amp(i ^ xmask)) > kEquivTol) return false;
        }
        return true;
    }

    bool accept(std::uint64_t xmask, std::uint64_t zmask, cx phase) {
        result.equivalent = true;
        result.permutation = perm;
        std::vector<Pauli> paulis(k, Pauli::I);
        for (int j = 0; j < k; ++j) {
            const std::uint64_t bit = std::uint64_t{1} << (k - 1 - j);
            const bool x = xmask & bit, z = zmask & bit;
            paulis[j] = x ? (z ? Pauli::XZ : Pauli::X) : (z ? Pauli::Z : Pauli::I);
        }
        result.local_paulis = std::move(paulis);
        result.phase = phase;
        return true;
    }

    bool try_leaf() {
        const std::vector<Pauli> identity(k, Pauli::I);
        const StateVector pa = apply_relabeling(a, perm, identity, cx(1.0, 0.0));
        std::vector<std::uint64_t> supp_pa;
        for (std::uint64_t i = 0; i < pa.dim(); ++i) {
            if (std::abs(pa.amp(i)) > kSupportTol) supp_pa.push_back(i);
        }
        if (supp_pa.size() != supp_b.size() || supp_pa.empty()) return false;

        if (!allow_paulis) {
            const cx c = b.amp(supp_pa.front()) / pa.amp(supp_pa.front());
            if (std::abs(std::abs(c) - 1.0) > 1e-9) return false;
            if (verify(pa, 0, 0, c)) return accept(0, 0, c);
            return false;
        }

        // xmask must map the first support element into supp(b); try candidates
        // in ascending order for a deterministic first-found witness.
        std::vector<std::uint64_t> xmasks;
        for (std::uint64_t t : supp_b) xmasks.push_back(supp_pa.front() ^ t);
        std::sort(xmasks.begin(), xmasks.end());
        xmasks.erase(std::unique(xmasks.begin(), xmasks.end()), xmasks.end());
        for (std::uint64_t xmask : xmasks) {
            bool support_ok = true;
            for (std::uint64_t s : supp_pa) {
                if (!supp_b_set.count(s ^ xmask)) {
                    support_ok = false;
                    break;
                }
            }
            if (!support_ok) continue;
            for (std::uint64_t zmask = 0; zmask < pa.dim(); ++zmask) {
                const std::uint64_t s0 = supp_pa.front();
                const double sign0 = (std::popcount(s0 & zmask) % 2 == 0) ? 1.0 : -1.0;
                const cx c = b.amp(s0 ^ xmask) / (sign0 * pa.amp(s0));
                if (std::abs(std::abs(c) - 1.0) > 1e-9) continue;
                bool ok = true;
                for (std::uint64_t s : supp_pa) {
                    const double sign = (std::popcount(s & zmask) % 2 == 0) ? 1.0 : -1.0;
                    if (std::abs(c * sign * pa.amp(s) - b.amp(s ^ xmask)) > kEquivTol) {
                        ok = false;
                        break;
                    }
                }
                if (ok && verify(pa, xmask, zmask, c)) return accept(xmask, zmask, c);
            }
        }
        return false;
    }
};

} // namespace

EquivalenceResult equivalent_up_to_relabeling(const StateVector& a, const StateVector& b,
                                              bool allow_local_paulis) {
    if (a.num_qubits() != b.num_qubits()) {
        throw ConfigError("equivalence check: qubit counts differ (" +
                          std::to_string(a.num_qubits()) + " vs " +
                          std::to_string(b.num_qubits()) + ")");
    }
    const int k = a.num_qubits();
    const int bound = allow_local_paulis ? 8 : 12;
    if (k > bound) {
        throw ConfigError("equivalence check: " + std::to_string(k) +
                          " qubits exceeds the search bound of " + std::to_string(bound) +
                          (allow_local_paulis ? " (with local Paulis)" : ""));
    }

    EquivSearch search{a, b, allow_local_paulis, k, {}, {}, {}, {}, {}, {}};

    // Magnitude multiset is invariant under permutation, Paulis and phase.
    std::vector<double> mags_a, mags_b;
    for (std::uint64_t i = 0; i < a.dim(); ++i) {
        if (std::abs(a.amp(i)) > kSupportTol) mags_a.push_back(std::abs(a.amp(i)));
        if (std::abs(b.amp(i)) > kSupportTol) {
            mags_b.push_back(std::abs(b.amp(i)));
            search.supp_b.push_back(i);
            search.supp_b_set.insert(i);
        }
    }
    if (mags_a.size() != mags_b.size()) return {};
    std::sort(mags_a.begin(), mags_a.end());
    std::sort(mags_b.begin(), mags_b.end());
    for (std::size_t i = 0; i < mags_a.size(); ++i) {
        if (std::abs(mags_a[i] - mags_b[i]) > 1e-9) return {};
    }

    // Per-qubit marginal signatures: P(qubit = 1) is permutation-invariant;
    // X swaps it with P(qubit = 0).
    auto marginals = [k](const StateVector& s) {
        std::vector<double> p1(k, 0.0);
        for (std::uint64_t i = 0; i < s.dim(); ++i) {
            const double w = std::norm(s.amp(i));
            if (w == 0.0) continue;
            for (int q = 0; q < k; ++q) {
                if (StateVector::bit_of(i, q, k)) p1[q] += w;
            }
        }
        return p1;
    };
    const std::vector<double> pa = marginals(a), pb = marginals(b);
    search.candidates.resize(k);
    for (int j = 0; j < k; ++j) {
        for (int q = 0; q < k; ++q) {
            const bool direct = std::abs(pb[j] - pa[q]) <= 1e-9;
            const bool flipped = allow_local_paulis && std::abs(pb[j] - (1.0 - pa[q])) <= 1e-9;
            if (direct || flipped) search.candidates[j].push_back(q);
        }
    }

    search.perm.assign(k, -1);
    search.used.assign(k, false);
    search.search(0);
    return search.result;
}

bool schmidt_product_check(const StateVector& state, const std::vector<int>& cut) {
    const int k = state.num_qubits();
    std::vector<bool> in_cut(k, false);
    for (int q : cut) {
        if (q < 0 || q >= k) {
            throw ContractError("schmidt_product_check: cut index " + std::to_string(q) +
                                " out of range");
        }
        if (in_cut[q]) throw ContractError("schmidt_product_check: duplicate cut index");
        in_cut[q] = true;
    }
    if (!state.is_normalized()) {
        throw ContractError("schmidt_product_check: state is not normalized");
    }
    const int nc = static_cast<int>(cut.size());
    if (nc == 0 || nc == k) return true;

    std::vector<int> cut_sorted, rest;
    for (int q = 0; q < k; ++q) (in_cut[q] ? cut_sorted : rest).push_back(q);

    Eigen::MatrixXcd mat(std::int64_t{1} << nc, std::int64_t{1} << (k - nc));
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        std::uint64_t row = 0, col = 0;
        for (int q : cut_sorted) row = (row << 1) | StateVector::bit_of(i, q, k);
        for (int q : rest) col = (col << 1) | StateVector::bit_of(i, q, k);
        mat(static_cast<std::int64_t>(row), static_cast<std::int64_t>(col)) = state.amp(i);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat);
    return std::abs(svd.singularValues()(0) - 1.0) <= 1e-9;
}

} // namespace bqt
