// SPDX-License-Identifier: MIT
#include "bqt/qsv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bqt {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void bad_line(std::size_t lineno, const std::string& what) {
    throw ConfigError("qsv parse error at line " + std::to_string(lineno) + ": " + what);
}

} // namespace

std::string to_qsv(const StateVector& state) {
    std::string out = "qsv 1 " + std::to_string(state.num_qubits()) + "\n";
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        const cx a = state.amp(i);
        if (a.real() == 0.0 && a.imag() == 0.0) continue;
        out += std::to_string(i);
        out += ' ';
        out += fmt17(a.real());
        out += ' ';
        out += fmt17(a.imag());
        out += '\n';
    }
    return out;
}

StateVector parse_qsv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;

    int num_qubits = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream hdr(line);
        std::string magic, trailing;
        int version = 0;
        if (!(hdr >> magic >> version >> num_qubits) || magic != "qsv" || (hdr >> trailing)) {
            bad_line(lineno, "expected header \"qsv 1 <num_qubits>\"");
        }
        if (version != 1) bad_line(lineno, "unsupported qsv version " + std::to_string(version));
        if (num_qubits < 0 || num_qubits > kMaxQubits) {
            bad_line(lineno, "qubit count " + std::to_string(num_qubits) + " out of range");
        }
        break;
    }
    if (num_qubits < 0) throw ConfigError("qsv parse error: missing header");

    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    std::vector<cx> amps(dim, cx(0.0, 0.0));
    std::uint64_t prev_index = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::uint64_t index = 0;
        double re = 0.0, im = 0.0;
        if (!(row >> index >> re >> im)) bad_line(lineno, "expected \"<index> <re> <im>\"");
        std::string trailing;
        if (row >> trailing) bad_line(lineno, "unexpected trailing token \"" + trailing + "\"");
        if (index >= dim) bad_line(lineno, "index " + std::to_string(index) + " out of range");
        if (!first && index <= prev_index) bad_line(lineno, "indices must be strictly ascending");
        amps[index] = cx(re, im);
        prev_index = index;
        first = false;
    }

    StateVector state = StateVector::from_amplitudes(num_qubits, std::move(amps));
    if (!state.is_normalized()) {
        throw ConfigError("qsv parse error: state is not normalized (|norm^2 - 1| = " +
                          fmt17(std::abs(state.norm_sq() - 1.0)) + ")");
    }
    return state;
}

void save_qsv(const StateVector& state, const std::string& path) {
    const std::string text = to_qsv(state);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << text;
    if (!out.good()) throw ConfigError("write failed for " + path);
}

StateVector load_qsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_qsv(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace bqt
