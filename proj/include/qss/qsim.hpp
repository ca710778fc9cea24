// Copyright 2026 The qss-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "qss/bitvec.hpp"
#include "qss/error.hpp"
#include "qss/random.hpp"

namespace qss {

using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 22;
inline constexpr double kAmplitudeTolerance = 1e-9;

/// Global qubit indices of one register; position j of the register is
/// element j (little-endian: position 0 is the least significant bit).
using Register = std::vector<int>;

enum class BasisLabel { zero, one, plus, minus };

inline const char *to_string(BasisLabel label) {
    switch (label) {
        case BasisLabel::zero: return "0";
        case BasisLabel::one: return "1";
        case BasisLabel::plus: return "+";
        case BasisLabel::minus: return "-";
    }
    return "?";
}

/// True for |+> and |->.
inline bool is_hadamard_basis(BasisLabel label) {
    return label == BasisLabel::plus || label == BasisLabel::minus;
}

/// The bit a measurement in the label's own basis returns.
inline int eigen_bit(BasisLabel label) {
    return (label == BasisLabel::one || label == BasisLabel::minus) ? 1 : 0;
}

enum class GateKind { h, x, z, cnot, measure };

struct GateRecord {
    GateKind kind;
    int target;
    int control = -1;
    friend bool operator==(const GateRecord &, const GateRecord &) = default;
};

/// Dense state of up to kMaxQubits qubits. Qubit 0 is the least significant
/// bit of the basis index.
class StateVector {
  public:
    explicit StateVector(int qubits) : qubits_(qubits) {
        if (qubits < 0 || qubits > kMaxQubits) {
            throw CapacityError("state vector: " + std::to_string(qubits) + " qubits exceeds capacity " +
                                std::to_string(kMaxQubits));
        }
        amps_.assign(std::size_t{1} << qubits, Amplitude{0.0, 0.0});
        amps_[0] = 1.0;
    }

    int num_qubits() const { return qubits_; }
    std::span<const Amplitude> amplitudes() const { return amps_; }
    Amplitude amplitude(std::uint64_t index) const { return amps_.at(index); }
    const std::vector<GateRecord> &gate_log() const { return log_; }
    void clear_gate_log() { log_.clear(); }

    /// Appends a fresh |0> qubit as the new most significant qubit.
    int add_qubit() {
        if (qubits_ + 1 > kMaxQubits) {
            throw CapacityError("state vector: adding a qubit exceeds capacity " + std::to_string(kMaxQubits));
        }
        amps_.resize(amps_.size() * 2, Amplitude{0.0, 0.0});
        return qubits_++;
    }

    double norm() const {
        double sum = 0.0;
        for (const auto &a : amps_) {
            sum += std::norm(a);
        }
        return std::sqrt(sum);
    }

    void apply_h(int q) {
        check_qubit(q);
        log_.push_back({GateKind::h, q});
        const std::uint64_t bit = std::uint64_t{1} << q;
        const double s = 1.0 / std::numbers::sqrt2;
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if (i & bit) {
                continue;
            }
            const Amplitude a = amps_[i];
            const Amplitude b = amps_[i | bit];
            amps_[i] = (a + b) * s;
            amps_[i | bit] = (a - b) * s;
        }
    }

    void apply_x(int q) {
        check_qubit(q);
        log_.push_back({GateKind::x, q});
        const std::uint64_t bit = std::uint64_t{1} << q;
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if (!(i & bit)) {
                std::swap(amps_[i], amps_[i | bit]);
            }
        }
    }

    void apply_z(int q) {
        check_qubit(q);
        log_.push_back({GateKind::z, q});
        const std::uint64_t bit = std::uint64_t{1} << q;
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if (i & bit) {
                amps_[i] = -amps_[i];
            }
        }
    }

    void apply_cnot(int control, int target) {
        check_qubit(control);
        check_qubit(target);
        if (control == target) {
            throw IndexError("cnot: control and target are both qubit " + std::to_string(control));
        }
        log_.push_back({GateKind::cnot, target, control});
        const std::uint64_t cbit = std::uint64_t{1} << control;
        const std::uint64_t tbit = std::uint64_t{1} << target;
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if ((i & cbit) && !(i & tbit)) {
                std::swap(amps_[i], amps_[i | tbit]);
            }
        }
    }

    void apply_h_register(std::span<const int> reg) {
        for (int q : reg) {
            apply_h(q);
        }
    }

    double probability_one(int q) const {
        check_qubit(q);
        const std::uint64_t bit = std::uint64_t{1} << q;
        double p = 0.0;
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if (i & bit) {
                p += std::norm(amps_[i]);
            }
        }
        return p;
    }

    /// Prepares a qubit that is currently |0> in one of |0>, |1>, |+>, |->.
    /// |+> and |-> are H applied to |0> and |1>.
    void prepare_basis(BasisLabel label, int q) {
        require_zero(q, "prepare_basis");
        if (eigen_bit(label) == 1) {
            apply_x(q);
        }
        if (is_hadamard_basis(label)) {
            apply_h(q);
        }
    }

    /// (|0...0> + |1...1>)/sqrt(2) on the listed qubits: one H, then a CNOT
    /// chain from the first qubit.
    void prepare_ghz(std::span<const int> qubits) {
        if (qubits.size() < 2) {
            throw PreconditionError("prepare_ghz: needs at least 2 qubits");
        }
        for (int q : qubits) {
            require_zero(q, "prepare_ghz");
        }
        apply_h(qubits[0]);
        for (std::size_t k = 1; k < qubits.size(); ++k) {
            apply_cnot(qubits[0], qubits[k]);
        }
    }

    /// Multiplies every register basis ket |x> by (-1)^(c•x) by kickback into
    /// `target`, which the caller must have prepared in |->. One CNOT per set
    /// bit of c.
    void apply_phase_oracle(const BitVector &c, std::span<const int> reg, int target) {
        if (c.size() != reg.size()) {
            throw DimensionError("phase oracle: vector length " + std::to_string(c.size()) +
                                 " vs register width " + std::to_string(reg.size()));
        }
        for (std::size_t j = 0; j < reg.size(); ++j) {
            if (c.get(j)) {
                apply_cnot(reg[j], target);
            }
        }
    }

    /// Born-rule measurement in the computational basis; collapses.
    int measure_qubit(int q, Rng &rng) {
        const double p1 = probability_one(q);
        const double total = norm();
        if (total < 1e-12) {
            throw Error("measure: state has zero norm");
        }
        const int outcome = rng.uniform01() * total * total < p1 ? 1 : 0;
        collapse(q, outcome);
        return outcome;
    }

    BitVector measure_register(std::span<const int> reg, Rng &rng) {
        BitVector out(reg.size());
        for (std::size_t j = 0; j < reg.size(); ++j) {
            out.set(j, measure_qubit(reg[j], rng) == 1);
        }
        return out;
    }

    /// H then a computational measurement: 0 for |+>, 1 for |->.
    int measure_hadamard_basis(int q, Rng &rng) {
        apply_h(q);
        return measure_qubit(q, rng);
    }

    /// Joint outcome distribution of the listed qubits; index bit j is the
    /// outcome of reg[j]. Does not disturb the state.
    std::vector<double> register_distribution(std::span<const int> reg) const {
        if (reg.size() > static_cast<std::size_t>(qubits_)) {
            throw DimensionError("register_distribution: register wider than state");
        }
        for (int q : reg) {
            check_qubit(q);
        }
        std::vector<double> dist(std::size_t{1} << reg.size(), 0.0);
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            const double p = std::norm(amps_[i]);
            if (p == 0.0) {
                continue;
            }
            std::uint64_t key = 0;
            for (std::size_t j = 0; j < reg.size(); ++j) {
                key |= ((i >> reg[j]) & 1u) << j;
            }
            dist[key] += p;
        }
        return dist;
    }

    /// One line per nonzero amplitude: "bitstring re im", most significant
    /// qubit first.
    std::string dump() const {
        std::string out;
        char buf[96];
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if (std::abs(amps_[i]) < 1e-12) {
                continue;
            }
            out += BitVector::from_uint(i, static_cast<std::size_t>(qubits_)).to_string();
            std::snprintf(buf, sizeof buf, " %.12f %.12f\n", clean(amps_[i].real()), clean(amps_[i].imag()));
            out += buf;
        }
        return out;
    }

  private:
    static double clean(double v) { return std::abs(v) < 1e-15 ? 0.0 : v; }

    void check_qubit(int q) const {
        if (q < 0 || q >= qubits_) {
            throw IndexError("qubit " + std::to_string(q) + " out of range for " + std::to_string(qubits_) +
                             " qubits");
        }
    }

    void require_zero(int q, const char *op) const {
        if (probability_one(q) > kAmplitudeTolerance) {
            throw PreconditionError(std::string(op) + ": qubit " + std::to_string(q) + " is not in |0>");
        }
    }

    void collapse(int q, int outcome) {
        log_.push_back({GateKind::measure, q});
        const std::uint64_t bit = std::uint64_t{1} << q;
        double kept = 0.0;
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if (((i & bit) != 0) != (outcome == 1)) {
                amps_[i] = 0.0;
            } else {
                kept += std::norm(amps_[i]);
            }
        }
        if (kept < 1e-300) {
            throw Error("measure: collapsed onto a zero-probability outcome");
        }
        const double scale = 1.0 / std::sqrt(kept);
        for (auto &a : amps_) {
            a *= scale;
        }
    }

    int qubits_;
    std::vector<Amplitude> amps_;
    std::vector<GateRecord> log_;
};

/// Repeated shots from a fixed outcome distribution. Measuring a freshly
/// prepared copy of a state and drawing from its Born distribution are the
/// same experiment; this avoids re-simulating the circuit per shot.
class ShotSampler {
  public:
    explicit ShotSampler(std::vector<double> dist) : cumulative_(std::move(dist)) {
        double acc = 0.0;
        for (auto &p : cumulative_) {
            acc += p;
            p = acc;
        }
        if (acc <= 0.0) {
            throw Error("shot sampler: empty distribution");
        }
        total_ = acc;
    }

    std::uint64_t sample(Rng &rng) const {
        const double u = rng.uniform01() * total_;
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) {
            --it;
        }
        // Skip zero-width cells that upper_bound can land on because of rounding.
        auto idx = static_cast<std::uint64_t>(it - cumulative_.begin());
        while (idx > 0 && cumulative_[idx] == cumulative_[idx - 1]) {
            --idx;
        }
        return idx;
    }

  private:
    std::vector<double> cumulative_;
    double total_ = 0.0;
};

/// Maps (party, register name, position) to global qubit indices. Registers
/// are allocated contiguously in increasing order, so the mapping is a
/// bijection onto 0..total-1 and each register is little-endian.
class RegisterLayout {
  public:
    const Register &add(const std::string &party, const std::string &name, int width) {
        if (width <= 0) {
            throw DimensionError("register width must be positive");
        }
        const auto key = std::make_pair(party, name);
        if (registers_.count(key)) {
            throw IntegrityError("register " + party + "." + name + " already allocated");
        }
        Register reg(static_cast<std::size_t>(width));
        for (int j = 0; j < width; ++j) {
            reg[static_cast<std::size_t>(j)] = total_ + j;
        }
        total_ += width;
        return registers_[key] = std::move(reg);
    }

    const Register &get(const std::string &party, const std::string &name) const {
        auto it = registers_.find(std::make_pair(party, name));
        if (it == registers_.end()) {
            throw IndexError("no register " + party + "." + name);
        }
        return it->second;
    }

    int qubit(const std::string &party, const std::string &name, int position) const {
        const auto &reg = get(party, name);
        if (position < 0 || position >= static_cast<int>(reg.size())) {
            throw IndexError("position " + std::to_string(position) + " out of range for " + party + "." + name);
        }
        return reg[static_cast<std::size_t>(position)];
    }

    int total() const { return total_; }

  private:
    std::map<std::pair<std::string, std::string>, Register> registers_;
    int total_ = 0;
};

}  // namespace qss
