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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qss/bitvec.hpp"
#include "qss/error.hpp"
#include "qss/qsim.hpp"
#include "qss/random.hpp"

namespace qss {

enum class Backing { oracle, sampler };

inline const char *to_string(Backing b) { return b == Backing::oracle ? "oracle" : "sampler"; }

enum class TapBasis { computational, hadamard };

/// What an interceptor learned from one qubit in transit. For sampled batches
/// hadamard-basis values are only known once the batch is measured.
struct TapRecord {
    int register_index;
    int position;
    TapBasis basis;
    int value = 0;
};

/// Measured contents of a distributed batch.
struct BatchOutcome {
    std::vector<BitVector> registers;
    /// Eve's ancilla register (one qubit per tuple she entangled with), zero
    /// where she did not attach.
    BitVector eve;
    BitVector eve_attached;
    std::vector<TapRecord> taps;
};

/// r registers of p qubits where position j of every register belongs to one
/// GHZ_r tuple (Phi+ when r = 2).
///
/// Oracle backing keeps the full state vector. Sampler backing keeps only the
/// per-position bookkeeping needed to reproduce the outcome statistics: the
/// phase each register's oracle contributes, which tuples an interceptor
/// collapsed, which qubits were hadamard-measured in transit, and where an
/// ancilla was entangled in.
class EntangledBatch {
  public:
    /// `output_registers` lists the registers whose holder owns a |->
    /// output qubit for a phase oracle (oracle backing only allocates them).
    static EntangledBatch distribute(int r, int p, Backing backing, std::vector<int> output_registers = {}) {
        if (r < 2 || p < 1) {
            throw DimensionError("distribute: need r >= 2 registers and p >= 1 positions");
        }
        EntangledBatch batch(r, p, backing);
        batch.outputs_.assign(static_cast<std::size_t>(r), -1);
        for (int reg : output_registers) {
            batch.check_register(reg);
        }
        if (backing == Backing::oracle) {
            const int needed = r * p + static_cast<int>(output_registers.size());
            if (needed > kMaxQubits) {
                throw CapacityError("distribute: oracle backing needs " + std::to_string(needed) +
                                    " qubits, capacity is " + std::to_string(kMaxQubits));
            }
            batch.state_.emplace(needed);
            RegisterLayout layout;
            for (int t = 0; t < r; ++t) {
                batch.regs_.push_back(layout.add("holder" + std::to_string(t), "input", p));
            }
            for (int reg : output_registers) {
                const int q = layout.add("holder" + std::to_string(reg), "output", 1)[0];
                batch.outputs_[static_cast<std::size_t>(reg)] = q;
                batch.state_->prepare_basis(BasisLabel::minus, q);
            }
            for (int j = 0; j < p; ++j) {
                std::vector<int> tuple;
                for (int t = 0; t < r; ++t) {
                    tuple.push_back(batch.regs_[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)]);
                }
                batch.state_->prepare_ghz(tuple);
            }
            batch.eve_qubit_.assign(static_cast<std::size_t>(p), -1);
        } else {
            for (int reg : output_registers) {
                batch.outputs_[static_cast<std::size_t>(reg)] = 0;
            }
        }
        return batch;
    }

    int registers() const { return r_; }
    int positions() const { return p_; }
    Backing backing() const { return backing_; }

    /// Oracle backing only.
    const StateVector &state() const {
        require_oracle("state");
        return *state_;
    }
    const Register &register_qubits(int reg) const {
        require_oracle("register_qubits");
        check_register(reg);
        return regs_[static_cast<std::size_t>(reg)];
    }

    /// The holder of `reg` applies U_c to it via its |-> output qubit.
    void apply_oracle(int reg, const BitVector &c) {
        check_register(reg);
        if (c.size() != static_cast<std::size_t>(p_)) {
            throw DimensionError("apply_oracle: vector length " + std::to_string(c.size()) +
                                 " vs register width " + std::to_string(p_));
        }
        if (outputs_[static_cast<std::size_t>(reg)] < 0) {
            throw PreconditionError("apply_oracle: register " + std::to_string(reg) + " has no output qubit");
        }
        if (backing_ == Backing::oracle) {
            state_->apply_phase_oracle(c, regs_[static_cast<std::size_t>(reg)],
                                       outputs_[static_cast<std::size_t>(reg)]);
        } else {
            phase_[static_cast<std::size_t>(reg)] ^= c;
        }
    }

    /// Computational-basis measurement of a qubit in transit; the collapsed
    /// qubit (equivalently a fresh ket matching the outcome) travels on.
    int intercept_computational(int reg, int pos, Rng &rng) {
        check_slot(reg, pos);
        int value;
        if (backing_ == Backing::oracle) {
            value = state_->measure_qubit(qubit(reg, pos), rng);
        } else {
            collapsed_.set(static_cast<std::size_t>(pos), true);
            value = rng.bit();
        }
        taps_.push_back({reg, pos, TapBasis::computational, value});
        return value;
    }

    /// Hadamard-basis measurement in transit; a fresh |+> or |-> matching the
    /// outcome travels on.
    void intercept_hadamard(int reg, int pos, Rng &rng) {
        check_slot(reg, pos);
        int value = 0;
        if (backing_ == Backing::oracle) {
            const int q = qubit(reg, pos);
            value = state_->measure_hadamard_basis(q, rng);
            state_->apply_h(q);
        } else {
            xtapped_[static_cast<std::size_t>(reg)].set(static_cast<std::size_t>(pos), true);
        }
        taps_.push_back({reg, pos, TapBasis::hadamard, value});
    }

    /// CNOTs the passing qubit into a fresh ancilla, turning the tuple into
    /// GHZ_{r+1}. At most one ancilla per tuple; later calls at the same
    /// position are no-ops.
    void entangle_ancilla(int reg, int pos) {
        check_slot(reg, pos);
        const auto j = static_cast<std::size_t>(pos);
        if (backing_ == Backing::oracle) {
            if (eve_qubit_[j] >= 0) {
                return;
            }
            const int anc = state_->add_qubit();
            state_->apply_cnot(qubit(reg, pos), anc);
            eve_qubit_[j] = anc;
        } else {
            eve_attached_.set(j, true);
        }
    }

    /// Basis Eve measures her ancillas in at the end: true applies H first.
    void set_eve_final_hadamard(bool on) { eve_hadamard_ = on; }

    /// All holders apply H to their registers; Eve measures her ancillas.
    BatchOutcome measure_all(Rng &rng) {
        BatchOutcome out;
        out.eve = BitVector(static_cast<std::size_t>(p_));
        out.eve_attached = BitVector(static_cast<std::size_t>(p_));
        if (backing_ == Backing::oracle) {
            for (const auto &reg : regs_) {
                state_->apply_h_register(reg);
            }
            for (const auto &reg : regs_) {
                out.registers.push_back(state_->measure_register(reg, rng));
            }
            for (int j = 0; j < p_; ++j) {
                const int anc = eve_qubit_[static_cast<std::size_t>(j)];
                if (anc < 0) {
                    continue;
                }
                out.eve_attached.set(static_cast<std::size_t>(j), true);
                if (eve_hadamard_) {
                    state_->apply_h(anc);
                }
                out.eve.set(static_cast<std::size_t>(j), state_->measure_qubit(anc, rng) == 1);
            }
            out.taps = taps_;
        } else {
            out = sample_symbolic(rng);
        }
        return out;
    }

    /// Oracle backing: Hadamard layer, then the exact joint distribution of
    /// all register outcomes, index bit t*p + j for register t position j.
    std::vector<double> final_distribution() {
        require_oracle("final_distribution");
        for (const auto &reg : regs_) {
            state_->apply_h_register(reg);
        }
        std::vector<int> all;
        for (const auto &reg : regs_) {
            all.insert(all.end(), reg.begin(), reg.end());
        }
        return state_->register_distribution(all);
    }

  private:
    EntangledBatch(int r, int p, Backing backing)
        : backing_(backing),
          r_(r),
          p_(p),
          phase_(static_cast<std::size_t>(r), BitVector(static_cast<std::size_t>(p))),
          xtapped_(static_cast<std::size_t>(r), BitVector(static_cast<std::size_t>(p))),
          collapsed_(static_cast<std::size_t>(p)),
          eve_attached_(static_cast<std::size_t>(p)) {}

    // Draws every register uniformly, then solves one uniformly chosen
    // register from the XOR constraint at the positions where the tuple is
    // still coherent. Collapsed positions stay independent and uniform.
    BatchOutcome sample_symbolic(Rng &rng) {
        const auto p = static_cast<std::size_t>(p_);
        BatchOutcome out;
        BitVector total_phase(p);
        for (const auto &ph : phase_) {
            total_phase ^= ph;
        }
        for (int t = 0; t < r_; ++t) {
            out.registers.push_back(BitVector::random(p, rng));
        }
        out.eve_attached = eve_attached_;
        out.eve = BitVector::random(p, rng) & eve_attached_;
        BitVector incoherent = collapsed_;
        if (!eve_hadamard_) {
            // Eve's computational readout of her tuple member decoheres it.
            incoherent |= eve_attached_;
        }
        const auto solved = static_cast<std::size_t>(rng.uniform(static_cast<std::uint64_t>(r_)));
        BitVector acc = total_phase;
        for (std::size_t t = 0; t < out.registers.size(); ++t) {
            if (t != solved) {
                acc ^= out.registers[t];
            }
        }
        acc ^= out.eve & ~incoherent;
        out.registers[solved] = (acc & ~incoherent) | (out.registers[solved] & incoherent);
        out.taps = taps_;
        for (auto &tap : out.taps) {
            if (tap.basis == TapBasis::hadamard) {
                const auto t = static_cast<std::size_t>(tap.register_index);
                const auto j = static_cast<std::size_t>(tap.position);
                tap.value = (out.registers[t].get(j) ? 1 : 0) ^ (phase_[t].get(j) ? 1 : 0);
            }
        }
        return out;
    }

    int qubit(int reg, int pos) const {
        return regs_[static_cast<std::size_t>(reg)][static_cast<std::size_t>(pos)];
    }

    void check_register(int reg) const {
        if (reg < 0 || reg >= r_) {
            throw IndexError("register " + std::to_string(reg) + " out of range for " + std::to_string(r_));
        }
    }

    void check_slot(int reg, int pos) const {
        check_register(reg);
        if (pos < 0 || pos >= p_) {
            throw IndexError("position " + std::to_string(pos) + " out of range for " + std::to_string(p_));
        }
    }

    void require_oracle(const char *op) const {
        if (backing_ != Backing::oracle) {
            throw PreconditionError(std::string(op) + ": only available with oracle backing");
        }
    }

    Backing backing_;
    int r_;
    int p_;
    std::vector<int> outputs_;
    std::vector<TapRecord> taps_;
    bool eve_hadamard_ = true;

    // oracle
    std::optional<StateVector> state_;
    std::vector<Register> regs_;
    std::vector<int> eve_qubit_;

    // sampler
    std::vector<BitVector> phase_;
    std::vector<BitVector> xtapped_;
    BitVector collapsed_;
    BitVector eve_attached_;
};

/// Outcome of the distribution circuit: Alice's register a and the agents'
/// registers b_0..b_{n-1}, optionally Eve's ancilla register.
struct OutcomeTuple {
    BitVector a;
    std::vector<BitVector> b;
    std::optional<BitVector> e;
};

/// Uniform over all (a, b_0..b_{n-1}) with a ^ b_{n-1} ^ ... ^ b_0 = s.
inline OutcomeTuple sample_idpqc_outcomes(const BitVector &s, std::size_t n, std::size_t m, Rng &rng) {
    if (n == 0 || m == 0 || s.size() != n * m) {
        throw DimensionError("sample_idpqc_outcomes: secret length " + std::to_string(s.size()) +
                             " is not n*m");
    }
    const int p = static_cast<int>(n * m);
    auto batch = EntangledBatch::distribute(static_cast<int>(n) + 1, p, Backing::sampler, {0});
    batch.apply_oracle(0, s);
    auto outcome = batch.measure_all(rng);
    OutcomeTuple tuple;
    tuple.a = std::move(outcome.registers[0]);
    for (std::size_t i = 0; i < n; ++i) {
        tuple.b.push_back(std::move(outcome.registers[i + 1]));
    }
    return tuple;
}

/// Uniform over pairs (b_i, b_j) with b_i ^ b_j = s_i ^ s_j.
inline std::pair<BitVector, BitVector> sample_icpqc_outcomes(const BitVector &s_i, const BitVector &s_j, Rng &rng) {
    s_i.require_same_size(s_j, "sample_icpqc_outcomes");
    if (s_i.empty()) {
        throw DimensionError("sample_icpqc_outcomes: empty vectors");
    }
    auto batch = EntangledBatch::distribute(2, static_cast<int>(s_i.size()), Backing::sampler, {0, 1});
    batch.apply_oracle(0, s_i);
    batch.apply_oracle(1, s_j);
    auto outcome = batch.measure_all(rng);
    return {std::move(outcome.registers[0]), std::move(outcome.registers[1])};
}

// ---------------------------------------------------------------------------
// Decoys and transmission plans

enum class SlotKind { payload, decoy };

struct Slot {
    SlotKind kind;
    /// Payload: tuple position. Decoy: index into TransmissionPlan::decoy_qubits.
    int index;
};

/// One register's journey from the source to its holder.
struct Channel {
    std::string name;
    /// Party the register is delivered to, e.g. "bob2".
    std::string receiver;
    int register_index;
    std::vector<Slot> slots;
};

struct TransmissionPlan {
    std::vector<Channel> channels;
    std::vector<StateVector> decoy_qubits;
    /// Label printed for payload slots ("ghz" or "phi+").
    std::string payload_label = "ghz";

    /// "channel, slot, kind, state-label" per line. Decoy labels are the
    /// states as prepared, which only the source knows.
    std::string dump(std::span<const BasisLabel> decoy_states = {}) const {
        std::string out;
        for (const auto &ch : channels) {
            for (std::size_t k = 0; k < ch.slots.size(); ++k) {
                const auto &slot = ch.slots[k];
                out += ch.name + ", " + std::to_string(k) + ", ";
                if (slot.kind == SlotKind::payload) {
                    out += "payload, " + payload_label + "\n";
                } else {
                    const auto idx = static_cast<std::size_t>(slot.index);
                    out += "decoy, ";
                    out += idx < decoy_states.size() ? to_string(decoy_states[idx]) : "?";
                    out += "\n";
                }
            }
        }
        return out;
    }
};

/// Private to the source until verification.
struct DecoyRecord {
    int channel;
    int slot;
    BasisLabel state;
};

struct DecoySpec {
    int count_per_channel = 16;
};

struct ExtendedPlan {
    TransmissionPlan plan;
    std::vector<DecoyRecord> records;

    std::vector<BasisLabel> decoy_states() const {
        std::vector<BasisLabel> states(records.size());
        for (std::size_t k = 0; k < records.size(); ++k) {
            states[k] = records[k].state;
        }
        return states;
    }
};

struct ChannelSpec {
    std::string name;
    std::string receiver;
    int register_index;
};

/// Builds the transmitted sequence of each channel: the batch's p payload
/// qubits in order with d decoys interleaved at uniformly random slots, each
/// decoy uniformly one of |0>, |1>, |+>, |->.
inline ExtendedPlan insert_decoys(const EntangledBatch &batch, std::span<const ChannelSpec> channels,
                                  const DecoySpec &spec, Rng &rng) {
    if (spec.count_per_channel < 0) {
        throw DimensionError("insert_decoys: negative decoy count");
    }
    ExtendedPlan ext;
    ext.plan.payload_label = batch.registers() == 2 ? "phi+" : "ghz";
    const int p = batch.positions();
    const int d = spec.count_per_channel;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        Channel ch{channels[c].name, channels[c].receiver, channels[c].register_index, {}};
        std::vector<bool> is_decoy(static_cast<std::size_t>(p + d), false);
        std::fill(is_decoy.begin() + p, is_decoy.end(), true);
        rng.shuffle(is_decoy.begin(), is_decoy.end());
        int next_payload = 0;
        for (std::size_t k = 0; k < is_decoy.size(); ++k) {
            if (!is_decoy[k]) {
                ch.slots.push_back({SlotKind::payload, next_payload++});
                continue;
            }
            const auto state = static_cast<BasisLabel>(rng.uniform(4));
            StateVector qubit(1);
            qubit.prepare_basis(state, 0);
            const int idx = static_cast<int>(ext.plan.decoy_qubits.size());
            ext.plan.decoy_qubits.push_back(std::move(qubit));
            ext.records.push_back({static_cast<int>(c), static_cast<int>(k), state});
            ch.slots.push_back({SlotKind::decoy, idx});
        }
        ext.plan.channels.push_back(std::move(ch));
    }
    return ext;
}

struct DecoyVerdict {
    int mismatch_count = 0;
    std::vector<int> mismatches_per_channel;
    bool abort = false;
};

/// Measures every decoy in its preparation basis. Any wrong result aborts.
inline DecoyVerdict verify_decoys(TransmissionPlan &plan, std::span<const DecoyRecord> records, Rng &rng) {
    DecoyVerdict verdict;
    verdict.mismatches_per_channel.assign(plan.channels.size(), 0);
    std::size_t decoy_slots = 0;
    for (const auto &ch : plan.channels) {
        for (const auto &slot : ch.slots) {
            decoy_slots += slot.kind == SlotKind::decoy ? 1 : 0;
        }
    }
    if (decoy_slots != records.size() || plan.decoy_qubits.size() != records.size()) {
        throw IntegrityError("verify_decoys: " + std::to_string(records.size()) + " records for " +
                             std::to_string(decoy_slots) + " decoy slots");
    }
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto &rec = records[k];
        if (rec.channel < 0 || static_cast<std::size_t>(rec.channel) >= plan.channels.size()) {
            throw IntegrityError("verify_decoys: record names unknown channel " + std::to_string(rec.channel));
        }
        const auto &slots = plan.channels[static_cast<std::size_t>(rec.channel)].slots;
        if (rec.slot < 0 || static_cast<std::size_t>(rec.slot) >= slots.size() ||
            slots[static_cast<std::size_t>(rec.slot)].kind != SlotKind::decoy) {
            throw IntegrityError("verify_decoys: record points at a non-decoy slot " + std::to_string(rec.slot) +
                                 " on channel " + std::to_string(rec.channel));
        }
        auto &qubit = plan.decoy_qubits.at(static_cast<std::size_t>(slots[static_cast<std::size_t>(rec.slot)].index));
        const int got = is_hadamard_basis(rec.state) ? qubit.measure_hadamard_basis(0, rng) : qubit.measure_qubit(0, rng);
        if (got != eigen_bit(rec.state)) {
            ++verdict.mismatch_count;
            ++verdict.mismatches_per_channel[static_cast<std::size_t>(rec.channel)];
        }
    }
    verdict.abort = verdict.mismatch_count > 0;
    return verdict;
}

/// What a channel hook gets to act on: one channel of one batch.
struct Transmission {
    EntangledBatch &batch;
    TransmissionPlan &plan;
    int channel;
};

using ChannelTap = std::function<void(Transmission &)>;

/// Sends every channel of the plan; the hook sees each exactly once.
inline void transmit(EntangledBatch &batch, TransmissionPlan &plan, const ChannelTap &tap) {
    if (!tap) {
        return;
    }
    for (std::size_t c = 0; c < plan.channels.size(); ++c) {
        Transmission t{batch, plan, static_cast<int>(c)};
        tap(t);
    }
}

}  // namespace qss
