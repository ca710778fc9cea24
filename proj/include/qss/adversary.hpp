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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qss/bitvec.hpp"
#include "qss/entangle.hpp"
#include "qss/error.hpp"
#include "qss/random.hpp"
#include "qss/transcript.hpp"

namespace qss {

enum class EveKind { none, measure_resend, intercept_resend, entangle_measure, pns };

inline const char *to_string(EveKind k) {
    switch (k) {
        case EveKind::none: return "none";
        case EveKind::measure_resend: return "measure_resend";
        case EveKind::intercept_resend: return "intercept_resend";
        case EveKind::entangle_measure: return "entangle_measure";
        case EveKind::pns: return "pns";
    }
    return "?";
}

enum class InterceptBasis { computational, random };

struct EveStrategy {
    EveKind kind = EveKind::none;
    /// Basis intercept_resend measures in; random picks per qubit.
    InterceptBasis basis = InterceptBasis::computational;
    std::set<int> phases{1, 2, 3};
    /// Receivers whose incoming quantum channels are tapped; empty means all.
    std::vector<std::string> channels;
    /// Whether Eve applies H to her entangled ancillas before reading them.
    bool final_hadamard = true;

    /// A split-off photon is an extra entangled copy, so PNS behaves exactly
    /// like entangle_measure.
    EveKind effective_kind() const { return kind == EveKind::pns ? EveKind::entangle_measure : kind; }

    bool active_in(int phase) const { return kind != EveKind::none && phases.count(phase) > 0; }

    bool targets(const std::string &receiver) const {
        return channels.empty() || std::find(channels.begin(), channels.end(), receiver) != channels.end();
    }
};

enum class RogueAction { lie_phase1_comms, lie_phase2_report, lie_phase3_oracle, lie_phase3_report };

inline const char *to_string(RogueAction a) {
    switch (a) {
        case RogueAction::lie_phase1_comms: return "lie_phase1_comms";
        case RogueAction::lie_phase2_report: return "lie_phase2_report";
        case RogueAction::lie_phase3_oracle: return "lie_phase3_oracle";
        case RogueAction::lie_phase3_report: return "lie_phase3_report";
    }
    return "?";
}

/// How a lying agent replaces a payload.
enum class LieMode {
    /// flip one bit (index flip_bit, wrapped to the payload length)
    bit_flip,
    /// fresh uniformly random vector
    random,
    /// payload XOR a fixed nonzero mask, so the same lie reaches everyone
    fixed,
};

inline const char *to_string(LieMode m) {
    switch (m) {
        case LieMode::bit_flip: return "bit_flip";
        case LieMode::random: return "random";
        case LieMode::fixed: return "fixed";
    }
    return "?";
}

struct RogueBehavior {
    std::vector<int> agents;
    std::set<RogueAction> actions;
    LieMode mode = LieMode::random;
    int flip_bit = 0;
    /// Mask for LieMode::fixed, repeated cyclically to the payload length.
    /// All-ones when unset.
    std::optional<BitVector> mask;

    bool is_rogue(int agent) const { return std::find(agents.begin(), agents.end(), agent) != agents.end(); }

    bool does(int agent, RogueAction action) const { return is_rogue(agent) && actions.count(action) > 0; }
};

struct AdversaryPlan {
    EveStrategy eve;
    RogueBehavior rogues;

    /// At least k agents must stay loyal.
    void validate(int n, int k) const {
        std::set<int> distinct(rogues.agents.begin(), rogues.agents.end());
        if (distinct.size() != rogues.agents.size()) {
            throw ConfigError("adversary.rogue.agents lists an agent twice");
        }
        for (int a : rogues.agents) {
            if (a < 0 || a >= n) {
                throw ConfigError("adversary.rogue.agents: agent " + std::to_string(a) + " out of range for n=" +
                                  std::to_string(n));
            }
        }
        if (static_cast<int>(rogues.agents.size()) > n - k) {
            throw ConfigError("adversary.rogue.agents: " + std::to_string(rogues.agents.size()) +
                              " rogues exceeds n-k=" + std::to_string(n - k));
        }
        if (rogues.mask && rogues.mask->none()) {
            throw ConfigError("adversary.rogue.mask must be nonzero");
        }
    }
};

/// Applies the strategy to every slot of one channel, payload and decoy
/// alike, since Eve cannot tell them apart.
inline void tap_channel(const EveStrategy &strategy, Transmission &tx, Rng &rng) {
    const EveKind kind = strategy.effective_kind();
    if (kind == EveKind::none) {
        return;
    }
    auto &channel = tx.plan.channels.at(static_cast<std::size_t>(tx.channel));
    if (!strategy.targets(channel.receiver)) {
        return;
    }
    tx.batch.set_eve_final_hadamard(strategy.final_hadamard);
    for (const auto &slot : channel.slots) {
        bool hadamard = false;
        if (kind == EveKind::intercept_resend && strategy.basis == InterceptBasis::random) {
            hadamard = rng.bit() == 1;
        }
        if (slot.kind == SlotKind::payload) {
            switch (kind) {
                case EveKind::measure_resend: tx.batch.intercept_computational(channel.register_index, slot.index, rng); break;
                case EveKind::intercept_resend:
                    if (hadamard) {
                        tx.batch.intercept_hadamard(channel.register_index, slot.index, rng);
                    } else {
                        tx.batch.intercept_computational(channel.register_index, slot.index, rng);
                    }
                    break;
                case EveKind::entangle_measure: tx.batch.entangle_ancilla(channel.register_index, slot.index); break;
                default: break;
            }
            continue;
        }
        auto &qubit = tx.plan.decoy_qubits.at(static_cast<std::size_t>(slot.index));
        switch (kind) {
            case EveKind::measure_resend: qubit.measure_qubit(0, rng); break;
            case EveKind::intercept_resend:
                if (hadamard) {
                    qubit.measure_hadamard_basis(0, rng);
                    qubit.apply_h(0);
                } else {
                    qubit.measure_qubit(0, rng);
                }
                break;
            case EveKind::entangle_measure: {
                const int anc = qubit.add_qubit();
                qubit.apply_cnot(0, anc);
                break;
            }
            default: break;
        }
    }
}

/// Replaces the payload of a message the behavior says its sender lies in.
/// `rng` should be keyed by the message so delivery order cannot matter.
inline Message rogue_transform(const RogueBehavior &behavior, RogueAction action, Message message, Rng &rng) {
    if (!message.sender.is_agent() || !behavior.does(message.sender.id, action) || message.payload.empty()) {
        return message;
    }
    auto &payload = message.payload;
    switch (behavior.mode) {
        case LieMode::bit_flip: {
            const auto bit = static_cast<std::size_t>(std::max(0, behavior.flip_bit)) % payload.size();
            payload.flip(bit);
            break;
        }
        case LieMode::random: payload = BitVector::random(payload.size(), rng); break;
        case LieMode::fixed: {
            BitVector mask = BitVector::ones(payload.size());
            if (behavior.mask) {
                for (std::size_t k = 0; k < payload.size(); ++k) {
                    mask.set(k, behavior.mask->get(k % behavior.mask->size()));
                }
            }
            payload ^= mask;
            break;
        }
    }
    return message;
}

}  // namespace qss
