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

#include <string>
#include <vector>

#include "qss/bitvec.hpp"

namespace qss {

/// Protocol participant. Agents are 0..n-1; Alice and the entanglement
/// source take negative ids.
struct Party {
    int id;

    static constexpr Party alice() { return Party{-1}; }
    static constexpr Party source() { return Party{-2}; }
    static constexpr Party bob(int i) { return Party{i}; }

    bool is_agent() const { return id >= 0; }

    std::string name() const {
        if (id == -1) return "alice";
        if (id == -2) return "source";
        return "bob" + std::to_string(id);
    }

    friend bool operator==(const Party &, const Party &) = default;
    friend auto operator<=>(const Party &, const Party &) = default;
};

enum class RoundKind { quantum, classical };

struct Message {
    int phase = 0;
    Party sender{0};
    Party receiver{0};
    /// Classical payload; empty for quantum transmissions.
    BitVector payload;
    std::string tag;
    /// Qubits carried, quantum transmissions only (decoys included).
    int qubits = 0;
};

/// Messages of one round have no order among themselves.
struct Round {
    int phase = 0;
    RoundKind kind = RoundKind::classical;
    std::vector<Message> messages;
};

struct Transcript {
    std::vector<Round> rounds;

    int count(int phase, RoundKind kind) const {
        int c = 0;
        for (const auto &r : rounds) {
            c += (r.phase == phase && r.kind == kind) ? 1 : 0;
        }
        return c;
    }

    void append(const Transcript &other) { rounds.insert(rounds.end(), other.rounds.begin(), other.rounds.end()); }
};

}  // namespace qss
