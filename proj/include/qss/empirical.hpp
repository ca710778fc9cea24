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

#include <cstdint>
#include <span>
#include <string>

#include "qss/error.hpp"
#include "qss/metrics.hpp"
#include "qss/protocol.hpp"

namespace qss {

struct EmpiricalStats {
    std::string config_hash;
    std::uint64_t runs = 0;
    Proportion abort;
    /// Runs in which some decoy check found tampering.
    Proportion detection;
    /// Loyal agents decoding the true secret, over Proceed runs.
    Proportion recovery;
    /// Loyal agents whose decode was ambiguous, over Proceed runs.
    Proportion ambiguity;
};

inline EmpiricalStats empirical_stats(std::span<const RunReport> reports) {
    if (reports.empty()) {
        throw PreconditionError("empirical_stats: empty batch");
    }
    EmpiricalStats out;
    out.config_hash = reports.front().config_hash;
    out.runs = reports.size();
    std::uint64_t aborts = 0;
    std::uint64_t detected = 0;
    std::uint64_t loyal = 0;
    std::uint64_t correct = 0;
    std::uint64_t ambiguous = 0;
    for (const auto &r : reports) {
        if (r.config_hash != out.config_hash) {
            throw ConfigError("empirical_stats: mixed configs " + out.config_hash + " and " + r.config_hash);
        }
        aborts += r.proceed ? 0 : 1;
        detected += r.detections.empty() ? 0 : 1;
        if (!r.proceed) {
            continue;
        }
        for (const auto &a : r.agents) {
            if (!a.loyal) {
                continue;
            }
            ++loyal;
            correct += a.correct ? 1 : 0;
            ambiguous += a.ambiguous ? 1 : 0;
        }
    }
    out.abort = wilson(aborts, out.runs);
    out.detection = wilson(detected, out.runs);
    out.recovery = wilson(correct, loyal);
    out.ambiguity = wilson(ambiguous, loyal);
    return out;
}

}  // namespace qss
