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
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qss/config.hpp"
#include "qss/empirical.hpp"
#include "qss/entangle.hpp"
#include "qss/leakage.hpp"
#include "qss/protocol.hpp"
#include "qss/qsim.hpp"
#include "qss/random.hpp"
#include "qss/stats.hpp"

namespace qss {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

/// Reads QSS_LOG_LEVEL (error, warn, info, debug); warn when unset.
inline LogLevel log_level_from_env() {
    const char *v = std::getenv("QSS_LOG_LEVEL");
    if (v == nullptr) return LogLevel::warn;
    const std::string s(v);
    if (s == "error") return LogLevel::error;
    if (s == "info") return LogLevel::info;
    if (s == "debug") return LogLevel::debug;
    return LogLevel::warn;
}

inline void log(LogLevel level, const std::string &msg) {
    static const LogLevel threshold = log_level_from_env();
    static constexpr const char *names[] = {"error", "warn", "info", "debug"};
    if (level <= threshold) {
        std::fprintf(stderr, "qss: %s: %s\n", names[static_cast<int>(level)], msg.c_str());
    }
}

inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
    return Rng(base).derive("trial", trial).seed();
}

inline std::vector<std::uint8_t> trial_secret(const RunConfig &cfg, std::uint64_t seed) {
    if (auto fixed = cfg.secret()) {
        return *fixed;
    }
    Rng rng = Rng(seed).derive("secret");
    const auto order = static_cast<std::uint64_t>(1) << cfg.protocol.w;
    std::vector<std::uint8_t> out(static_cast<std::size_t>(cfg.protocol.elements()));
    for (auto &e : out) {
        e = static_cast<std::uint8_t>(rng.uniform(order));
    }
    return out;
}

/// One trial of the configured experiment.
inline RunReport run_trial(const RunConfig &cfg, std::uint64_t base_seed, std::uint64_t trial,
                           const DeliveryOptions &delivery = {}) {
    ProtocolConfig protocol = cfg.protocol;
    protocol.seed = trial_seed(base_seed, trial);
    const auto secret = trial_secret(cfg, protocol.seed);
    auto outcome = run_protocol(protocol, secret, cfg.adversary, {base_seed, trial, delivery});
    if (cfg.audit) {
        BitVector other = outcome.aggregate;
        other.flip(0);
        for (int phase : cfg.adversary.eve.phases) {
            LeakageEntry entry{phase, std::nullopt, {}};
            try {
                entry.tv = leakage_audit(cfg.adversary.eve, protocol, phase, outcome.aggregate, other);
                entry.note = "against the secret with bit 0 flipped";
            } catch (const CapacityError &e) {
                entry.note = std::string("skipped: ") + e.what();
            }
            outcome.report.leakage.push_back(entry);
        }
    }
    return outcome.report;
}

/// Runs trials 0..trials-1 in order and hands each report to `sink`.
inline void run_trials(const RunConfig &cfg, std::uint64_t base_seed, int trials,
                       const std::function<void(const RunReport &)> &sink) {
    for (int t = 0; t < trials; ++t) {
        sink(run_trial(cfg, base_seed, static_cast<std::uint64_t>(t)));
    }
}

struct SweepCell {
    std::vector<std::pair<std::string, std::string>> assignment;
    RunConfig config;
};

/// Cartesian product of the sweep axes over the base config. Cells that fail
/// validation are skipped and reported through `warn`.
inline std::vector<SweepCell> expand_sweep(const RunConfig &base,
                                           const std::function<void(const std::string &)> &warn = {}) {
    std::vector<SweepCell> cells;
    std::vector<std::size_t> pick(base.sweep.size(), 0);
    while (true) {
        SweepCell cell{{}, base};
        cell.config.sweep.clear();
        for (std::size_t a = 0; a < base.sweep.size(); ++a) {
            const auto &axis = base.sweep[a];
            cell.assignment.push_back({axis.key, axis.values[pick[a]]});
            set_config_key(cell.config, axis.key, axis.values[pick[a]]);
        }
        try {
            cell.config.validate();
            cells.push_back(std::move(cell));
        } catch (const Error &e) {
            if (warn) {
                std::string where;
                for (const auto &[k, v] : cell.assignment) {
                    where += (where.empty() ? "" : " ") + k + "=" + v;
                }
                warn("skipping cell " + where + ": " + e.what());
            }
        }
        std::size_t a = 0;
        while (a < pick.size() && ++pick[a] == base.sweep[a].values.size()) {
            pick[a++] = 0;
        }
        if (a == pick.size()) {
            break;
        }
    }
    return cells;
}

struct CellResult {
    SweepCell cell;
    std::uint64_t seed = 0;
    EmpiricalStats stats;
    EfficiencyReport eta;
};

/// Cell `index` runs under its own seed derived from the base seed.
inline CellResult run_cell(const SweepCell &cell, std::uint64_t base_seed, std::uint64_t index, int trials) {
    CellResult out{cell, Rng(base_seed).derive("cell", index).seed(), {}, EfficiencyReport::of(cell.config.protocol.n, cell.config.protocol.m)};
    std::vector<RunReport> reports;
    reports.reserve(static_cast<std::size_t>(trials));
    run_trials(cell.config, out.seed, trials, [&](const RunReport &r) { reports.push_back(r); });
    out.stats = empirical_stats(reports);
    return out;
}

// ---------------------------------------------------------------------------
// Sampler against statevector

struct OracleCheckCase {
    BitVector secret;
    std::uint64_t oracle_violations = 0;
    std::uint64_t sampler_violations = 0;
    ChiSquareResult chi;
};

struct OracleCheckResult {
    int n = 0;
    int m = 0;
    std::uint64_t shots = 0;
    std::vector<OracleCheckCase> cases;

    static constexpr double kMinP = 0.001;

    std::uint64_t violations() const {
        std::uint64_t v = 0;
        for (const auto &c : cases) {
            v += c.oracle_violations + c.sampler_violations;
        }
        return v;
    }

    double min_p() const {
        double p = 1.0;
        for (const auto &c : cases) {
            p = std::min(p, c.chi.p_value);
        }
        return p;
    }

    bool pass() const { return violations() == 0 && min_p() > kMinP; }
};

/// Register XOR of one distribution outcome; bit t*p + j is register t
/// position j.
inline BitVector outcome_xor(std::uint64_t index, int registers, int p) {
    BitVector acc(static_cast<std::size_t>(p));
    for (int t = 0; t < registers; ++t) {
        for (int j = 0; j < p; ++j) {
            if (index >> (t * p + j) & 1u) {
                acc.flip(static_cast<std::size_t>(j));
            }
        }
    }
    return acc;
}

/// Draws `shots` distribution-phase outcomes from each backing for one secret
/// and compares them.
inline OracleCheckCase oracle_check_case(int n, int m, const BitVector &s, std::uint64_t shots, const Rng &rng) {
    const int p = n * m;
    const int r = n + 1;
    auto batch = EntangledBatch::distribute(r, p, Backing::oracle, {0});
    batch.apply_oracle(0, s);
    const ShotSampler sampler(batch.final_distribution());
    const std::size_t cells = std::size_t{1} << (r * p);
    std::vector<std::uint64_t> oracle_counts(cells, 0);
    std::vector<std::uint64_t> sampler_counts(cells, 0);
    OracleCheckCase out;
    out.secret = s;
    Rng oracle_rng = rng.derive("oracle-shots");
    Rng sampler_rng = rng.derive("sampler-shots");
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const auto idx = sampler.sample(oracle_rng);
        ++oracle_counts[idx];
        out.oracle_violations += outcome_xor(idx, r, p) == s ? 0 : 1;

        const auto t = sample_idpqc_outcomes(s, static_cast<std::size_t>(n), static_cast<std::size_t>(m), sampler_rng);
        std::uint64_t key = t.a.to_uint();
        for (int i = 0; i < n; ++i) {
            key |= t.b[static_cast<std::size_t>(i)].to_uint() << ((i + 1) * p);
        }
        ++sampler_counts[key];
        out.sampler_violations += outcome_xor(key, r, p) == s ? 0 : 1;
    }
    out.chi = chi_square_two_sample(oracle_counts, sampler_counts);
    return out;
}

inline OracleCheckResult oracle_check(int n, int m, std::uint64_t shots, int secrets, std::uint64_t seed) {
    if (n < 2 || m < 1) {
        throw ConfigError("oracle-check: need n >= 2 and m >= 1");
    }
    const int needed = (n + 1) * n * m + 1;
    if (needed > kMaxQubits) {
        throw CapacityError("oracle-check: n=" + std::to_string(n) + " m=" + std::to_string(m) + " needs " +
                            std::to_string(needed) + " qubits, capacity is " + std::to_string(kMaxQubits));
    }
    OracleCheckResult out{n, m, shots, {}};
    const Rng root(seed);
    for (int c = 0; c < secrets; ++c) {
        Rng secret_rng = root.derive("secret", static_cast<std::uint64_t>(c));
        const auto s = BitVector::random(static_cast<std::size_t>(n * m), secret_rng);
        out.cases.push_back(oracle_check_case(n, m, s, shots, root.derive("case", static_cast<std::uint64_t>(c))));
    }
    return out;
}

}  // namespace qss
