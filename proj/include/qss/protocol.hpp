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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qss/adversary.hpp"
#include "qss/bitvec.hpp"
#include "qss/entangle.hpp"
#include "qss/error.hpp"
#include "qss/metrics.hpp"
#include "qss/qsim.hpp"
#include "qss/random.hpp"
#include "qss/threshold.hpp"
#include "qss/transcript.hpp"

namespace qss {

/// Who prepares the entangled tuples and sends them out.
enum class Source {
    /// Alice in the distribution and verification phases; the lower-indexed
    /// agent of each pair in consolidation.
    alice,
    /// An independent source sends every register, Alice's included.
    third_party,
};

inline const char *to_string(Source s) { return s == Source::alice ? "alice" : "third_party"; }

struct ProtocolConfig {
    int n = 5;
    int k = 3;
    /// Segment width in bits; one segment carries one agent's share.
    int m = 16;
    /// Field width of the sharing layer.
    int w = 8;
    Backing backing = Backing::sampler;
    DecoySpec decoys;
    Source source = Source::alice;
    std::uint64_t seed = 1;

    SplitConfig split_config() const { return {k, n, w}; }

    /// Checks what the quantum phases need on their own.
    void validate_shape() const {
        if (n < 2) {
            throw ConfigError("protocol.n must be at least 2, got " + std::to_string(n));
        }
        if (k < 2 || k > n || 2 * k <= n) {
            throw ConfigError("protocol.k must satisfy n/2 < k <= n, got k=" + std::to_string(k) +
                              " n=" + std::to_string(n));
        }
        if (m < 1) {
            throw ConfigError("protocol.m must be at least 1, got " + std::to_string(m));
        }
        if (decoys.count_per_channel < 0) {
            throw ConfigError("protocol.decoys must be nonnegative");
        }
    }

    /// Full check, including that a segment holds whole field elements.
    void validate() const {
        validate_shape();
        split_config().validate();
        if (m % w != 0) {
            throw ConfigError("protocol.m=" + std::to_string(m) + " is not a multiple of protocol.w=" +
                              std::to_string(w));
        }
    }

    int elements() const { return m / w; }
};

/// Qubits the oracle backing holds for one phase, Eve's ancillas included.
inline int oracle_qubits(const ProtocolConfig &cfg, const EveStrategy &eve, int phase) {
    const bool entangles = eve.active_in(phase) && eve.effective_kind() == EveKind::entangle_measure;
    const int nm = cfg.n * cfg.m;
    switch (phase) {
        case 1: return (cfg.n + 1) * nm + 1 + (entangles ? nm : 0);
        case 2: return (cfg.n + 1) * nm + cfg.n + (entangles ? nm : 0);
        case 3: return 2 * cfg.m + 2 + (entangles ? cfg.m : 0);
        default: throw IndexError("no phase " + std::to_string(phase));
    }
}

inline void check_oracle_capacity(const ProtocolConfig &cfg, const EveStrategy &eve, int phase) {
    if (cfg.backing != Backing::oracle) {
        return;
    }
    const int needed = oracle_qubits(cfg, eve, phase);
    if (needed > kMaxQubits) {
        throw CapacityError("oracle backing: phase " + std::to_string(phase) + " needs " + std::to_string(needed) +
                            " qubits, capacity is " + std::to_string(kMaxQubits));
    }
}

/// A decoy check that found tampering.
struct Detection {
    int phase = 0;
    std::string channel;
    int mismatches = 0;
    int decoys = 0;
};

struct AbortInfo {
    int phase = 0;
    std::string cause;
};

struct DeliveryOptions {
    /// Nonzero: messages of every classical round are shuffled with this seed
    /// before delivery.
    std::uint64_t shuffle_seed = 0;
};

namespace detail {

struct QuantumLeg {
    Party sender;
    Party receiver;
    int register_index;
};

struct QuantumStage {
    std::vector<Detection> detections;
    bool abort = false;
};

// Sends the legs of one batch with decoys mixed in, lets Eve act, and has
// each receiver check its decoys.
inline QuantumStage send_batch(int phase, EntangledBatch &batch, const std::vector<QuantumLeg> &legs,
                               const ProtocolConfig &cfg, const EveStrategy &eve, const Rng &rng, Round &round) {
    std::vector<ChannelSpec> specs;
    for (const auto &leg : legs) {
        specs.push_back({leg.sender.name() + "->" + leg.receiver.name(), leg.receiver.name(), leg.register_index});
    }
    Rng decoy_rng = rng.derive("decoys");
    auto ext = insert_decoys(batch, specs, cfg.decoys, decoy_rng);
    if (eve.active_in(phase)) {
        transmit(batch, ext.plan, [&](Transmission &tx) {
            Rng eve_rng = rng.derive("eve", static_cast<std::uint64_t>(tx.channel));
            tap_channel(eve, tx, eve_rng);
        });
    }
    Rng verify_rng = rng.derive("verify");
    const auto verdict = verify_decoys(ext.plan, ext.records, verify_rng);
    QuantumStage stage;
    stage.abort = verdict.abort;
    for (std::size_t c = 0; c < legs.size(); ++c) {
        const auto &ch = ext.plan.channels[c];
        round.messages.push_back(
            Message{phase, legs[c].sender, legs[c].receiver, {}, "qubits", static_cast<int>(ch.slots.size())});
        if (verdict.mismatches_per_channel[c] > 0) {
            stage.detections.push_back({phase, ch.name, verdict.mismatches_per_channel[c], cfg.decoys.count_per_channel});
        }
    }
    return stage;
}

inline std::string describe_detection(const std::vector<Detection> &detections) {
    std::string out = "decoy mismatch on";
    for (const auto &d : detections) {
        out += " " + d.channel;
    }
    return out;
}

inline void shuffle_round(Round &round, const DeliveryOptions &opts) {
    if (opts.shuffle_seed == 0) {
        return;
    }
    Rng rng = Rng(opts.shuffle_seed).derive("shuffle", static_cast<std::uint64_t>(round.phase),
                                            static_cast<std::uint64_t>(round.kind));
    rng.shuffle(round.messages.begin(), round.messages.end());
}

inline std::uint64_t party_key(Party p) { return static_cast<std::uint64_t>(p.id + 2); }

inline Message lie(const RogueBehavior &rogues, RogueAction action, Message msg, const Rng &rng) {
    Rng lie_rng = rng.derive(to_string(action), party_key(msg.sender), party_key(msg.receiver));
    return rogue_transform(rogues, action, std::move(msg), lie_rng);
}

inline std::vector<QuantumLeg> star_legs(const ProtocolConfig &cfg) {
    std::vector<QuantumLeg> legs;
    const Party from = cfg.source == Source::alice ? Party::alice() : Party::source();
    if (cfg.source == Source::third_party) {
        legs.push_back({from, Party::alice(), 0});
    }
    for (int i = 0; i < cfg.n; ++i) {
        legs.push_back({from, Party::bob(i), i + 1});
    }
    return legs;
}

inline void check_inputs(const ProtocolConfig &cfg, std::span<const BitVector> inputs, const char *op) {
    if (inputs.size() != static_cast<std::size_t>(cfg.n)) {
        throw DimensionError(std::string(op) + ": " + std::to_string(inputs.size()) + " inputs for n=" +
                             std::to_string(cfg.n));
    }
    for (const auto &v : inputs) {
        if (v.size() != static_cast<std::size_t>(cfg.m)) {
            throw DimensionError(std::string(op) + ": input of length " + std::to_string(v.size()) +
                                 ", expected m=" + std::to_string(cfg.m));
        }
    }
}

}  // namespace detail

struct DistributionResult {
    /// s_i as computed by each agent from what he received.
    std::vector<BitVector> shares;
    /// Measured registers, Alice's and the agents'.
    BitVector a;
    std::vector<BitVector> b;
    Transcript transcript;
    std::vector<Detection> detections;
    std::optional<AbortInfo> abort;
};

/// Distribution phase. All n+1 registers hold n*m positions; Alice encodes s
/// into hers, everyone measures in the Hadamard basis, then Alice sends a_i
/// and every agent j sends b_{j,i} to agent i in one parallel round.
inline DistributionResult phase1_distribute(const ProtocolConfig &cfg, const BitVector &s, const AdversaryPlan &plan,
                                            const Rng &rng, const DeliveryOptions &opts = {}) {
    cfg.validate_shape();
    check_oracle_capacity(cfg, plan.eve, 1);
    const auto n = static_cast<std::size_t>(cfg.n);
    const auto m = static_cast<std::size_t>(cfg.m);
    if (s.size() != n * m) {
        throw DimensionError("phase1_distribute: secret length " + std::to_string(s.size()) + " is not n*m = " +
                             std::to_string(n * m));
    }
    DistributionResult out;
    Round quantum{1, RoundKind::quantum, {}};
    auto batch = EntangledBatch::distribute(cfg.n + 1, static_cast<int>(n * m), cfg.backing, {0});
    const auto stage = detail::send_batch(1, batch, detail::star_legs(cfg), cfg, plan.eve, rng, quantum);
    out.transcript.rounds.push_back(std::move(quantum));
    out.detections = stage.detections;
    if (stage.abort) {
        out.abort = AbortInfo{1, detail::describe_detection(stage.detections)};
        return out;
    }

    batch.apply_oracle(0, s);
    Rng measure_rng = rng.derive("measure");
    auto outcome = batch.measure_all(measure_rng);
    out.a = outcome.registers[0];
    out.b.assign(outcome.registers.begin() + 1, outcome.registers.end());

    Round classical{1, RoundKind::classical, {}};
    for (std::size_t i = 0; i < n; ++i) {
        classical.messages.push_back(Message{1, Party::alice(), Party::bob(static_cast<int>(i)),
                                             out.a.slice(i * m, m), "a", 0});
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            Message msg{1, Party::bob(static_cast<int>(j)), Party::bob(static_cast<int>(i)), out.b[j].slice(i * m, m),
                        "b", 0};
            classical.messages.push_back(detail::lie(plan.rogues, RogueAction::lie_phase1_comms, std::move(msg), rng));
        }
    }
    detail::shuffle_round(classical, opts);

    out.shares.clear();
    for (std::size_t i = 0; i < n; ++i) {
        out.shares.push_back(out.b[i].slice(i * m, m));
    }
    for (const auto &msg : classical.messages) {
        out.shares[static_cast<std::size_t>(msg.receiver.id)] ^= msg.payload;
    }
    out.transcript.rounds.push_back(std::move(classical));
    return out;
}

struct VerificationResult {
    bool proceed = false;
    /// a ^ b_{n-1} ^ ... ^ b_0 as Alice computed it.
    BitVector sum;
    Transcript transcript;
    std::vector<Detection> detections;
    std::optional<AbortInfo> abort;
};

/// Verification phase on a fresh batch. Agent i encodes his segment extended
/// to n*m bits, every agent reports his measured register to Alice, and Alice
/// proceeds iff the XOR of all registers equals s.
inline VerificationResult phase2_verify(const ProtocolConfig &cfg, std::span<const BitVector> inputs,
                                        const BitVector &s, const AdversaryPlan &plan, const Rng &rng,
                                        const DeliveryOptions &opts = {}) {
    cfg.validate_shape();
    check_oracle_capacity(cfg, plan.eve, 2);
    detail::check_inputs(cfg, inputs, "phase2_verify");
    const auto n = static_cast<std::size_t>(cfg.n);
    const auto m = static_cast<std::size_t>(cfg.m);
    if (s.size() != n * m) {
        throw DimensionError("phase2_verify: secret length " + std::to_string(s.size()) + " is not n*m");
    }
    VerificationResult out;
    std::vector<int> outputs;
    for (int i = 1; i <= cfg.n; ++i) {
        outputs.push_back(i);
    }
    Round quantum{2, RoundKind::quantum, {}};
    auto batch = EntangledBatch::distribute(cfg.n + 1, static_cast<int>(n * m), cfg.backing, outputs);
    const auto stage = detail::send_batch(2, batch, detail::star_legs(cfg), cfg, plan.eve, rng, quantum);
    out.transcript.rounds.push_back(std::move(quantum));
    out.detections = stage.detections;
    if (stage.abort) {
        out.abort = AbortInfo{2, detail::describe_detection(stage.detections)};
        return out;
    }

    for (std::size_t i = 0; i < n; ++i) {
        batch.apply_oracle(static_cast<int>(i) + 1, extend_segment(inputs[i], i, n));
    }
    Rng measure_rng = rng.derive("measure");
    auto outcome = batch.measure_all(measure_rng);

    Round classical{2, RoundKind::classical, {}};
    for (std::size_t i = 0; i < n; ++i) {
        Message msg{2, Party::bob(static_cast<int>(i)), Party::alice(), outcome.registers[i + 1], "b", 0};
        classical.messages.push_back(detail::lie(plan.rogues, RogueAction::lie_phase2_report, std::move(msg), rng));
    }
    detail::shuffle_round(classical, opts);

    out.sum = outcome.registers[0];
    for (const auto &msg : classical.messages) {
        out.sum ^= msg.payload;
    }
    out.transcript.rounds.push_back(std::move(classical));
    out.proceed = out.sum == s;
    if (!out.proceed) {
        out.abort = AbortInfo{2, "verification sum differs from the secret"};
    }
    return out;
}

struct AgentOutcome {
    int index = 0;
    /// The agent's own segment, as held going into consolidation.
    BitVector held;
    /// All n shares: his own and one recovered from each pair instance.
    std::vector<Share> claims;
    DecodeResult decode;
};

struct ConsolidationResult {
    std::vector<AgentOutcome> agents;
    Transcript transcript;
    std::vector<Detection> detections;
    std::optional<AbortInfo> abort;
};

/// Consolidation phase: one independent two-party instance per pair i < j
/// over m Phi+ positions. Both encode their segment, exchange measured
/// registers, and recover the partner's segment as b_i ^ b_j ^ s_i. Every
/// agent then decodes from the n shares he holds.
inline ConsolidationResult phase3_consolidate(const ProtocolConfig &cfg, std::span<const BitVector> inputs,
                                              const AdversaryPlan &plan, const Rng &rng,
                                              const DeliveryOptions &opts = {}) {
    cfg.validate();
    check_oracle_capacity(cfg, plan.eve, 3);
    detail::check_inputs(cfg, inputs, "phase3_consolidate");
    const int n = cfg.n;
    ConsolidationResult out;

    // own measured register per (holder, partner)
    std::map<std::pair<int, int>, BitVector> own;
    Round quantum{3, RoundKind::quantum, {}};
    Round classical{3, RoundKind::classical, {}};
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Rng pair_rng = rng.derive("pair", static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
            auto batch = EntangledBatch::distribute(2, cfg.m, cfg.backing, {0, 1});
            std::vector<detail::QuantumLeg> legs;
            if (cfg.source == Source::alice) {
                legs.push_back({Party::bob(i), Party::bob(j), 1});
            } else {
                legs.push_back({Party::source(), Party::bob(i), 0});
                legs.push_back({Party::source(), Party::bob(j), 1});
            }
            const auto stage = detail::send_batch(3, batch, legs, cfg, plan.eve, pair_rng, quantum);
            out.detections.insert(out.detections.end(), stage.detections.begin(), stage.detections.end());
            if (stage.abort || !out.detections.empty()) {
                continue;
            }
            const int holders[2] = {i, j};
            for (int t = 0; t < 2; ++t) {
                const int self = holders[t];
                const int partner = holders[1 - t];
                Message intent{3, Party::bob(self), Party::bob(partner), inputs[static_cast<std::size_t>(self)], "oracle",
                               0};
                const auto encoded = detail::lie(plan.rogues, RogueAction::lie_phase3_oracle, std::move(intent), pair_rng);
                batch.apply_oracle(t, encoded.payload);
            }
            Rng measure_rng = pair_rng.derive("measure");
            auto outcome = batch.measure_all(measure_rng);
            for (int t = 0; t < 2; ++t) {
                const int self = holders[t];
                const int partner = holders[1 - t];
                own[{self, partner}] = outcome.registers[static_cast<std::size_t>(t)];
                Message report{3, Party::bob(self), Party::bob(partner), outcome.registers[static_cast<std::size_t>(t)],
                               "b", 0};
                classical.messages.push_back(
                    detail::lie(plan.rogues, RogueAction::lie_phase3_report, std::move(report), pair_rng));
            }
        }
    }
    out.transcript.rounds.push_back(std::move(quantum));
    if (!out.detections.empty()) {
        out.abort = AbortInfo{3, detail::describe_detection(out.detections)};
        return out;
    }
    detail::shuffle_round(classical, opts);

    const auto split_cfg = cfg.split_config();
    std::vector<std::map<int, BitVector>> recovered(static_cast<std::size_t>(n));
    for (const auto &msg : classical.messages) {
        const int self = msg.receiver.id;
        const int partner = msg.sender.id;
        BitVector claim = own.at({self, partner});
        claim ^= msg.payload;
        claim ^= inputs[static_cast<std::size_t>(self)];
        recovered[static_cast<std::size_t>(self)][partner] = std::move(claim);
    }
    out.transcript.rounds.push_back(std::move(classical));

    for (int x = 0; x < n; ++x) {
        AgentOutcome agent;
        agent.index = x;
        agent.held = inputs[static_cast<std::size_t>(x)];
        auto &got = recovered[static_cast<std::size_t>(x)];
        got[x] = agent.held;
        for (const auto &[index, bits] : got) {
            agent.claims.push_back(Share::from_bits(index, bits, cfg.w));
        }
        agent.decode = try_robust_decode(agent.claims, split_cfg);
        out.agents.push_back(std::move(agent));
    }
    return out;
}

struct AgentReport {
    int index = 0;
    bool loyal = true;
    /// Share token of the segment the agent recovered in distribution.
    std::string recovered;
    /// Share tokens the agent holds after consolidation, own included.
    std::vector<std::string> received;
    std::string decoded;
    int support = 0;
    bool ambiguous = false;
    bool correct = false;
};

struct LeakageEntry {
    int phase = 0;
    std::optional<double> tv;
    std::string note;
};

struct RunReport {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    std::uint64_t trial_seed = 0;
    std::string config_hash;
    bool proceed = false;
    std::optional<AbortInfo> abort;
    std::string secret;
    std::vector<AgentReport> agents;
    std::vector<Detection> detections;
    EfficiencyReport metrics;
    std::vector<LeakageEntry> leakage;

    std::string verdict() const { return proceed ? "proceed" : "abort"; }
};

/// Canonical text of everything that shapes a run except seeds.
inline std::string describe(const ProtocolConfig &cfg, const AdversaryPlan &plan) {
    std::string out = "n=" + std::to_string(cfg.n) + ";k=" + std::to_string(cfg.k) + ";m=" + std::to_string(cfg.m) +
                      ";w=" + std::to_string(cfg.w) + ";backing=" + to_string(cfg.backing) +
                      ";decoys=" + std::to_string(cfg.decoys.count_per_channel) + ";source=" + to_string(cfg.source);
    const auto &eve = plan.eve;
    out += ";eve=" + std::string(to_string(eve.kind));
    out += ";basis=" + std::string(eve.basis == InterceptBasis::random ? "random" : "computational");
    out += ";phases=";
    for (int p : eve.phases) {
        out += std::to_string(p);
    }
    out += ";channels=";
    for (const auto &c : eve.channels) {
        out += c + ",";
    }
    out += ";hadamard=" + std::to_string(eve.final_hadamard ? 1 : 0);
    const auto &r = plan.rogues;
    out += ";rogues=";
    for (int a : r.agents) {
        out += std::to_string(a) + ",";
    }
    out += ";actions=";
    for (auto a : r.actions) {
        out += std::string(to_string(a)) + ",";
    }
    out += ";mode=" + std::string(to_string(r.mode)) + ";bit=" + std::to_string(r.flip_bit);
    out += ";mask=" + (r.mask ? r.mask->to_string() : std::string());
    return out;
}

inline std::string config_hash(const ProtocolConfig &cfg, const AdversaryPlan &plan) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_label(describe(cfg, plan))));
    return buf;
}

struct RunOptions {
    std::uint64_t base_seed = 0;
    std::uint64_t trial = 0;
    DeliveryOptions delivery;
};

struct RunOutcome {
    RunReport report;
    Transcript transcript;
    /// The shares concatenated, share i as segment i.
    BitVector aggregate;
};

/// Split, distribute, verify, and on Proceed consolidate. `secret` holds
/// m / w field elements; the run is a function of (cfg, secret, plan).
inline RunOutcome run_protocol(const ProtocolConfig &cfg, std::span<const std::uint8_t> secret,
                               const AdversaryPlan &plan, const RunOptions &opts = {}) {
    cfg.validate();
    plan.validate(cfg.n, cfg.k);
    for (int phase = 1; phase <= 3; ++phase) {
        check_oracle_capacity(cfg, plan.eve, phase);
    }
    if (secret.size() != static_cast<std::size_t>(cfg.elements())) {
        throw DimensionError("run_protocol: secret has " + std::to_string(secret.size()) + " elements, m/w = " +
                             std::to_string(cfg.elements()));
    }
    RunOutcome result;
    auto &report = result.report;
    report.seed = opts.base_seed;
    report.trial = opts.trial;
    report.trial_seed = cfg.seed;
    report.config_hash = config_hash(cfg, plan);
    report.secret = Share::elements_to_hex(secret, cfg.w);
    report.metrics = EfficiencyReport::of(cfg.n, cfg.m);
    for (int i = 0; i < cfg.n; ++i) {
        AgentReport agent;
        agent.index = i;
        agent.loyal = !plan.rogues.is_rogue(i);
        report.agents.push_back(agent);
    }

    const Rng root(cfg.seed);
    Rng split_rng = root.derive("split");
    const auto shares = split(secret, cfg.split_config(), split_rng);
    std::vector<BitVector> segments;
    for (const auto &share : shares) {
        segments.push_back(share.to_bits());
    }
    const BitVector s = concat_segments(segments);
    result.aggregate = s;

    auto finish = [&](const std::vector<Detection> &detections, const std::optional<AbortInfo> &abort) {
        report.detections.insert(report.detections.end(), detections.begin(), detections.end());
        if (abort) {
            report.abort = abort;
        }
    };

    auto p1 = phase1_distribute(cfg, s, plan, root.derive("phase", 1), opts.delivery);
    result.transcript.append(p1.transcript);
    finish(p1.detections, p1.abort);
    if (p1.abort) {
        return result;
    }
    for (int i = 0; i < cfg.n; ++i) {
        report.agents[static_cast<std::size_t>(i)].recovered =
            Share::from_bits(i, p1.shares[static_cast<std::size_t>(i)], cfg.w).to_token();
    }

    auto p2 = phase2_verify(cfg, p1.shares, s, plan, root.derive("phase", 2), opts.delivery);
    result.transcript.append(p2.transcript);
    finish(p2.detections, p2.abort);
    if (!p2.proceed) {
        return result;
    }

    auto p3 = phase3_consolidate(cfg, p1.shares, plan, root.derive("phase", 3), opts.delivery);
    result.transcript.append(p3.transcript);
    finish(p3.detections, p3.abort);
    if (p3.abort) {
        return result;
    }
    report.proceed = true;
    const std::vector<std::uint8_t> truth(secret.begin(), secret.end());
    for (const auto &agent : p3.agents) {
        auto &entry = report.agents[static_cast<std::size_t>(agent.index)];
        for (const auto &claim : agent.claims) {
            entry.received.push_back(claim.to_token());
        }
        entry.decoded = Share::elements_to_hex(agent.decode.secret, cfg.w);
        entry.support = agent.decode.support;
        entry.ambiguous = agent.decode.ambiguous;
        entry.correct = !agent.decode.ambiguous && agent.decode.secret == truth;
    }
    return result;
}

}  // namespace qss
