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


#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qss/adversary.hpp"
#include "qss/leakage.hpp"
#include "qss/protocol.hpp"
#include "qss/report_json.hpp"

using qss::BitVector;
using qss::EveKind;
using qss::EveStrategy;
using qss::Party;
using qss::RogueAction;

namespace {

EveStrategy eve_of(EveKind kind, std::set<int> phases = {1, 2, 3}) {
    EveStrategy eve;
    eve.kind = kind;
    eve.phases = std::move(phases);
    return eve;
}

// Fraction of batches whose decoys flag a tapped single channel.
double decoy_detection_rate(const EveStrategy &eve, int decoys, int trials, std::uint64_t seed) {
    qss::Rng rng(seed);
    const std::vector<qss::ChannelSpec> one{{"to_bob0", "bob0", 1}};
    int caught = 0;
    for (int t = 0; t < trials; ++t) {
        auto batch = qss::EntangledBatch::distribute(2, 4, qss::Backing::sampler, {0});
        auto ext = qss::insert_decoys(batch, one, qss::DecoySpec{decoys}, rng);
        qss::transmit(batch, ext.plan, [&](qss::Transmission &tx) { qss::tap_channel(eve, tx, rng); });
        caught += qss::verify_decoys(ext.plan, ext.records, rng).abort ? 1 : 0;
    }
    return static_cast<double>(caught) / trials;
}

qss::Message message_from(int sender, const char *bits) {
    return qss::Message{2, Party::bob(sender), Party::alice(), BitVector::from_string(bits), "b", 0};
}

qss::ProtocolConfig audit_config(int n, int m) {
    qss::ProtocolConfig cfg;
    cfg.n = n;
    cfg.k = n / 2 + 1;
    cfg.m = m;
    cfg.w = 4;
    cfg.backing = qss::Backing::oracle;
    return cfg;
}

}  // namespace

TEST(EveStrategy, PnsIsEntangleMeasure) {
    EXPECT_EQ(eve_of(EveKind::pns).effective_kind(), EveKind::entangle_measure);
    EXPECT_EQ(eve_of(EveKind::measure_resend).effective_kind(), EveKind::measure_resend);
    EXPECT_FALSE(eve_of(EveKind::none).active_in(1));
    EXPECT_TRUE(eve_of(EveKind::pns, {2}).active_in(2));
    EXPECT_FALSE(eve_of(EveKind::pns, {2}).active_in(3));
    auto eve = eve_of(EveKind::pns);
    EXPECT_TRUE(eve.targets("bob3"));
    eve.channels = {"bob1"};
    EXPECT_TRUE(eve.targets("bob1"));
    EXPECT_FALSE(eve.targets("bob3"));
}

TEST(TapChannel, NoneLeavesTheTransmissionIntact) {
    qss::Rng rng(1);
    auto batch = qss::EntangledBatch::distribute(2, 3, qss::Backing::oracle, {0});
    const std::vector<qss::ChannelSpec> one{{"to_bob0", "bob0", 1}};
    auto ext = qss::insert_decoys(batch, one, qss::DecoySpec{4}, rng);
    const auto before = ext.plan.dump(ext.decoy_states());
    std::vector<std::string> decoys_before;
    for (const auto &q : ext.plan.decoy_qubits) {
        decoys_before.push_back(q.dump());
    }
    const auto state_before = batch.state().dump();
    const EveStrategy none;
    qss::transmit(batch, ext.plan, [&](qss::Transmission &tx) { qss::tap_channel(none, tx, rng); });
    EXPECT_EQ(ext.plan.dump(ext.decoy_states()), before);
    EXPECT_EQ(batch.state().dump(), state_before);
    for (std::size_t k = 0; k < decoys_before.size(); ++k) {
        EXPECT_EQ(ext.plan.decoy_qubits[k].dump(), decoys_before[k]);
    }
}

TEST(TapChannel, UntargetedReceiverIsSkipped) {
    auto eve = eve_of(EveKind::measure_resend);
    eve.channels = {"bob5"};
    EXPECT_EQ(decoy_detection_rate(eve, 16, 200, 2), 0.0);
}

TEST(TapChannel, EveryKindIsSeenByDecoys) {
    // a quarter of decoys flag each kind, so one decoy catches about 1/4
    for (const auto kind : {EveKind::measure_resend, EveKind::intercept_resend, EveKind::entangle_measure, EveKind::pns}) {
        const double rate = decoy_detection_rate(eve_of(kind), 1, 8000, 3);
        EXPECT_NEAR(rate, 0.25, 0.02) << qss::to_string(kind);
    }
    auto random_basis = eve_of(EveKind::intercept_resend);
    random_basis.basis = qss::InterceptBasis::random;
    EXPECT_NEAR(decoy_detection_rate(random_basis, 1, 8000, 4), 0.25, 0.02);
}

TEST(TapChannel, SixteenDecoysCatchMeasureResend) {
    const double rate = decoy_detection_rate(eve_of(EveKind::measure_resend), 16, 1000, 5);
    EXPECT_GE(rate, 0.98);
}

TEST(TapChannel, EntangleOnPayloadAddsEveToTheConstraint) {
    qss::Rng rng(6);
    const auto eve = eve_of(EveKind::entangle_measure);
    const std::vector<qss::ChannelSpec> one{{"to_bob0", "bob0", 1}};
    for (int t = 0; t < 50; ++t) {
        auto batch = qss::EntangledBatch::distribute(2, 4, qss::Backing::sampler, {0});
        auto ext = qss::insert_decoys(batch, one, qss::DecoySpec{0}, rng);
        qss::transmit(batch, ext.plan, [&](qss::Transmission &tx) { qss::tap_channel(eve, tx, rng); });
        const auto out = batch.measure_all(rng);
        EXPECT_EQ(out.eve_attached.popcount(), 4u);
        // with her Hadamard the registers XOR to Eve's bits
        EXPECT_EQ(out.registers[0] ^ out.registers[1], out.eve);
    }
}

TEST(RogueTransform, HonestAndUnlistedMessagesPassThrough) {
    qss::RogueBehavior rogues;
    rogues.agents = {1};
    rogues.actions = {RogueAction::lie_phase2_report};
    qss::Rng rng(7);
    const auto honest = qss::rogue_transform(rogues, RogueAction::lie_phase2_report, message_from(0, "1010"), rng);
    EXPECT_EQ(honest.payload.to_string(), "1010");
    const auto other = qss::rogue_transform(rogues, RogueAction::lie_phase3_report, message_from(1, "1010"), rng);
    EXPECT_EQ(other.payload.to_string(), "1010");
    qss::Message from_alice{1, Party::alice(), Party::bob(1), BitVector::from_string("11"), "a", 0};
    EXPECT_EQ(qss::rogue_transform(rogues, RogueAction::lie_phase2_report, from_alice, rng).payload.to_string(), "11");
}

TEST(RogueTransform, Modes) {
    qss::RogueBehavior rogues;
    rogues.agents = {1};
    rogues.actions = {RogueAction::lie_phase2_report};
    qss::Rng rng(8);
    const auto act = RogueAction::lie_phase2_report;

    rogues.mode = qss::LieMode::bit_flip;
    rogues.flip_bit = 5;
    // index 5 wraps to bit 1 of a 4-bit payload
    EXPECT_EQ(qss::rogue_transform(rogues, act, message_from(1, "0000"), rng).payload.to_string(), "0010");

    rogues.mode = qss::LieMode::fixed;
    EXPECT_EQ(qss::rogue_transform(rogues, act, message_from(1, "1010"), rng).payload.to_string(), "0101");
    rogues.mask = BitVector::from_string("01");
    EXPECT_EQ(qss::rogue_transform(rogues, act, message_from(1, "000000"), rng).payload.to_string(), "010101");

    rogues.mode = qss::LieMode::random;
    int changed = 0;
    for (int t = 0; t < 200; ++t) {
        const auto lied = qss::rogue_transform(rogues, act, message_from(1, "0000000000000000"), rng);
        ASSERT_EQ(lied.payload.size(), 16u);
        changed += lied.payload.any() ? 1 : 0;
    }
    EXPECT_GE(changed, 198);
}

TEST(AdversaryPlan, Validation) {
    qss::AdversaryPlan plan;
    plan.rogues.agents = {0, 1};
    EXPECT_NO_THROW(plan.validate(5, 3));
    EXPECT_THROW(plan.validate(4, 3), qss::ConfigError);
    plan.rogues.agents = {1, 1};
    EXPECT_THROW(plan.validate(5, 3), qss::ConfigError);
    plan.rogues.agents = {5};
    EXPECT_THROW(plan.validate(5, 3), qss::ConfigError);
    plan.rogues.agents = {0};
    plan.rogues.mask = BitVector(4);
    EXPECT_THROW(plan.validate(5, 3), qss::ConfigError);
}

TEST(RunLevel, PnsReportsMatchEntangleMeasure) {
    qss::ProtocolConfig cfg;
    cfg.n = 3;
    cfg.k = 2;
    cfg.m = 8;
    cfg.w = 8;
    cfg.decoys.count_per_channel = 2;
    qss::AdversaryPlan entangle;
    entangle.eve = eve_of(EveKind::entangle_measure, {2});
    qss::AdversaryPlan pns;
    pns.eve = eve_of(EveKind::pns, {2});
    int aborts = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        cfg.seed = seed;
        const std::vector<std::uint8_t> secret{static_cast<std::uint8_t>(seed)};
        auto a = qss::to_json(qss::run_protocol(cfg, secret, entangle).report);
        auto b = qss::to_json(qss::run_protocol(cfg, secret, pns).report);
        aborts += a["verdict"] == "abort" ? 1 : 0;
        a.erase("config_hash");
        b.erase("config_hash");
        ASSERT_EQ(a.dump(), b.dump());
    }
    EXPECT_GE(aborts, 99);
}

TEST(RunLevel, PhaseTwoTapBreaksVerification) {
    qss::ProtocolConfig cfg;
    cfg.n = 2;
    cfg.k = 2;
    cfg.m = 8;
    cfg.w = 8;
    cfg.decoys.count_per_channel = 0;
    qss::AdversaryPlan plan;
    plan.eve = eve_of(EveKind::entangle_measure, {2});
    int aborts = 0;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        cfg.seed = seed;
        const auto r = qss::run_protocol(cfg, std::vector<std::uint8_t>{0x5A}, plan).report;
        if (!r.proceed) {
            ++aborts;
            EXPECT_EQ(r.abort->phase, 2);
            EXPECT_EQ(r.abort->cause, "verification sum differs from the secret");
        }
    }
    EXPECT_GE(aborts, 299);
}

TEST(RunLevel, DecoyAbortNamesTheChannel) {
    qss::ProtocolConfig cfg;
    cfg.n = 3;
    cfg.k = 2;
    cfg.m = 8;
    cfg.w = 8;
    qss::AdversaryPlan plan;
    plan.eve = eve_of(EveKind::measure_resend, {1});
    plan.eve.channels = {"bob1"};
    const auto r = qss::run_protocol(cfg, std::vector<std::uint8_t>{0x01}, plan).report;
    ASSERT_FALSE(r.proceed);
    EXPECT_EQ(r.abort->phase, 1);
    ASSERT_EQ(r.detections.size(), 1u);
    EXPECT_EQ(r.detections[0].phase, 1);
    EXPECT_NE(r.abort->cause.find(r.detections[0].channel), std::string::npos);
    EXPECT_GT(r.detections[0].mismatches, 0);
}

TEST(Leakage, PassiveEveLearnsNothingInDistribution) {
    const auto cfg = audit_config(2, 1);
    const EveStrategy none;
    for (std::uint64_t x = 0; x < 4; ++x) {
        for (std::uint64_t y = 0; y < 4; ++y) {
            EXPECT_EQ(qss::leakage_audit(none, cfg, 1, BitVector::from_uint(x, 2), BitVector::from_uint(y, 2)), 0.0);
        }
    }
    const auto view = qss::eve_view(none, cfg, 1, BitVector::from_uint(2, 2));
    double total = 0.0;
    for (const auto &[k, p] : view) {
        total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Leakage, PhaseThreeRevealsExactlyTheSegmentXor) {
    const auto cfg = audit_config(2, 2);
    for (const auto kind : {EveKind::none, EveKind::entangle_measure, EveKind::measure_resend}) {
        const auto eve = eve_of(kind);
        for (std::uint64_t x = 0; x < 16; ++x) {
            for (std::uint64_t y = 0; y < 16; ++y) {
                const auto sx = BitVector::from_uint(x, 4);
                const auto sy = BitVector::from_uint(y, 4);
                const bool same_class = (sx.slice(0, 2) ^ sx.slice(2, 2)) == (sy.slice(0, 2) ^ sy.slice(2, 2));
                const double tv = qss::leakage_audit(eve, cfg, 3, sx, sy);
                if (same_class) {
                    ASSERT_EQ(tv, 0.0) << qss::to_string(kind) << " " << x << " " << y;
                } else if (kind != EveKind::measure_resend) {
                    ASSERT_NEAR(tv, 1.0, 1e-9) << qss::to_string(kind) << " " << x << " " << y;
                }
            }
        }
    }
}

TEST(Leakage, IdenticalSecretsAndBounds) {
    const auto cfg = audit_config(2, 1);
    const auto s = BitVector::from_string("10");
    EXPECT_EQ(qss::leakage_audit(eve_of(EveKind::entangle_measure), cfg, 2, s, s), 0.0);
    EXPECT_THROW(qss::eve_view(EveStrategy{}, cfg, 4, s), qss::IndexError);
    EXPECT_THROW(qss::eve_view(EveStrategy{}, cfg, 1, BitVector(3)), qss::DimensionError);
    EXPECT_EQ(qss::total_variation({{"a", 1.0}}, {{"b", 1.0}}), 1.0);
    EXPECT_NEAR(qss::total_variation({{"a", 0.5}, {"b", 0.5}}, {{"a", 1.0}}), 0.5, 1e-12);
}
