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

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "qss/bitvec.hpp"
#include "qss/qsim.hpp"
#include "qss/random.hpp"

using qss::BasisLabel;
using qss::BitVector;
using qss::StateVector;

namespace {

constexpr double kTol = 1e-12;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void expect_amp(const StateVector &sv, std::uint64_t index, double re, double im = 0.0) {
    EXPECT_NEAR(sv.amplitude(index).real(), re, kTol) << "index " << index;
    EXPECT_NEAR(sv.amplitude(index).imag(), im, kTol) << "index " << index;
}

// The only nonzero amplitudes are the listed ones, all with value `value`.
void expect_support(const StateVector &sv, const std::vector<std::uint64_t> &support, double value) {
    for (std::uint64_t i = 0; i < sv.amplitudes().size(); ++i) {
        const bool in = std::find(support.begin(), support.end(), i) != support.end();
        expect_amp(sv, i, in ? value : 0.0);
    }
}

// Random normalized state on q qubits.
StateVector random_state(int q, qss::Rng &rng) {
    StateVector sv(q);
    for (int t = 0; t < 4 * q; ++t) {
        const int a = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(q)));
        const int b = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(q)));
        sv.apply_h(a);
        if (a != b) {
            sv.apply_cnot(a, b);
        }
        if (rng.bit()) {
            sv.apply_z(b);
        }
    }
    return sv;
}

double distance(const StateVector &x, const StateVector &y) {
    double d = 0.0;
    for (std::uint64_t i = 0; i < x.amplitudes().size(); ++i) {
        d = std::max(d, std::abs(x.amplitude(i) - y.amplitude(i)));
    }
    return d;
}

}  // namespace

TEST(StateVector, CapacityBound) {
    EXPECT_NO_THROW(StateVector(qss::kMaxQubits));
    EXPECT_THROW(StateVector(qss::kMaxQubits + 1), qss::CapacityError);
    StateVector sv(qss::kMaxQubits - 1);
    EXPECT_NO_THROW(sv.add_qubit());
    EXPECT_THROW(sv.add_qubit(), qss::CapacityError);
}

TEST(StateVector, PrepareBasisStates) {
    StateVector minus(1);
    minus.prepare_basis(BasisLabel::minus, 0);
    expect_amp(minus, 0, kInvSqrt2);
    expect_amp(minus, 1, -kInvSqrt2);

    StateVector zero(1);
    zero.prepare_basis(BasisLabel::zero, 0);
    expect_amp(zero, 0, 1.0);
    expect_amp(zero, 1, 0.0);

    StateVector plus(1);
    plus.prepare_basis(BasisLabel::plus, 0);
    plus.apply_h(0);
    expect_amp(plus, 0, 1.0);
    expect_amp(plus, 1, 0.0);

    StateVector busy(1);
    busy.apply_x(0);
    EXPECT_THROW(busy.prepare_basis(BasisLabel::plus, 0), qss::PreconditionError);
    EXPECT_THROW(busy.prepare_basis(BasisLabel::zero, 3), qss::IndexError);
}

TEST(StateVector, GhzAmplitudes) {
    StateVector bell(2);
    const std::vector<int> pair{0, 1};
    bell.prepare_ghz(pair);
    expect_support(bell, {0b00, 0b11}, kInvSqrt2);

    StateVector ghz(3);
    const std::vector<int> triple{0, 1, 2};
    ghz.prepare_ghz(triple);
    expect_support(ghz, {0b000, 0b111}, kInvSqrt2);

    StateVector small(2);
    const std::vector<int> single{0};
    EXPECT_THROW(small.prepare_ghz(single), qss::PreconditionError);
}

TEST(StateVector, GhzUsesOnlyHadamardAndCnot) {
    StateVector sv(5);
    const std::vector<int> qubits{4, 1, 3, 0, 2};
    sv.prepare_ghz(qubits);
    ASSERT_EQ(sv.gate_log().size(), 5u);
    EXPECT_EQ(sv.gate_log()[0].kind, qss::GateKind::h);
    for (std::size_t k = 1; k < sv.gate_log().size(); ++k) {
        EXPECT_EQ(sv.gate_log()[k].kind, qss::GateKind::cnot);
        EXPECT_EQ(sv.gate_log()[k].control, 4);
    }
}

TEST(StateVector, GhzMeasurementsAgree) {
    qss::Rng rng(21);
    int ones = 0;
    constexpr int kShots = 10000;
    const std::vector<int> reg{0, 1, 2};
    for (int shot = 0; shot < kShots; ++shot) {
        StateVector sv(3);
        sv.prepare_ghz(reg);
        const auto out = sv.measure_register(reg, rng);
        ASSERT_TRUE(out.none() || out.popcount() == 3);
        ones += out.any() ? 1 : 0;
    }
    EXPECT_NEAR(static_cast<double>(ones) / kShots, 0.5, 0.03);
}

TEST(StateVector, MeasuringOneGhzQubitFixesTheRest) {
    qss::Rng rng(4);
    for (int shot = 0; shot < 200; ++shot) {
        StateVector sv(3);
        const std::vector<int> reg{0, 1, 2};
        sv.prepare_ghz(reg);
        const int first = sv.measure_qubit(0, rng);
        const std::vector<int> rest{1, 2};
        const auto out = sv.measure_register(rest, rng);
        EXPECT_EQ(out.get(0), first == 1);
        EXPECT_EQ(out.get(1), first == 1);
        // idempotent once collapsed
        EXPECT_EQ(sv.measure_register(rest, rng), out);
    }
}

TEST(StateVector, HadamardPairOnElevenAndInvolution) {
    StateVector sv(2);
    sv.apply_x(0);
    sv.apply_x(1);
    const std::vector<int> reg{0, 1};
    sv.apply_h_register(reg);
    expect_amp(sv, 0b00, 0.5);
    expect_amp(sv, 0b01, -0.5);
    expect_amp(sv, 0b10, -0.5);
    expect_amp(sv, 0b11, 0.5);

    qss::Rng rng(2);
    auto x = random_state(4, rng);
    auto y = x;
    y.apply_h(2);
    y.apply_h(2);
    EXPECT_LT(distance(x, y), kTol);
}

TEST(StateVector, CnotTruthTable) {
    for (std::uint64_t in = 0; in < 4; ++in) {
        StateVector sv(2);
        if (in & 1) sv.apply_x(0);
        if (in & 2) sv.apply_x(1);
        sv.apply_cnot(1, 0);  // control qubit 1
        const std::uint64_t expect = (in & 2) ? (in ^ 1) : in;
        expect_amp(sv, expect, 1.0);
    }
    StateVector sv(2);
    EXPECT_THROW(sv.apply_cnot(1, 1), qss::IndexError);
}

// The p-fold Hadamard of |x> has amplitude (-1)^(z.x) / 2^(p/2) at |z>.
TEST(StateVector, HadamardTransformMatchesExpansion) {
    for (int p = 1; p <= 6; ++p) {
        const std::uint64_t count = std::uint64_t{1} << p;
        const double mag = std::pow(2.0, -p / 2.0);
        std::vector<int> reg(static_cast<std::size_t>(p));
        for (int j = 0; j < p; ++j) {
            reg[static_cast<std::size_t>(j)] = j;
        }
        for (std::uint64_t x = 0; x < count; ++x) {
            StateVector sv(p);
            for (int j = 0; j < p; ++j) {
                if (x >> j & 1u) sv.apply_x(j);
            }
            sv.apply_h_register(reg);
            for (std::uint64_t z = 0; z < count; ++z) {
                const int sign = std::popcount(z & x) % 2 == 0 ? 1 : -1;
                ASSERT_NEAR(sv.amplitude(z).real(), sign * mag, kTol);
            }
        }
    }
}

TEST(PhaseOracle, Examples) {
    // c = 0: nothing happens
    qss::Rng rng(9);
    auto base = random_state(3, rng);
    auto same = base;
    const std::vector<int> reg{0, 1};
    same.apply_phase_oracle(BitVector(2), reg, 2);
    EXPECT_LT(distance(base, same), kTol);

    // c = 1 on |+>|-> turns the register into |->
    StateVector kick(2);
    kick.prepare_basis(BasisLabel::plus, 0);
    kick.prepare_basis(BasisLabel::minus, 1);
    const std::vector<int> one{0};
    kick.apply_phase_oracle(BitVector::from_string("1"), one, 1);
    StateVector want(2);
    want.prepare_basis(BasisLabel::minus, 0);
    want.prepare_basis(BasisLabel::minus, 1);
    EXPECT_LT(distance(kick, want), kTol);

    // c = 11 on a Bell pair: even parity on the whole support
    StateVector bell(3);
    const std::vector<int> pair{0, 1};
    bell.prepare_ghz(pair);
    bell.prepare_basis(BasisLabel::minus, 2);
    auto before = bell;
    bell.apply_phase_oracle(BitVector::from_string("11"), pair, 2);
    EXPECT_LT(distance(bell, before), kTol);

    EXPECT_THROW(bell.apply_phase_oracle(BitVector::from_string("1"), pair, 2), qss::DimensionError);
}

// H, U_c, H on |0..0> prepares |c>.
TEST(PhaseOracle, RecoversTheHiddenVector) {
    qss::Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const int p = 1 + static_cast<int>(rng.uniform(6));
        const auto c = BitVector::random(static_cast<std::size_t>(p), rng);
        StateVector sv(p + 1);
        std::vector<int> reg;
        for (int j = 0; j < p; ++j) reg.push_back(j);
        sv.prepare_basis(BasisLabel::minus, p);
        sv.apply_h_register(reg);
        sv.apply_phase_oracle(c, reg, p);
        sv.apply_h_register(reg);
        EXPECT_EQ(sv.measure_register(reg, rng), c);
    }
}

TEST(PhaseOracle, ComposesByXor) {
    qss::Rng rng(17);
    const std::vector<int> reg{0, 1, 2, 3, 4, 5, 6};
    for (int trial = 0; trial < 20; ++trial) {
        // random 7-qubit state with the target qubit 7 in |->
        auto prepared = random_state(8, rng);
        StateVector base(8);
        for (const auto &g : prepared.gate_log()) {
            if (g.target == 7 || g.control == 7) {
                continue;
            }
            switch (g.kind) {
                case qss::GateKind::h: base.apply_h(g.target); break;
                case qss::GateKind::z: base.apply_z(g.target); break;
                case qss::GateKind::cnot: base.apply_cnot(g.control, g.target); break;
                default: break;
            }
        }
        base.prepare_basis(BasisLabel::minus, 7);
        const auto c1 = BitVector::random(7, rng);
        const auto c2 = BitVector::random(7, rng);
        auto twice = base;
        twice.apply_phase_oracle(c1, reg, 7);
        twice.apply_phase_oracle(c2, reg, 7);
        auto once = base;
        once.apply_phase_oracle(c1 ^ c2, reg, 7);
        EXPECT_LT(distance(twice, once), kTol);
    }
}

TEST(StateVector, HadamardBasisMeasurement) {
    qss::Rng rng(5);
    for (int shot = 0; shot < 100; ++shot) {
        StateVector plus(1);
        plus.prepare_basis(BasisLabel::plus, 0);
        EXPECT_EQ(plus.measure_hadamard_basis(0, rng), 0);
        StateVector minus(1);
        minus.prepare_basis(BasisLabel::minus, 0);
        EXPECT_EQ(minus.measure_hadamard_basis(0, rng), 1);
        StateVector one(1);
        one.prepare_basis(BasisLabel::one, 0);
        EXPECT_EQ(one.measure_qubit(0, rng), 1);
    }
    int ones = 0;
    constexpr int kShots = 10000;
    for (int shot = 0; shot < kShots; ++shot) {
        StateVector zero(1);
        ones += zero.measure_hadamard_basis(0, rng);
    }
    EXPECT_NEAR(static_cast<double>(ones) / kShots, 0.5, 0.03);
}

TEST(StateVector, NormDriftOverManyGates) {
    qss::Rng rng(99);
    StateVector sv(10);
    for (int g = 0; g < 10000; ++g) {
        const int a = static_cast<int>(rng.uniform(10));
        const int b = static_cast<int>(rng.uniform(10));
        switch (rng.uniform(4)) {
            case 0: sv.apply_h(a); break;
            case 1: sv.apply_x(a); break;
            case 2: sv.apply_z(a); break;
            default:
                if (a != b) sv.apply_cnot(a, b);
                break;
        }
    }
    EXPECT_NEAR(sv.norm(), 1.0, 1e-9);
}

TEST(StateVector, SeededMeasurementIsReproducible) {
    auto run = [](std::uint64_t seed) {
        qss::Rng rng(seed);
        StateVector sv(6);
        std::vector<int> reg{0, 1, 2, 3, 4, 5};
        sv.apply_h_register(reg);
        return sv.measure_register(reg, rng);
    };
    EXPECT_EQ(run(123), run(123));
}

TEST(StateVector, DumpFormat) {
    StateVector sv(2);
    sv.apply_x(1);
    EXPECT_EQ(sv.dump(), "10 1.000000000000 0.000000000000\n");
    StateVector minus(1);
    minus.prepare_basis(BasisLabel::minus, 0);
    EXPECT_EQ(minus.dump(), "0 0.707106781187 0.000000000000\n1 -0.707106781187 0.000000000000\n");
}

TEST(RegisterLayout, LittleEndianBijection) {
    qss::RegisterLayout layout;
    const auto a = layout.add("alice", "input", 3);
    const auto b = layout.add("bob0", "input", 2);
    EXPECT_EQ(a, (qss::Register{0, 1, 2}));
    EXPECT_EQ(b, (qss::Register{3, 4}));
    EXPECT_EQ(layout.qubit("bob0", "input", 1), 4);
    EXPECT_EQ(layout.total(), 5);
    EXPECT_THROW(layout.add("alice", "input", 1), qss::IntegrityError);
    EXPECT_THROW(layout.get("eve", "input"), qss::IndexError);
    EXPECT_THROW(layout.qubit("alice", "input", 3), qss::IndexError);
}

TEST(ShotSampler, FollowsTheDistribution) {
    const qss::ShotSampler sampler({0.0, 0.25, 0.0, 0.75});
    qss::Rng rng(8);
    std::vector<int> counts(4, 0);
    for (int shot = 0; shot < 20000; ++shot) {
        ++counts[sampler.sample(rng)];
    }
    EXPECT_EQ(counts[0], 0);
    EXPECT_EQ(counts[2], 0);
    EXPECT_NEAR(counts[1] / 20000.0, 0.25, 0.02);
}
