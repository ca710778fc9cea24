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


#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "qss/random.hpp"
#include "qss/threshold.hpp"

using qss::GaloisField;
using qss::Share;
using qss::SplitConfig;

namespace {

// Shift-and-add multiplication, independent of the library tables.
unsigned slow_mul(unsigned a, unsigned b, int width, unsigned poly) {
    unsigned acc = 0;
    for (int bit = 0; bit < width; ++bit) {
        if ((b >> bit) & 1u) {
            acc ^= a << bit;
        }
    }
    for (int bit = 2 * width - 2; bit >= width; --bit) {
        if ((acc >> bit) & 1u) {
            acc ^= poly << (bit - width);
        }
    }
    return acc;
}

unsigned slow_eval(const std::vector<unsigned> &coeffs, unsigned x, int width, unsigned poly) {
    unsigned y = 0;
    unsigned power = 1;
    for (auto c : coeffs) {
        y ^= slow_mul(c, power, width, poly);
        power = slow_mul(power, x, width, poly);
    }
    return y;
}

std::vector<Share> shares_of(const std::vector<unsigned> &coeffs, int n, int width, unsigned poly) {
    std::vector<Share> out;
    for (int i = 0; i < n; ++i) {
        const auto y = slow_eval(coeffs, static_cast<unsigned>(i + 1), width, poly);
        out.push_back(Share{i, {static_cast<std::uint8_t>(y)}, width});
    }
    return out;
}

// All subsets of {0..n-1} with exactly `size` members.
std::vector<std::vector<int>> subsets(int n, int size) {
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != size) {
            continue;
        }
        std::vector<int> s;
        for (int i = 0; i < n; ++i) {
            if ((mask >> i) & 1u) {
                s.push_back(i);
            }
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST(GaloisField, TablesMatchShiftAndAdd) {
    for (const int w : {4, 8}) {
        const auto &gf = GaloisField::get(w);
        const unsigned poly = w == 4 ? 0x13u : 0x11Bu;
        EXPECT_EQ(gf.polynomial(), poly);
        EXPECT_EQ(gf.order(), 1u << w);
        for (unsigned a = 0; a < gf.order(); ++a) {
            for (unsigned b = 0; b < gf.order(); ++b) {
                ASSERT_EQ(gf.mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)), slow_mul(a, b, w, poly))
                    << w << " " << a << " " << b;
            }
        }
    }
    EXPECT_THROW(GaloisField::get(5), qss::ConfigError);
}

TEST(GaloisField, FieldAxioms) {
    for (const int w : {4, 8}) {
        const auto &gf = GaloisField::get(w);
        for (unsigned a = 1; a < gf.order(); ++a) {
            const auto ea = static_cast<std::uint8_t>(a);
            ASSERT_EQ(gf.mul(ea, gf.inv(ea)), 1);
            ASSERT_EQ(gf.mul(ea, 1), ea);
            ASSERT_EQ(gf.mul(ea, 0), 0);
            for (unsigned b = 0; b < gf.order(); b += 7) {
                const auto eb = static_cast<std::uint8_t>(b);
                ASSERT_EQ(gf.mul(ea, eb), gf.mul(eb, ea));
                ASSERT_EQ(gf.div(gf.mul(ea, eb), ea), eb);
                for (unsigned c = 0; c < gf.order(); c += 11) {
                    const auto ec = static_cast<std::uint8_t>(c);
                    ASSERT_EQ(gf.mul(ea, GaloisField::add(eb, ec)), GaloisField::add(gf.mul(ea, eb), gf.mul(ea, ec)));
                    ASSERT_EQ(gf.mul(gf.mul(ea, eb), ec), gf.mul(ea, gf.mul(eb, ec)));
                }
            }
        }
        EXPECT_THROW(gf.inv(0), qss::PreconditionError);
    }
}

TEST(Split, WorkedExampleInGf16) {
    // f(x) = 0xA + 0x3 x
    const auto shares = shares_of({0xA, 0x3}, 3, 4, 0x13);
    EXPECT_EQ(shares[0].values[0], 0x9);
    EXPECT_EQ(shares[1].values[0], 0xC);
    EXPECT_EQ(shares[2].values[0], 0xF);
    const SplitConfig cfg{2, 3, 4};
    for (const auto &pick : subsets(3, 2)) {
        const std::vector<Share> two{shares[static_cast<std::size_t>(pick[0])], shares[static_cast<std::size_t>(pick[1])]};
        EXPECT_EQ(qss::reconstruct(two, cfg), std::vector<std::uint8_t>{0xA});
    }
}

TEST(Split, SharesLieOnADegreeKMinusOnePolynomial) {
    qss::Rng rng(3);
    const SplitConfig cfg{3, 5, 4};
    const std::vector<std::uint8_t> secret{0x7, 0x0, 0xF};
    const auto shares = qss::split(secret, cfg, rng);
    ASSERT_EQ(shares.size(), 5u);
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(shares[static_cast<std::size_t>(i)].agent_index, i);
        EXPECT_EQ(shares[static_cast<std::size_t>(i)].values.size(), 3u);
    }
    // any k shares predict the others
    const std::vector<const Share *> first{&shares[0], &shares[1], &shares[2]};
    const auto &gf = GaloisField::get(4);
    EXPECT_EQ(qss::detail::interpolate_at(first, shares[3].x(), gf), shares[3].values);
    EXPECT_EQ(qss::detail::interpolate_at(first, shares[4].x(), gf), shares[4].values);
    EXPECT_EQ(qss::detail::interpolate_at(first, 0, gf), secret);
}

TEST(Split, RejectsBadInputs) {
    qss::Rng rng(1);
    const std::vector<std::uint8_t> secret{0x1};
    EXPECT_THROW(qss::split(secret, SplitConfig{2, 4, 4}, rng), qss::ConfigError);
    EXPECT_THROW(qss::split(secret, SplitConfig{1, 1, 4}, rng), qss::ConfigError);
    EXPECT_THROW(qss::split(secret, SplitConfig{4, 3, 4}, rng), qss::ConfigError);
    EXPECT_THROW(qss::split(secret, SplitConfig{2, 3, 6}, rng), qss::ConfigError);
    EXPECT_THROW(qss::split(secret, SplitConfig{9, 16, 4}, rng), qss::CapacityError);
    EXPECT_THROW(qss::split(std::vector<std::uint8_t>{0x10}, SplitConfig{2, 3, 4}, rng), qss::DimensionError);
    EXPECT_THROW(qss::split(std::vector<std::uint8_t>{}, SplitConfig{2, 3, 4}, rng), qss::DimensionError);
}

TEST(Split, KMinusOneSharesAreUninformative) {
    // Enumerate every sharing polynomial: for each (k-1)-subset, each view is
    // produced by the same number of polynomials for every secret.
    for (const auto &[k, n] : {std::pair{2, 3}, std::pair{3, 4}}) {
        const unsigned polys = 1u << (4 * k);
        for (const auto &subset : subsets(n, k - 1)) {
            std::map<std::vector<unsigned>, std::map<unsigned, int>> views;
            for (unsigned code = 0; code < polys; ++code) {
                std::vector<unsigned> coeffs;
                for (int d = 0; d < k; ++d) {
                    coeffs.push_back((code >> (4 * d)) & 0xFu);
                }
                std::vector<unsigned> view;
                for (int i : subset) {
                    view.push_back(slow_eval(coeffs, static_cast<unsigned>(i + 1), 4, 0x13));
                }
                ++views[view][coeffs[0]];
            }
            EXPECT_EQ(views.size(), std::size_t{1} << (4 * (k - 1)));
            for (const auto &[view, by_secret] : views) {
                ASSERT_EQ(by_secret.size(), 16u);
                for (const auto &[secret, count] : by_secret) {
                    ASSERT_EQ(count, 1) << k << "," << n;
                }
            }
        }
    }
}

TEST(Split, AnyKSharesReconstructEverySecret) {
    for (const auto &[k, n] : {std::pair{2, 3}, std::pair{3, 4}}) {
        const SplitConfig cfg{k, n, 4};
        const unsigned polys = 1u << (4 * k);
        for (unsigned code = 0; code < polys; ++code) {
            std::vector<unsigned> coeffs;
            for (int d = 0; d < k; ++d) {
                coeffs.push_back((code >> (4 * d)) & 0xFu);
            }
            const auto all = shares_of(coeffs, n, 4, 0x13);
            for (const auto &subset : subsets(n, k)) {
                std::vector<Share> picked;
                for (int i : subset) {
                    picked.push_back(all[static_cast<std::size_t>(i)]);
                }
                ASSERT_EQ(qss::reconstruct(picked, cfg), std::vector<std::uint8_t>{static_cast<std::uint8_t>(coeffs[0])});
            }
        }
    }
}

TEST(Split, RoundTripsForSmallGroups) {
    qss::Rng rng(9);
    for (const int w : {4, 8}) {
        for (int n = 2; n <= 7; ++n) {
            for (int k = n / 2 + 1; k <= n; ++k) {
                if (k < 2) {
                    continue;
                }
                const SplitConfig cfg{k, n, w};
                std::vector<std::uint8_t> secret(6);
                for (auto &v : secret) {
                    v = static_cast<std::uint8_t>(rng.uniform(1u << w));
                }
                auto shares = qss::split(secret, cfg, rng);
                rng.shuffle(shares.begin(), shares.end());
                EXPECT_EQ(qss::reconstruct(shares, cfg), secret) << k << "," << n << " w=" << w;
                const auto decoded = qss::robust_decode(shares, cfg);
                EXPECT_EQ(decoded.secret, secret);
                EXPECT_EQ(decoded.support, n);
            }
        }
    }
}

TEST(Share, BitsAndTokensRoundTrip) {
    const Share s{2, {0x0A, 0xF1}, 8};
    EXPECT_EQ(s.x(), 3);
    EXPECT_EQ(s.to_token(), "2:0af1");
    EXPECT_EQ(Share::from_token("2:0AF1", 8), s);
    const auto bits = s.to_bits();
    EXPECT_EQ(bits.size(), 16u);
    EXPECT_TRUE(bits.get(1));
    EXPECT_TRUE(bits.get(3));
    EXPECT_FALSE(bits.get(0));
    EXPECT_EQ(Share::from_bits(2, bits, 8), s);
    const Share nib{0, {0x3, 0xC}, 4};
    EXPECT_EQ(nib.to_token(), "0:3c");
    EXPECT_EQ(Share::from_token(nib.to_token(), 4), nib);
    EXPECT_THROW(Share::from_token("03c", 4), qss::DimensionError);
    EXPECT_THROW(Share::from_token("0:3g", 4), qss::DimensionError);
    EXPECT_THROW(Share::from_token("0:abc", 8), qss::DimensionError);
    EXPECT_THROW(Share::from_bits(0, qss::BitVector(6), 4), qss::DimensionError);
    EXPECT_EQ(qss::bytes_to_elements(std::vector<std::uint8_t>{0xA3}, 4), (std::vector<std::uint8_t>{0x3, 0xA}));
}

TEST(Reconstruct, RejectsBadShareSets) {
    const SplitConfig cfg{2, 3, 4};
    const auto shares = shares_of({0xA, 0x3}, 3, 4, 0x13);
    EXPECT_THROW(qss::reconstruct(std::vector<Share>{shares[0]}, cfg), qss::InsufficientSharesError);
    EXPECT_THROW(qss::reconstruct(std::vector<Share>{shares[0], shares[0]}, cfg), qss::IntegrityError);
    auto bad = shares[1];
    bad.agent_index = 5;
    EXPECT_THROW(qss::reconstruct(std::vector<Share>{shares[0], bad}, cfg), qss::IndexError);
    auto wide = shares[1];
    wide.values.push_back(0);
    EXPECT_THROW(qss::reconstruct(std::vector<Share>{shares[0], wide}, cfg), qss::DimensionError);
}

TEST(RobustDecode, CorrectWithinTheErrorRadius) {
    qss::Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const SplitConfig cfg{5, 9, 8};
        std::vector<std::uint8_t> secret{static_cast<std::uint8_t>(rng.uniform(256)),
                                         static_cast<std::uint8_t>(rng.uniform(256))};
        auto shares = qss::split(secret, cfg, rng);
        // floor((9 - 5) / 2) = 2 false claims
        std::vector<int> order{0, 1, 2, 3, 4, 5, 6, 7, 8};
        rng.shuffle(order.begin(), order.end());
        std::set<int> liars{order[0], order[1]};
        for (int liar : liars) {
            auto &v = shares[static_cast<std::size_t>(liar)].values;
            v[0] ^= static_cast<std::uint8_t>(1 + rng.uniform(255));
        }
        const auto decoded = qss::robust_decode(shares, cfg);
        ASSERT_EQ(decoded.secret, secret);
        ASSERT_FALSE(decoded.ambiguous);
        EXPECT_EQ(decoded.support, 7);
        for (int idx : decoded.consistent) {
            EXPECT_FALSE(liars.count(idx));
        }
    }
}

TEST(RobustDecode, ColludingPairBeyondTheRadiusIsAmbiguous) {
    // Honest f(x) = 0x5 + 0x1 x + 0x2 x^2; the two rogues report a common fake
    // g(x) = 0xB + 0x7 x + 0x9 x^2 at their own points.
    const SplitConfig cfg{3, 4, 4};
    const auto honest = shares_of({0x5, 0x1, 0x2}, 4, 4, 0x13);
    const auto fake = shares_of({0xB, 0x7, 0x9}, 4, 4, 0x13);
    const std::vector<Share> claims{honest[0], honest[1], fake[2], fake[3]};
    const auto result = qss::try_robust_decode(claims, cfg);
    EXPECT_TRUE(result.ambiguous);
    EXPECT_EQ(result.support, 3);
    EXPECT_THROW(qss::robust_decode(claims, cfg), qss::AmbiguousDecodeError);
    EXPECT_THROW(qss::try_robust_decode(std::vector<Share>{honest[0], honest[1]}, cfg), qss::InsufficientSharesError);
}
