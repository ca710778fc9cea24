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
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qss/bitvec.hpp"
#include "qss/error.hpp"
#include "qss/random.hpp"

namespace qss {

/// GF(2^w) for w in {4, 8} with full multiplication and inverse tables.
/// Reduction polynomials: x^4+x+1 (0x13) and x^8+x^4+x^3+x+1 (0x11B).
class GaloisField {
  public:
    static const GaloisField &get(int width) {
        static const GaloisField gf16(4, 0x13);
        static const GaloisField gf256(8, 0x11B);
        if (width == 4) {
            return gf16;
        }
        if (width == 8) {
            return gf256;
        }
        throw ConfigError("field width must be 4 or 8, got " + std::to_string(width));
    }

    int width() const { return width_; }
    unsigned order() const { return 1u << width_; }
    unsigned polynomial() const { return poly_; }

    static std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

    std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[static_cast<std::size_t>(a) * 256 + b]; }

    std::uint8_t inv(std::uint8_t a) const {
        if (a == 0) {
            throw PreconditionError("GF(2^w): zero has no inverse");
        }
        return inv_[a];
    }

    std::uint8_t div(std::uint8_t a, std::uint8_t b) const { return mul(a, inv(b)); }

  private:
    GaloisField(int width, unsigned poly) : width_(width), poly_(poly), mul_(256 * 256, 0), inv_(256, 0) {
        const unsigned size = 1u << width;
        for (unsigned a = 0; a < size; ++a) {
            for (unsigned b = 0; b < size; ++b) {
                // shift-and-add with reduction
                unsigned x = a;
                unsigned y = b;
                unsigned acc = 0;
                while (y) {
                    if (y & 1u) {
                        acc ^= x;
                    }
                    y >>= 1;
                    x <<= 1;
                    if (x & size) {
                        x ^= poly;
                    }
                }
                mul_[a * 256 + b] = static_cast<std::uint8_t>(acc);
                if (acc == 1) {
                    inv_[a] = static_cast<std::uint8_t>(b);
                }
            }
        }
    }

    int width_;
    unsigned poly_;
    std::vector<std::uint8_t> mul_;
    std::vector<std::uint8_t> inv_;
};

struct SplitConfig {
    int k = 3;
    int n = 5;
    int w = 8;

    void validate() const {
        if (w != 4 && w != 8) {
            throw ConfigError("field width must be 4 or 8, got " + std::to_string(w));
        }
        if (k < 2 || k > n) {
            throw ConfigError("threshold needs 2 <= k <= n, got k=" + std::to_string(k) + " n=" + std::to_string(n));
        }
        if (2 * k <= n) {
            throw ConfigError("threshold needs k > n/2, got k=" + std::to_string(k) + " n=" + std::to_string(n));
        }
        if (n >= (1 << w)) {
            throw CapacityError("field GF(2^" + std::to_string(w) + ") too small for n=" + std::to_string(n) +
                                " shares");
        }
    }
};

/// Evaluations of the sharing polynomials at x = agent_index + 1, one field
/// element per secret element.
struct Share {
    int agent_index = 0;
    std::vector<std::uint8_t> values;
    int width = 8;

    std::uint8_t x() const { return static_cast<std::uint8_t>(agent_index + 1); }
    std::size_t bit_length() const { return values.size() * static_cast<std::size_t>(width); }

    /// Element e occupies bits e*w .. e*w+w-1.
    BitVector to_bits() const {
        BitVector bits(bit_length());
        for (std::size_t e = 0; e < values.size(); ++e) {
            for (int b = 0; b < width; ++b) {
                bits.set(e * static_cast<std::size_t>(width) + static_cast<std::size_t>(b), (values[e] >> b) & 1u);
            }
        }
        return bits;
    }

    static Share from_bits(int agent_index, const BitVector &bits, int width) {
        if (bits.size() % static_cast<std::size_t>(width) != 0) {
            throw DimensionError("share: " + std::to_string(bits.size()) + " bits is not a multiple of w=" +
                                 std::to_string(width));
        }
        Share s{agent_index, std::vector<std::uint8_t>(bits.size() / static_cast<std::size_t>(width), 0), width};
        for (std::size_t e = 0; e < s.values.size(); ++e) {
            unsigned v = 0;
            for (int b = 0; b < width; ++b) {
                v |= static_cast<unsigned>(bits.get(e * static_cast<std::size_t>(width) + static_cast<std::size_t>(b)))
                     << b;
            }
            s.values[e] = static_cast<std::uint8_t>(v);
        }
        return s;
    }

    /// "index:hex", elements in order, w/4 hex digits each.
    std::string to_token() const { return std::to_string(agent_index) + ":" + elements_to_hex(values, width); }

    static std::string elements_to_hex(std::span<const std::uint8_t> elems, int width) {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        for (auto v : elems) {
            if (width == 8) {
                out += digits[v >> 4];
            }
            out += digits[v & 0xF];
        }
        return out;
    }

    static std::vector<std::uint8_t> elements_from_hex(const std::string &hex, int width) {
        auto nibble = [&](char c) -> unsigned {
            if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
            if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
            if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
            throw DimensionError("invalid hex digit '" + std::string(1, c) + "' in \"" + hex + "\"");
        };
        const std::size_t step = width == 8 ? 2 : 1;
        if (hex.size() % step != 0) {
            throw DimensionError("hex literal \"" + hex + "\" has odd length for w=8");
        }
        std::vector<std::uint8_t> out;
        for (std::size_t i = 0; i < hex.size(); i += step) {
            unsigned v = nibble(hex[i]);
            if (step == 2) {
                v = (v << 4) | nibble(hex[i + 1]);
            }
            out.push_back(static_cast<std::uint8_t>(v));
        }
        return out;
    }

    static Share from_token(const std::string &token, int width) {
        const auto colon = token.find(':');
        if (colon == std::string::npos) {
            throw DimensionError("share token \"" + token + "\" lacks ':'");
        }
        return Share{std::stoi(token.substr(0, colon)), elements_from_hex(token.substr(colon + 1), width), width};
    }

    friend bool operator==(const Share &, const Share &) = default;
};

/// One uniformly random degree-(k-1) polynomial per secret element with the
/// element as constant term; share i holds the evaluations at x = i+1.
inline std::vector<Share> split(std::span<const std::uint8_t> secret, const SplitConfig &cfg, Rng &rng) {
    cfg.validate();
    if (secret.empty()) {
        throw DimensionError("split: empty secret");
    }
    const auto &gf = GaloisField::get(cfg.w);
    for (auto v : secret) {
        if (v >= gf.order()) {
            throw DimensionError("split: secret element " + std::to_string(v) + " outside GF(2^" +
                                 std::to_string(cfg.w) + ")");
        }
    }
    std::vector<Share> shares;
    for (int i = 0; i < cfg.n; ++i) {
        shares.push_back(Share{i, std::vector<std::uint8_t>(secret.size(), 0), cfg.w});
    }
    std::vector<std::uint8_t> coeffs(static_cast<std::size_t>(cfg.k));
    for (std::size_t e = 0; e < secret.size(); ++e) {
        coeffs[0] = secret[e];
        for (int d = 1; d < cfg.k; ++d) {
            coeffs[static_cast<std::size_t>(d)] = static_cast<std::uint8_t>(rng.uniform(gf.order()));
        }
        for (auto &share : shares) {
            // Horner
            std::uint8_t y = 0;
            for (int d = cfg.k - 1; d >= 0; --d) {
                y = GaloisField::add(gf.mul(y, share.x()), coeffs[static_cast<std::size_t>(d)]);
            }
            share.values[e] = y;
        }
    }
    return shares;
}

namespace detail {

inline void check_share_set(std::span<const Share> shares, const SplitConfig &cfg) {
    std::vector<bool> seen(256, false);
    for (const auto &s : shares) {
        if (s.agent_index < 0 || s.agent_index >= cfg.n) {
            throw IndexError("share index " + std::to_string(s.agent_index) + " out of range for n=" +
                             std::to_string(cfg.n));
        }
        if (seen[static_cast<std::size_t>(s.agent_index)]) {
            throw IntegrityError("duplicate share index " + std::to_string(s.agent_index));
        }
        seen[static_cast<std::size_t>(s.agent_index)] = true;
        if (s.values.size() != shares[0].values.size() || s.width != cfg.w) {
            throw DimensionError("shares have unequal lengths or field widths");
        }
    }
}

/// Value at `x` of the polynomial through `points`, element-wise.
inline std::vector<std::uint8_t> interpolate_at(std::span<const Share *const> points, std::uint8_t x,
                                                const GaloisField &gf) {
    const std::size_t elems = points[0]->values.size();
    std::vector<std::uint8_t> out(elems, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::uint8_t basis = 1;
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) {
                continue;
            }
            const std::uint8_t xj = points[j]->x();
            basis = gf.mul(basis, gf.div(GaloisField::add(x, xj), GaloisField::add(points[i]->x(), xj)));
        }
        for (std::size_t e = 0; e < elems; ++e) {
            out[e] ^= gf.mul(basis, points[i]->values[e]);
        }
    }
    return out;
}

}  // namespace detail

/// Lagrange interpolation at x = 0 over the first k shares.
inline std::vector<std::uint8_t> reconstruct(std::span<const Share> shares, const SplitConfig &cfg) {
    cfg.validate();
    if (shares.size() < static_cast<std::size_t>(cfg.k)) {
        throw InsufficientSharesError("reconstruct: " + std::to_string(shares.size()) + " shares, need " +
                                      std::to_string(cfg.k));
    }
    detail::check_share_set(shares, cfg);
    std::vector<const Share *> points;
    for (int i = 0; i < cfg.k; ++i) {
        points.push_back(&shares[static_cast<std::size_t>(i)]);
    }
    return detail::interpolate_at(points, 0, GaloisField::get(cfg.w));
}

struct DecodeResult {
    std::vector<std::uint8_t> secret;
    int support = 0;
    bool ambiguous = false;
    /// Agent indices of the shares consistent with the chosen polynomial.
    std::vector<int> consistent;
};

/// Maximal-consistency decoding: every k-subset of claims fixes a polynomial;
/// the answer is the secret of the polynomial that agrees with the most
/// claims. Distinct secrets tied at the maximum set `ambiguous`. The answer
/// is unique and correct when at most floor((n-k)/2) claims are false.
inline DecodeResult try_robust_decode(std::span<const Share> claimed, const SplitConfig &cfg) {
    cfg.validate();
    if (claimed.size() < static_cast<std::size_t>(cfg.k)) {
        throw InsufficientSharesError("robust_decode: " + std::to_string(claimed.size()) + " shares, need " +
                                      std::to_string(cfg.k));
    }
    detail::check_share_set(claimed, cfg);
    if (claimed.size() > 64) {
        throw CapacityError("robust_decode: at most 64 claimed shares");
    }
    const auto &gf = GaloisField::get(cfg.w);
    const std::size_t n = claimed.size();
    const auto k = static_cast<std::size_t>(cfg.k);

    // consistent-set bitmask -> secret; a polynomial is identified by the set
    // of claims it passes through, since k points fix it.
    std::map<std::uint64_t, std::vector<std::uint8_t>> candidates;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) {
        pick[i] = i;
    }
    std::vector<const Share *> points(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) {
            points[i] = &claimed[pick[i]];
        }
        std::uint64_t mask = 0;
        for (std::size_t c = 0; c < n; ++c) {
            const bool in_subset = std::find(pick.begin(), pick.end(), c) != pick.end();
            if (in_subset || detail::interpolate_at(points, claimed[c].x(), gf) == claimed[c].values) {
                mask |= std::uint64_t{1} << c;
            }
        }
        if (!candidates.count(mask)) {
            candidates[mask] = detail::interpolate_at(points, 0, gf);
        }
        // next combination
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == n - k + (i - 1)) {
            --i;
        }
        if (i == 0) {
            break;
        }
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            pick[j] = pick[j - 1] + 1;
        }
    }

    int best = 0;
    for (const auto &[mask, secret] : candidates) {
        best = std::max(best, std::popcount(mask));
    }
    DecodeResult result;
    result.support = best;
    bool found = false;
    for (const auto &[mask, secret] : candidates) {
        if (std::popcount(mask) != best) {
            continue;
        }
        if (!found) {
            found = true;
            result.secret = secret;
            for (std::size_t c = 0; c < n; ++c) {
                if (mask >> c & 1u) {
                    result.consistent.push_back(claimed[c].agent_index);
                }
            }
        } else if (secret != result.secret) {
            result.ambiguous = true;
        }
    }
    return result;
}

/// As try_robust_decode, raising AmbiguousDecodeError on a tie.
inline DecodeResult robust_decode(std::span<const Share> claimed, const SplitConfig &cfg) {
    auto result = try_robust_decode(claimed, cfg);
    if (result.ambiguous) {
        throw AmbiguousDecodeError("robust_decode: distinct secrets tied at support " +
                                   std::to_string(result.support));
    }
    return result;
}

/// Packs bytes into field elements: one per byte for w=8, low nibble then
/// high nibble for w=4.
inline std::vector<std::uint8_t> bytes_to_elements(std::span<const std::uint8_t> bytes, int width) {
    if (width == 8) {
        return {bytes.begin(), bytes.end()};
    }
    std::vector<std::uint8_t> out;
    for (auto b : bytes) {
        out.push_back(b & 0xF);
        out.push_back(static_cast<std::uint8_t>(b >> 4));
    }
    return out;
}

}  // namespace qss
