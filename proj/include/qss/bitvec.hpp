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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qss/error.hpp"
#include "qss/random.hpp"

namespace qss {

/// Fixed-length sequence of bits. Bit 0 is the least significant bit and is
/// written last in the textual form ("1101" has bits 0 and 2 and 3 set).
class BitVector {
  public:
    BitVector() = default;

    explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    static BitVector zeros(std::size_t size) { return BitVector(size); }

    static BitVector ones(std::size_t size) {
        BitVector v(size);
        for (auto &w : v.words_) {
            w = ~std::uint64_t{0};
        }
        v.trim();
        return v;
    }

    static BitVector random(std::size_t size, Rng &rng) {
        BitVector v(size);
        for (auto &w : v.words_) {
            w = rng.next();
        }
        v.trim();
        return v;
    }

    /// Low `size` bits of `value`.
    static BitVector from_uint(std::uint64_t value, std::size_t size) {
        BitVector v(size);
        if (!v.words_.empty()) {
            v.words_[0] = value;
        }
        v.trim();
        return v;
    }

    /// Parses the most-significant-first literal form, e.g. "1101".
    static BitVector from_string(std::string_view text) {
        BitVector v(text.size());
        for (std::size_t k = 0; k < text.size(); ++k) {
            const char c = text[text.size() - 1 - k];
            if (c == '1') {
                v.set(k, true);
            } else if (c != '0') {
                throw DimensionError("bit literal contains a character other than 0/1: '" +
                                     std::string(text) + "'");
            }
        }
        return v;
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool get(std::size_t i) const {
        check_index(i);
        return (words_[i / 64] >> (i % 64)) & 1u;
    }
    bool operator[](std::size_t i) const { return get(i); }

    void set(std::size_t i, bool value) {
        check_index(i);
        const std::uint64_t mask = std::uint64_t{1} << (i % 64);
        if (value) {
            words_[i / 64] |= mask;
        } else {
            words_[i / 64] &= ~mask;
        }
    }

    void flip(std::size_t i) {
        check_index(i);
        words_[i / 64] ^= std::uint64_t{1} << (i % 64);
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    bool any() const {
        for (auto w : words_) {
            if (w != 0) {
                return true;
            }
        }
        return false;
    }
    bool none() const { return !any(); }

    /// Value of the low 64 bits.
    std::uint64_t to_uint() const { return words_.empty() ? 0 : words_[0]; }

    std::span<const std::uint64_t> words() const { return words_; }

    std::string to_string() const {
        std::string out(size_, '0');
        for (std::size_t k = 0; k < size_; ++k) {
            if (get(k)) {
                out[size_ - 1 - k] = '1';
            }
        }
        return out;
    }

    /// Bits [offset, offset + count).
    BitVector slice(std::size_t offset, std::size_t count) const {
        if (offset + count > size_) {
            throw IndexError("slice [" + std::to_string(offset) + ", " +
                             std::to_string(offset + count) + ") exceeds length " +
                             std::to_string(size_));
        }
        BitVector out(count);
        for (std::size_t k = 0; k < count; ++k) {
            if (get(offset + k)) {
                out.set(k, true);
            }
        }
        return out;
    }

    /// Overwrites bits [offset, offset + part.size()) with `part`.
    void assign(std::size_t offset, const BitVector &part) {
        if (offset + part.size() > size_) {
            throw IndexError("assign at " + std::to_string(offset) + " of " +
                             std::to_string(part.size()) + " bits exceeds length " +
                             std::to_string(size_));
        }
        for (std::size_t k = 0; k < part.size(); ++k) {
            set(offset + k, part.get(k));
        }
    }

    BitVector &operator^=(const BitVector &other) {
        require_same_size(other, "xor");
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] ^= other.words_[w];
        }
        return *this;
    }

    BitVector &operator&=(const BitVector &other) {
        require_same_size(other, "and");
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] &= other.words_[w];
        }
        return *this;
    }

    BitVector &operator|=(const BitVector &other) {
        require_same_size(other, "or");
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] |= other.words_[w];
        }
        return *this;
    }

    BitVector operator~() const {
        BitVector out(*this);
        for (auto &w : out.words_) {
            w = ~w;
        }
        out.trim();
        return out;
    }

    friend BitVector operator^(BitVector a, const BitVector &b) { return a ^= b; }
    friend BitVector operator&(BitVector a, const BitVector &b) { return a &= b; }
    friend BitVector operator|(BitVector a, const BitVector &b) { return a |= b; }

    friend bool operator==(const BitVector &a, const BitVector &b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

    friend bool operator<(const BitVector &a, const BitVector &b) {
        if (a.size_ != b.size_) {
            return a.size_ < b.size_;
        }
        for (std::size_t w = a.words_.size(); w-- > 0;) {
            if (a.words_[w] != b.words_[w]) {
                return a.words_[w] < b.words_[w];
            }
        }
        return false;
    }

    void require_same_size(const BitVector &other, const char *op) const {
        if (size_ != other.size_) {
            throw DimensionError(std::string(op) + ": length mismatch (" + std::to_string(size_) +
                                 " vs " + std::to_string(other.size_) + ")");
        }
    }

  private:
    void check_index(std::size_t i) const {
        if (i >= size_) {
            throw IndexError("bit index " + std::to_string(i) + " out of range for length " +
                             std::to_string(size_));
        }
    }

    void trim() {
        if (size_ % 64 != 0 && !words_.empty()) {
            words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
        }
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// c•x: XOR over j of (x_j AND y_j).
inline int inner_product_mod2(const BitVector &x, const BitVector &y) {
    x.require_same_size(y, "inner_product_mod2");
    std::uint64_t acc = 0;
    const auto xw = x.words();
    const auto yw = y.words();
    for (std::size_t w = 0; w < xw.size(); ++w) {
        acc ^= xw[w] & yw[w];
    }
    return std::popcount(acc) & 1;
}

/// A bit vector of n·m bits viewed as n segments of width m. Segment i holds
/// bits i·m .. i·m+m-1, so segment 0 is the rightmost in the textual form.
class SegmentedVector {
  public:
    SegmentedVector(BitVector base, std::size_t n, std::size_t m) : base_(std::move(base)), n_(n), m_(m) {
        if (n == 0 || m == 0 || base_.size() != n * m) {
            throw DimensionError("segmented vector: base length " + std::to_string(base_.size()) +
                                 " is not n*m = " + std::to_string(n) + "*" + std::to_string(m));
        }
    }

    const BitVector &base() const { return base_; }
    std::size_t segments() const { return n_; }
    std::size_t width() const { return m_; }

    BitVector segment(std::size_t i) const {
        if (i >= n_) {
            throw IndexError("segment " + std::to_string(i) + " out of range for " + std::to_string(n_) +
                             " segments");
        }
        return base_.slice(i * m_, m_);
    }

  private:
    BitVector base_;
    std::size_t n_;
    std::size_t m_;
};

inline BitVector segment(const SegmentedVector &v, std::size_t i) { return v.segment(i); }

/// The n·m-bit vector whose segment i is `part` and every other segment zero.
inline BitVector extend_segment(const BitVector &part, std::size_t i, std::size_t n) {
    if (i >= n) {
        throw IndexError("segment " + std::to_string(i) + " out of range for " + std::to_string(n) +
                         " segments");
    }
    BitVector out(part.size() * n);
    out.assign(i * part.size(), part);
    return out;
}

/// parts[i] becomes segment i.
inline BitVector concat_segments(std::span<const BitVector> parts) {
    if (parts.empty()) {
        throw DimensionError("concat_segments: no parts");
    }
    const std::size_t m = parts[0].size();
    BitVector out(m * parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].size() != m) {
            throw DimensionError("concat_segments: part " + std::to_string(i) + " has length " +
                                 std::to_string(parts[i].size()) + ", expected " + std::to_string(m));
        }
        out.assign(i * m, parts[i]);
    }
    return out;
}

inline constexpr std::size_t kMaxEnumerationBits = 20;

struct CipCensus {
    std::uint64_t count_zero = 0;
    std::uint64_t count_one = 0;
    friend bool operator==(const CipCensus &, const CipCensus &) = default;
};

/// Counts x in {0,1}^p with c•x = 0 and with c•x = 1, by enumeration.
inline CipCensus cip_census(const BitVector &c) {
    const std::size_t p = c.size();
    if (p > kMaxEnumerationBits) {
        throw CapacityError("cip_census: length " + std::to_string(p) + " exceeds enumeration bound " +
                            std::to_string(kMaxEnumerationBits));
    }
    CipCensus census;
    const std::uint64_t mask = c.to_uint();
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << p); ++x) {
        if (std::popcount(mask & x) & 1) {
            ++census.count_one;
        } else {
            ++census.count_zero;
        }
    }
    return census;
}

}  // namespace qss
