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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>

#include "qss/error.hpp"

namespace qss {

/// Nonnegative fraction kept in lowest terms.
class Rational {
  public:
    Rational(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
        if (den == 0) {
            throw PreconditionError("rational with zero denominator");
        }
        const auto g = std::gcd(num_, den_);
        num_ /= g;
        den_ /= g;
    }

    std::uint64_t num() const { return num_; }
    std::uint64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    std::string to_decimal(int digits = 6) const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", digits, value());
        return buf;
    }

    friend bool operator==(const Rational &, const Rational &) = default;

  private:
    std::uint64_t num_;
    std::uint64_t den_;
};

namespace detail {
inline void check_sizes(int n, int m, const char *op) {
    if (n < 2 || m < 1) {
        throw PreconditionError(std::string(op) + ": need n >= 2 and m >= 1, got n=" + std::to_string(n) +
                                " m=" + std::to_string(m));
    }
}
}  // namespace detail

/// Distribution phase: n*m secret bits over (n+1) registers of n*m qubits
/// plus Alice's output qubit.
inline Rational eta1(int n, int m) {
    detail::check_sizes(n, m, "eta1");
    const std::uint64_t nm = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(m);
    return {nm, (static_cast<std::uint64_t>(n) + 1) * nm + 1};
}

/// Verification phase: as eta1 but every agent owns an output qubit.
inline Rational eta2(int n, int m) {
    detail::check_sizes(n, m, "eta2");
    const std::uint64_t nm = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(m);
    return {nm, (static_cast<std::uint64_t>(n) + 1) * nm + static_cast<std::uint64_t>(n)};
}

/// Consolidation phase, per pair: two m-bit segments over two m-qubit
/// registers and two output qubits.
inline Rational eta3(int m) {
    if (m < 1) {
        throw PreconditionError("eta3: need m >= 1, got m=" + std::to_string(m));
    }
    const auto mm = static_cast<std::uint64_t>(m);
    return {2 * mm, 2 * (mm + 1)};
}

struct EfficiencyReport {
    Rational eta1{1, 1};
    Rational eta2{1, 1};
    Rational eta3{1, 1};

    static EfficiencyReport of(int n, int m) { return {qss::eta1(n, m), qss::eta2(n, m), qss::eta3(m)}; }
};

/// Wilson score interval at 95%.
struct Proportion {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double rate = 0.0;
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double p) const { return lower <= p && p <= upper; }
};

inline Proportion wilson(std::uint64_t successes, std::uint64_t trials) {
    constexpr double z = 1.959963984540054;
    Proportion out{successes, trials, 0.0, 0.0, 1.0};
    if (trials == 0) {
        return out;
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    out.rate = p;
    out.lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
    out.upper = successes == trials ? 1.0 : std::min(1.0, center + half);
    return out;
}

}  // namespace qss
