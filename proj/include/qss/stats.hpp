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

#include <boost/math/special_functions/gamma.hpp>

#include "qss/error.hpp"

namespace qss {

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Two-sample chi-square test that two count vectors over the same cells
/// come from one distribution. Cells empty in both samples are dropped.
/// Assumes equal sample sizes.
inline ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) {
    if (x.size() != y.size()) {
        throw DimensionError("chi_square_two_sample: " + std::to_string(x.size()) + " vs " +
                             std::to_string(y.size()) + " cells");
    }
    ChiSquareResult out;
    int cells = 0;
    for (std::size_t c = 0; c < x.size(); ++c) {
        const double a = static_cast<double>(x[c]);
        const double b = static_cast<double>(y[c]);
        if (a + b == 0.0) {
            continue;
        }
        ++cells;
        out.statistic += (a - b) * (a - b) / (a + b);
    }
    out.dof = cells > 0 ? cells - 1 : 0;
    out.p_value = out.dof > 0 ? boost::math::gamma_q(out.dof / 2.0, out.statistic / 2.0) : 1.0;
    return out;
}

}  // namespace qss
