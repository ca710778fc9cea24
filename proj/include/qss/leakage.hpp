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

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qss/adversary.hpp"
#include "qss/bitvec.hpp"
#include "qss/error.hpp"
#include "qss/protocol.hpp"
#include "qss/qsim.hpp"

namespace qss {

/// Eve's view: her own measurement records followed by every classical
/// payload she can read, as a bit string. Decoys are left out; they carry no
/// information about the secret.
using ViewDistribution = std::map<std::string, double>;

/// Below this a total variation distance is reported as exactly zero.
inline constexpr double kLeakageTolerance = 1e-12;

namespace detail {

// One circuit of r registers over p positions (GHZ_r per position) with the
// given oracles. Eve's taps are deferred to the end: a computational tap is a
// CNOT copy into a fresh qubit, a Hadamard tap the same conjugated by H, and
// an entangling tap a CNOT copy read out after optional H.
struct AuditCircuit {
    int r;
    int p;
    std::vector<int> outputs;
    std::vector<std::pair<int, BitVector>> oracles;
    std::vector<std::pair<int, std::string>> channels;  // register, receiver
};

inline std::string bits_of(std::uint64_t index, int from, int count) {
    std::string s;
    for (int b = 0; b < count; ++b) {
        s += (index >> (from + b) & 1u) ? '1' : '0';
    }
    return s;
}

// Register slots Eve reads, one ancilla each. Entangling taps share one
// ancilla per tuple.
inline std::vector<std::pair<int, int>> tapped_slots(const AuditCircuit &c, const EveStrategy &eve, int phase) {
    std::vector<std::pair<int, int>> tapped;
    if (!eve.active_in(phase)) {
        return tapped;
    }
    std::vector<bool> seen(static_cast<std::size_t>(c.p), false);
    const bool per_tuple = eve.effective_kind() == EveKind::entangle_measure;
    for (const auto &[reg, receiver] : c.channels) {
        if (!eve.targets(receiver)) {
            continue;
        }
        for (int j = 0; j < c.p; ++j) {
            if (per_tuple && seen[static_cast<std::size_t>(j)]) {
                continue;
            }
            seen[static_cast<std::size_t>(j)] = true;
            tapped.push_back({reg, j});
        }
    }
    return tapped;
}

// Distribution over (registers..., eve records) for one choice of tap bases.
// Index bit t*p + j is register t position j; Eve's records follow.
inline std::vector<double> audit_outcomes(const AuditCircuit &c, const EveStrategy &eve,
                                          const std::vector<std::pair<int, int>> &tapped,
                                          const std::vector<TapBasis> &bases) {
    const EveKind kind = eve.effective_kind();
    const int eve_count = static_cast<int>(tapped.size());
    const int total = c.r * c.p + static_cast<int>(c.outputs.size()) + eve_count;
    if (total > kMaxQubits) {
        throw CapacityError("leakage_audit: needs " + std::to_string(total) + " qubits, capacity is " +
                            std::to_string(kMaxQubits));
    }
    StateVector sv(total);
    auto qubit = [&](int reg, int pos) { return reg * c.p + pos; };
    std::map<int, int> output_of;
    for (std::size_t o = 0; o < c.outputs.size(); ++o) {
        const int q = c.r * c.p + static_cast<int>(o);
        output_of[c.outputs[o]] = q;
        sv.prepare_basis(BasisLabel::minus, q);
    }
    for (int j = 0; j < c.p; ++j) {
        std::vector<int> tuple;
        for (int t = 0; t < c.r; ++t) {
            tuple.push_back(qubit(t, j));
        }
        sv.prepare_ghz(tuple);
    }
    const int eve_base = c.r * c.p + static_cast<int>(c.outputs.size());
    for (std::size_t e = 0; e < tapped.size(); ++e) {
        const int q = qubit(tapped[e].first, tapped[e].second);
        const int anc = eve_base + static_cast<int>(e);
        const bool hadamard = kind == EveKind::intercept_resend && bases[e] == TapBasis::hadamard;
        if (hadamard) {
            sv.apply_h(q);
        }
        sv.apply_cnot(q, anc);
        if (hadamard) {
            sv.apply_h(q);
        }
    }
    for (const auto &[reg, vec] : c.oracles) {
        Register r;
        for (int j = 0; j < c.p; ++j) {
            r.push_back(qubit(reg, j));
        }
        sv.apply_phase_oracle(vec, r, output_of.at(reg));
    }
    std::vector<int> all;
    for (int t = 0; t < c.r; ++t) {
        for (int j = 0; j < c.p; ++j) {
            sv.apply_h(qubit(t, j));
            all.push_back(qubit(t, j));
        }
    }
    for (int e = 0; e < eve_count; ++e) {
        if (kind == EveKind::entangle_measure && eve.final_hadamard) {
            sv.apply_h(eve_base + e);
        }
        all.push_back(eve_base + e);
    }
    return sv.register_distribution(all);
}

// Eve's view of one circuit; `public_bits` lists the register bits (index
// t*p + j) carried by classical messages.
inline ViewDistribution audit_view(const AuditCircuit &c, const EveStrategy &eve, int phase,
                                   const std::vector<int> &public_bits) {
    const auto tapped = tapped_slots(c, eve, phase);
    const int eve_count = static_cast<int>(tapped.size());
    const bool branches = eve.effective_kind() == EveKind::intercept_resend && eve.basis == InterceptBasis::random;
    const int branch_bits = branches ? eve_count : 0;
    if (branch_bits > 16) {
        throw CapacityError("leakage_audit: too many basis branches");
    }
    ViewDistribution view;
    const int reg_bits = c.r * c.p;
    const double weight = 1.0 / static_cast<double>(std::uint64_t{1} << branch_bits);
    for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << branch_bits); ++choice) {
        // Eve knows which basis she used, so it is part of her view.
        std::vector<TapBasis> bases(tapped.size(), TapBasis::computational);
        for (int e = 0; e < branch_bits; ++e) {
            bases[static_cast<std::size_t>(e)] = (choice >> e & 1u) ? TapBasis::hadamard : TapBasis::computational;
        }
        const auto dist = audit_outcomes(c, eve, tapped, bases);
        const std::string prefix = bits_of(choice, 0, branch_bits) + "|";
        for (std::uint64_t idx = 0; idx < dist.size(); ++idx) {
            if (dist[idx] == 0.0) {
                continue;
            }
            std::string key = prefix + bits_of(idx, reg_bits, eve_count) + "|";
            for (int bit : public_bits) {
                key += (idx >> bit & 1u) ? '1' : '0';
            }
            view[key] += weight * dist[idx];
        }
    }
    return view;
}

inline ViewDistribution product(const ViewDistribution &x, const ViewDistribution &y) {
    ViewDistribution out;
    for (const auto &[kx, px] : x) {
        for (const auto &[ky, py] : y) {
            out[kx + "#" + ky] += px * py;
        }
    }
    return out;
}

inline std::vector<std::pair<int, std::string>> star_channels(const ProtocolConfig &cfg) {
    std::vector<std::pair<int, std::string>> out;
    if (cfg.source == Source::third_party) {
        out.push_back({0, Party::alice().name()});
    }
    for (int i = 0; i < cfg.n; ++i) {
        out.push_back({i + 1, Party::bob(i).name()});
    }
    return out;
}

}  // namespace detail

/// Exact distribution of what Eve sees in one phase when the aggregated
/// secret is `s`. Phase 1 publishes a and every b_{j,i} with j != i; phase 2
/// every agent's register; phase 3 both registers of every pair.
inline ViewDistribution eve_view(const EveStrategy &eve, const ProtocolConfig &cfg, int phase, const BitVector &s) {
    cfg.validate_shape();
    const int n = cfg.n;
    const int m = cfg.m;
    const int p = n * m;
    if (s.size() != static_cast<std::size_t>(p)) {
        throw DimensionError("leakage_audit: secret length " + std::to_string(s.size()) + " is not n*m");
    }
    if (phase == 1) {
        detail::AuditCircuit c{n + 1, p, {0}, {{0, s}}, detail::star_channels(cfg)};
        std::vector<int> pub;
        for (int j = 0; j < p; ++j) {
            pub.push_back(j);
        }
        for (int t = 1; t <= n; ++t) {
            for (int seg = 0; seg < n; ++seg) {
                if (seg == t - 1) {
                    continue;
                }
                for (int b = 0; b < m; ++b) {
                    pub.push_back(t * p + seg * m + b);
                }
            }
        }
        return detail::audit_view(c, eve, 1, pub);
    }
    if (phase == 2) {
        std::vector<int> outputs;
        std::vector<std::pair<int, BitVector>> oracles;
        for (int i = 0; i < n; ++i) {
            outputs.push_back(i + 1);
            oracles.push_back({i + 1, extend_segment(s.slice(static_cast<std::size_t>(i * m), static_cast<std::size_t>(m)),
                                                     static_cast<std::size_t>(i), static_cast<std::size_t>(n))});
        }
        detail::AuditCircuit c{n + 1, p, outputs, oracles, detail::star_channels(cfg)};
        std::vector<int> pub;
        for (int j = p; j < (n + 1) * p; ++j) {
            pub.push_back(j);
        }
        return detail::audit_view(c, eve, 2, pub);
    }
    if (phase == 3) {
        ViewDistribution joint{{"", 1.0}};
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                std::vector<std::pair<int, std::string>> channels;
                if (cfg.source == Source::alice) {
                    channels.push_back({1, Party::bob(j).name()});
                } else {
                    channels.push_back({0, Party::bob(i).name()});
                    channels.push_back({1, Party::bob(j).name()});
                }
                const auto si = s.slice(static_cast<std::size_t>(i * m), static_cast<std::size_t>(m));
                const auto sj = s.slice(static_cast<std::size_t>(j * m), static_cast<std::size_t>(m));
                detail::AuditCircuit c{2, m, {0, 1}, {{0, si}, {1, sj}}, channels};
                std::vector<int> pub;
                for (int b = 0; b < 2 * m; ++b) {
                    pub.push_back(b);
                }
                joint = detail::product(joint, detail::audit_view(c, eve, 3, pub));
                if (joint.size() > (std::size_t{1} << 20)) {
                    throw CapacityError("leakage_audit: joint view too large to enumerate");
                }
            }
        }
        return joint;
    }
    throw IndexError("leakage_audit: no phase " + std::to_string(phase));
}

inline double total_variation(const ViewDistribution &x, const ViewDistribution &y) {
    double sum = 0.0;
    for (const auto &[k, px] : x) {
        const auto it = y.find(k);
        sum += std::abs(px - (it == y.end() ? 0.0 : it->second));
    }
    for (const auto &[k, py] : y) {
        if (!x.count(k)) {
            sum += py;
        }
    }
    const double tv = sum / 2.0;
    return tv < kLeakageTolerance ? 0.0 : tv;
}

/// Total variation distance between Eve's views under secrets s and s2.
inline double leakage_audit(const EveStrategy &eve, const ProtocolConfig &cfg, int phase, const BitVector &s,
                            const BitVector &s2) {
    return total_variation(eve_view(eve, cfg, phase, s), eve_view(eve, cfg, phase, s2));
}

}  // namespace qss
