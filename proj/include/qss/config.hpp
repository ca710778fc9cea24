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

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qss/adversary.hpp"
#include "qss/error.hpp"
#include "qss/protocol.hpp"
#include "qss/threshold.hpp"

namespace qss {

/// One sweep axis: a config key and the values it takes.
struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

/// Contents of a run config file.
///
///   # comment
///   protocol.n = 5
///   adversary.eve.kind = intercept_resend
///   sweep.protocol.decoys = 1,2,4,8,16
struct RunConfig {
    ProtocolConfig protocol;
    AdversaryPlan adversary;
    /// Field elements as hex; random per trial when unset.
    std::optional<std::string> secret_hex;
    std::uint64_t seed = 1;
    int trials = 1;
    std::string output;
    bool audit = false;
    std::vector<SweepAxis> sweep;

    /// Cross-field checks, run after every key is in.
    void validate() const {
        protocol.validate();
        adversary.validate(protocol.n, protocol.k);
        if (trials < 1) {
            throw ConfigError("trials must be at least 1");
        }
        if (secret_hex) {
            std::vector<std::uint8_t> elems;
            try {
                elems = Share::elements_from_hex(*secret_hex, protocol.w);
            } catch (const Error &e) {
                throw ConfigError(std::string("protocol.secret: ") + e.what());
            }
            if (elems.size() != static_cast<std::size_t>(protocol.elements())) {
                throw ConfigError("protocol.secret: " + std::to_string(elems.size()) + " elements, m/w needs " +
                                  std::to_string(protocol.elements()));
            }
        }
    }

    std::optional<std::vector<std::uint8_t>> secret() const {
        if (!secret_hex) {
            return std::nullopt;
        }
        return Share::elements_from_hex(*secret_hex, protocol.w);
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split_list(const std::string &value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

template <typename T>
T parse_number(const std::string &key, const std::string &value) {
    T out{};
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(key + ": expected an integer, got \"" + value + "\"");
    }
    return out;
}

inline bool parse_bool(const std::string &key, const std::string &value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(key + ": expected true or false, got \"" + value + "\"");
}

template <typename E, std::size_t N>
E parse_enum(const std::string &key, const std::string &value, const std::pair<const char *, E> (&names)[N]) {
    std::string allowed;
    for (const auto &[name, e] : names) {
        if (value == name) {
            return e;
        }
        allowed += allowed.empty() ? name : std::string("|") + name;
    }
    throw ConfigError(key + ": expected " + allowed + ", got \"" + value + "\"");
}

}  // namespace detail

/// Sets one key; throws ConfigError naming the key when it is unknown or the
/// value does not parse.
inline void set_config_key(RunConfig &cfg, const std::string &key, const std::string &value) {
    using namespace detail;
    auto &p = cfg.protocol;
    auto &eve = cfg.adversary.eve;
    auto &rogue = cfg.adversary.rogues;
    if (key == "protocol.n") {
        p.n = parse_number<int>(key, value);
    } else if (key == "protocol.k") {
        p.k = parse_number<int>(key, value);
    } else if (key == "protocol.m") {
        p.m = parse_number<int>(key, value);
    } else if (key == "protocol.w") {
        p.w = parse_number<int>(key, value);
    } else if (key == "protocol.decoys") {
        p.decoys.count_per_channel = parse_number<int>(key, value);
    } else if (key == "protocol.backing") {
        static const std::pair<const char *, Backing> names[] = {{"oracle", Backing::oracle},
                                                                 {"sampler", Backing::sampler}};
        p.backing = parse_enum(key, value, names);
    } else if (key == "protocol.source") {
        static const std::pair<const char *, Source> names[] = {{"alice", Source::alice},
                                                                {"third_party", Source::third_party}};
        p.source = parse_enum(key, value, names);
    } else if (key == "protocol.secret") {
        cfg.secret_hex = value;
    } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "trials") {
        cfg.trials = parse_number<int>(key, value);
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "adversary.audit") {
        cfg.audit = parse_bool(key, value);
    } else if (key == "adversary.eve.kind") {
        static const std::pair<const char *, EveKind> names[] = {{"none", EveKind::none},
                                                                 {"measure_resend", EveKind::measure_resend},
                                                                 {"intercept_resend", EveKind::intercept_resend},
                                                                 {"entangle_measure", EveKind::entangle_measure},
                                                                 {"pns", EveKind::pns}};
        eve.kind = parse_enum(key, value, names);
    } else if (key == "adversary.eve.basis") {
        static const std::pair<const char *, InterceptBasis> names[] = {
            {"computational", InterceptBasis::computational}, {"random", InterceptBasis::random}};
        eve.basis = parse_enum(key, value, names);
    } else if (key == "adversary.eve.phases") {
        eve.phases.clear();
        for (const auto &item : split_list(value)) {
            const int phase = parse_number<int>(key, item);
            if (phase < 1 || phase > 3) {
                throw ConfigError(key + ": phase " + item + " is not 1, 2 or 3");
            }
            eve.phases.insert(phase);
        }
    } else if (key == "adversary.eve.channels") {
        eve.channels = split_list(value);
    } else if (key == "adversary.eve.hadamard") {
        eve.final_hadamard = parse_bool(key, value);
    } else if (key == "adversary.rogue.agents") {
        rogue.agents.clear();
        for (const auto &item : split_list(value)) {
            rogue.agents.push_back(parse_number<int>(key, item));
        }
    } else if (key == "adversary.rogue.actions") {
        static const std::pair<const char *, RogueAction> names[] = {
            {"lie_phase1_comms", RogueAction::lie_phase1_comms},
            {"lie_phase2_report", RogueAction::lie_phase2_report},
            {"lie_phase3_oracle", RogueAction::lie_phase3_oracle},
            {"lie_phase3_report", RogueAction::lie_phase3_report}};
        rogue.actions.clear();
        for (const auto &item : split_list(value)) {
            rogue.actions.insert(parse_enum(key, item, names));
        }
    } else if (key == "adversary.rogue.mode") {
        static const std::pair<const char *, LieMode> names[] = {
            {"bit_flip", LieMode::bit_flip}, {"random", LieMode::random}, {"fixed", LieMode::fixed}};
        rogue.mode = parse_enum(key, value, names);
    } else if (key == "adversary.rogue.bit") {
        rogue.flip_bit = parse_number<int>(key, value);
    } else if (key == "adversary.rogue.mask") {
        try {
            rogue.mask = BitVector::from_string(value);
        } catch (const Error &e) {
            throw ConfigError(key + ": " + e.what());
        }
    } else {
        throw ConfigError("unknown key \"" + key + "\"");
    }
}

/// Parses without the cross-field checks; `origin` prefixes diagnostics.
inline RunConfig parse_config_unchecked(std::istream &in, const std::string &origin = "config") {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = detail::trim(line.substr(0, hash));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) {
            throw ConfigError(where + "expected key = value");
        }
        const std::string key = detail::trim(body.substr(0, eq));
        const std::string value = detail::trim(body.substr(eq + 1));
        if (value.empty()) {
            throw ConfigError(where + key + ": empty value");
        }
        try {
            if (key.rfind("sweep.", 0) == 0) {
                SweepAxis axis{key.substr(6), detail::split_list(value)};
                // check the key exists and every value parses
                for (const auto &v : axis.values) {
                    RunConfig probe;
                    set_config_key(probe, axis.key, v);
                }
                cfg.sweep.push_back(std::move(axis));
            } else {
                set_config_key(cfg, key, value);
            }
        } catch (const ConfigError &e) {
            throw ConfigError(where + e.what());
        }
    }
    return cfg;
}

inline RunConfig parse_config(std::istream &in, const std::string &origin = "config") {
    auto cfg = parse_config_unchecked(in, origin);
    try {
        cfg.validate();
    } catch (const Error &e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

inline RunConfig parse_config_text(const std::string &text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path);
    }
    return parse_config(in, path);
}

}  // namespace qss
