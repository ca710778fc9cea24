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

#include <string>

#include <nlohmann/json.hpp>

#include "qss/empirical.hpp"
#include "qss/error.hpp"
#include "qss/metrics.hpp"
#include "qss/protocol.hpp"

namespace qss {

inline constexpr const char *kReportSchema = "qss.run_report/1";
inline constexpr const char *kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational &r) {
    return Json{{"num", r.num()}, {"den", r.den()}, {"decimal", r.to_decimal()}};
}

inline Json to_json(const EfficiencyReport &e) {
    return Json{{"eta1", to_json(e.eta1)}, {"eta2", to_json(e.eta2)}, {"eta3", to_json(e.eta3)}};
}

inline Json to_json(const Proportion &p) {
    return Json{{"successes", p.successes}, {"trials", p.trials}, {"rate", p.rate}, {"lower", p.lower}, {"upper", p.upper}};
}

inline Json to_json(const RunReport &r) {
    Json j;
    j["schema"] = kReportSchema;
    j["version"] = kVersion;
    j["seed"] = r.seed;
    j["trial"] = r.trial;
    j["trial_seed"] = r.trial_seed;
    j["config_hash"] = r.config_hash;
    j["verdict"] = r.verdict();
    j["abort"] = r.abort ? Json{{"phase", r.abort->phase}, {"cause", r.abort->cause}} : Json(nullptr);
    j["secret"] = r.secret;
    Json agents = Json::array();
    for (const auto &a : r.agents) {
        agents.push_back(Json{{"index", a.index},
                              {"loyal", a.loyal},
                              {"recovered", a.recovered},
                              {"received", a.received},
                              {"decoded", a.decoded},
                              {"support", a.support},
                              {"ambiguous", a.ambiguous},
                              {"correct", a.correct}});
    }
    j["agents"] = agents;
    Json detections = Json::array();
    for (const auto &d : r.detections) {
        detections.push_back(
            Json{{"phase", d.phase}, {"channel", d.channel}, {"mismatches", d.mismatches}, {"decoys", d.decoys}});
    }
    j["detections"] = detections;
    j["metrics"] = to_json(r.metrics);
    if (!r.leakage.empty()) {
        Json leakage = Json::array();
        for (const auto &l : r.leakage) {
            Json entry{{"phase", l.phase}, {"tv", l.tv ? Json(*l.tv) : Json(nullptr)}};
            if (!l.note.empty()) {
                entry["note"] = l.note;
            }
            leakage.push_back(entry);
        }
        j["leakage"] = leakage;
    }
    return j;
}

inline Rational rational_from_json(const Json &j) {
    return Rational(j.at("num").get<std::uint64_t>(), j.at("den").get<std::uint64_t>());
}

/// Reads what to_json wrote.
inline RunReport report_from_json(const Json &j) {
    if (j.value("schema", std::string()) != kReportSchema) {
        throw ConfigError("report: unsupported schema \"" + j.value("schema", std::string()) + "\"");
    }
    RunReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.trial = j.at("trial").get<std::uint64_t>();
    r.trial_seed = j.at("trial_seed").get<std::uint64_t>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.proceed = j.at("verdict").get<std::string>() == "proceed";
    if (!j.at("abort").is_null()) {
        r.abort = AbortInfo{j["abort"].at("phase").get<int>(), j["abort"].at("cause").get<std::string>()};
    }
    r.secret = j.at("secret").get<std::string>();
    for (const auto &a : j.at("agents")) {
        AgentReport agent;
        agent.index = a.at("index").get<int>();
        agent.loyal = a.at("loyal").get<bool>();
        agent.recovered = a.at("recovered").get<std::string>();
        agent.received = a.at("received").get<std::vector<std::string>>();
        agent.decoded = a.at("decoded").get<std::string>();
        agent.support = a.at("support").get<int>();
        agent.ambiguous = a.at("ambiguous").get<bool>();
        agent.correct = a.at("correct").get<bool>();
        r.agents.push_back(std::move(agent));
    }
    for (const auto &d : j.at("detections")) {
        r.detections.push_back({d.at("phase").get<int>(), d.at("channel").get<std::string>(),
                                d.at("mismatches").get<int>(), d.at("decoys").get<int>()});
    }
    const auto &m = j.at("metrics");
    r.metrics = {rational_from_json(m.at("eta1")), rational_from_json(m.at("eta2")), rational_from_json(m.at("eta3"))};
    if (j.contains("leakage")) {
        for (const auto &l : j["leakage"]) {
            LeakageEntry entry;
            entry.phase = l.at("phase").get<int>();
            if (!l.at("tv").is_null()) {
                entry.tv = l["tv"].get<double>();
            }
            entry.note = l.value("note", std::string());
            r.leakage.push_back(entry);
        }
    }
    return r;
}

inline Json to_json(const EmpiricalStats &s) {
    return Json{{"config_hash", s.config_hash}, {"runs", s.runs},           {"abort", to_json(s.abort)},
                {"detection", to_json(s.detection)}, {"recovery", to_json(s.recovery)}, {"ambiguity", to_json(s.ambiguity)}};
}

}  // namespace qss
