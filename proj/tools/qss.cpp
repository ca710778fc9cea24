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

// qss: run, sweep and check the secret sharing simulator from the shell.
//
// Exit codes: 0 success, 1 error, 2 a run ended in Abort.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qss.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAbort = 2;

/// stdout unless a path is given.
class Output {
  public:
    explicit Output(const std::string &path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw qss::ConfigError("cannot write " + path);
            }
        }
    }

    std::ostream &stream() { return file_.is_open() ? static_cast<std::ostream &>(file_) : std::cout; }

  private:
    std::ofstream file_;
};

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string proportion_csv(const qss::Proportion &p) {
    return fixed(p.rate) + "," + fixed(p.lower) + "," + fixed(p.upper);
}

std::vector<int> parse_int_list(const std::string &text, const char *what) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception &) {
            throw qss::ConfigError(std::string(what) + ": not an integer list: " + text);
        }
    }
    return out;
}

struct Common {
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App *cmd, Common &c, bool with_trials) {
    cmd->add_option("--seed", c.seed, "Base seed (overrides the config)");
    if (with_trials) {
        cmd->add_option("--trials", c.trials, "Trial count (overrides the config)")->check(CLI::PositiveNumber);
    }
    cmd->add_option("--out", c.out, "Output file (default: config output, else stdout)");
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

int cmd_run(const std::string &path, const Common &c) {
    auto cfg = qss::load_config(path);
    const std::uint64_t seed = c.seed.value_or(cfg.seed);
    const int trials = c.trials.value_or(cfg.trials);
    Output out(c.out.empty() ? cfg.output : c.out);
    auto &os = out.stream();
    if (c.format == "csv") {
        os << "trial,trial_seed,verdict,abort_phase,detections,loyal_correct,loyal\n";
    }
    bool aborted = false;
    qss::run_trials(cfg, seed, trials, [&](const qss::RunReport &r) {
        aborted = aborted || !r.proceed;
        if (c.format == "json") {
            os << qss::to_json(r).dump() << "\n";
            return;
        }
        int loyal = 0;
        int correct = 0;
        for (const auto &a : r.agents) {
            loyal += a.loyal ? 1 : 0;
            correct += a.loyal && a.correct ? 1 : 0;
        }
        os << r.trial << "," << r.trial_seed << "," << r.verdict() << "," << (r.abort ? r.abort->phase : 0) << ","
           << r.detections.size() << "," << correct << "," << loyal << "\n";
    });
    qss::log(qss::LogLevel::info, "ran " + std::to_string(trials) + " trials from " + path);
    return aborted ? kExitAbort : kExitOk;
}

int cmd_sweep(const std::string &path, const Common &c) {
    auto cfg = qss::load_config(path);
    const std::uint64_t seed = c.seed.value_or(cfg.seed);
    const int trials = c.trials.value_or(cfg.trials);
    const auto cells = qss::expand_sweep(cfg, [](const std::string &msg) { qss::log(qss::LogLevel::warn, msg); });
    Output out(c.out.empty() ? cfg.output : c.out);
    auto &os = out.stream();
    if (c.format == "csv") {
        os << "cell";
        for (const auto &axis : cfg.sweep) {
            os << "," << axis.key;
        }
        os << ",n,k,m,decoys,trials,abort_rate,abort_lo,abort_hi,detection_rate,detection_lo,detection_hi,"
              "recovery_rate,recovery_lo,recovery_hi,ambiguity_rate,eta1,eta2,eta3\n";
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto res = qss::run_cell(cells[i], seed, i, trials);
        const auto &p = cells[i].config.protocol;
        if (c.format == "csv") {
            os << i;
            for (const auto &kv : cells[i].assignment) {
                os << "," << kv.second;
            }
            os << "," << p.n << "," << p.k << "," << p.m << "," << p.decoys.count_per_channel << "," << trials << ","
               << proportion_csv(res.stats.abort) << "," << proportion_csv(res.stats.detection) << ","
               << proportion_csv(res.stats.recovery) << "," << fixed(res.stats.ambiguity.rate) << ","
               << res.eta.eta1.to_string() << "," << res.eta.eta2.to_string() << "," << res.eta.eta3.to_string()
               << "\n";
            continue;
        }
        qss::Json row;
        row["cell"] = i;
        qss::Json assignment = qss::Json::object();
        for (const auto &kv : cells[i].assignment) {
            assignment[kv.first] = kv.second;
        }
        row["assignment"] = assignment;
        row["seed"] = res.seed;
        row["trials"] = trials;
        row["stats"] = qss::to_json(res.stats);
        row["metrics"] = qss::to_json(res.eta);
        row["version"] = qss::kVersion;
        os << row.dump() << "\n";
    }
    return kExitOk;
}

int cmd_oracle_check(int n, int m, std::uint64_t shots, int secrets, const Common &c) {
    const auto res = qss::oracle_check(n, m, shots, secrets, c.seed.value_or(1));
    Output out(c.out);
    auto &os = out.stream();
    if (c.format == "json") {
        qss::Json j{{"n", n}, {"m", m}, {"shots", shots}, {"violations", res.violations()},
                    {"min_p", res.min_p()}, {"pass", res.pass()}};
        qss::Json cases = qss::Json::array();
        for (const auto &cs : res.cases) {
            cases.push_back(qss::Json{{"secret", cs.secret.to_string()},
                                      {"oracle_violations", cs.oracle_violations},
                                      {"sampler_violations", cs.sampler_violations},
                                      {"chi2", cs.chi.statistic},
                                      {"dof", cs.chi.dof},
                                      {"p", cs.chi.p_value}});
        }
        j["cases"] = cases;
        os << j.dump() << "\n";
    } else {
        os << "secret,oracle_violations,sampler_violations,chi2,dof,p\n";
        for (const auto &cs : res.cases) {
            os << cs.secret.to_string() << "," << cs.oracle_violations << "," << cs.sampler_violations << ","
               << fixed(cs.chi.statistic) << "," << cs.chi.dof << "," << fixed(cs.chi.p_value) << "\n";
        }
    }
    std::fprintf(stderr, "oracle-check n=%d m=%d shots=%llu: violations=%llu min_p=%.6f %s\n", n, m,
                 static_cast<unsigned long long>(shots), static_cast<unsigned long long>(res.violations()),
                 res.min_p(), res.pass() ? "PASS" : "FAIL");
    return res.pass() ? kExitOk : kExitError;
}

int cmd_metrics(const std::string &ns, const std::string &ms, const Common &c) {
    const auto n_values = parse_int_list(ns, "--n");
    const auto m_values = parse_int_list(ms, "--m");
    Output out(c.out);
    auto &os = out.stream();
    if (c.format == "csv") {
        os << "n,m,eta1,eta2,eta3,eta1_decimal,eta2_decimal,eta3_decimal\n";
    }
    for (int n : n_values) {
        for (int m : m_values) {
            const auto e = qss::EfficiencyReport::of(n, m);
            if (c.format == "csv") {
                os << n << "," << m << "," << e.eta1.to_string() << "," << e.eta2.to_string() << ","
                   << e.eta3.to_string() << "," << e.eta1.to_decimal() << "," << e.eta2.to_decimal() << ","
                   << e.eta3.to_decimal() << "\n";
            } else {
                qss::Json row{{"n", n}, {"m", m}};
                row["metrics"] = qss::to_json(e);
                os << row.dump() << "\n";
            }
        }
    }
    return kExitOk;
}

int cmd_report(const std::vector<std::string> &files, const Common &c) {
    std::vector<qss::RunReport> reports;
    for (const auto &path : files) {
        std::ifstream in(path);
        if (!in) {
            throw qss::ConfigError("cannot read " + path);
        }
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) {
                continue;
            }
            try {
                reports.push_back(qss::report_from_json(qss::Json::parse(line)));
            } catch (const std::exception &e) {
                throw qss::ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
    }
    const auto stats = qss::empirical_stats(reports);
    Output out(c.out);
    auto &os = out.stream();
    if (c.format == "csv") {
        os << "config_hash,runs,abort_rate,abort_lo,abort_hi,detection_rate,detection_lo,detection_hi,"
              "recovery_rate,recovery_lo,recovery_hi,ambiguity_rate\n";
        os << stats.config_hash << "," << stats.runs << "," << proportion_csv(stats.abort) << ","
           << proportion_csv(stats.detection) << "," << proportion_csv(stats.recovery) << ","
           << fixed(stats.ambiguity.rate) << "\n";
    } else {
        os << qss::to_json(stats).dump() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Threshold quantum secret sharing simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qss::kVersion);

    Common run_opts, sweep_opts, check_opts, metric_opts, report_opts;
    std::string run_config, sweep_config;

    auto *run = app.add_subcommand("run", "Run trials of a config, one JSON report per line");
    run->add_option("config", run_config, "Config file")->required();
    add_common(run, run_opts, true);

    auto *sweep = app.add_subcommand("sweep", "Run every cell of a config's sweep grid");
    sweep->add_option("config", sweep_config, "Config file")->required();
    add_common(sweep, sweep_opts, true);
    sweep_opts.format = "csv";

    int check_n = 2, check_m = 1, check_secrets = 8;
    std::uint64_t check_shots = 20000;
    auto *check = app.add_subcommand("oracle-check", "Compare the sampler with the statevector simulator");
    check->add_option("--n", check_n, "Agents")->check(CLI::Range(2, 64));
    check->add_option("--m", check_m, "Segment width")->check(CLI::Range(1, 64));
    check->add_option("--shots", check_shots, "Shots per backing and secret");
    check->add_option("--secrets", check_secrets, "Random secrets to test")->check(CLI::PositiveNumber);
    add_common(check, check_opts, false);
    check_opts.format = "csv";

    std::string metric_n = "2,3,4,5,6,7,8,9,10", metric_m = "1,2,4,8,16";
    auto *metrics = app.add_subcommand("metrics", "Print qubit-efficiency ratios for an (n, m) grid");
    metrics->add_option("--n", metric_n, "Comma-separated agent counts");
    metrics->add_option("--m", metric_m, "Comma-separated segment widths");
    add_common(metrics, metric_opts, false);
    metric_opts.format = "csv";

    std::vector<std::string> report_files;
    auto *report = app.add_subcommand("report", "Aggregate JSON-lines run reports");
    report->add_option("files", report_files, "Report files")->required();
    add_common(report, report_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*run) return cmd_run(run_config, run_opts);
        if (*sweep) return cmd_sweep(sweep_config, sweep_opts);
        if (*check) return cmd_oracle_check(check_n, check_m, check_shots, check_secrets, check_opts);
        if (*metrics) return cmd_metrics(metric_n, metric_m, metric_opts);
        if (*report) return cmd_report(report_files, report_opts);
    } catch (const std::exception &e) {
        qss::log(qss::LogLevel::error, e.what());
        return kExitError;
    }
    return kExitError;
}
