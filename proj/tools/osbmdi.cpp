// Copyright 2026 The osbmdi Authors
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

// osbmdi: batch runner and report emitter.
//
// Exit codes: 0 success, 1 configuration or usage error (nothing written),
// 2 at least one session aborted (report still written). `table2` exits 2
// when the reproduced table differs from the reference.
//
// Every option can also be set through an OSBMDI_* environment variable
// (OSBMDI_CONFIG, OSBMDI_SESSIONS, OSBMDI_SEED, OSBMDI_ATTACK, OSBMDI_NOISE,
// OSBMDI_MODE, OSBMDI_OUT, OSBMDI_THREADS); flags win over the environment.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osbmdi/io/report.hpp"
#include "osbmdi/osbmdi.hpp"

namespace {

using namespace osbmdi;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAborted = 2;

struct CommonOptions {
    std::string config_path;
    std::optional<std::size_t> sessions;
    std::optional<std::uint64_t> seed;
    std::string attack;
    std::string noise;
    std::string mode;
    std::string out;
    unsigned threads = 0;
};

void add_common(CLI::App* app, CommonOptions& o) {
    app->add_option("--config", o.config_path, "session config (JSON)")->envname("OSBMDI_CONFIG");
    app->add_option("--sessions", o.sessions, "number of sessions")->envname("OSBMDI_SESSIONS");
    app->add_option("--seed", o.seed, "master seed (overrides the config)")->envname("OSBMDI_SEED");
    app->add_option("--attack", o.attack, "NAME[:key=value,...]")->envname("OSBMDI_ATTACK");
    app->add_option("--noise", o.noise, "dephasing:RAD | rotation:RAD")->envname("OSBMDI_NOISE");
    app->add_option("--mode", o.mode, "qsdc | qd | qkd")->envname("OSBMDI_MODE");
    app->add_option("--out", o.out, "output path (default stdout)")->envname("OSBMDI_OUT");
    app->add_option("--threads", o.threads, "worker threads (0 = all cores)")->envname("OSBMDI_THREADS");
}

SessionConfig resolve_config(const CommonOptions& o) {
    SessionConfig cfg = o.config_path.empty() ? SessionConfig{} : load_config(o.config_path);
    if (o.seed) cfg.master_seed = *o.seed;
    if (!o.attack.empty()) cfg.attack = o.attack == "none" ? std::nullopt : std::optional(parse_attack(o.attack));
    if (!o.noise.empty()) {
        if (o.noise == "none") {
            cfg.noise.reset();
        } else {
            cfg.noise = parse_noise(o.noise);
            if (!cfg.noise) throw ConfigError("bad noise spec: " + o.noise);
        }
    }
    if (!o.mode.empty()) {
        const auto m = parse_mode(o.mode);
        if (!m) throw ConfigError("unknown mode: " + o.mode);
        cfg.mode = *m;
    }
    cfg.validate();
    return cfg;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

int cmd_run(const CommonOptions& o) {
    const SessionConfig cfg = resolve_config(o);
    RunManifest m;
    m.command = "run";
    m.config_path = o.config_path;
    m.config = cfg;
    m.sessions = o.sessions.value_or(100);
    m.seed = cfg.master_seed;
    if (!o.out.empty()) m.outputs.emplace_back("report", o.out);
    const auto reports = run_batch(cfg, {m.sessions, o.threads, false});
    emit(o.out, run_report(m, reports).dump(2) + "\n");
    for (const auto& r : reports)
        if (r.aborted) return kExitAborted;
    return kExitOk;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.empty()) throw ConfigError("sweep grid is empty");
    // START:STOP:COUNT, inclusive linear spacing; "pi" is accepted in either bound.
    const auto parts = detail::split(text, ':');
    auto number = [](std::string_view s) {
        if (s == "pi") return std::numbers::pi;
        if (s == "pi/2") return std::numbers::pi / 2;
        return detail::parse_double("grid", s);
    };
    if (parts.size() == 3) {
        const double a = number(parts[0]), b = number(parts[1]);
        const double n = detail::parse_double("grid", parts[2]);
        if (n < 1 || n != static_cast<double>(static_cast<std::size_t>(n))) throw ConfigError("grid count must be >= 1");
        const auto count = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i < count; ++i)
            grid.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    } else {
        for (auto v : detail::split(text, ','))
            if (!v.empty()) grid.push_back(number(v));
    }
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    return grid;
}

struct SweepOptions {
    std::string kind;
    std::string grid;
    std::string label = "psi+";
    std::string channel = "dephasing";
    std::string exposure = "whole";
};

int cmd_sweep(const CommonOptions& o, const SweepOptions& s) {
    const auto grid = parse_grid(s.grid);
    SessionConfig cfg = resolve_config(o);
    RunManifest m;
    m.command = "sweep " + s.kind;
    m.config_path = o.config_path;
    m.seed = cfg.master_seed;
    if (!o.out.empty()) m.outputs.emplace_back("table", o.out);
    std::ostringstream out;

    if (s.kind == "noise") {
        const auto label = parse_bell_label(s.label);
        if (!label) throw ConfigError("unknown Bell label: " + s.label);
        const auto probe = parse_noise(s.channel + ":0");
        if (!probe) throw ConfigError("unknown noise channel: " + s.channel);
        if (s.exposure != "whole" && s.exposure != "travel") throw ConfigError("exposure must be whole or travel");
        m.config = cfg;
        out << "# manifest " << manifest_json(m).dump() << "\n";
        out << "# label=" << s.label << " channel=" << s.channel << " exposure=" << s.exposure << "\n";
        out << "param\tfidelity\n";
        const auto curve = noise_fidelity(*label, probe->channel, grid,
                                          s.exposure == "whole" ? NoiseExposure::kWholePair
                                                                : NoiseExposure::kTravelHalfOnly);
        for (const auto& p : curve) out << detail::format_double(p.parameter) << "\t" << detail::format_double(p.fidelity) << "\n";
    } else if (s.kind == "attack-strength") {
        if (!cfg.attack) throw ConfigError("attack-strength sweep needs --attack or an attack in the config");
        // Checks are tallied in full: sessions keep running past failed checks.
        cfg.error_threshold = 1.0;
        m.config = cfg;
        m.sessions = o.sessions.value_or(200);
        out << "# manifest " << manifest_json(m).dump() << "\n";
        const bool entangle = cfg.attack->strategy == Strategy::kEntangleMeasure;
        out << (entangle ? "beta2" : "fraction") << "\tchecks\tfailures\tdetection\thalf_width\n";
        for (double g : grid) {
            SessionConfig point = cfg;
            AttackSpec a = *cfg.attack;
            if (entangle) {
                if (g < 0 || g > 1) throw ConfigError("beta2 grid values must lie in [0, 1]");
                a.alpha = std::sqrt(1.0 - g);
                a.beta = std::sqrt(g);
            } else {
                a.fraction = g;
            }
            std::vector<Stage> stages;
            if (a.strategy == Strategy::kFakeBmo)
                stages = a.fake_stages;
            else
                for (const Leg& l : a.legs) stages.push_back(l.stage);
            if (g == 0.0 && !entangle)
                point.attack.reset();
            else
                point.attack = a;
            point.validate();
            const auto reports = run_batch(point, {m.sessions, o.threads, false});
            std::vector<CheckKind> kinds;
            for (CheckKind k : kAllCheckKinds)
                if (std::find(stages.begin(), stages.end(), stage_of(k)) != stages.end()) kinds.push_back(k);
            const auto e = detection_rate(reports, kinds, "sweep");
            out << detail::format_double(g) << "\t" << e.checks << "\t" << e.failures << "\t"
                << detail::format_double(e.rate) << "\t" << detail::format_double(e.half_width) << "\n";
        }
    } else {
        throw ConfigError("sweep kind must be noise or attack-strength");
    }
    emit(o.out, out.str());
    return kExitOk;
}

int cmd_leakage(const CommonOptions& o, bool oneway) {
    const SessionConfig cfg = resolve_config(o);
    std::ostringstream out;
    const bool dialogue = !oneway;
    out << "# " << (dialogue ? "dialogue" : "one-way") << " leakage, alice_states="
        << config_to_json(cfg)["alice_states"].dump() << " bob_states=" << config_to_json(cfg)["bob_states"].dump()
        << "\n";
    out << "bmo1\tbmo2\tconsistent\th_apriori\th_aposteriori\tleaked\th_messages\tleaked_messages\n";
    for (const auto& row : leakage_table(cfg.alice_states, cfg.bob_states, dialogue)) {
        const auto& r = row.report;
        out << to_string(row.bmo1) << "\t" << to_string(row.bmo2) << "\t" << r.consistent_count << "\t"
            << detail::format_double(r.h_apriori) << "\t" << detail::format_double(r.h_aposteriori) << "\t"
            << detail::format_double(r.leaked) << "\t" << detail::format_double(r.h_messages) << "\t"
            << detail::format_double(r.leaked_messages) << "\n";
    }
    const auto avg = average_leakage(cfg.alice_states, cfg.bob_states, dialogue);
    out << "average\t-\t-\t-\t-\t" << detail::format_double(avg.leaked) << "\t-\t"
        << detail::format_double(avg.leaked_messages) << "\n";
    emit(o.out, out.str());
    return kExitOk;
}

int cmd_table2(const std::string& out_path) {
    const auto expected = expected_table2();
    const auto got = reproduce_table2();
    std::ostringstream out;
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        out << to_string(got[i]) << "\n";
        if (!(got[i] == expected[i])) {
            ++mismatches;
            out << "MISMATCH expected\t" << to_string(expected[i]) << "\n";
        }
    }
    out << "table2: " << expected.size() << " rows, " << mismatches << " mismatches\n";
    emit(out_path, out.str());
    return mismatches == 0 ? kExitOk : kExitAborted;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthogonal-state-based MDI secure direct communication and dialogue simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    CommonOptions run_opts, sweep_opts, leak_opts;
    SweepOptions sweep;
    bool oneway = false;
    std::string table2_out;

    auto* run = app.add_subcommand("run", "run a batch of sessions and write a JSON report");
    add_common(run, run_opts);

    auto* sw = app.add_subcommand("sweep", "noise-fidelity or attack-strength sweep (TSV)");
    add_common(sw, sweep_opts);
    sw->add_option("--kind", sweep.kind, "noise | attack-strength")->required();
    sw->add_option("--grid", sweep.grid, "comma list or START:STOP:COUNT")->required();
    sw->add_option("--label", sweep.label, "Bell label for noise sweeps");
    sw->add_option("--channel", sweep.channel, "dephasing | rotation");
    sw->add_option("--exposure", sweep.exposure, "whole | travel");

    auto* leak = app.add_subcommand("leakage", "leakage per announcement pair for the configured state sets");
    add_common(leak, leak_opts);
    leak->add_flag("--oneway", oneway, "one-way (QSDC) accounting instead of dialogue");

    auto* t2 = app.add_subcommand("table2", "reproduce the decoding table and diff it against the reference");
    t2->add_option("--out", table2_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_opts);
        if (*sw) return cmd_sweep(sweep_opts, sweep);
        if (*leak) return cmd_leakage(leak_opts, oneway);
        if (*t2) return cmd_table2(table2_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
