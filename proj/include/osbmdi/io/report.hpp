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

// Run reports. Every report starts with its manifest so a run can be
// reproduced from the report alone.

#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "osbmdi/analysis/detection.hpp"
#include "osbmdi/analysis/entangle.hpp"
#include "osbmdi/analysis/information.hpp"
#include "osbmdi/analysis/leakage.hpp"
#include "osbmdi/io/config.hpp"

namespace osbmdi {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
    std::string command = "run";
    std::string config_path;
    SessionConfig config;
    std::size_t sessions = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> outputs;
    std::string version = kToolVersion;
};

inline Json manifest_json(const RunManifest& m) {
    Json j;
    j["tool"] = "osbmdi";
    j["version"] = m.version;
    j["command"] = m.command;
    j["config_path"] = m.config_path;
    j["config"] = config_to_json(m.config);
    j["sessions"] = m.sessions;
    j["seed"] = m.seed;
    Json out = Json::object();
    for (const auto& [k, v] : m.outputs) out[k] = v;
    j["outputs"] = out;
    return j;
}

inline Json estimate_json(const DetectionEstimate& e) {
    Json j;
    j["check"] = e.label;
    j["checks"] = e.checks;
    j["failures"] = e.failures;
    j["rate"] = e.rate;
    j["half_width"] = e.half_width;
    return j;
}

inline Json information_json(const InformationEstimate& e) {
    Json j;
    j["bits_per_symbol"] = e.bits;
    j["bias_bound"] = e.bias_bound;
    j["samples"] = e.samples;
    j["insufficient"] = e.insufficient;
    return j;
}

inline Json run_report(const RunManifest& manifest, std::span<const SessionReport> reports) {
    const SessionConfig& cfg = manifest.config;
    Json j;
    j["manifest"] = manifest_json(manifest);

    Json summary;
    std::size_t aborted = 0, perfect = 0, violations = 0;
    Json stages = Json::object();
    for (const char* s : {"nested", "stage1", "stage2", "stage3"}) stages[s] = 0;
    for (const auto& r : reports) {
        if (r.aborted) {
            ++aborted;
            stages[r.abort_stage] = stages[r.abort_stage].get<std::size_t>() + 1;
        }
        if (r.decoded_perfectly()) ++perfect;
        violations += r.transcript_violations.size();
    }
    summary["sessions"] = reports.size();
    summary["aborted"] = aborted;
    summary["abort_fraction"] = abort_fraction(reports);
    summary["aborts_by_stage"] = stages;
    summary["transcript_violations"] = violations;
    j["summary"] = summary;

    CheckTallies total{};
    for (const auto& r : reports)
        for (std::size_t k = 0; k < kCheckKindCount; ++k) total[k] += r.tallies[k];
    Json rates;
    rates["stage1"] = tally_for_stage(total, Stage::kSwap).rate();
    rates["stage2"] = tally_for_stage(total, Stage::kMessage).rate();
    rates["stage3"] = tally_for_stage(total, Stage::kDecode).rate();
    j["error_rates"] = rates;

    Json detection = Json::array();
    for (const auto& e : detection_by_kind(reports)) detection.push_back(estimate_json(e));
    j["detection"] = detection;

    std::vector<SessionReport> nested;
    for (const auto& r : reports)
        for (const auto& n : r.nested) nested.push_back(n);
    if (!nested.empty()) {
        Json nd = Json::array();
        for (const auto& e : detection_by_kind(nested)) nd.push_back(estimate_json(e));
        j["nested_detection"] = nd;
    }

    std::array<std::size_t, 4> cases{};
    std::size_t sent = 0, correct = 0;
    for (const auto& r : reports) {
        for (std::size_t k = 0; k < 4; ++k) cases[k] += r.case_counts[k];
        sent += r.symbols_sent;
        correct += r.symbols_correct;
    }
    Json case_json;
    case_json["I"] = cases[0];
    case_json["II"] = cases[1];
    case_json["III"] = cases[2];
    case_json["IV"] = cases[3];
    j["stage1_cases"] = case_json;

    Json decoding;
    decoding["symbols_sent"] = sent;
    decoding["symbols_correct"] = correct;
    decoding["accuracy"] = sent ? static_cast<double>(correct) / static_cast<double>(sent) : 0.0;
    decoding["sessions_decoded_perfectly"] = perfect;
    j["decoding"] = decoding;

    Json info;
    info["empirical"] = information_json(eve_information(reports));
    const auto avg = average_leakage(cfg.alice_states, cfg.bob_states, cfg.mode == Mode::kQd);
    info["enumerated_leak_bits"] = avg.leaked;
    info["enumerated_message_leak_bits"] = avg.leaked_messages;
    j["eve_information"] = info;

    if (cfg.attack) {
        Json atk;
        atk["spec"] = cfg.attack->describe();
        if (cfg.attack->strategy == Strategy::kEntangleMeasure) {
            const auto a = analyse_entangle_measure(cfg.attack->alpha, cfg.attack->beta);
            atk["alpha2"] = a.alpha2;
            atk["beta2"] = a.beta2;
            atk["schmidt_rank"] = a.schmidt_rank;
            atk["product_state"] = a.schmidt_rank == 1;
            atk["predicted_detection_per_check"] = a.mismatch_probability;
            Json measured = Json::array();
            measured.push_back(estimate_json(estimate("stage1", tally_for_stage(total, Stage::kSwap))));
            measured.push_back(estimate_json(estimate("stage2", tally_for_stage(total, Stage::kMessage))));
            atk["measured_detection_per_check"] = measured;
        }
        j["attack"] = atk;
    }
    return j;
}

}  // namespace osbmdi
