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

/**
 * @file config.hpp
 * @brief JSON form of SessionConfig.
 *
 *   {
 *     "n_pairs": 8,                      positive even integer
 *     "mode": "qsdc",                    qsdc | qd | qkd
 *     "alice_states": ["psi+"],          labels: psi+ psi- phi+ phi-
 *     "bob_states": ["psi+", "psi-"],
 *     "decoy_states": ["psi+"],          one label = fixed, several = random per decoy
 *     "attack": "intercept_resend",      NAME[:key=value,...] or null
 *     "noise": "dephasing:0.3",          dephasing|rotation:RADIANS or null
 *     "error_threshold": 0.0,
 *     "seed": 1,
 *     "use_cases_ii_iii_for_message": false,
 *     "split_decoys": 2,                 optional, default n_pairs / 4
 *     "unencoded_checks": 0,
 *     "message": ""                      QSDC only
 *   }
 *
 * Every key is optional; unknown keys are rejected.
 */
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "osbmdi/errors.hpp"
#include "osbmdi/protocol/config.hpp"

namespace osbmdi {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::vector<BellLabel> labels_from_json(const Json& j, const char* key) {
    if (!j.is_array()) throw ConfigError(std::string(key) + " must be an array of Bell labels");
    std::vector<BellLabel> out;
    for (const auto& item : j) {
        if (!item.is_string()) throw ConfigError(std::string(key) + " must contain strings");
        const auto l = parse_bell_label(item.get<std::string>());
        if (!l) throw ConfigError("unknown Bell label in " + std::string(key) + ": " + item.get<std::string>());
        out.push_back(*l);
    }
    return out;
}

inline Json labels_to_json(const std::vector<BellLabel>& labels) {
    Json j = Json::array();
    for (BellLabel l : labels) j.push_back(std::string(to_string(l)));
    return j;
}

}  // namespace detail

inline SessionConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    SessionConfig c;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "n_pairs") {
                if (!v.is_number_unsigned()) throw ConfigError("n_pairs must be a non-negative integer");
                c.n_pairs = v.get<std::size_t>();
            } else if (key == "mode") {
                const auto m = parse_mode(v.get<std::string>());
                if (!m) throw ConfigError("unknown mode: " + v.get<std::string>());
                c.mode = *m;
            } else if (key == "alice_states") {
                c.alice_states = detail::labels_from_json(v, "alice_states");
            } else if (key == "bob_states") {
                c.bob_states = detail::labels_from_json(v, "bob_states");
            } else if (key == "decoy_states") {
                c.decoy_states = detail::labels_from_json(v, "decoy_states");
            } else if (key == "attack") {
                if (v.is_null())
                    c.attack.reset();
                else
                    c.attack = parse_attack(v.get<std::string>());
            } else if (key == "noise") {
                if (v.is_null()) {
                    c.noise.reset();
                } else {
                    c.noise = parse_noise(v.get<std::string>());
                    if (!c.noise) throw ConfigError("bad noise spec: " + v.get<std::string>());
                }
            } else if (key == "error_threshold") {
                c.error_threshold = v.get<double>();
            } else if (key == "seed") {
                if (!v.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
                c.master_seed = v.get<std::uint64_t>();
            } else if (key == "use_cases_ii_iii_for_message") {
                c.use_cases_ii_iii_for_message = v.get<bool>();
            } else if (key == "split_decoys") {
                if (v.is_null())
                    c.split_decoys.reset();
                else if (!v.is_number_unsigned())
                    throw ConfigError("split_decoys must be a non-negative integer");
                else
                    c.split_decoys = v.get<std::size_t>();
            } else if (key == "unencoded_checks") {
                if (!v.is_number_unsigned()) throw ConfigError("unencoded_checks must be a non-negative integer");
                c.unencoded_checks = v.get<std::size_t>();
            } else if (key == "message") {
                c.message = v.get<std::string>();
            } else {
                throw ConfigError("unknown config key: " + key);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
    }
    c.validate();
    return c;
}

inline Json config_to_json(const SessionConfig& c) {
    Json j;
    j["n_pairs"] = c.n_pairs;
    j["mode"] = std::string(to_string(c.mode));
    j["alice_states"] = detail::labels_to_json(c.alice_states);
    j["bob_states"] = detail::labels_to_json(c.bob_states);
    j["decoy_states"] = detail::labels_to_json(c.decoy_states);
    j["attack"] = c.attack ? Json(c.attack->describe()) : Json(nullptr);
    j["noise"] = c.noise ? Json(c.noise->describe()) : Json(nullptr);
    j["error_threshold"] = c.error_threshold;
    j["seed"] = c.master_seed;
    j["use_cases_ii_iii_for_message"] = c.use_cases_ii_iii_for_message;
    j["split_decoys"] = c.split_decoy_count();
    j["unencoded_checks"] = c.unencoded_checks;
    j["message"] = c.message;
    return j;
}

inline SessionConfig parse_config(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline SessionConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace osbmdi
