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
 * @file attack_spec.hpp
 * @brief Declarative description of an adversary, and its text form.
 *
 * Text form: NAME[:key=value,key=value,...]
 *
 *   intercept_resend    legs, fraction
 *   entangle_measure    beta2 | (alpha, beta [, beta_phase]), legs, fraction
 *   flip_all            legs, fraction
 *   disturb             mode=reorder|random_pauli, legs, fraction
 *   fake_bmo            stages=1+2+3, fraction
 *
 * `legs` is a '+'-separated list of stage1-alice, stage1-bob, stage2-alice,
 * stage2-bob. `fraction` in (0, 1] is the share of slots on each targeted leg
 * (or of Charlie's measurements per stage) that the attack touches.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "osbmdi/errors.hpp"
#include "osbmdi/protocol/types.hpp"
#include "osbmdi/text.hpp"

namespace osbmdi {

enum class Strategy : std::uint8_t { kInterceptResend, kEntangleMeasure, kFlipAll, kDisturb, kFakeBmo };
enum class DisturbMode : std::uint8_t { kReorder, kRandomPauli };

inline std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::kInterceptResend: return "intercept_resend";
        case Strategy::kEntangleMeasure: return "entangle_measure";
        case Strategy::kFlipAll: return "flip_all";
        case Strategy::kDisturb: return "disturb";
        case Strategy::kFakeBmo: return "fake_bmo";
    }
    return "?";
}

inline std::string_view to_string(DisturbMode m) { return m == DisturbMode::kReorder ? "reorder" : "random_pauli"; }

struct AttackSpec {
    Strategy strategy = Strategy::kInterceptResend;
    Amplitude alpha{1.0};  // ancilla amplitudes for entangle_measure
    Amplitude beta{0.0};
    DisturbMode disturb_mode = DisturbMode::kRandomPauli;
    double fraction = 1.0;
    std::vector<Leg> legs;
    std::vector<Stage> fake_stages;

    bool targets(const Leg& leg) const { return std::find(legs.begin(), legs.end(), leg) != legs.end(); }
    bool fakes(Stage s) const { return std::find(fake_stages.begin(), fake_stages.end(), s) != fake_stages.end(); }

    void validate() const {
        if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("attack fraction must lie in (0, 1]");
        if (strategy == Strategy::kEntangleMeasure &&
            std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kAmplitudeTolerance)
            throw ConfigError("entangle_measure ancilla amplitudes are not normalized");
        if (strategy == Strategy::kFakeBmo && fake_stages.empty()) throw ConfigError("fake_bmo needs a stage");
        if (strategy != Strategy::kFakeBmo && legs.empty()) throw ConfigError("attack targets no channel leg");
    }

    /// Canonical text form; parse_attack(describe()) round-trips.
    std::string describe() const;
};

inline std::vector<Leg> default_legs(Strategy s) {
    const Leg s1a{Stage::kSwap, Actor::kAlice}, s1b{Stage::kSwap, Actor::kBob};
    const Leg s2a{Stage::kMessage, Actor::kAlice}, s2b{Stage::kMessage, Actor::kBob};
    switch (s) {
        case Strategy::kInterceptResend: return {s1b};
        case Strategy::kEntangleMeasure: return {s1a};
        case Strategy::kFlipAll: return {s1a, s1b, s2a, s2b};
        case Strategy::kDisturb: return {s2a, s2b};
        case Strategy::kFakeBmo: return {};
    }
    return {};
}

namespace detail {

inline double parse_double(std::string_view key, std::string_view text) {
    const std::string s(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("attack parameter " + std::string(key) + " is not a number: " + s);
}

}  // namespace detail

inline std::string AttackSpec::describe() const {
    std::string out(to_string(strategy));
    std::vector<std::string> params;
    if (strategy == Strategy::kEntangleMeasure) {
        params.push_back("alpha=" + detail::format_double(std::abs(alpha)));
        params.push_back("beta=" + detail::format_double(std::abs(beta)));
        const double phase = std::arg(beta) - std::arg(alpha);
        if (phase != 0.0) params.push_back("beta_phase=" + detail::format_double(phase));
    }
    if (strategy == Strategy::kDisturb) params.push_back("mode=" + std::string(to_string(disturb_mode)));
    if (strategy == Strategy::kFakeBmo) {
        std::string st;
        for (Stage s : fake_stages) st += (st.empty() ? "" : "+") + std::to_string(stage_number(s));
        params.push_back("stages=" + st);
    } else {
        std::string lg;
        for (const Leg& l : legs) lg += (lg.empty() ? "" : "+") + to_string(l);
        params.push_back("legs=" + lg);
    }
    params.push_back("fraction=" + detail::format_double(fraction));
    for (std::size_t i = 0; i < params.size(); ++i) out += (i == 0 ? ":" : ",") + params[i];
    return out;
}

/// Parses the NAME[:params] form. Throws ConfigError on anything malformed.
inline AttackSpec parse_attack(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    AttackSpec spec;
    bool known = false;
    for (Strategy s : {Strategy::kInterceptResend, Strategy::kEntangleMeasure, Strategy::kFlipAll, Strategy::kDisturb,
                       Strategy::kFakeBmo})
        if (to_string(s) == name) {
            spec.strategy = s;
            known = true;
        }
    if (!known) throw ConfigError("unknown attack strategy: " + std::string(name));
    spec.legs = default_legs(spec.strategy);
    if (spec.strategy == Strategy::kFakeBmo) spec.fake_stages = {Stage::kSwap};
    if (spec.strategy == Strategy::kEntangleMeasure) {
        spec.alpha = std::sqrt(0.5);
        spec.beta = std::sqrt(0.5);
    }

    std::optional<double> alpha, beta, beta2;
    double beta_phase = 0.0;
    if (colon != std::string_view::npos && colon + 1 < text.size()) {
        for (std::string_view kv : detail::split(text.substr(colon + 1), ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string_view::npos) throw ConfigError("attack parameter without '=': " + std::string(kv));
            const std::string_view key = kv.substr(0, eq), value = kv.substr(eq + 1);
            if (key == "fraction") {
                spec.fraction = detail::parse_double(key, value);
            } else if (key == "alpha") {
                alpha = detail::parse_double(key, value);
            } else if (key == "beta") {
                beta = detail::parse_double(key, value);
            } else if (key == "beta2") {
                beta2 = detail::parse_double(key, value);
            } else if (key == "beta_phase") {
                beta_phase = detail::parse_double(key, value);
            } else if (key == "mode") {
                if (value == "reorder")
                    spec.disturb_mode = DisturbMode::kReorder;
                else if (value == "random_pauli")
                    spec.disturb_mode = DisturbMode::kRandomPauli;
                else
                    throw ConfigError("unknown disturb mode: " + std::string(value));
            } else if (key == "legs") {
                spec.legs.clear();
                for (std::string_view l : detail::split(value, '+')) {
                    const auto leg = parse_leg(l);
                    if (!leg) throw ConfigError("unknown channel leg: " + std::string(l));
                    spec.legs.push_back(*leg);
                }
            } else if (key == "stages") {
                spec.fake_stages.clear();
                for (std::string_view s : detail::split(value, '+')) {
                    if (s == "1")
                        spec.fake_stages.push_back(Stage::kSwap);
                    else if (s == "2")
                        spec.fake_stages.push_back(Stage::kMessage);
                    else if (s == "3")
                        spec.fake_stages.push_back(Stage::kDecode);
                    else
                        throw ConfigError("unknown stage: " + std::string(s));
                }
            } else {
                throw ConfigError("unknown attack parameter: " + std::string(key));
            }
        }
    }
    if (beta2) {
        if (*beta2 < 0.0 || *beta2 > 1.0) throw ConfigError("beta2 must lie in [0, 1]");
        spec.alpha = std::sqrt(1.0 - *beta2);
        spec.beta = std::polar(std::sqrt(*beta2), beta_phase);
    } else if (alpha || beta) {
        const double a = alpha.value_or(std::sqrt(std::max(0.0, 1.0 - beta.value_or(0.0) * beta.value_or(0.0))));
        const double b = beta.value_or(std::sqrt(std::max(0.0, 1.0 - a * a)));
        spec.alpha = a;
        spec.beta = std::polar(b, beta_phase);
    }
    spec.validate();
    return spec;
}

}  // namespace osbmdi
