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

// Plug-in mutual information between what Eve saw and what was sent.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "osbmdi/protocol/session.hpp"

namespace osbmdi {

inline constexpr double kMutualInformationTolerance = 0.05;

struct InformationEstimate {
    double bits = 0.0;
    /// Leading-order upward bias of the plug-in estimator, (|X|-1)(|Y|-1) / (2 N ln 2).
    double bias_bound = 0.0;
    std::size_t samples = 0;
    bool insufficient = true;
};

template <typename X, typename Y>
InformationEstimate mutual_information(const std::vector<std::pair<X, Y>>& samples) {
    InformationEstimate e;
    e.samples = samples.size();
    if (samples.empty()) return e;
    std::map<X, double> px;
    std::map<Y, double> py;
    std::map<std::pair<X, Y>, double> pxy;
    for (const auto& s : samples) {
        px[s.first] += 1.0;
        py[s.second] += 1.0;
        pxy[s] += 1.0;
    }
    const double n = static_cast<double>(samples.size());
    for (const auto& [xy, c] : pxy) {
        const double p = c / n;
        e.bits += p * std::log2(p / ((px[xy.first] / n) * (py[xy.second] / n)));
    }
    e.bias_bound = static_cast<double>(px.size() - 1) * static_cast<double>(py.size() - 1) / (2.0 * n * std::log(2.0));
    e.insufficient = e.bias_bound > kMutualInformationTolerance;
    return e;
}

/// Eve's view of one exchange: both announcements and any bits she measured.
inline std::string eve_view(const Exchange& e) {
    std::string v(to_string(e.bmo1));
    v += '|';
    v += e.bmo2 ? std::string(to_string(*e.bmo2)) : std::string("?");
    for (int b : e.eve_bits) v += b ? '1' : '0';
    return v;
}

/// Mutual information per exchange between Eve's view and the encoded symbols
/// (Alice's symbol, or both symbols in a dialogue). Unencoded and
/// unannounced slots are skipped.
inline InformationEstimate eve_information(std::span<const SessionReport> reports) {
    std::vector<std::pair<int, std::string>> samples;
    for (const auto& r : reports)
        for (const auto& e : r.exchanges) {
            if (e.unencoded || !e.alice_symbol || !e.bmo2) continue;
            const int x = e.bob_symbol ? *e.alice_symbol * 4 + *e.bob_symbol : *e.alice_symbol;
            samples.emplace_back(x, eve_view(e));
        }
    return mutual_information(samples);
}

}  // namespace osbmdi
