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

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "osbmdi/protocol/session.hpp"

namespace osbmdi {

/// Pooled failure rate of a family of checks.
/// half_width = 1.96 * sqrt(rate * (1 - rate) / checks), the normal-approximation
/// 95% interval; 0 when no check ran.
struct DetectionEstimate {
    std::string label;
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
    double rate = 0.0;
    double half_width = 0.0;

    double standard_error() const { return half_width / 1.96; }
};

inline DetectionEstimate estimate(std::string label, const CheckTally& t) {
    DetectionEstimate e;
    e.label = std::move(label);
    e.checks = t.checks;
    e.failures = t.failures;
    e.rate = t.rate();
    if (t.checks > 0) e.half_width = 1.96 * std::sqrt(e.rate * (1.0 - e.rate) / static_cast<double>(t.checks));
    return e;
}

/// Sums the tallies of `kinds` over a batch. Nested sessions are left out.
inline CheckTally pooled_tally(std::span<const SessionReport> reports, std::span<const CheckKind> kinds) {
    CheckTally t;
    for (const auto& r : reports)
        for (CheckKind k : kinds) t += r.tallies[static_cast<std::size_t>(k)];
    return t;
}

inline DetectionEstimate detection_rate(std::span<const SessionReport> reports, std::span<const CheckKind> kinds,
                                        std::string label) {
    return estimate(std::move(label), pooled_tally(reports, kinds));
}

/// One estimate per check family, in kAllCheckKinds order.
inline std::vector<DetectionEstimate> detection_by_kind(std::span<const SessionReport> reports) {
    std::vector<DetectionEstimate> out;
    for (CheckKind k : kAllCheckKinds) {
        const CheckKind one[] = {k};
        out.push_back(detection_rate(reports, one, std::string(to_string(k))));
    }
    return out;
}

/// Share of sessions that aborted.
inline double abort_fraction(std::span<const SessionReport> reports) {
    if (reports.empty()) return 0.0;
    std::size_t n = 0;
    for (const auto& r : reports) n += r.aborted ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(reports.size());
}

}  // namespace osbmdi
