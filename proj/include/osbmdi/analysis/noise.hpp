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
 * @file noise.hpp
 * @brief Collective noise channels and decoy fidelity curves.
 *
 * Collective noise applies the same unknown unitary to every qubit crossing a
 * channel leg:
 *   dephasing(phi): |0> -> |0>, |1> -> e^{i phi}|1>
 *   rotation(theta): |0> -> cos|0> + sin|1>, |1> -> -sin|0> + cos|1>
 *
 * The phase is applied per qubit, so a whole psi+ pair picks up e^{2 i phi} on
 * |11> and its fidelity is cos^2(phi), returning to 1 at phi = n*pi. Other
 * phase conventions only rescale the parameter axis.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "osbmdi/quantum/bell.hpp"

namespace osbmdi {

enum class NoiseChannel : std::uint8_t { kCollectiveDephasing, kCollectiveRotation };

inline std::string_view to_string(NoiseChannel c) {
    return c == NoiseChannel::kCollectiveDephasing ? "dephasing" : "rotation";
}

struct NoiseSpec {
    NoiseChannel channel = NoiseChannel::kCollectiveDephasing;
    double parameter = 0.0;

    Matrix2 unitary() const {
        if (channel == NoiseChannel::kCollectiveDephasing)
            return {1.0, 0.0, 0.0, std::polar(1.0, parameter)};
        const double c = std::cos(parameter), s = std::sin(parameter);
        return {c, -s, s, c};
    }

    std::string describe() const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s:%.17g", std::string(to_string(channel)).c_str(), parameter);
        return buf;
    }
};

/// Parses "dephasing:PARAM" or "rotation:PARAM" (radians).
inline std::optional<NoiseSpec> parse_noise(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    const auto name = text.substr(0, colon);
    NoiseSpec spec;
    if (name == "dephasing")
        spec.channel = NoiseChannel::kCollectiveDephasing;
    else if (name == "rotation")
        spec.channel = NoiseChannel::kCollectiveRotation;
    else
        return std::nullopt;
    const std::string value(text.substr(colon + 1));
    try {
        std::size_t used = 0;
        spec.parameter = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(spec.parameter)) return std::nullopt;
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return spec;
}

/// Which qubits of a prepared pair cross the noisy channel.
enum class NoiseExposure : std::uint8_t { kWholePair, kTravelHalfOnly };

struct FidelityPoint {
    double parameter = 0.0;
    double fidelity = 0.0;
};

/// Fidelity of `label` against itself after the channel, at each grid parameter.
inline std::vector<FidelityPoint> noise_fidelity(BellLabel label, NoiseChannel channel, std::span<const double> grid,
                                                 NoiseExposure exposure = NoiseExposure::kWholePair) {
    const QubitId home = qubit_id(0), travel = qubit_id(1);
    const StateVector prepared = make_bell(label, home, travel);
    std::vector<FidelityPoint> curve;
    curve.reserve(grid.size());
    for (double p : grid) {
        const Matrix2 u = NoiseSpec{channel, p}.unitary();
        StateVector s = apply_unitary1q(prepared, travel, u);
        if (exposure == NoiseExposure::kWholePair) s = apply_unitary1q(s, home, u);
        curve.push_back({p, fidelity(s, prepared)});
    }
    return curve;
}

}  // namespace osbmdi
