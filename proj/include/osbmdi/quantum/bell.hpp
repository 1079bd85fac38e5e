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
 * @file bell.hpp
 * @brief Bell basis, Pauli encodings and Bell-basis measurement.
 *
 * Label convention (normative for the whole project):
 *   PsiPlus  = (|00> + |11>)/sqrt2     PsiMinus = (|00> - |11>)/sqrt2
 *   PhiPlus  = (|01> + |10>)/sqrt2     PhiMinus = (|01> - |10>)/sqrt2
 * Note the psi/phi names are swapped relative to the usual textbook naming.
 *
 * Encoding operators are I, X, iY, Z with iY = [[0, 1], [-1, 0]], so every
 * matrix is real. Bits: I=00, X=01, iY=10, Z=11.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "osbmdi/quantum/state_vector.hpp"

namespace osbmdi {

enum class BellLabel : std::uint8_t { kPsiPlus = 0, kPsiMinus = 1, kPhiPlus = 2, kPhiMinus = 3 };
enum class PauliLabel : std::uint8_t { kI = 0, kX = 1, kIY = 2, kZ = 3 };

inline constexpr std::array<BellLabel, 4> kAllBellLabels{BellLabel::kPsiPlus, BellLabel::kPsiMinus,
                                                         BellLabel::kPhiPlus, BellLabel::kPhiMinus};
inline constexpr std::array<PauliLabel, 4> kAllPaulis{PauliLabel::kI, PauliLabel::kX, PauliLabel::kIY,
                                                      PauliLabel::kZ};

constexpr std::size_t index_of(BellLabel l) { return static_cast<std::size_t>(l); }
constexpr std::size_t index_of(PauliLabel p) { return static_cast<std::size_t>(p); }

inline std::string_view to_string(BellLabel l) {
    switch (l) {
        case BellLabel::kPsiPlus: return "psi+";
        case BellLabel::kPsiMinus: return "psi-";
        case BellLabel::kPhiPlus: return "phi+";
        case BellLabel::kPhiMinus: return "phi-";
    }
    return "?";
}

inline std::string_view to_string(PauliLabel p) {
    switch (p) {
        case PauliLabel::kI: return "I";
        case PauliLabel::kX: return "X";
        case PauliLabel::kIY: return "iY";
        case PauliLabel::kZ: return "Z";
    }
    return "?";
}

inline std::optional<BellLabel> parse_bell_label(std::string_view s) {
    for (BellLabel l : kAllBellLabels)
        if (to_string(l) == s) return l;
    return std::nullopt;
}

inline std::optional<PauliLabel> parse_pauli(std::string_view s) {
    for (PauliLabel p : kAllPaulis)
        if (to_string(p) == s) return p;
    return std::nullopt;
}

/// Two-bit symbol carried by an encoding operator.
constexpr std::uint8_t pauli_bits(PauliLabel p) { return static_cast<std::uint8_t>(p); }

constexpr PauliLabel pauli_from_bits(std::uint8_t bits) { return static_cast<PauliLabel>(bits & 3u); }

/// ψ± have equal computational-basis bits, φ± opposite ones.
constexpr bool has_even_parity(BellLabel l) {
    return l == BellLabel::kPsiPlus || l == BellLabel::kPsiMinus;
}

inline Matrix2 pauli_matrix(PauliLabel p) {
    switch (p) {
        case PauliLabel::kI: return {1.0, 0.0, 0.0, 1.0};
        case PauliLabel::kX: return {0.0, 1.0, 1.0, 0.0};
        case PauliLabel::kIY: return {0.0, 1.0, -1.0, 0.0};
        case PauliLabel::kZ: return {1.0, 0.0, 0.0, -1.0};
    }
    return {1.0, 0.0, 0.0, 1.0};
}

/// Amplitudes of a Bell label over |00>,|01>,|10>,|11>.
inline std::array<Amplitude, 4> bell_ket(BellLabel l) {
    const double h = 1.0 / std::sqrt(2.0);
    switch (l) {
        case BellLabel::kPsiPlus: return {h, 0.0, 0.0, h};
        case BellLabel::kPsiMinus: return {h, 0.0, 0.0, -h};
        case BellLabel::kPhiPlus: return {0.0, h, h, 0.0};
        case BellLabel::kPhiMinus: return {0.0, h, -h, 0.0};
    }
    return {};
}

inline StateVector make_bell(BellLabel label, QubitId a, QubitId b) {
    if (a == b) throw InvalidRegister("Bell pair needs two distinct qubits");
    const auto ket = bell_ket(label);
    return StateVector({a, b}, {ket.begin(), ket.end()});
}

inline StateVector apply_pauli(const StateVector& s, QubitId q, PauliLabel p) {
    return apply_unitary1q(s, q, pauli_matrix(p));
}

/// Projects (a, b) onto `label`, removing both qubits.
inline Projection project_bell(const StateVector& s, QubitId a, QubitId b, BellLabel label) {
    if (a == b) throw InvalidRegister("Bell measurement on a single qubit");
    const std::array<QubitId, 2> front{a, b};
    const StateVector f = bring_to_front(s, front);
    const std::size_t rest = f.dimension() / 4;
    const auto ket = bell_ket(label);
    Projection p;
    p.residual_qubits.assign(f.qubits().begin() + 2, f.qubits().end());
    p.residual.assign(rest, Amplitude{0.0});
    for (std::size_t r = 0; r < rest; ++r) {
        for (std::size_t x = 0; x < 4; ++x) p.residual[r] += std::conj(ket[x]) * f.amplitude(x * rest + r);
        p.probability += std::norm(p.residual[r]);
    }
    return p;
}

inline std::array<double, 4> bell_probabilities(const StateVector& s, QubitId a, QubitId b) {
    std::array<double, 4> out{};
    for (BellLabel l : kAllBellLabels) out[index_of(l)] = project_bell(s, a, b, l).probability;
    return out;
}

/// Born-sampled Bell measurement on (a, b); the pair is consumed.
inline std::pair<BellLabel, StateVector> bell_measure(const StateVector& s, QubitId a, QubitId b, Rng& rng) {
    std::array<Projection, 4> proj;
    std::array<double, 4> w{};
    for (BellLabel l : kAllBellLabels) {
        proj[index_of(l)] = project_bell(s, a, b, l);
        w[index_of(l)] = proj[index_of(l)].probability;
    }
    const auto k = sample_index(w, rng);
    return {kAllBellLabels[k], proj[k].normalized()};
}

/// Bell label of a two-qubit state (in its register order), if it is one up to phase.
inline std::optional<BellLabel> match_bell_label(const StateVector& s) {
    if (s.qubit_count() != 2) return std::nullopt;
    for (BellLabel l : kAllBellLabels)
        if (same_up_to_phase(s, make_bell(l, s.qubits()[0], s.qubits()[1]))) return l;
    return std::nullopt;
}

/// Coefficients of a four-qubit state in the Bell x Bell basis of a pairing.
struct BellExpansion {
    std::array<std::array<QubitId, 2>, 2> pairing{};
    std::array<std::array<Amplitude, 4>, 4> coeffs{};  // [first pair label][second pair label]

    Amplitude at(BellLabel first, BellLabel second) const { return coeffs[index_of(first)][index_of(second)]; }

    double total_weight() const {
        double s = 0.0;
        for (const auto& row : coeffs)
            for (const auto& c : row) s += std::norm(c);
        return s;
    }

    /// Rebuilds the state in register order (first pair, second pair).
    StateVector resum() const {
        std::vector<Amplitude> amps(16, Amplitude{0.0});
        for (BellLabel l1 : kAllBellLabels) {
            const auto k1 = bell_ket(l1);
            for (BellLabel l2 : kAllBellLabels) {
                const auto k2 = bell_ket(l2);
                const Amplitude c = at(l1, l2);
                for (std::size_t x = 0; x < 4; ++x)
                    for (std::size_t y = 0; y < 4; ++y) amps[x * 4 + y] += c * k1[x] * k2[y];
            }
        }
        return StateVector({pairing[0][0], pairing[0][1], pairing[1][0], pairing[1][1]}, std::move(amps));
    }
};

inline BellExpansion bell_expand(const StateVector& s, std::array<std::array<QubitId, 2>, 2> pairing) {
    if (s.qubit_count() != 4) throw InvalidRegister("Bell expansion needs exactly four qubits");
    const std::array<QubitId, 4> order{pairing[0][0], pairing[0][1], pairing[1][0], pairing[1][1]};
    for (QubitId q : order)
        if (!s.contains(q)) throw InvalidRegister("pairing does not partition the register");
    const StateVector f = permute(s, order);  // rejects repeated ids
    BellExpansion e;
    e.pairing = pairing;
    for (BellLabel l1 : kAllBellLabels) {
        const auto k1 = bell_ket(l1);
        for (BellLabel l2 : kAllBellLabels) {
            const auto k2 = bell_ket(l2);
            Amplitude c{0.0};
            for (std::size_t x = 0; x < 4; ++x)
                for (std::size_t y = 0; y < 4; ++y) c += std::conj(k1[x]) * std::conj(k2[y]) * f.amplitude(x * 4 + y);
            e.coeffs[index_of(l1)][index_of(l2)] = c;
        }
    }
    return e;
}

}  // namespace osbmdi
