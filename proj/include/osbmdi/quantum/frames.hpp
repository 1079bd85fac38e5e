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

// Label-level algebra derived from the state-vector engine: how Paulis permute
// Bell labels, and which home label entanglement swapping leaves behind.
// Tables are built once by simulation, never typed in by hand.

#pragma once

#include <array>
#include <optional>

#include "osbmdi/quantum/bell.hpp"

namespace osbmdi {

enum class PairSide : std::uint8_t { kFirst = 0, kSecond = 1 };

namespace detail {

struct FrameTables {
    // image[side][pauli][label]
    std::array<std::array<std::array<BellLabel, 4>, 4>, 2> image{};
    // home[left][right][bmo]: label of (1,3) after measuring (2,4) of left_12 (x) right_34
    std::array<std::array<std::array<BellLabel, 4>, 4>, 4> home{};
};

inline FrameTables build_frame_tables() {
    FrameTables t;
    const QubitId a = qubit_id(0), b = qubit_id(1);
    for (int side = 0; side < 2; ++side)
        for (PauliLabel p : kAllPaulis)
            for (BellLabel l : kAllBellLabels) {
                const auto out = apply_pauli(make_bell(l, a, b), side == 0 ? a : b, p);
                const auto m = match_bell_label(out);
                if (!m) throw DecodeIntegrityError("Pauli frame left the Bell basis");
                t.image[side][index_of(p)][index_of(l)] = *m;
            }
    const QubitId q1 = qubit_id(1), q2 = qubit_id(2), q3 = qubit_id(3), q4 = qubit_id(4);
    for (BellLabel left : kAllBellLabels)
        for (BellLabel right : kAllBellLabels) {
            const auto e = bell_expand(tensor(make_bell(left, q1, q2), make_bell(right, q3, q4)),
                                       {{{q1, q3}, {q2, q4}}});
            for (BellLabel bmo : kAllBellLabels) {
                std::optional<BellLabel> found;
                for (BellLabel h : kAllBellLabels)
                    if (std::abs(e.at(h, bmo)) > 0.25) found = h;
                if (!found) throw DecodeIntegrityError("swap outcome without a home label");
                t.home[index_of(left)][index_of(right)][index_of(bmo)] = *found;
            }
        }
    return t;
}

inline const FrameTables& frame_tables() {
    static const FrameTables tables = build_frame_tables();
    return tables;
}

}  // namespace detail

/// Label after applying `p` to one qubit of a pair in state `l`.
inline BellLabel pauli_image(PauliLabel p, BellLabel l, PairSide side = PairSide::kFirst) {
    return detail::frame_tables().image[static_cast<int>(side)][index_of(p)][index_of(l)];
}

/// Label after `first` acts on the first qubit and `second` on the second.
inline BellLabel encoded_label(BellLabel shared, PauliLabel first, PauliLabel second) {
    return pauli_image(second, pauli_image(first, shared, PairSide::kFirst), PairSide::kSecond);
}

/// Home label on (1,3) when (2,4) of left_12 (x) right_34 is Bell-measured with outcome `bmo`.
inline BellLabel swapped_home_label(BellLabel left, BellLabel right, BellLabel bmo) {
    return detail::frame_tables().home[index_of(left)][index_of(right)][index_of(bmo)];
}

}  // namespace osbmdi
