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

// The one-way decoding table: Alice prepares psi+ on (1,2), Bob psi+ or psi-
// on (3,4), Charlie measures (2,4) and later the encoded (1,3).

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "osbmdi/protocol/codec.hpp"
#include "osbmdi/quantum/bell.hpp"

namespace osbmdi {

struct Table2Row {
    BellLabel bob_init = BellLabel::kPsiPlus;
    BellLabel bmo1 = BellLabel::kPsiPlus;
    BellLabel shared = BellLabel::kPsiPlus;
    PauliLabel encoding = PauliLabel::kI;
    BellLabel bmo2 = BellLabel::kPsiPlus;
    PauliLabel decoded = PauliLabel::kI;
    friend bool operator==(const Table2Row&, const Table2Row&) = default;
};

/// Reference rows, transcribed label by label. Decoding always returns the
/// encoding, so `decoded` equals `encoding` here.
inline std::vector<Table2Row> expected_table2() {
    using B = BellLabel;
    struct Block {
        B bob, bmo1, shared;
        std::array<B, 4> bmo2;  // for I, X, iY, Z
    };
    const Block blocks[] = {
        {B::kPsiPlus, B::kPsiPlus, B::kPsiPlus, {B::kPsiPlus, B::kPhiPlus, B::kPhiMinus, B::kPsiMinus}},
        {B::kPsiPlus, B::kPhiPlus, B::kPhiPlus, {B::kPhiPlus, B::kPsiPlus, B::kPsiMinus, B::kPhiMinus}},
        {B::kPsiPlus, B::kPhiMinus, B::kPhiMinus, {B::kPhiMinus, B::kPsiMinus, B::kPsiPlus, B::kPhiPlus}},
        {B::kPsiPlus, B::kPsiMinus, B::kPsiMinus, {B::kPsiMinus, B::kPhiMinus, B::kPhiPlus, B::kPsiPlus}},
        {B::kPsiMinus, B::kPsiMinus, B::kPsiPlus, {B::kPsiPlus, B::kPhiPlus, B::kPhiMinus, B::kPsiMinus}},
        {B::kPsiMinus, B::kPhiMinus, B::kPhiPlus, {B::kPhiPlus, B::kPsiPlus, B::kPsiMinus, B::kPhiMinus}},
        {B::kPsiMinus, B::kPhiPlus, B::kPhiMinus, {B::kPhiMinus, B::kPsiMinus, B::kPsiPlus, B::kPhiPlus}},
        {B::kPsiMinus, B::kPsiPlus, B::kPsiMinus, {B::kPsiMinus, B::kPhiMinus, B::kPhiPlus, B::kPsiPlus}},
    };
    std::vector<Table2Row> rows;
    for (const Block& b : blocks)
        for (PauliLabel p : kAllPaulis) rows.push_back({b.bob, b.bmo1, b.shared, p, b.bmo2[index_of(p)], p});
    return rows;
}

/// Reproduces the table from state vectors: project (2,4) onto each outcome,
/// encode on qubit 1, and read the (1,3) label off the Bell probabilities.
/// Returns rows in the same order as expected_table2(). Throws
/// DecodeIntegrityError if any outcome is not deterministic.
inline std::vector<Table2Row> reproduce_table2() {
    const QubitId q1 = qubit_id(1), q2 = qubit_id(2), q3 = qubit_id(3), q4 = qubit_id(4);
    std::vector<Table2Row> rows;
    for (const Table2Row& ref : expected_table2()) {
        const StateVector start = tensor(make_bell(BellLabel::kPsiPlus, q1, q2), make_bell(ref.bob_init, q3, q4));
        const Projection proj = project_bell(start, q2, q4, ref.bmo1);
        if (std::abs(proj.probability - 0.25) > 1e-12) throw DecodeIntegrityError("swap outcome is not uniform");
        const StateVector home = proj.normalized();
        const auto shared = match_bell_label(home);
        if (!shared) throw DecodeIntegrityError("swap did not leave a Bell pair");
        const StateVector encoded = apply_pauli(home, q1, ref.encoding);
        const auto probs = bell_probabilities(encoded, q1, q3);
        std::optional<BellLabel> bmo2;
        for (BellLabel l : kAllBellLabels)
            if (std::abs(probs[index_of(l)] - 1.0) < 1e-9) bmo2 = l;
        if (!bmo2) throw DecodeIntegrityError("final outcome is not deterministic");
        Table2Row row;
        row.bob_init = ref.bob_init;
        row.bmo1 = ref.bmo1;
        row.shared = *shared;
        row.encoding = ref.encoding;
        row.bmo2 = *bmo2;
        row.decoded = decode_message(DecodeContext{BellLabel::kPsiPlus, ref.bob_init, ref.bmo1, *bmo2});
        rows.push_back(row);
    }
    return rows;
}

inline std::string to_string(const Table2Row& r) {
    std::string s = "psi+ (x) ";
    s += to_string(r.bob_init);
    s += "\tbmo1=";
    s += to_string(r.bmo1);
    s += "\tshared=";
    s += to_string(r.shared);
    s += "\tencoding=";
    s += to_string(r.encoding);
    s += "\tbmo2=";
    s += to_string(r.bmo2);
    s += "\tdecoded=";
    s += to_string(r.decoded);
    return s;
}

}  // namespace osbmdi
