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

// Correlation checks, message encoding and decoding. Everything here works on
// labels: the Bell labels the parties prepared, the labels Charlie announced,
// and the Pauli frames the senders applied.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osbmdi/errors.hpp"
#include "osbmdi/protocol/types.hpp"
#include "osbmdi/quantum/frames.hpp"

namespace osbmdi {

enum class CheckResult : std::uint8_t { kPass, kFail };

/// Labels the two parties prepared for the slot Charlie measured.
/// For Case III the receiver's label is only known after it is revealed.
struct SlotSources {
    BellLabel alice = BellLabel::kPsiPlus;
    std::optional<BellLabel> bob;
};

/// Stage-1 correlation check. The home pair left behind by the swap must show
/// equal computational bits for psi+- and opposite bits for phi+-.
inline CheckResult correlation_check(CaseTag c, BellLabel announced, int alice_bit, int bob_bit,
                                     const SlotSources& revealed) {
    if (c == CaseTag::kCaseIV) throw ProtocolError("Case IV slots are not correlation-checked");
    if (!revealed.bob) {
        throw ProtocolError(c == CaseTag::kCaseIII ? "Case III check needs the receiver's revealed state"
                                                   : "correlation check needs the receiver's decoy state");
    }
    const BellLabel home = swapped_home_label(revealed.alice, *revealed.bob, announced);
    const bool equal = alice_bit == bob_bit;
    return equal == has_even_parity(home) ? CheckResult::kPass : CheckResult::kFail;
}

/// Parity check for a decoy pair measured in the computational basis on both halves.
inline CheckResult split_decoy_check(BellLabel prepared, int home_bit, int travel_bit) {
    return (home_bit == travel_bit) == has_even_parity(prepared) ? CheckResult::kPass : CheckResult::kFail;
}

/// What a decoder knows about one message slot.
struct DecodeContext {
    BellLabel alice_init = BellLabel::kPsiPlus;
    BellLabel bob_init = BellLabel::kPsiPlus;
    BellLabel bmo1 = BellLabel::kPsiPlus;  // swap outcome on the travel qubits
    BellLabel bmo2 = BellLabel::kPsiPlus;  // final outcome on the home qubits
};

/// Label shared by the home qubits once the swap outcome is known.
inline BellLabel shared_label(BellLabel alice_init, BellLabel bob_init, BellLabel bmo1) {
    return swapped_home_label(alice_init, bob_init, bmo1);
}

/// Decodes the partner's operator.
///  - `own` unset: one-way mode, the sender acted on the first (Alice) qubit.
///  - `own` set with `decoder == kAlice`: recovers Bob's operator given Alice's.
///  - `own` set with `decoder == kBob`: recovers Alice's operator given Bob's.
inline PauliLabel decode_message(const DecodeContext& ctx, Actor decoder = Actor::kBob,
                                 std::optional<PauliLabel> own = std::nullopt) {
    const BellLabel shared = shared_label(ctx.alice_init, ctx.bob_init, ctx.bmo1);
    std::optional<PauliLabel> found;
    for (PauliLabel p : kAllPaulis) {
        BellLabel out;
        if (!own)
            out = pauli_image(p, shared, PairSide::kFirst);
        else if (decoder == Actor::kAlice)
            out = encoded_label(shared, *own, p);
        else
            out = encoded_label(shared, p, *own);
        if (out == ctx.bmo2) {
            if (found) throw DecodeIntegrityError("announcements admit more than one encoding");
            found = p;
        }
    }
    if (!found) throw DecodeIntegrityError("no encoding maps the shared state to the final announcement");
    return *found;
}

/// Splits bytes into 2-bit symbols, most significant pair first.
inline std::vector<std::uint8_t> bytes_to_symbols(std::string_view bytes) {
    std::vector<std::uint8_t> out;
    out.reserve(bytes.size() * 4);
    for (unsigned char c : bytes)
        for (int shift = 6; shift >= 0; shift -= 2) out.push_back(static_cast<std::uint8_t>((c >> shift) & 3u));
    return out;
}

/// Inverse of bytes_to_symbols; a trailing partial byte is dropped.
inline std::string symbols_to_bytes(std::span<const std::uint8_t> symbols) {
    std::string out;
    for (std::size_t i = 0; i + 4 <= symbols.size(); i += 4) {
        unsigned v = 0;
        for (std::size_t k = 0; k < 4; ++k) v = (v << 2) | (symbols[i + k] & 3u);
        out.push_back(static_cast<char>(v));
    }
    return out;
}

}  // namespace osbmdi
