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

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <variant>
#include <vector>

#include "osbmdi/protocol/types.hpp"
#include "osbmdi/rng.hpp"

namespace osbmdi {

struct EntangledTag {
    std::size_t pair = 0;
    friend bool operator==(const EntangledTag&, const EntangledTag&) = default;
};
struct DecoyPartnerTag {
    std::size_t decoy = 0;
    friend bool operator==(const DecoyPartnerTag&, const DecoyPartnerTag&) = default;
};
/// One half of a decoy pair whose both halves travel in the same sequence.
struct DecoyWholePairTag {
    std::size_t decoy = 0;
    int half = 0;
    friend bool operator==(const DecoyWholePairTag&, const DecoyWholePairTag&) = default;
};

using SlotTag = std::variant<EntangledTag, DecoyPartnerTag, DecoyWholePairTag>;

struct Slot {
    QubitId qubit{};
    SlotTag tag;
};

/// A sequence of travel qubits with decoys interleaved. Tags and positions are
/// the owner's private record until announced.
class ExtendedSequence {
public:
    ExtendedSequence() = default;
    ExtendedSequence(Actor owner, std::vector<Slot> slots) : owner_(owner), slots_(std::move(slots)) {}

    Actor owner() const { return owner_; }
    const std::vector<Slot>& slots() const { return slots_; }
    std::size_t size() const { return slots_.size(); }

    std::vector<QubitId> qubits() const {
        std::vector<QubitId> out;
        out.reserve(slots_.size());
        for (const auto& s : slots_) out.push_back(s.qubit);
        return out;
    }

    /// Positions of single decoy halves, ascending.
    std::vector<std::size_t> partner_positions() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < slots_.size(); ++i)
            if (std::holds_alternative<DecoyPartnerTag>(slots_[i].tag)) out.push_back(i);
        return out;
    }

    /// Positions of both halves of each whole decoy pair, ordered by the
    /// position of half 0.
    std::vector<std::pair<std::size_t, std::size_t>> whole_pair_positions() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        std::vector<std::size_t> first, second;
        std::vector<std::size_t> ids;
        for (std::size_t i = 0; i < slots_.size(); ++i)
            if (const auto* w = std::get_if<DecoyWholePairTag>(&slots_[i].tag)) {
                const auto it = std::find(ids.begin(), ids.end(), w->decoy);
                std::size_t k = static_cast<std::size_t>(it - ids.begin());
                if (it == ids.end()) {
                    ids.push_back(w->decoy);
                    first.push_back(0);
                    second.push_back(0);
                }
                (w->half == 0 ? first : second)[k] = i;
            }
        for (std::size_t k = 0; k < ids.size(); ++k) out.emplace_back(first[k], second[k]);
        std::sort(out.begin(), out.end());
        return out;
    }

    bool is_decoy(std::size_t position) const {
        return !std::holds_alternative<EntangledTag>(slots_.at(position).tag);
    }

private:
    Actor owner_ = Actor::kAlice;
    std::vector<Slot> slots_;
};

/// Places `decoys` at a uniformly random set of positions among
/// base.size() + decoys.size() slots. Base and decoy orders are preserved;
/// callers shuffle `decoys` beforehand when their order must be random too.
inline ExtendedSequence insert_decoys(Actor owner, const std::vector<Slot>& base, const std::vector<Slot>& decoys,
                                      Rng& rng) {
    const std::size_t total = base.size() + decoys.size();
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Partial Fisher-Yates: the first k entries become a uniform k-subset.
    for (std::size_t i = 0; i < decoys.size(); ++i) std::swap(order[i], order[i + rng.below(total - i)]);
    std::vector<bool> is_decoy(total, false);
    for (std::size_t i = 0; i < decoys.size(); ++i) is_decoy[order[i]] = true;
    std::vector<Slot> slots;
    slots.reserve(total);
    std::size_t b = 0, d = 0;
    for (std::size_t p = 0; p < total; ++p) slots.push_back(is_decoy[p] ? decoys[d++] : base[b++]);
    return ExtendedSequence(owner, std::move(slots));
}

/// Slot kind per position of a stage-1 sequence.
inline std::vector<SlotKind> slot_kinds(const ExtendedSequence& seq) {
    std::vector<SlotKind> out;
    out.reserve(seq.size());
    for (const auto& s : seq.slots())
        out.push_back(std::holds_alternative<EntangledTag>(s.tag) ? SlotKind::kEntangled : SlotKind::kDecoyPartner);
    return out;
}

/// Case of each index when Charlie pairs the i-th slot of one sequence with the
/// i-th slot of the other.
inline std::vector<CaseTag> classify_cases(const std::vector<std::size_t>& alice_decoy_positions,
                                           const std::vector<std::size_t>& bob_decoy_positions, std::size_t length) {
    std::vector<SlotKind> a(length, SlotKind::kEntangled), b(length, SlotKind::kEntangled);
    for (auto p : alice_decoy_positions) a.at(p) = SlotKind::kDecoyPartner;
    for (auto p : bob_decoy_positions) b.at(p) = SlotKind::kDecoyPartner;
    std::vector<CaseTag> out(length);
    for (std::size_t i = 0; i < length; ++i) out[i] = classify(a[i], b[i]);
    return out;
}

}  // namespace osbmdi
