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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "osbmdi/quantum/world.hpp"

namespace osbmdi {

enum class Mode : std::uint8_t { kQsdc, kQd, kQkd };

inline std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::kQsdc: return "qsdc";
        case Mode::kQd: return "qd";
        case Mode::kQkd: return "qkd";
    }
    return "?";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "qsdc") return Mode::kQsdc;
    if (s == "qd") return Mode::kQd;
    if (s == "qkd") return Mode::kQkd;
    return std::nullopt;
}

/// Protocol stages that carry quantum traffic or announcements.
///  1: travel halves to Charlie, entanglement swapping, correlation checks
///  2: encoded home qubits with decoys to Charlie, decoy checks
///  3: final Bell measurement on the message pairs, decoding
enum class Stage : std::uint8_t { kSwap = 1, kMessage = 2, kDecode = 3 };

constexpr int stage_number(Stage s) { return static_cast<int>(s); }

/// One transmission: which stage, and who is sending to Charlie.
struct Leg {
    Stage stage = Stage::kSwap;
    Actor from = Actor::kAlice;
    friend bool operator==(const Leg&, const Leg&) = default;
};

inline std::string to_string(const Leg& leg) {
    return "stage" + std::to_string(stage_number(leg.stage)) + "-" + std::string(to_string(leg.from));
}

inline std::optional<Leg> parse_leg(std::string_view s) {
    for (Stage st : {Stage::kSwap, Stage::kMessage})
        for (Actor a : {Actor::kAlice, Actor::kBob})
            if (to_string(Leg{st, a}) == s) return Leg{st, a};
    return std::nullopt;
}

/// Classification of a stage-1 measurement slot by what each side contributed.
enum class CaseTag : std::uint8_t { kCaseI = 1, kCaseII = 2, kCaseIII = 3, kCaseIV = 4 };

inline std::string_view to_string(CaseTag c) {
    switch (c) {
        case CaseTag::kCaseI: return "I";
        case CaseTag::kCaseII: return "II";
        case CaseTag::kCaseIII: return "III";
        case CaseTag::kCaseIV: return "IV";
    }
    return "?";
}

/// What a travel slot carries.
enum class SlotKind : std::uint8_t { kEntangled, kDecoyPartner };

constexpr CaseTag classify(SlotKind alice, SlotKind bob) {
    if (alice == SlotKind::kDecoyPartner)
        return bob == SlotKind::kDecoyPartner ? CaseTag::kCaseI : CaseTag::kCaseIII;
    return bob == SlotKind::kDecoyPartner ? CaseTag::kCaseII : CaseTag::kCaseIV;
}

/// Families of eavesdropping checks, tallied separately.
enum class CheckKind : std::uint8_t {
    kCaseI,
    kCaseII,
    kCaseIII,
    kWholeDecoyAlice,
    kWholeDecoyBob,
    kSplitDecoyAlice,
    kSplitDecoyBob,
    kUnencoded,
};

inline constexpr std::size_t kCheckKindCount = 8;

inline constexpr std::array<CheckKind, kCheckKindCount> kAllCheckKinds{
    CheckKind::kCaseI,           CheckKind::kCaseII,          CheckKind::kCaseIII,         CheckKind::kWholeDecoyAlice,
    CheckKind::kWholeDecoyBob,   CheckKind::kSplitDecoyAlice, CheckKind::kSplitDecoyBob,   CheckKind::kUnencoded};

inline std::string_view to_string(CheckKind k) {
    switch (k) {
        case CheckKind::kCaseI: return "stage1_case_i";
        case CheckKind::kCaseII: return "stage1_case_ii";
        case CheckKind::kCaseIII: return "stage1_case_iii";
        case CheckKind::kWholeDecoyAlice: return "stage2_whole_decoy_alice";
        case CheckKind::kWholeDecoyBob: return "stage2_whole_decoy_bob";
        case CheckKind::kSplitDecoyAlice: return "stage2_split_decoy_alice";
        case CheckKind::kSplitDecoyBob: return "stage2_split_decoy_bob";
        case CheckKind::kUnencoded: return "stage3_unencoded";
    }
    return "?";
}

constexpr Stage stage_of(CheckKind k) {
    switch (k) {
        case CheckKind::kCaseI:
        case CheckKind::kCaseII:
        case CheckKind::kCaseIII: return Stage::kSwap;
        case CheckKind::kUnencoded: return Stage::kDecode;
        default: return Stage::kMessage;
    }
}

struct CheckTally {
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;

    void record(bool passed) {
        ++checks;
        if (!passed) ++failures;
    }
    double rate() const { return checks == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(checks); }
    CheckTally& operator+=(const CheckTally& o) {
        checks += o.checks;
        failures += o.failures;
        return *this;
    }
};

using CheckTallies = std::array<CheckTally, kCheckKindCount>;

inline CheckTally tally_for_stage(const CheckTallies& t, Stage s) {
    CheckTally out;
    for (CheckKind k : kAllCheckKinds)
        if (stage_of(k) == s) out += t[static_cast<std::size_t>(k)];
    return out;
}

}  // namespace osbmdi
