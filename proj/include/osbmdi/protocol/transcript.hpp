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
 * @file transcript.hpp
 * @brief Append-only log of classical announcements.
 *
 * Line format, one entry per line, tab separated:
 *
 *   SEQ  STAGE  ACTOR  KIND  PAYLOAD
 *
 * KIND and PAYLOAD:
 *   bmo          index=I label=L
 *   positions    singles=P,P,.. pairs=P:Q,P:Q,..     ('-' when empty)
 *   reveal       subject=decoys|pairs items=I:L,I:L,..
 *   receipt      -
 *   correlation  index=I bits=B,B,..
 */
#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "osbmdi/protocol/types.hpp"
#include "osbmdi/text.hpp"

namespace osbmdi {

struct BmoAnnouncement {
    std::size_t index = 0;
    BellLabel label = BellLabel::kPsiPlus;
    friend bool operator==(const BmoAnnouncement&, const BmoAnnouncement&) = default;
};

struct DecoyPositions {
    std::vector<std::size_t> singles;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    friend bool operator==(const DecoyPositions&, const DecoyPositions&) = default;
};

enum class RevealSubject : std::uint8_t { kDecoys, kMessagePairs };

struct InitialStateReveal {
    RevealSubject subject = RevealSubject::kDecoys;
    std::vector<std::pair<std::size_t, BellLabel>> items;  // (stage-1 index, label)
    friend bool operator==(const InitialStateReveal&, const InitialStateReveal&) = default;
};

struct Receipt {
    friend bool operator==(const Receipt&, const Receipt&) = default;
};

struct CorrelationRecord {
    std::size_t index = 0;
    std::vector<int> bits;
    friend bool operator==(const CorrelationRecord&, const CorrelationRecord&) = default;
};

using Announcement = std::variant<BmoAnnouncement, DecoyPositions, InitialStateReveal, Receipt, CorrelationRecord>;

struct TranscriptEntry {
    std::uint64_t seq = 0;
    Stage stage = Stage::kSwap;
    Actor actor = Actor::kCharlie;
    Announcement payload;
    friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

namespace detail {

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& fmt) {
    if (items.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += fmt(items[i]);
    }
    return out;
}

inline std::size_t parse_size(std::string_view s) {
    std::size_t v = 0;
    if (s.empty()) throw ProtocolError("empty number in transcript line");
    for (char c : s) {
        if (c < '0' || c > '9') throw ProtocolError("bad number in transcript line: " + std::string(s));
        v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
}

inline std::string_view field(std::string_view token, std::string_view key) {
    if (token.substr(0, key.size()) != key || token.size() <= key.size() || token[key.size()] != '=')
        throw ProtocolError("expected field " + std::string(key) + " in transcript line");
    return token.substr(key.size() + 1);
}

inline BellLabel parse_label_or_throw(std::string_view s) {
    const auto l = parse_bell_label(s);
    if (!l) throw ProtocolError("bad Bell label in transcript line: " + std::string(s));
    return *l;
}

inline std::vector<std::string_view> list_items(std::string_view s) {
    if (s == "-") return {};
    return split(s, ',');
}

}  // namespace detail

inline std::string to_line(const TranscriptEntry& e) {
    std::string kind, payload;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BmoAnnouncement>) {
                kind = "bmo";
                payload = "index=" + std::to_string(p.index) + " label=" + std::string(to_string(p.label));
            } else if constexpr (std::is_same_v<T, DecoyPositions>) {
                kind = "positions";
                payload = "singles=" + detail::join(p.singles, [](std::size_t v) { return std::to_string(v); }) +
                          " pairs=" + detail::join(p.pairs, [](const auto& pq) {
                              return std::to_string(pq.first) + ":" + std::to_string(pq.second);
                          });
            } else if constexpr (std::is_same_v<T, InitialStateReveal>) {
                kind = "reveal";
                payload = std::string("subject=") + (p.subject == RevealSubject::kDecoys ? "decoys" : "pairs") +
                          " items=" + detail::join(p.items, [](const auto& il) {
                              return std::to_string(il.first) + ":" + std::string(to_string(il.second));
                          });
            } else if constexpr (std::is_same_v<T, Receipt>) {
                kind = "receipt";
                payload = "-";
            } else {
                kind = "correlation";
                payload = "index=" + std::to_string(p.index) +
                          " bits=" + detail::join(p.bits, [](int b) { return std::to_string(b); });
            }
        },
        e.payload);
    return std::to_string(e.seq) + '\t' + std::to_string(stage_number(e.stage)) + '\t' +
           std::string(to_string(e.actor)) + '\t' + kind + '\t' + payload;
}

inline TranscriptEntry parse_line(std::string_view line) {
    const auto cols = detail::split(line, '\t');
    if (cols.size() != 5) throw ProtocolError("transcript line needs 5 tab-separated columns");
    TranscriptEntry e;
    e.seq = detail::parse_size(cols[0]);
    const auto st = detail::parse_size(cols[1]);
    if (st < 1 || st > 3) throw ProtocolError("bad stage in transcript line");
    e.stage = static_cast<Stage>(st);
    bool actor_ok = false;
    for (Actor a : {Actor::kAlice, Actor::kBob, Actor::kCharlie, Actor::kEve})
        if (to_string(a) == cols[2]) {
            e.actor = a;
            actor_ok = true;
        }
    if (!actor_ok) throw ProtocolError("bad actor in transcript line");
    const std::string_view kind = cols[3];
    const auto tokens = detail::split(cols[4], ' ');
    auto need = [&](std::size_t n) {
        if (tokens.size() != n) throw ProtocolError("wrong payload arity for " + std::string(kind));
    };
    if (kind == "bmo") {
        need(2);
        e.payload = BmoAnnouncement{detail::parse_size(detail::field(tokens[0], "index")),
                                    detail::parse_label_or_throw(detail::field(tokens[1], "label"))};
    } else if (kind == "positions") {
        need(2);
        DecoyPositions p;
        for (auto v : detail::list_items(detail::field(tokens[0], "singles"))) p.singles.push_back(detail::parse_size(v));
        for (auto v : detail::list_items(detail::field(tokens[1], "pairs"))) {
            const auto ab = detail::split(v, ':');
            if (ab.size() != 2) throw ProtocolError("bad position pair");
            p.pairs.emplace_back(detail::parse_size(ab[0]), detail::parse_size(ab[1]));
        }
        e.payload = std::move(p);
    } else if (kind == "reveal") {
        need(2);
        InitialStateReveal r;
        const auto subject = detail::field(tokens[0], "subject");
        if (subject == "decoys")
            r.subject = RevealSubject::kDecoys;
        else if (subject == "pairs")
            r.subject = RevealSubject::kMessagePairs;
        else
            throw ProtocolError("bad reveal subject");
        for (auto v : detail::list_items(detail::field(tokens[1], "items"))) {
            const auto il = detail::split(v, ':');
            if (il.size() != 2) throw ProtocolError("bad reveal item");
            r.items.emplace_back(detail::parse_size(il[0]), detail::parse_label_or_throw(il[1]));
        }
        e.payload = std::move(r);
    } else if (kind == "receipt") {
        need(1);
        e.payload = Receipt{};
    } else if (kind == "correlation") {
        need(2);
        CorrelationRecord c;
        c.index = detail::parse_size(detail::field(tokens[0], "index"));
        for (auto v : detail::list_items(detail::field(tokens[1], "bits")))
            c.bits.push_back(static_cast<int>(detail::parse_size(v)));
        e.payload = std::move(c);
    } else {
        throw ProtocolError("unknown transcript entry kind: " + std::string(kind));
    }
    return e;
}

class Transcript {
public:
    const TranscriptEntry& append(Stage stage, Actor actor, Announcement payload) {
        entries_.push_back(TranscriptEntry{next_seq_++, stage, actor, std::move(payload)});
        return entries_.back();
    }

    const std::vector<TranscriptEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    void clear() { entries_.clear(); }

    std::string serialize() const {
        std::string out;
        for (const auto& e : entries_) {
            out += to_line(e);
            out += '\n';
        }
        return out;
    }

    static Transcript parse(std::string_view text) {
        Transcript t;
        std::size_t start = 0;
        while (start < text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            const auto line = text.substr(start, end - start);
            if (!line.empty()) {
                TranscriptEntry e = parse_line(line);
                if (e.seq != t.next_seq_) throw ProtocolError("transcript sequence numbers are not contiguous");
                t.entries_.push_back(std::move(e));
                ++t.next_seq_;
            }
            start = end + 1;
        }
        return t;
    }

private:
    std::vector<TranscriptEntry> entries_;
    std::uint64_t next_seq_ = 0;
};

/// Structural ordering rules for one session transcript. Returns one message
/// per violation; an empty result means the transcript is well ordered.
///
///  - sequence numbers strictly increase;
///  - stage-1 decoy positions and all stage-1 reveals follow every stage-1 BMO;
///  - stage-1 correlation records follow the positions of both senders;
///  - stage-2 decoy positions follow Charlie's stage-2 receipt;
///  - stage-2 BMOs and correlation records follow the stage-2 positions;
///  - stage-3 BMOs follow every stage-2 entry, and stage-3 positions follow
///    every stage-3 BMO.
inline std::vector<std::string> check_transcript_order(const Transcript& t) {
    std::vector<std::string> problems;
    const auto& es = t.entries();
    auto pos_of_last = [&](auto pred) -> std::optional<std::size_t> {
        std::optional<std::size_t> last;
        for (std::size_t i = 0; i < es.size(); ++i)
            if (pred(es[i])) last = i;
        return last;
    };
    auto pos_of_first = [&](auto pred) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < es.size(); ++i)
            if (pred(es[i])) return i;
        return std::nullopt;
    };
    auto is = [](Stage st, auto tag) {
        return [st](const TranscriptEntry& e) {
            return e.stage == st && std::holds_alternative<decltype(tag)>(e.payload);
        };
    };
    for (std::size_t i = 1; i < es.size(); ++i)
        if (es[i].seq <= es[i - 1].seq) problems.push_back("sequence numbers not increasing at entry " + std::to_string(i));

    auto before = [&](std::optional<std::size_t> must_precede, std::optional<std::size_t> first_after,
                      const std::string& what) {
        if (must_precede && first_after && *first_after < *must_precede) problems.push_back(what);
    };

    const auto last_bmo1 = pos_of_last(is(Stage::kSwap, BmoAnnouncement{}));
    before(last_bmo1, pos_of_first(is(Stage::kSwap, DecoyPositions{})), "stage-1 positions announced before BMOs");
    before(last_bmo1, pos_of_first(is(Stage::kSwap, InitialStateReveal{})), "stage-1 reveal before BMOs");
    before(pos_of_last(is(Stage::kSwap, DecoyPositions{})), pos_of_first(is(Stage::kSwap, CorrelationRecord{})),
           "stage-1 correlation bits before positions");

    const auto receipt2 = pos_of_first(is(Stage::kMessage, Receipt{}));
    const auto first_pos2 = pos_of_first(is(Stage::kMessage, DecoyPositions{}));
    if (first_pos2 && !receipt2) problems.push_back("stage-2 positions announced without a receipt");
    before(receipt2, first_pos2, "stage-2 positions announced before receipt");
    const auto last_pos2 = pos_of_last(is(Stage::kMessage, DecoyPositions{}));
    before(last_pos2, pos_of_first(is(Stage::kMessage, BmoAnnouncement{})), "stage-2 BMO before positions");
    before(last_pos2, pos_of_first(is(Stage::kMessage, CorrelationRecord{})), "stage-2 correlation before positions");

    const auto last_stage2 = pos_of_last([](const TranscriptEntry& e) { return e.stage == Stage::kMessage; });
    before(last_stage2, pos_of_first(is(Stage::kDecode, BmoAnnouncement{})), "stage-3 BMO before stage-2 checks ended");
    before(pos_of_last(is(Stage::kDecode, BmoAnnouncement{})), pos_of_first(is(Stage::kDecode, DecoyPositions{})),
           "stage-3 check positions before final BMOs");
    return problems;
}

}  // namespace osbmdi
