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
 * @file session.hpp
 * @brief One protocol run from preparation to decoding.
 *
 * Stage 1 (swap): both senders interleave n/2 split decoys into their n travel
 * qubits; Charlie Bell-measures the i-th arrival of each sequence together.
 * Decoy positions are announced afterwards and the Case I-III slots are
 * correlation-checked. Case IV slots carry the message.
 *
 * Stage 2 (message): the sender(s) encode on home qubits, which travel to
 * Charlie together with whole decoy pairs and split decoy halves. Positions are
 * announced after Charlie's receipt; decoys are checked first.
 *
 * Stage 3 (decode): Charlie Bell-measures the i-th remaining qubit of each
 * sequence; receivers decode from the two announcements.
 *
 * Stage-2 and stage-3 announcement indices address the concatenation of the
 * two arrival sequences: Alice's positions first, then Bob's offset by the
 * length of Alice's sequence.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "osbmdi/errors.hpp"
#include "osbmdi/protocol/channel.hpp"
#include "osbmdi/protocol/codec.hpp"
#include "osbmdi/protocol/config.hpp"
#include "osbmdi/protocol/sequence.hpp"
#include "osbmdi/protocol/transcript.hpp"
#include "osbmdi/quantum/world.hpp"
#include "osbmdi/rng.hpp"

namespace osbmdi {

/// What stands at one stage-1 index: the unit Alice sent and the unit Bob sent.
/// Home/travel are the two halves of each party's pair (message pair or decoy).
struct PairGroup {
    std::size_t id = 0;
    QubitId a_home{}, a_travel{}, b_home{}, b_travel{};
    BellLabel alice_init = BellLabel::kPsiPlus;
    BellLabel bob_init = BellLabel::kPsiPlus;
    SlotKind kind_a = SlotKind::kEntangled;
    SlotKind kind_b = SlotKind::kEntangled;
};

/// A party's private preparation record.
struct PartyState {
    Actor who = Actor::kAlice;
    std::vector<BellLabel> inits;
    std::vector<std::pair<QubitId, QubitId>> pairs;  // (home, travel)
    std::vector<BellLabel> decoy1_labels;
    std::vector<std::pair<QubitId, QubitId>> decoy1;
    std::vector<BellLabel> decoy2_labels;
    std::vector<std::pair<QubitId, QubitId>> decoy2;
    ExtendedSequence stage1;
};

struct PreparedSession {
    QuantumWorld world;
    PartyState alice, bob;
    Transcript transcript;
};

/// Per-slot record of one message exchange.
struct Exchange {
    std::size_t slot = 0;
    std::size_t stage1_index = 0;
    CaseTag case_tag = CaseTag::kCaseIV;
    BellLabel alice_init = BellLabel::kPsiPlus;
    BellLabel bob_init = BellLabel::kPsiPlus;
    BellLabel bmo1 = BellLabel::kPsiPlus;
    std::optional<BellLabel> bmo2;
    bool unencoded = false;
    std::optional<std::uint8_t> alice_symbol;  // what Alice applied
    std::optional<std::uint8_t> bob_symbol;    // what Bob applied (QD)
    std::optional<std::uint8_t> alice_symbol_decoded;  // Bob's reading of Alice
    std::optional<std::uint8_t> bob_symbol_decoded;    // Alice's reading of Bob (QD)
    std::vector<int> eve_bits;
};

struct SessionReport {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    Mode mode = Mode::kQsdc;
    bool aborted = false;
    std::string abort_stage;  // "stage1" | "stage2" | "stage3" | "nested"
    double abort_rate = 0.0;
    CheckTallies tallies{};
    std::array<std::size_t, 4> case_counts{};
    std::vector<Exchange> exchanges;
    std::size_t symbols_sent = 0;
    std::size_t symbols_correct = 0;
    std::string message_decoded;
    std::size_t eve_notes = 0;
    Transcript transcript;
    std::vector<std::string> transcript_violations;
    std::vector<SessionReport> nested;

    double stage_error_rate(Stage s) const { return tally_for_stage(tallies, s).rate(); }
    bool decoded_perfectly() const { return !aborted && symbols_correct == symbols_sent; }
};

/// Draws inits, decoy labels and stage-1 decoy positions, and prepares every pair.
inline PreparedSession prepare_session(const SessionConfig& cfg, Rng& rng) {
    cfg.validate();
    PreparedSession s;
    auto draw = [&](const std::vector<BellLabel>& set) {
        return set.size() == 1 ? set.front() : set[rng.below(set.size())];
    };
    auto prepare_party = [&](PartyState& p, Actor who, const std::vector<BellLabel>& set) {
        p.who = who;
        for (std::size_t i = 0; i < cfg.n_pairs; ++i) {
            p.inits.push_back(draw(set));
            p.pairs.push_back(s.world.prepare_bell(who, p.inits.back()));
        }
        for (std::size_t i = 0; i < cfg.stage1_decoys(); ++i) {
            p.decoy1_labels.push_back(draw(cfg.decoy_states));
            p.decoy1.push_back(s.world.prepare_bell(who, p.decoy1_labels.back()));
        }
        for (std::size_t i = 0; i < cfg.stage2_decoys(); ++i) {
            p.decoy2_labels.push_back(draw(cfg.decoy_states));
            p.decoy2.push_back(s.world.prepare_bell(who, p.decoy2_labels.back()));
        }
        std::vector<Slot> base, decoys;
        for (std::size_t i = 0; i < p.pairs.size(); ++i) base.push_back({p.pairs[i].second, EntangledTag{i}});
        for (std::size_t i = 0; i < p.decoy1.size(); ++i) decoys.push_back({p.decoy1[i].second, DecoyPartnerTag{i}});
        p.stage1 = insert_decoys(who, base, decoys, rng);
    };
    prepare_party(s.alice, Actor::kAlice, cfg.alice_states);
    prepare_party(s.bob, Actor::kBob, cfg.bob_states);
    return s;
}

/// Stage-1 units aligned by index.
inline std::vector<PairGroup> pair_groups(const PartyState& alice, const PartyState& bob) {
    if (alice.stage1.size() != bob.stage1.size()) throw ProtocolError("stage-1 sequences differ in length");
    std::vector<PairGroup> out;
    auto fill = [](const PartyState& p, const Slot& slot, QubitId& home, QubitId& travel, BellLabel& init,
                   SlotKind& kind) {
        if (const auto* e = std::get_if<EntangledTag>(&slot.tag)) {
            home = p.pairs[e->pair].first;
            init = p.inits[e->pair];
            kind = SlotKind::kEntangled;
        } else {
            const auto d = std::get<DecoyPartnerTag>(slot.tag).decoy;
            home = p.decoy1[d].first;
            init = p.decoy1_labels[d];
            kind = SlotKind::kDecoyPartner;
        }
        travel = slot.qubit;
    };
    for (std::size_t i = 0; i < alice.stage1.size(); ++i) {
        PairGroup g;
        g.id = i;
        fill(alice, alice.stage1.slots()[i], g.a_home, g.a_travel, g.alice_init, g.kind_a);
        fill(bob, bob.stage1.slots()[i], g.b_home, g.b_travel, g.bob_init, g.kind_b);
        out.push_back(g);
    }
    return out;
}

/// Moves `qubits` from `owner` onto the channel, applies noise and the
/// adversary, and delivers whatever arrives to Charlie in arrival order.
inline std::vector<QubitId> transmit(QuantumWorld& world, const std::vector<QubitId>& qubits, const Leg& leg,
                                     const std::optional<NoiseSpec>& noise, Interceptor* eve, Rng& eve_rng) {
    std::vector<QubitId> in_flight = qubits;
    for (QubitId q : in_flight) world.transfer(q, leg.from, Actor::kChannel);
    if (noise) {
        const Matrix2 u = noise->unitary();
        for (QubitId q : in_flight) world.apply_unitary(Actor::kChannel, q, u);
    }
    if (eve) eve->on_transit(leg, in_flight, world, eve_rng);
    for (QubitId q : in_flight) world.transfer(q, Actor::kChannel, Actor::kCharlie);
    return in_flight;
}

/// Charlie's stage-1 Bell measurements, announced in index order.
inline std::vector<BellLabel> stage1_measure(QuantumWorld& world, const std::vector<QubitId>& a_arrived,
                                             const std::vector<QubitId>& b_arrived, Transcript& transcript,
                                             Interceptor* eve, Rng& charlie_rng, Rng& eve_rng) {
    if (a_arrived.size() != b_arrived.size()) throw ProtocolError("stage-1 sequences differ in length");
    const auto fake = eve ? eve->faked(Stage::kSwap, a_arrived.size(), eve_rng) : std::vector<bool>{};
    std::vector<BellLabel> out;
    out.reserve(a_arrived.size());
    for (std::size_t i = 0; i < a_arrived.size(); ++i) {
        const BellLabel l = (i < fake.size() && fake[i]) ? kAllBellLabels[charlie_rng.below(4)]
                                                         : world.bell_measure(Actor::kCharlie, a_arrived[i],
                                                                              b_arrived[i], charlie_rng);
        transcript.append(Stage::kSwap, Actor::kCharlie, BmoAnnouncement{i, l});
        out.push_back(l);
    }
    return out;
}

namespace detail {

inline std::uint8_t symbol_of(PauliLabel p) { return static_cast<std::uint8_t>(index_of(p)); }
inline PauliLabel pauli_of(std::uint8_t symbol) { return kAllPaulis[symbol & 3u]; }

/// Index of `l` among the members of `set` taken in canonical label order.
inline std::size_t label_code(const std::vector<BellLabel>& set, BellLabel l) {
    std::size_t code = 0;
    for (BellLabel c : kAllBellLabels) {
        if (c == l) return code;
        if (std::find(set.begin(), set.end(), c) != set.end()) ++code;
    }
    return code;
}

inline BellLabel label_from_code(const std::vector<BellLabel>& set, std::size_t code) {
    for (BellLabel c : kAllBellLabels)
        if (std::find(set.begin(), set.end(), c) != set.end() && code-- == 0) return c;
    throw DecodeIntegrityError("label code outside the state set");
}

inline std::size_t bits_for(std::size_t set_size) {
    std::size_t b = 0;
    while ((std::size_t{1} << b) < set_size) ++b;
    return b;
}

struct MessageSlot {
    std::size_t stage1_index = 0;
    CaseTag case_tag = CaseTag::kCaseIV;
    QubitId alice_home{}, bob_home{}, alice_travel{}, bob_travel{};
    BellLabel alice_label = BellLabel::kPsiPlus;
    BellLabel bob_label = BellLabel::kPsiPlus;
    BellLabel bmo1 = BellLabel::kPsiPlus;
};

struct Stage2Sequence {
    ExtendedSequence seq;
    std::vector<BellLabel> decoy_labels;
    std::vector<std::pair<QubitId, QubitId>> decoys;
};

class SessionRunner {
public:
    SessionRunner(const SessionConfig& cfg, std::uint64_t index, Rng base, Interceptor* eve,
                  std::optional<std::vector<std::uint8_t>> preset = std::nullopt)
        : cfg_(cfg),
          eve_(eve),
          prep_rng_(base.fork(1)),
          charlie_rng_(base.fork(2)),
          eve_rng_(base.fork(3)),
          msg_rng_(base.fork(4)),
          party_rng_(base.fork(5)),
          base_(base),
          preset_(std::move(preset)) {
        report_.index = index;
        report_.seed = base.seed();
        report_.mode = cfg.mode;
    }

    SessionReport run() {
        s_ = prepare_session(cfg_, prep_rng_);
        if (cfg_.mode == Mode::kQd && !share_inits()) return finish();
        if (!stage1()) return finish();
        if (!stage2()) return finish();
        stage3();
        return finish();
    }

private:
    // QD only: Bob, and Alice if her set is not a single public label, share
    // their message-pair inits through nested one-way sessions.
    bool share_inits() {
        known_bob_inits_ = deliver(s_.bob.inits, cfg_.bob_states, 0);
        if (!known_bob_inits_) return false;
        known_alice_inits_ = deliver(s_.alice.inits, cfg_.alice_states, 1000);
        return known_alice_inits_.has_value();
    }

    std::optional<std::vector<BellLabel>> deliver(const std::vector<BellLabel>& labels,
                                                  const std::vector<BellLabel>& set, std::uint64_t salt) {
        const std::size_t width = bits_for(set.size());
        if (width == 0) return labels;
        std::vector<int> bits;
        for (BellLabel l : labels) {
            const std::size_t code = label_code(set, l);
            for (std::size_t b = width; b-- > 0;) bits.push_back(static_cast<int>((code >> b) & 1u));
        }
        SessionConfig sub = cfg_;
        sub.mode = Mode::kQsdc;
        sub.alice_states = {BellLabel::kPsiPlus};
        sub.unencoded_checks = 0;
        sub.message.clear();
        sub.use_cases_ii_iii_for_message = false;
        std::vector<int> received;
        for (std::uint64_t round = 0; received.size() < bits.size(); ++round) {
            if (round >= 256) throw ProtocolError("nested sessions failed to deliver the initial states");
            std::vector<std::uint8_t> symbols;
            Rng pad = base_.fork(7000 + salt + round);
            for (std::size_t i = received.size(); i < received.size() + 2 * cfg_.n_pairs; i += 2) {
                const int hi = i < bits.size() ? bits[i] : static_cast<int>(pad.below(2));
                const int lo = i + 1 < bits.size() ? bits[i + 1] : static_cast<int>(pad.below(2));
                symbols.push_back(static_cast<std::uint8_t>(hi * 2 + lo));
            }
            SessionRunner nested(sub, round, base_.fork(8000 + salt + round), eve_, symbols);
            SessionReport r = nested.run();
            const bool ok = !r.aborted;
            if (ok)
                for (const Exchange& e : r.exchanges) {
                    if (e.unencoded) continue;
                    const std::uint8_t v = e.alice_symbol_decoded.value_or(0);
                    received.push_back(v >> 1);
                    received.push_back(v & 1);
                }
            report_.nested.push_back(std::move(r));
            if (!ok) {
                abort("nested", report_.nested.back().abort_rate);
                return std::nullopt;
            }
        }
        std::vector<BellLabel> out;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            std::size_t code = 0;
            for (std::size_t b = 0; b < width; ++b) code = (code << 1) | static_cast<std::size_t>(received[i * width + b]);
            out.push_back(code < set.size() ? label_from_code(set, code) : set.front());
        }
        return out;
    }

    bool stage1() {
        auto& world = s_.world;
        auto& t = s_.transcript;
        const auto a_in = transmit(world, s_.alice.stage1.qubits(), {Stage::kSwap, Actor::kAlice}, cfg_.noise, eve_,
                                   eve_rng_);
        const auto b_in =
            transmit(world, s_.bob.stage1.qubits(), {Stage::kSwap, Actor::kBob}, cfg_.noise, eve_, eve_rng_);
        const auto bmo = stage1_measure(world, a_in, b_in, t, eve_, charlie_rng_, eve_rng_);

        t.append(Stage::kSwap, Actor::kAlice, DecoyPositions{s_.alice.stage1.partner_positions(), {}});
        t.append(Stage::kSwap, Actor::kBob, DecoyPositions{s_.bob.stage1.partner_positions(), {}});
        const auto groups = pair_groups(s_.alice, s_.bob);
        std::vector<CaseTag> cases;
        for (const auto& g : groups) {
            cases.push_back(classify(g.kind_a, g.kind_b));
            ++report_.case_counts[static_cast<std::size_t>(cases.back()) - 1];
        }
        const bool reuse = cfg_.use_cases_ii_iii_for_message;
        const bool decoys_public = cfg_.decoy_states.size() == 1;
        const bool alice_public = cfg_.alice_states.size() == 1;

        // Reveals needed to evaluate the checks.
        InitialStateReveal a_dec{RevealSubject::kDecoys, {}}, b_dec{RevealSubject::kDecoys, {}};
        InitialStateReveal a_msg{RevealSubject::kMessagePairs, {}}, b_msg{RevealSubject::kMessagePairs, {}};
        for (std::size_t i = 0; i < groups.size(); ++i) {
            const auto c = cases[i];
            if (c == CaseTag::kCaseIV) continue;
            if (reuse && c != CaseTag::kCaseI) {
                if (c == CaseTag::kCaseIII) a_dec.items.emplace_back(i, groups[i].alice_init);
                continue;
            }
            if (groups[i].kind_a == SlotKind::kDecoyPartner) a_dec.items.emplace_back(i, groups[i].alice_init);
            if (groups[i].kind_b == SlotKind::kDecoyPartner) b_dec.items.emplace_back(i, groups[i].bob_init);
            if (c == CaseTag::kCaseIII) b_msg.items.emplace_back(i, groups[i].bob_init);
            if (c == CaseTag::kCaseII && !alice_public) a_msg.items.emplace_back(i, groups[i].alice_init);
        }
        if (!decoys_public && !a_dec.items.empty()) t.append(Stage::kSwap, Actor::kAlice, a_dec);
        if (!decoys_public && !b_dec.items.empty()) t.append(Stage::kSwap, Actor::kBob, b_dec);
        if (!a_msg.items.empty()) t.append(Stage::kSwap, Actor::kAlice, a_msg);
        if (!b_msg.items.empty()) t.append(Stage::kSwap, Actor::kBob, b_msg);

        for (std::size_t i = 0; i < groups.size(); ++i) {
            const auto c = cases[i];
            const auto& g = groups[i];
            if (c == CaseTag::kCaseIV || (reuse && c != CaseTag::kCaseI)) {
                if (c == CaseTag::kCaseIV || reuse) slots_.push_back(message_slot(g, c, bmo[i]));
                continue;
            }
            const int a_bit = world.comp_measure(Actor::kAlice, g.a_home, party_rng_);
            const int b_bit = world.comp_measure(Actor::kBob, g.b_home, party_rng_);
            t.append(Stage::kSwap, Actor::kAlice, CorrelationRecord{i, {a_bit}});
            t.append(Stage::kSwap, Actor::kBob, CorrelationRecord{i, {b_bit}});
            const auto result = correlation_check(c, bmo[i], a_bit, b_bit, SlotSources{g.alice_init, g.bob_init});
            const CheckKind kind = c == CaseTag::kCaseI    ? CheckKind::kCaseI
                                   : c == CaseTag::kCaseII ? CheckKind::kCaseII
                                                           : CheckKind::kCaseIII;
            tally(kind).record(result == CheckResult::kPass);
        }
        return within_threshold(Stage::kSwap, "stage1");
    }

    MessageSlot message_slot(const PairGroup& g, CaseTag c, BellLabel bmo1) const {
        MessageSlot m;
        m.stage1_index = g.id;
        m.case_tag = c;
        m.alice_home = g.a_home;
        m.bob_home = g.b_home;
        m.alice_travel = g.a_travel;
        m.bob_travel = g.b_travel;
        m.alice_label = g.alice_init;
        m.bob_label = g.bob_init;
        m.bmo1 = bmo1;
        return m;
    }

    Stage2Sequence stage2_sequence(const PartyState& p, const std::vector<QubitId>& homes) {
        Stage2Sequence out;
        out.decoy_labels = p.decoy2_labels;
        out.decoys = p.decoy2;
        const std::size_t split = cfg_.split_decoy_count();
        const std::size_t whole = p.decoy2.size() - split;
        std::vector<Slot> base, decoys;
        for (std::size_t k = 0; k < homes.size(); ++k) base.push_back({homes[k], EntangledTag{k}});
        for (std::size_t k = 0; k < whole; ++k) {
            decoys.push_back({p.decoy2[k].first, DecoyWholePairTag{k, 0}});
            decoys.push_back({p.decoy2[k].second, DecoyWholePairTag{k, 1}});
        }
        for (std::size_t k = whole; k < p.decoy2.size(); ++k) decoys.push_back({p.decoy2[k].second, DecoyPartnerTag{k}});
        party_rng_.shuffle(decoys.begin(), decoys.end());
        out.seq = insert_decoys(p.who, base, decoys, party_rng_);
        return out;
    }

    bool stage2() {
        auto& world = s_.world;
        auto& t = s_.transcript;
        const std::size_t n = slots_.size();

        // Which slots stay unencoded for the stage-3 check.
        std::vector<std::size_t> order(n);
        for (std::size_t k = 0; k < n; ++k) order[k] = k;
        msg_rng_.shuffle(order.begin(), order.end());
        unencoded_.assign(n, false);
        for (std::size_t k = 0; k < std::min(cfg_.unencoded_checks, n); ++k) unencoded_[order[k]] = true;

        // Symbols for the carrying slots.
        std::vector<std::uint8_t> message;
        if (preset_)
            message = *preset_;
        else if (cfg_.mode == Mode::kQsdc)
            message = bytes_to_symbols(cfg_.message);
        alice_symbols_.assign(n, std::nullopt);
        bob_symbols_.assign(n, std::nullopt);
        std::size_t next = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (unencoded_[k]) continue;
            alice_symbols_[k] = next < message.size() ? message[next] : static_cast<std::uint8_t>(msg_rng_.below(4));
            ++next;
            if (cfg_.mode == Mode::kQd) bob_symbols_[k] = static_cast<std::uint8_t>(msg_rng_.below(4));
        }
        message_symbols_ = std::min(message.size(), next);

        std::vector<QubitId> a_homes, b_homes;
        for (std::size_t k = 0; k < n; ++k) {
            if (alice_symbols_[k]) world.apply_pauli(Actor::kAlice, slots_[k].alice_home, pauli_of(*alice_symbols_[k]));
            if (bob_symbols_[k]) world.apply_pauli(Actor::kBob, slots_[k].bob_home, pauli_of(*bob_symbols_[k]));
            a_homes.push_back(slots_[k].alice_home);
            b_homes.push_back(slots_[k].bob_home);
        }

        a2_ = stage2_sequence(s_.alice, a_homes);
        b2_ = stage2_sequence(s_.bob, b_homes);
        a_in_ = transmit(world, a2_.seq.qubits(), {Stage::kMessage, Actor::kAlice}, cfg_.noise, eve_, eve_rng_);
        b_in_ = transmit(world, b2_.seq.qubits(), {Stage::kMessage, Actor::kBob}, cfg_.noise, eve_, eve_rng_);
        t.append(Stage::kMessage, Actor::kCharlie, Receipt{});

        const auto a_pairs = a2_.seq.whole_pair_positions(), b_pairs = b2_.seq.whole_pair_positions();
        const auto a_singles = a2_.seq.partner_positions(), b_singles = b2_.seq.partner_positions();
        t.append(Stage::kMessage, Actor::kAlice, DecoyPositions{a_singles, a_pairs});
        t.append(Stage::kMessage, Actor::kBob, DecoyPositions{b_singles, b_pairs});

        const std::size_t offset = a_in_.size();
        const std::size_t total = a_pairs.size() + b_pairs.size() + a_singles.size() + b_singles.size();
        const auto fake = eve_ ? eve_->faked(Stage::kMessage, total, eve_rng_) : std::vector<bool>{};
        std::size_t m = 0;
        auto is_fake = [&] { return m < fake.size() && fake[m]; };

        auto whole_checks = [&](const Stage2Sequence& sq, const std::vector<QubitId>& in,
                                const std::vector<std::pair<std::size_t, std::size_t>>& pairs, std::size_t base,
                                CheckKind kind) {
            for (const auto& [p, q] : pairs) {
                const BellLabel l = is_fake() ? kAllBellLabels[charlie_rng_.below(4)]
                                              : world.bell_measure(Actor::kCharlie, in[p], in[q], charlie_rng_);
                ++m;
                t.append(Stage::kMessage, Actor::kCharlie, BmoAnnouncement{base + p, l});
                const auto d = std::get<DecoyWholePairTag>(sq.seq.slots()[p].tag).decoy;
                tally(kind).record(l == sq.decoy_labels[d]);
            }
        };
        whole_checks(a2_, a_in_, a_pairs, 0, CheckKind::kWholeDecoyAlice);
        whole_checks(b2_, b_in_, b_pairs, offset, CheckKind::kWholeDecoyBob);

        auto split_checks = [&](const Stage2Sequence& sq, const std::vector<QubitId>& in,
                                const std::vector<std::size_t>& singles, std::size_t base, Actor owner,
                                CheckKind kind) {
            for (std::size_t p : singles) {
                const int travel_bit =
                    is_fake() ? static_cast<int>(charlie_rng_.below(2)) : world.comp_measure(Actor::kCharlie, in[p], charlie_rng_);
                ++m;
                t.append(Stage::kMessage, Actor::kCharlie, CorrelationRecord{base + p, {travel_bit}});
                const auto d = std::get<DecoyPartnerTag>(sq.seq.slots()[p].tag).decoy;
                const int home_bit = world.comp_measure(owner, sq.decoys[d].first, party_rng_);
                tally(kind).record(split_decoy_check(sq.decoy_labels[d], home_bit, travel_bit) == CheckResult::kPass);
            }
        };
        split_checks(a2_, a_in_, a_singles, 0, Actor::kAlice, CheckKind::kSplitDecoyAlice);
        split_checks(b2_, b_in_, b_singles, offset, Actor::kBob, CheckKind::kSplitDecoyBob);
        return within_threshold(Stage::kMessage, "stage2");
    }

    void stage3() {
        auto& world = s_.world;
        auto& t = s_.transcript;
        auto remaining = [](const Stage2Sequence& sq, const std::vector<QubitId>& in) {
            std::vector<QubitId> out;
            for (std::size_t p = 0; p < in.size(); ++p)
                if (!sq.seq.is_decoy(p)) out.push_back(in[p]);
            return out;
        };
        const auto a_msg = remaining(a2_, a_in_), b_msg = remaining(b2_, b_in_);
        const std::size_t n = slots_.size();
        const auto fake = eve_ ? eve_->faked(Stage::kDecode, n, eve_rng_) : std::vector<bool>{};
        bmo2_.clear();
        for (std::size_t k = 0; k < n; ++k) {
            const BellLabel l = (k < fake.size() && fake[k])
                                    ? kAllBellLabels[charlie_rng_.below(4)]
                                    : world.bell_measure(Actor::kCharlie, a_msg[k], b_msg[k], charlie_rng_);
            t.append(Stage::kDecode, Actor::kCharlie, BmoAnnouncement{k, l});
            bmo2_.push_back(l);
        }

        // Bob's view of the Alice side: public label, revealed decoy label, or
        // what the nested sessions delivered.
        auto alice_label_for_bob = [&](std::size_t k) {
            const auto& sl = slots_[k];
            if (sl.case_tag == CaseTag::kCaseIV && known_alice_inits_) {
                const auto e = std::get<EntangledTag>(s_.alice.stage1.slots()[sl.stage1_index].tag).pair;
                return (*known_alice_inits_)[e];
            }
            return sl.alice_label;
        };
        auto bob_label_for_alice = [&](std::size_t k) {
            const auto& sl = slots_[k];
            if (sl.case_tag == CaseTag::kCaseIV && known_bob_inits_) {
                const auto e = std::get<EntangledTag>(s_.bob.stage1.slots()[sl.stage1_index].tag).pair;
                return (*known_bob_inits_)[e];
            }
            return sl.bob_label;
        };

        if (cfg_.unencoded_checks > 0) {
            DecoyPositions unenc;
            for (std::size_t k = 0; k < n; ++k)
                if (unencoded_[k]) unenc.singles.push_back(k);
            t.append(Stage::kDecode, Actor::kAlice, unenc);
            for (std::size_t k : unenc.singles) {
                const BellLabel s = shared_label(alice_label_for_bob(k), slots_[k].bob_label, slots_[k].bmo1);
                tally(CheckKind::kUnencoded).record(bmo2_[k] == s);
            }
        }
        const bool ok = within_threshold(Stage::kDecode, "stage3");

        for (std::size_t k = 0; k < n; ++k) {
            const auto& sl = slots_[k];
            Exchange e;
            e.slot = k;
            e.stage1_index = sl.stage1_index;
            e.case_tag = sl.case_tag;
            e.alice_init = sl.alice_label;
            e.bob_init = sl.bob_label;
            e.bmo1 = sl.bmo1;
            e.bmo2 = bmo2_[k];
            e.unencoded = unencoded_[k];
            e.alice_symbol = alice_symbols_[k];
            e.bob_symbol = bob_symbols_[k];
            if (ok && !e.unencoded) {
                if (cfg_.mode == Mode::kQd) {
                    e.alice_symbol_decoded = try_decode(
                        DecodeContext{alice_label_for_bob(k), sl.bob_label, sl.bmo1, bmo2_[k]}, Actor::kBob,
                        pauli_of(*bob_symbols_[k]));
                    e.bob_symbol_decoded = try_decode(
                        DecodeContext{sl.alice_label, bob_label_for_alice(k), sl.bmo1, bmo2_[k]}, Actor::kAlice,
                        pauli_of(*alice_symbols_[k]));
                } else {
                    e.alice_symbol_decoded =
                        try_decode(DecodeContext{alice_label_for_bob(k), sl.bob_label, sl.bmo1, bmo2_[k]}, Actor::kBob,
                                   std::nullopt);
                }
            }
            report_.exchanges.push_back(std::move(e));
        }
        if (!ok) return;

        std::vector<std::uint8_t> decoded;
        for (const Exchange& e : report_.exchanges) {
            if (e.unencoded) continue;
            ++report_.symbols_sent;
            if (e.alice_symbol_decoded == e.alice_symbol) ++report_.symbols_correct;
            decoded.push_back(e.alice_symbol_decoded.value_or(0));
            if (cfg_.mode == Mode::kQd) {
                ++report_.symbols_sent;
                if (e.bob_symbol_decoded == e.bob_symbol) ++report_.symbols_correct;
            }
        }
        if (cfg_.mode == Mode::kQsdc && !preset_) {
            decoded.resize(message_symbols_);
            report_.message_decoded = symbols_to_bytes(decoded);
        }
    }

    static std::optional<std::uint8_t> try_decode(const DecodeContext& ctx, Actor decoder,
                                                  std::optional<PauliLabel> own) {
        try {
            return symbol_of(decode_message(ctx, decoder, own));
        } catch (const DecodeIntegrityError&) {
            return std::nullopt;
        }
    }

    CheckTally& tally(CheckKind k) { return report_.tallies[static_cast<std::size_t>(k)]; }

    bool within_threshold(Stage s, const char* name) {
        const double rate = report_.stage_error_rate(s);
        if (rate > cfg_.error_threshold) {
            abort(name, rate);
            return false;
        }
        return true;
    }

    void abort(const std::string& stage, double rate) {
        report_.aborted = true;
        report_.abort_stage = stage;
        report_.abort_rate = rate;
    }

    SessionReport finish() {
        if (eve_) {
            const auto notes = eve_->finish(s_.world, eve_rng_);
            report_.eve_notes = notes.size();
            for (std::size_t k = 0; k < report_.exchanges.size(); ++k) {
                const auto& sl = slots_[k];
                for (const EveNote& note : notes)
                    if (note.about == sl.alice_travel || note.about == sl.bob_travel || note.about == sl.alice_home ||
                        note.about == sl.bob_home)
                        report_.exchanges[k].eve_bits.push_back(note.bit);
            }
        }
        report_.transcript = s_.transcript;
        report_.transcript_violations = check_transcript_order(s_.transcript);
        return std::move(report_);
    }

    SessionConfig cfg_;
    Interceptor* eve_;
    Rng prep_rng_, charlie_rng_, eve_rng_, msg_rng_, party_rng_, base_;
    std::optional<std::vector<std::uint8_t>> preset_;
    PreparedSession s_;
    SessionReport report_;
    std::optional<std::vector<BellLabel>> known_alice_inits_, known_bob_inits_;
    std::vector<MessageSlot> slots_;
    std::vector<bool> unencoded_;
    std::vector<std::optional<std::uint8_t>> alice_symbols_, bob_symbols_;
    std::size_t message_symbols_ = 0;
    Stage2Sequence a2_, b2_;
    std::vector<QubitId> a_in_, b_in_;
    std::vector<BellLabel> bmo2_;
};

}  // namespace detail

/// Runs session `index` of a batch. `eve` may be null for an honest channel;
/// it is shared by any nested sessions the run needs.
inline SessionReport run_session(const SessionConfig& cfg, std::uint64_t index, Interceptor* eve = nullptr) {
    cfg.validate();
    return detail::SessionRunner(cfg, index, Rng::for_session(cfg.master_seed, index), eve).run();
}

}  // namespace osbmdi
