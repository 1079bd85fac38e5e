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
 * @file world.hpp
 * @brief All qubits of one protocol session, stored as independent clusters.
 *
 * A session holds hundreds of qubits, but entanglement only ever spans a
 * handful of them. QuantumWorld keeps one StateVector per entangled cluster
 * and merges clusters lazily when a two-qubit gate or a joint measurement
 * crosses them.
 *
 * Every qubit has exactly one holder. Operations name the acting party and
 * fail with OwnershipError if that party does not hold the qubit; qubits in
 * flight are held by Actor::kChannel and may be touched by the channel
 * itself (noise) or by an eavesdropper.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "osbmdi/quantum/bell.hpp"

namespace osbmdi {

enum class Actor : std::uint8_t { kAlice, kBob, kCharlie, kEve, kChannel };

inline std::string_view to_string(Actor a) {
    switch (a) {
        case Actor::kAlice: return "alice";
        case Actor::kBob: return "bob";
        case Actor::kCharlie: return "charlie";
        case Actor::kEve: return "eve";
        case Actor::kChannel: return "channel";
    }
    return "?";
}

class QuantumWorld {
public:
    QubitId prepare_qubit(Actor owner, Amplitude zero, Amplitude one) {
        const QubitId q = fresh(owner);
        add_cluster(StateVector::single(q, zero, one));
        return q;
    }

    std::pair<QubitId, QubitId> prepare_bell(Actor owner, BellLabel label) {
        const QubitId a = fresh(owner);
        const QubitId b = fresh(owner);
        add_cluster(make_bell(label, a, b));
        return {a, b};
    }

    bool alive(QubitId q) const { return to_index(q) < records_.size() && records_[to_index(q)].alive; }

    Actor holder(QubitId q) const { return record(q).holder; }

    void transfer(QubitId q, Actor from, Actor to) {
        Record& r = record(q);
        if (r.holder != from)
            throw OwnershipError(std::string(to_string(from)) + " does not hold qubit " + std::to_string(to_index(q)));
        r.holder = to;
    }

    void apply_unitary(Actor by, QubitId q, const Matrix2& u) {
        check_access(by, q);
        StateVector& s = cluster_of(q);
        s = apply_unitary1q(s, q, u);
    }

    void apply_pauli(Actor by, QubitId q, PauliLabel p) { apply_unitary(by, q, pauli_matrix(p)); }

    void apply_cnot(Actor by, QubitId control, QubitId target) {
        check_access(by, control);
        check_access(by, target);
        merge(control, target);
        StateVector& s = cluster_of(control);
        s = osbmdi::apply_cnot(s, control, target);
    }

    BellLabel bell_measure(Actor by, QubitId a, QubitId b, Rng& rng) {
        check_access(by, a);
        check_access(by, b);
        merge(a, b);
        const std::uint32_t id = records_[to_index(a)].cluster;
        auto [label, rest] = osbmdi::bell_measure(clusters_.at(id), a, b, rng);
        replace(id, std::move(rest));
        retire(a);
        retire(b);
        return label;
    }

    int comp_measure(Actor by, QubitId q, Rng& rng) {
        check_access(by, q);
        const std::uint32_t id = records_[to_index(q)].cluster;
        auto [bit, rest] = osbmdi::comp_measure(clusters_.at(id), q, rng);
        replace(id, std::move(rest));
        retire(q);
        return bit;
    }

    /// Joint state of the clusters containing `qubits`, with `qubits` first in
    /// the given order. Read-only; for analysis and tests.
    StateVector joint_state(std::span<const QubitId> qubits) const {
        std::vector<std::uint32_t> ids;
        for (QubitId q : qubits) {
            const auto c = record(q).cluster;
            if (std::find(ids.begin(), ids.end(), c) == ids.end()) ids.push_back(c);
        }
        StateVector joined;
        for (auto c : ids) joined = tensor(joined, clusters_.at(c));
        return bring_to_front(joined, qubits);
    }

    std::vector<QubitId> held_by(Actor a) const {
        std::vector<QubitId> out;
        for (std::uint32_t i = 0; i < records_.size(); ++i)
            if (records_[i].alive && records_[i].holder == a) out.push_back(qubit_id(i));
        return out;
    }

    std::size_t live_qubits() const {
        std::size_t n = 0;
        for (const auto& r : records_) n += r.alive ? 1 : 0;
        return n;
    }

    std::size_t largest_cluster() const {
        std::size_t m = 0;
        for (const auto& [id, s] : clusters_) m = std::max(m, s.qubit_count());
        return m;
    }

private:
    struct Record {
        std::uint32_t cluster = 0;
        Actor holder = Actor::kAlice;
        bool alive = false;
    };

    QubitId fresh(Actor owner) {
        records_.push_back(Record{0, owner, true});
        return qubit_id(static_cast<std::uint32_t>(records_.size() - 1));
    }

    void add_cluster(StateVector s) {
        const std::uint32_t id = next_cluster_++;
        for (QubitId q : s.qubits()) records_[to_index(q)].cluster = id;
        clusters_.emplace(id, std::move(s));
    }

    const Record& record(QubitId q) const {
        if (!alive(q)) throw InvalidRegister("qubit " + std::to_string(to_index(q)) + " is not alive");
        return records_[to_index(q)];
    }

    Record& record(QubitId q) {
        if (!alive(q)) throw InvalidRegister("qubit " + std::to_string(to_index(q)) + " is not alive");
        return records_[to_index(q)];
    }

    void check_access(Actor by, QubitId q) const {
        const Actor h = record(q).holder;
        if (h == by) return;
        if (h == Actor::kChannel && by == Actor::kEve) return;
        throw OwnershipError(std::string(to_string(by)) + " acted on qubit " + std::to_string(to_index(q)) +
                             " held by " + std::string(to_string(h)));
    }

    StateVector& cluster_of(QubitId q) { return clusters_.at(records_[to_index(q)].cluster); }

    void merge(QubitId a, QubitId b) {
        const std::uint32_t ca = records_[to_index(a)].cluster;
        const std::uint32_t cb = records_[to_index(b)].cluster;
        if (ca == cb) return;
        StateVector joined = tensor(clusters_.at(ca), clusters_.at(cb));
        for (QubitId q : clusters_.at(cb).qubits()) records_[to_index(q)].cluster = ca;
        clusters_.erase(cb);
        clusters_.at(ca) = std::move(joined);
    }

    void replace(std::uint32_t id, StateVector s) {
        if (s.qubit_count() == 0)
            clusters_.erase(id);
        else
            clusters_.at(id) = std::move(s);
    }

    void retire(QubitId q) { records_[to_index(q)].alive = false; }

    std::vector<Record> records_;
    std::map<std::uint32_t, StateVector> clusters_;
    std::uint32_t next_cluster_ = 0;
};

}  // namespace osbmdi
