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
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "osbmdi/adversary/attack_spec.hpp"
#include "osbmdi/protocol/channel.hpp"
#include "osbmdi/quantum/world.hpp"
#include "osbmdi/rng.hpp"

namespace osbmdi {

/// Eve's quantum holdings (qubit, provenance) and her classical notes.
struct EveState {
    struct Held {
        QubitId qubit{};
        QubitId about{};
    };
    std::vector<Held> held;
    std::vector<EveNote> notes;
};

/// round(fraction * count) positions out of `count`, uniformly at random.
inline std::vector<bool> select_slots(std::size_t count, double fraction, Rng& rng) {
    std::vector<bool> out(count, false);
    const auto k = static_cast<std::size_t>(std::llround(std::clamp(fraction, 0.0, 1.0) * static_cast<double>(count)));
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(order[i], order[i + rng.below(count - i)]);
        out[order[i]] = true;
    }
    return out;
}

/// Keeps each selected qubit and forwards one half of a fresh psi+ pair instead.
inline void intercept_resend(QuantumWorld& world, std::vector<QubitId>& in_flight, const std::vector<bool>& sel,
                             EveState& eve) {
    for (std::size_t i = 0; i < in_flight.size(); ++i) {
        if (!sel[i]) continue;
        const QubitId original = in_flight[i];
        world.transfer(original, Actor::kChannel, Actor::kEve);
        const auto [kept, sent] = world.prepare_bell(Actor::kEve, BellLabel::kPsiPlus);
        world.transfer(sent, Actor::kEve, Actor::kChannel);
        in_flight[i] = sent;
        eve.held.push_back({original, original});
        eve.held.push_back({kept, original});
    }
}

/// CNOT from a fresh ancilla alpha|0> + beta|1> onto each selected travel qubit.
inline void entangle_measure(QuantumWorld& world, const std::vector<QubitId>& in_flight, const std::vector<bool>& sel,
                             Amplitude alpha, Amplitude beta, EveState& eve) {
    for (std::size_t i = 0; i < in_flight.size(); ++i) {
        if (!sel[i]) continue;
        const QubitId ancilla = world.prepare_qubit(Actor::kEve, alpha, beta);
        world.apply_cnot(Actor::kEve, ancilla, in_flight[i]);
        eve.held.push_back({ancilla, in_flight[i]});
    }
}

inline void flip_all(QuantumWorld& world, const std::vector<QubitId>& in_flight, const std::vector<bool>& sel) {
    for (std::size_t i = 0; i < in_flight.size(); ++i)
        if (sel[i]) world.apply_pauli(Actor::kEve, in_flight[i], PauliLabel::kX);
}

inline void disturb(QuantumWorld& world, std::vector<QubitId>& in_flight, const std::vector<bool>& sel,
                    DisturbMode mode, Rng& rng) {
    if (mode == DisturbMode::kRandomPauli) {
        for (std::size_t i = 0; i < in_flight.size(); ++i)
            if (sel[i]) world.apply_pauli(Actor::kEve, in_flight[i], kAllPaulis[1 + rng.below(3)]);
        return;
    }
    std::vector<std::size_t> where;
    std::vector<QubitId> picked;
    for (std::size_t i = 0; i < in_flight.size(); ++i)
        if (sel[i]) {
            where.push_back(i);
            picked.push_back(in_flight[i]);
        }
    rng.shuffle(picked.begin(), picked.end());
    for (std::size_t k = 0; k < where.size(); ++k) in_flight[where[k]] = picked[k];
}

/// Measures every qubit Eve still holds in the computational basis.
inline void measure_holdings(QuantumWorld& world, EveState& eve, Rng& rng) {
    for (const auto& h : eve.held)
        if (world.alive(h.qubit) && world.holder(h.qubit) == Actor::kEve)
            eve.notes.push_back({h.about, world.comp_measure(Actor::kEve, h.qubit, rng)});
    eve.held.clear();
}

/// Interceptor driven by an AttackSpec.
class Adversary final : public Interceptor {
public:
    explicit Adversary(AttackSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

    const AttackSpec& spec() const { return spec_; }

    void on_transit(const Leg& leg, std::vector<QubitId>& in_flight, QuantumWorld& world, Rng& rng) override {
        if (spec_.strategy == Strategy::kFakeBmo || !spec_.targets(leg)) return;
        const auto sel = select_slots(in_flight.size(), spec_.fraction, rng);
        switch (spec_.strategy) {
            case Strategy::kInterceptResend: intercept_resend(world, in_flight, sel, eve_); break;
            case Strategy::kEntangleMeasure:
                entangle_measure(world, in_flight, sel, spec_.alpha, spec_.beta, eve_);
                break;
            case Strategy::kFlipAll: flip_all(world, in_flight, sel); break;
            case Strategy::kDisturb: disturb(world, in_flight, sel, spec_.disturb_mode, rng); break;
            case Strategy::kFakeBmo: break;
        }
    }

    std::vector<bool> faked(Stage stage, std::size_t count, Rng& rng) override {
        if (spec_.strategy != Strategy::kFakeBmo || !spec_.fakes(stage)) return {};
        return select_slots(count, spec_.fraction, rng);
    }

    std::vector<EveNote> finish(QuantumWorld& world, Rng& rng) override {
        measure_holdings(world, eve_, rng);
        return std::exchange(eve_.notes, {});
    }

private:
    AttackSpec spec_;
    EveState eve_;
};

inline std::unique_ptr<Interceptor> make_adversary(const std::optional<AttackSpec>& spec) {
    if (!spec) return nullptr;
    return std::make_unique<Adversary>(*spec);
}

}  // namespace osbmdi
