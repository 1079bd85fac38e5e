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

// Hooks through which an adversary reaches into a session. The protocol only
// talks to this interface, so it never needs to know which attack is running.

#pragma once

#include <cstddef>
#include <vector>

#include "osbmdi/protocol/types.hpp"
#include "osbmdi/quantum/world.hpp"
#include "osbmdi/rng.hpp"

namespace osbmdi {

/// One classical record kept by Eve: a measurement bit on a qubit she held,
/// tagged with the honest qubit it was entangled with or stolen from.
struct EveNote {
    QubitId about{};
    int bit = 0;
};

class Interceptor {
public:
    virtual ~Interceptor() = default;

    /// Called while `in_flight` sits on the channel (held by Actor::kChannel).
    /// Implementations may act on those qubits as Eve, reorder the vector, or
    /// substitute entries with qubits Eve hands back to the channel.
    virtual void on_transit(const Leg& leg, std::vector<QubitId>& in_flight, QuantumWorld& world, Rng& rng) {
        (void)leg, (void)in_flight, (void)world, (void)rng;
    }

    /// Charlie's measurements of a stage that are replaced by a random
    /// announcement. Empty means all are honest.
    virtual std::vector<bool> faked(Stage stage, std::size_t count, Rng& rng) {
        (void)stage, (void)count, (void)rng;
        return {};
    }

    /// Measures whatever Eve still holds once the session is over.
    virtual std::vector<EveNote> finish(QuantumWorld& world, Rng& rng) {
        (void)world, (void)rng;
        return {};
    }
};

}  // namespace osbmdi
