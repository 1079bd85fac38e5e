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

#include <stdexcept>
#include <string>

namespace osbmdi {

/// Qubit register misuse: duplicate ids, unknown ids, malformed amplitude vectors.
struct InvalidRegister : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A matrix handed to a gate is not unitary.
struct InvalidOperator : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An actor touched a qubit it does not hold.
struct OwnershipError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Structural protocol violation (mismatched sequence lengths, missing reveals).
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Announced outcomes cannot be explained by any Pauli frame.
struct DecodeIntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No encoding is consistent with a pair of announcements.
struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace osbmdi
