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

// Exact algebra of the CNOT attack on one half of a psi+ pair.

#pragma once

#include <array>
#include <cmath>

#include "osbmdi/quantum/bell.hpp"

namespace osbmdi {

struct EntangleAnalysis {
    double alpha2 = 0.0;
    double beta2 = 0.0;
    /// Schmidt rank of the post-CNOT state across (pair | ancilla). 1 means product.
    std::size_t schmidt_rank = 0;
    /// Probability that a Bell measurement of the pair no longer returns psi+.
    double mismatch_probability = 0.0;
};

inline EntangleAnalysis analyse_entangle_measure(Amplitude alpha, Amplitude beta) {
    const QubitId home = qubit_id(0), travel = qubit_id(1), ancilla = qubit_id(2);
    const StateVector before =
        tensor(make_bell(BellLabel::kPsiPlus, home, travel), StateVector::single(ancilla, alpha, beta));
    const StateVector after = apply_cnot(before, ancilla, travel);
    const std::array<QubitId, 1> cut{ancilla};
    EntangleAnalysis a;
    a.alpha2 = std::norm(alpha);
    a.beta2 = std::norm(beta);
    a.schmidt_rank = schmidt_rank(after, cut);
    a.mismatch_probability = 1.0 - bell_probabilities(after, home, travel)[index_of(BellLabel::kPsiPlus)];
    return a;
}

}  // namespace osbmdi
