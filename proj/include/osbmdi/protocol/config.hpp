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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "osbmdi/adversary/attack_spec.hpp"
#include "osbmdi/analysis/noise.hpp"
#include "osbmdi/errors.hpp"
#include "osbmdi/protocol/types.hpp"

namespace osbmdi {

/// Everything that determines one session, apart from its index in a batch.
struct SessionConfig {
    std::size_t n_pairs = 8;
    Mode mode = Mode::kQsdc;
    std::vector<BellLabel> alice_states{BellLabel::kPsiPlus};
    std::vector<BellLabel> bob_states{BellLabel::kPsiPlus, BellLabel::kPsiMinus};
    /// One label: every decoy uses it. Several: each decoy draws one uniformly.
    std::vector<BellLabel> decoy_states{BellLabel::kPsiPlus};
    std::optional<AttackSpec> attack;
    std::optional<NoiseSpec> noise;
    double error_threshold = 0.0;
    std::uint64_t master_seed = 1;
    bool use_cases_ii_iii_for_message = false;
    /// Stage-2 decoys sent as single halves for the flip-attack correlation check.
    /// Unset means n_pairs / 4.
    std::optional<std::size_t> split_decoys;
    /// Message slots the sender leaves unencoded for a final correlation check.
    std::size_t unencoded_checks = 0;
    /// QSDC payload; symbols beyond its length (or all, if empty) are random.
    std::string message;

    std::size_t stage1_decoys() const { return n_pairs / 2; }
    std::size_t stage2_decoys() const { return n_pairs - n_pairs / 2; }
    std::size_t split_decoy_count() const { return split_decoys.value_or(n_pairs / 4); }

    void validate() const {
        if (n_pairs == 0 || n_pairs % 2 != 0) throw ConfigError("n_pairs must be a positive even integer");
        if (n_pairs > 4096) throw ConfigError("n_pairs is unreasonably large");
        if (!(error_threshold >= 0.0 && error_threshold <= 1.0)) throw ConfigError("error_threshold must lie in [0, 1]");
        if (alice_states.empty() || bob_states.empty() || decoy_states.empty())
            throw ConfigError("state sets must be nonempty");
        for (const auto* set : {&alice_states, &bob_states, &decoy_states})
            for (std::size_t i = 0; i < set->size(); ++i)
                for (std::size_t j = i + 1; j < set->size(); ++j)
                    if ((*set)[i] == (*set)[j]) throw ConfigError("state sets must not repeat a label");
        if (split_decoy_count() > stage2_decoys()) throw ConfigError("more split decoys than stage-2 decoys");
        if (mode != Mode::kQd && alice_states.size() != 1)
            throw ConfigError("QSDC/QKD need a single public Alice state");
        if (mode == Mode::kQd && use_cases_ii_iii_for_message)
            throw ConfigError("cases II/III message reuse is only supported for QSDC/QKD");
        if (mode != Mode::kQsdc && !message.empty()) throw ConfigError("a fixed message only applies to QSDC");
        if (attack) attack->validate();
    }
};

}  // namespace osbmdi
