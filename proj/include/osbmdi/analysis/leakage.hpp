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

// Information an observer of Charlie's two announcements gains about the
// encodings of one dialogue slot. The observer knows the state sets but not
// which label either party drew, and every encoding is a priori uniform.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "osbmdi/errors.hpp"
#include "osbmdi/quantum/frames.hpp"

namespace osbmdi {

struct LeakageReport {
    double h_apriori = 0.0;     // bits exchanged: two 2-bit encodings
    double h_aposteriori = 0.0; // entropy of the consistent (inits, encodings) set
    double leaked = 0.0;        // h_apriori - h_aposteriori
    std::size_t consistent_count = 0;
    double h_messages = 0.0;    // entropy of the encodings alone given both announcements
    double leaked_messages = 0.0;
};

/// Optional label priors; unset means uniform over the set.
struct LabelPriors {
    std::optional<std::vector<double>> alice;
    std::optional<std::vector<double>> bob;
};

namespace detail {

inline double entropy_bits(const std::vector<double>& weights) {
    double total = 0.0, h = 0.0;
    for (double w : weights) total += w;
    for (double w : weights)
        if (w > 0.0) h -= (w / total) * std::log2(w / total);
    return h;
}

inline double prior_of(const std::optional<std::vector<double>>& p, std::size_t i, std::size_t n) {
    if (!p) return 1.0 / static_cast<double>(n);
    if (p->size() != n) throw ConfigError("prior vector does not match its state set");
    return (*p)[i];
}

}  // namespace detail

/// Two-way (dialogue) leakage for the announcement pair (bmo1, bmo2).
inline LeakageReport leakage_bits(const std::vector<BellLabel>& alice_set, const std::vector<BellLabel>& bob_set,
                                  BellLabel bmo1, BellLabel bmo2, const LabelPriors& priors = {}) {
    if (alice_set.empty() || bob_set.empty()) throw ConfigError("state sets must be nonempty");
    std::vector<double> triple_weights;
    std::array<double, 16> message_weight{};
    for (std::size_t a = 0; a < alice_set.size(); ++a)
        for (std::size_t b = 0; b < bob_set.size(); ++b) {
            const BellLabel shared = swapped_home_label(alice_set[a], bob_set[b], bmo1);
            const double w = detail::prior_of(priors.alice, a, alice_set.size()) *
                             detail::prior_of(priors.bob, b, bob_set.size());
            for (PauliLabel ua : kAllPaulis)
                for (PauliLabel ub : kAllPaulis)
                    if (encoded_label(shared, ua, ub) == bmo2) {
                        triple_weights.push_back(w);
                        message_weight[index_of(ua) * 4 + index_of(ub)] += w;
                    }
        }
    if (triple_weights.empty()) throw IntegrityError("no encoding is consistent with the announcements");
    LeakageReport r;
    r.h_apriori = 4.0;
    r.consistent_count = triple_weights.size();
    r.h_aposteriori = detail::entropy_bits(triple_weights);
    r.leaked = r.h_apriori - r.h_aposteriori;
    r.h_messages = detail::entropy_bits(std::vector<double>(message_weight.begin(), message_weight.end()));
    r.leaked_messages = r.h_apriori - r.h_messages;
    return r;
}

/// One-way (QSDC) leakage about the sender's encoding. The receiver's label is private.
inline LeakageReport qsdc_leakage_bits(const std::vector<BellLabel>& alice_set, const std::vector<BellLabel>& bob_set,
                                       BellLabel bmo1, BellLabel bmo2, const LabelPriors& priors = {}) {
    std::vector<double> triple_weights;
    std::array<double, 4> message_weight{};
    for (std::size_t a = 0; a < alice_set.size(); ++a)
        for (std::size_t b = 0; b < bob_set.size(); ++b) {
            const BellLabel shared = swapped_home_label(alice_set[a], bob_set[b], bmo1);
            const double w = detail::prior_of(priors.alice, a, alice_set.size()) *
                             detail::prior_of(priors.bob, b, bob_set.size());
            for (PauliLabel ua : kAllPaulis)
                if (pauli_image(ua, shared, PairSide::kFirst) == bmo2) {
                    triple_weights.push_back(w);
                    message_weight[index_of(ua)] += w;
                }
        }
    if (triple_weights.empty()) throw IntegrityError("no encoding is consistent with the announcements");
    LeakageReport r;
    r.h_apriori = 2.0;
    r.consistent_count = triple_weights.size();
    r.h_aposteriori = detail::entropy_bits(triple_weights);
    r.leaked = r.h_apriori - r.h_aposteriori;
    r.h_messages = detail::entropy_bits(std::vector<double>(message_weight.begin(), message_weight.end()));
    r.leaked_messages = r.h_apriori - r.h_messages;
    return r;
}

/// Leakage averaged over the announcement distribution (uniform labels and encodings).
struct AverageLeakage {
    double leaked = 0.0;
    double leaked_messages = 0.0;
};

inline AverageLeakage average_leakage(const std::vector<BellLabel>& alice_set, const std::vector<BellLabel>& bob_set,
                                      bool dialogue = true) {
    // Every (bmo1, bmo2) pair is equally likely: bmo1 is uniform for any
    // product of Bell states and the encodings make bmo2 uniform too.
    AverageLeakage out;
    for (BellLabel b1 : kAllBellLabels)
        for (BellLabel b2 : kAllBellLabels) {
            const auto r = dialogue ? leakage_bits(alice_set, bob_set, b1, b2) : qsdc_leakage_bits(alice_set, bob_set, b1, b2);
            out.leaked += r.leaked / 16.0;
            out.leaked_messages += r.leaked_messages / 16.0;
        }
    return out;
}

/// One line of the leakage table printed by the CLI.
struct LeakageRow {
    BellLabel bmo1, bmo2;
    LeakageReport report;
};

inline std::vector<LeakageRow> leakage_table(const std::vector<BellLabel>& alice_set,
                                             const std::vector<BellLabel>& bob_set, bool dialogue = true) {
    std::vector<LeakageRow> rows;
    for (BellLabel b1 : kAllBellLabels)
        for (BellLabel b2 : kAllBellLabels)
            rows.push_back({b1, b2, dialogue ? leakage_bits(alice_set, bob_set, b1, b2)
                                             : qsdc_leakage_bits(alice_set, bob_set, b1, b2)});
    return rows;
}

}  // namespace osbmdi
