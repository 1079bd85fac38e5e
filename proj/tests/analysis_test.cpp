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

#include <cmath>
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include "osbmdi/analysis/batch.hpp"
#include "osbmdi/analysis/detection.hpp"
#include "osbmdi/analysis/entangle.hpp"
#include "osbmdi/analysis/information.hpp"
#include "osbmdi/analysis/leakage.hpp"
#include "osbmdi/analysis/noise.hpp"
#include "osbmdi/analysis/table2.hpp"
#include "support/dense_oracle.hpp"

using namespace osbmdi;

namespace {

oracle::Vec bell(BellLabel l) { return oracle::bell_basis()[index_of(l)]; }

oracle::Mat pauli(PauliLabel p) {
    switch (p) {
        case PauliLabel::kI: return oracle::identity(2);
        case PauliLabel::kX: return oracle::pauli_x();
        case PauliLabel::kIY: return oracle::pauli_iy();
        case PauliLabel::kZ: return oracle::pauli_z();
    }
    return oracle::identity(2);
}

// Alice's pair on (0,1), Bob's on (2,3). Charlie measures (1,3), the encodings
// act on 0 and 2, and the final label is read on (0,2). Returns the
// probability of each (bmo1, bmo2) pair.
std::array<std::array<double, 4>, 4> announcement_law(BellLabel a, BellLabel b, PauliLabel ua, PauliLabel ub) {
    std::array<std::array<double, 4>, 4> out{};
    const auto start = oracle::kron(bell(a), bell(b));
    const auto enc = oracle::mul(oracle::on_qubit(pauli(ua), 0, 4), oracle::on_qubit(pauli(ub), 2, 4));
    for (BellLabel b1 : kAllBellLabels) {
        const auto post = oracle::apply(enc, oracle::apply(oracle::pair_projector(bell(b1), 1, 3, 4), start));
        for (BellLabel b2 : kAllBellLabels)
            out[index_of(b1)][index_of(b2)] = oracle::expectation(oracle::pair_projector(bell(b2), 0, 2, 4), post);
    }
    return out;
}

// I(encodings ; announcements) with uniform labels and encodings. One-way when
// only Alice encodes.
double oracle_mutual_information(const std::vector<BellLabel>& as, const std::vector<BellLabel>& bs, bool dialogue) {
    std::map<int, double> px;
    std::map<int, double> py;
    std::map<std::pair<int, int>, double> pxy;
    const auto ubs = dialogue ? std::vector<PauliLabel>(kAllPaulis.begin(), kAllPaulis.end())
                              : std::vector<PauliLabel>{PauliLabel::kI};
    const double w0 = 1.0 / double(as.size() * bs.size() * 4 * ubs.size());
    for (BellLabel a : as)
        for (BellLabel b : bs)
            for (PauliLabel ua : kAllPaulis)
                for (PauliLabel ub : ubs) {
                    const auto law = announcement_law(a, b, ua, ub);
                    const int x = int(index_of(ua)) * 4 + int(index_of(ub));
                    for (int y1 = 0; y1 < 4; ++y1)
                        for (int y2 = 0; y2 < 4; ++y2) {
                            const double w = w0 * law[y1][y2];
                            if (w < 1e-15) continue;
                            px[x] += w;
                            py[y1 * 4 + y2] += w;
                            pxy[{x, y1 * 4 + y2}] += w;
                        }
                }
    double mi = 0;
    for (const auto& [k, w] : pxy) mi += w * std::log2(w / (px[k.first] * py[k.second]));
    return mi;
}

}  // namespace

TEST(Table2, ReferenceRowsMatchDenseSimulation) {
    const auto rows = expected_table2();
    ASSERT_EQ(rows.size(), 32u);
    for (const auto& r : rows) {
        const auto law = announcement_law(BellLabel::kPsiPlus, r.bob_init, r.encoding, PauliLabel::kI);
        for (BellLabel b2 : kAllBellLabels) {
            const double p = law[index_of(r.bmo1)][index_of(b2)];
            EXPECT_NEAR(p, b2 == r.bmo2 ? 0.25 : 0.0, 1e-12) << to_string(r);
        }
        EXPECT_EQ(swapped_home_label(BellLabel::kPsiPlus, r.bob_init, r.bmo1), r.shared);
        EXPECT_EQ(r.decoded, r.encoding);
    }
    EXPECT_EQ(reproduce_table2(), rows);
}

TEST(Leakage, OneWayValuesMatchTheEnumeration) {
    using B = BellLabel;
    const std::vector<B> a{B::kPsiPlus}, two{B::kPsiPlus, B::kPsiMinus};
    const std::vector<B> four(kAllBellLabels.begin(), kAllBellLabels.end());
    EXPECT_NEAR(average_leakage(a, two, false).leaked_messages, oracle_mutual_information(a, two, false), 1e-12);
    EXPECT_NEAR(average_leakage(a, four, false).leaked_messages, oracle_mutual_information(a, four, false), 1e-12);
    EXPECT_NEAR(average_leakage(a, a, false).leaked_messages, 2.0, 1e-12);
    EXPECT_NEAR(average_leakage(a, two, false).leaked_messages, 1.0, 1e-12);
    EXPECT_NEAR(average_leakage(a, four, false).leaked_messages, 0.0, 1e-12);
}

TEST(Leakage, DialogueValuesMatchTheEnumeration) {
    using B = BellLabel;
    const std::vector<B> a{B::kPsiPlus}, two{B::kPsiPlus, B::kPsiMinus};
    const std::vector<B> four(kAllBellLabels.begin(), kAllBellLabels.end());
    for (const auto& [as, bs] : std::vector<std::pair<std::vector<B>, std::vector<B>>>{{a, a}, {a, two}, {a, four}, {two, two}, {four, four}})
        EXPECT_NEAR(average_leakage(as, bs, true).leaked_messages, oracle_mutual_information(as, bs, true), 1e-12);

    const auto r2 = leakage_bits(a, two, B::kPsiPlus, B::kPhiMinus);
    EXPECT_EQ(r2.consistent_count, 8u);
    EXPECT_NEAR(r2.h_aposteriori, 3.0, 1e-12);
    EXPECT_NEAR(r2.leaked, 1.0, 1e-12);
    const auto r4 = leakage_bits(a, four, B::kPhiPlus, B::kPsiMinus);
    EXPECT_EQ(r4.consistent_count, 16u);
    EXPECT_NEAR(r4.leaked, 0.0, 1e-12);
    const auto r1 = leakage_bits(a, a, B::kPsiPlus, B::kPsiPlus);
    EXPECT_EQ(r1.consistent_count, 4u);
    EXPECT_NEAR(r1.leaked, 2.0, 1e-12);
}

TEST(Leakage, LabelsAndEncodingsCanDisagree) {
    // With both sets {psi+, psi-} two label choices lead to the same encodings,
    // so the triple count overstates what is hidden about the messages.
    using B = BellLabel;
    const std::vector<B> two{B::kPsiPlus, B::kPsiMinus};
    const auto r = leakage_bits(two, two, B::kPsiPlus, B::kPsiPlus);
    EXPECT_GT(r.h_aposteriori, r.h_messages + 0.5);
}

TEST(Leakage, PriorsAndErrors) {
    using B = BellLabel;
    const std::vector<B> a{B::kPsiPlus}, two{B::kPsiPlus, B::kPsiMinus};
    const auto skew = leakage_bits(a, two, B::kPsiPlus, B::kPsiPlus, LabelPriors{std::nullopt, std::vector<double>{0.9, 0.1}});
    EXPECT_GT(skew.leaked, 1.0);
    EXPECT_THROW(leakage_bits(a, two, B::kPsiPlus, B::kPsiPlus, LabelPriors{std::nullopt, std::vector<double>{1.0}}),
                 ConfigError);
    EXPECT_THROW(leakage_bits({}, two, B::kPsiPlus, B::kPsiPlus), ConfigError);
    EXPECT_EQ(leakage_table(a, two).size(), 16u);
}

TEST(MutualInformation, KnownDistributions) {
    std::vector<std::pair<int, int>> same, indep;
    for (int i = 0; i < 4000; ++i) {
        same.emplace_back(i % 4, i % 4);
        indep.emplace_back(i % 4, (i / 4) % 4);
    }
    const auto s = mutual_information(same);
    EXPECT_NEAR(s.bits, 2.0, 1e-12);
    EXPECT_FALSE(s.insufficient);
    EXPECT_NEAR(mutual_information(indep).bits, 0.0, 1e-12);
    const std::vector<std::pair<int, int>> tiny{{0, 0}, {1, 1}};
    EXPECT_TRUE(mutual_information(tiny).insufficient);
    EXPECT_TRUE(mutual_information(std::vector<std::pair<int, int>>{}).insufficient);
}

TEST(MutualInformation, EmpiricalQsdcLeakAgreesWithTheEnumeration) {
    using B = BellLabel;
    for (const auto& bob : {std::vector<B>{B::kPsiPlus, B::kPsiMinus}, std::vector<B>(kAllBellLabels.begin(), kAllBellLabels.end())}) {
        SessionConfig c;
        c.n_pairs = 16;
        c.bob_states = bob;
        const auto reports = run_batch(c, BatchOptions{600, 1, false});
        const auto mi = eve_information(reports);
        ASSERT_FALSE(mi.insufficient);
        const double want = average_leakage(c.alice_states, bob, false).leaked_messages;
        EXPECT_NEAR(mi.bits, want, kMutualInformationTolerance + mi.bias_bound);
    }
}

TEST(Detection, EstimateAndPooling) {
    CheckTally t{400, 100};
    const auto e = estimate("x", t);
    EXPECT_DOUBLE_EQ(e.rate, 0.25);
    EXPECT_NEAR(e.half_width, 1.96 * std::sqrt(0.25 * 0.75 / 400), 1e-15);
    EXPECT_EQ(estimate("empty", CheckTally{}).half_width, 0.0);

    std::vector<SessionReport> reports(3);
    reports[0].tallies[0] = {10, 5};
    reports[1].tallies[0] = {10, 0};
    reports[2].tallies[1] = {4, 4};
    reports[2].aborted = true;
    const std::array<CheckKind, 2> kinds{CheckKind::kCaseI, CheckKind::kCaseII};
    const auto pooled = pooled_tally(reports, kinds);
    EXPECT_EQ(pooled.checks, 24u);
    EXPECT_EQ(pooled.failures, 9u);
    EXPECT_NEAR(abort_fraction(reports), 1.0 / 3.0, 1e-15);
    EXPECT_EQ(detection_by_kind(reports).size(), kCheckKindCount);
}

TEST(Noise, FidelityCurvesMatchDenseOracle) {
    std::vector<double> grid;
    for (int k = 0; k <= 16; ++k) grid.push_back(k * std::numbers::pi / 8);
    for (BellLabel l : kAllBellLabels)
        for (auto ch : {NoiseChannel::kCollectiveDephasing, NoiseChannel::kCollectiveRotation})
            for (auto ex : {NoiseExposure::kWholePair, NoiseExposure::kTravelHalfOnly}) {
                const auto curve = noise_fidelity(l, ch, grid, ex);
                ASSERT_EQ(curve.size(), grid.size());
                for (const auto& pt : curve) {
                    const auto u = ch == NoiseChannel::kCollectiveDephasing
                                       ? oracle::mat2(1, 0, 0, std::polar(1.0, pt.parameter))
                                       : oracle::mat2(std::cos(pt.parameter), -std::sin(pt.parameter),
                                                      std::sin(pt.parameter), std::cos(pt.parameter));
                    auto m = oracle::on_qubit(u, 1, 2);
                    if (ex == NoiseExposure::kWholePair) m = oracle::mul(oracle::on_qubit(u, 0, 2), m);
                    EXPECT_NEAR(pt.fidelity, oracle::overlap2(bell(l), oracle::apply(m, bell(l))), 1e-12);
                }
            }
    // Closed forms for psi+ under dephasing.
    for (const auto& pt : noise_fidelity(BellLabel::kPsiPlus, NoiseChannel::kCollectiveDephasing, grid))
        EXPECT_NEAR(pt.fidelity, std::pow(std::cos(pt.parameter), 2), 1e-12);
    for (const auto& pt : noise_fidelity(BellLabel::kPsiPlus, NoiseChannel::kCollectiveRotation, grid))
        EXPECT_NEAR(pt.fidelity, 1.0, 1e-12);
}

TEST(Noise, TextForm) {
    const auto n = parse_noise("rotation:0.5");
    ASSERT_TRUE(n);
    EXPECT_EQ(n->channel, NoiseChannel::kCollectiveRotation);
    EXPECT_EQ(parse_noise(n->describe())->parameter, 0.5);
    EXPECT_FALSE(parse_noise("dephasing"));
    EXPECT_FALSE(parse_noise("amplitude:0.1"));
    EXPECT_FALSE(parse_noise("dephasing:0.1x"));
}

TEST(EntangleAnalysis, SchmidtRankAndMismatch) {
    for (double b2 : {0.1, 0.25, 0.5, 0.9}) {
        const auto a = analyse_entangle_measure(std::sqrt(1 - b2), std::sqrt(b2));
        EXPECT_EQ(a.schmidt_rank, 2u);
        EXPECT_NEAR(a.mismatch_probability, b2, 1e-12);
        const auto v = oracle::apply(oracle::cnot(2, 1, 3), oracle::kron(oracle::psi_plus(), oracle::Vec{std::sqrt(1 - b2), std::sqrt(b2)}));
        EXPECT_GT(oracle::single_qubit_cut_determinant(v, 2, 3), 1e-6);
    }
    EXPECT_EQ(analyse_entangle_measure(1.0, 0.0).schmidt_rank, 1u);
    EXPECT_NEAR(analyse_entangle_measure(1.0, 0.0).mismatch_probability, 0.0, 1e-12);
}

TEST(Batch, ResultsDoNotDependOnThreadCount) {
    SessionConfig c;
    c.n_pairs = 8;
    c.mode = Mode::kQd;
    c.attack = parse_attack("intercept_resend:fraction=0.5");
    c.error_threshold = 1.0;
    const auto one = run_batch(c, BatchOptions{12, 1, true});
    const auto three = run_batch(c, BatchOptions{12, 3, true});
    ASSERT_EQ(one.size(), three.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].index, i);
        EXPECT_EQ(one[i].transcript.serialize(), three[i].transcript.serialize());
        EXPECT_EQ(one[i].tallies[0].failures, three[i].tallies[0].failures);
    }
}
