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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Tolerances are fixed here and nowhere else.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "osbmdi/io/report.hpp"
#include "osbmdi/osbmdi.hpp"
#include "support/dense_oracle.hpp"

using namespace osbmdi;

namespace {

constexpr double kExact = 1e-12;
constexpr double kFidelityTol = 1e-9;
constexpr double kSigmas = 4.0;
constexpr std::uint64_t kMinChecks = 100000;
constexpr std::size_t kHonestSessions = 1000;
constexpr std::size_t kAttackPairs = 256;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) {
        if (pass) detail += (detail.empty() ? "" : "; ") + what;
    }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

oracle::Vec bell(BellLabel l) { return oracle::bell_basis()[index_of(l)]; }

// ---- 1 -------------------------------------------------------------------

Outcome swap_identities() {
    Outcome o;
    const QubitId q1 = qubit_id(1), q2 = qubit_id(2), q3 = qubit_id(3), q4 = qubit_id(4);
    int products = 0;
    for (BellLabel l : kAllBellLabels)
        for (BellLabel r : kAllBellLabels) {
            const auto e = bell_expand(tensor(make_bell(l, q1, q2), make_bell(r, q3, q4)), {{{q1, q3}, {q2, q4}}});
            // Oracle coefficient: <B_x(1,3) B_y(2,4) | B_l(1,2) B_r(3,4)>, summed over basis strings.
            const auto kl = bell(l), kr = bell(r);
            int quarter = 0;
            for (BellLabel x : kAllBellLabels)
                for (BellLabel y : kAllBellLabels) {
                    const auto kx = bell(x), ky = bell(y);
                    oracle::C c{0.0};
                    for (int b = 0; b < 16; ++b) {
                        const int b1 = (b >> 3) & 1, b2 = (b >> 2) & 1, b3 = (b >> 1) & 1, b4 = b & 1;
                        c += std::conj(kx[b1 * 2 + b3] * ky[b2 * 2 + b4]) * kl[b1 * 2 + b2] * kr[b3 * 2 + b4];
                    }
                    o.require(std::abs(e.at(x, y) - c) <= kExact, "coefficient differs from oracle");
                    if (std::abs(c) > kExact) {
                        o.require(std::abs(std::abs(c) - 0.5) <= kExact, "nonzero coefficient is not +-1/2");
                        ++quarter;
                    }
                }
            o.require(quarter == 4, "product does not have four coefficients");
            ++products;
        }
    // The two printed identities, sign by sign.
    using B = BellLabel;
    const auto pp = bell_expand(tensor(make_bell(B::kPsiPlus, q1, q2), make_bell(B::kPsiPlus, q3, q4)), {{{q1, q3}, {q2, q4}}});
    const auto pm = bell_expand(tensor(make_bell(B::kPsiPlus, q1, q2), make_bell(B::kPsiMinus, q3, q4)), {{{q1, q3}, {q2, q4}}});
    for (B x : kAllBellLabels)
        for (B y : kAllBellLabels) {
            o.require(std::abs(pp.at(x, y) - (x == y ? 0.5 : 0.0)) <= kExact, "psi+ psi+ line");
            double want = 0;
            if (x == B::kPsiPlus && y == B::kPsiMinus) want = 0.5;
            if (x == B::kPsiMinus && y == B::kPsiPlus) want = 0.5;
            if (x == B::kPhiPlus && y == B::kPhiMinus) want = -0.5;
            if (x == B::kPhiMinus && y == B::kPhiPlus) want = -0.5;
            o.require(std::abs(pm.at(x, y) - want) <= kExact, "psi+ psi- line");
        }
    o.note(std::to_string(products) + " products, tol 1e-12");
    return o;
}

// ---- 2 -------------------------------------------------------------------

Outcome table2_reproduction() {
    Outcome o;
    const auto want = expected_table2();
    const auto got = reproduce_table2();
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        bool ok = i < got.size() && got[i] == want[i];
        // Independent check of bmo2 with the dense oracle: qubits (0,1)=Alice, (2,3)=Bob.
        const auto v0 = oracle::kron(oracle::psi_plus(), bell(want[i].bob_init));
        auto v = oracle::apply(oracle::pair_projector(bell(want[i].bmo1), 1, 3, 4), v0);
        const oracle::Mat enc = [&] {
            switch (want[i].encoding) {
                case PauliLabel::kX: return oracle::pauli_x();
                case PauliLabel::kIY: return oracle::pauli_iy();
                case PauliLabel::kZ: return oracle::pauli_z();
                default: return oracle::identity(2);
            }
        }();
        v = oracle::apply(oracle::on_qubit(enc, 0, 4), v);
        ok = ok && std::abs(oracle::expectation(oracle::pair_projector(bell(want[i].bmo2), 0, 2, 4), v) - 0.25) <= kExact;
        mismatches += ok ? 0 : 1;
    }
    o.require(want.size() == 32 && got.size() == 32, "expected 32 rows");
    o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
    const std::string cmd = std::string("\"") + OSBMDI_CLI_PATH + "\" table2 > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    o.require(rc == 0, "table2 subcommand exit status " + std::to_string(rc));
    o.note("32 rows, " + std::to_string(mismatches) + " mismatches, CLI exit 0");
    return o;
}

// ---- 3 -------------------------------------------------------------------

Outcome honest_end_to_end() {
    Outcome o;
    std::size_t sent = 0, correct = 0;
    std::uint64_t failures = 0, checks = 0, aborts = 0;
    for (Mode m : {Mode::kQsdc, Mode::kQd}) {
        SessionConfig c;
        c.n_pairs = 16;
        c.mode = m;
        c.master_seed = 2026;
        const auto reports = run_batch(c, BatchOptions{kHonestSessions, 0, false});
        std::function<void(const SessionReport&)> add = [&](const SessionReport& r) {
            sent += r.symbols_sent;
            correct += r.symbols_correct;
            aborts += r.aborted ? 1 : 0;
            for (const auto& t : r.tallies) {
                checks += t.checks;
                failures += t.failures;
            }
            for (const auto& n : r.nested) add(n);
        };
        for (const auto& r : reports) add(r);
    }
    o.require(sent > 0 && sent == correct, "symbol accuracy below 100%");
    o.require(failures == 0, std::to_string(failures) + " check failures");
    o.require(aborts == 0, std::to_string(aborts) + " aborts");
    o.note("2x" + std::to_string(kHonestSessions) + " sessions, " + std::to_string(correct) + "/" + std::to_string(sent) +
           " symbols, " + std::to_string(failures) + "/" + std::to_string(checks) + " check failures");
    return o;
}

// ---- 4 -------------------------------------------------------------------

Outcome leakage_arithmetic() {
    Outcome o;
    using B = BellLabel;
    const std::vector<B> alice{B::kPsiPlus}, two{B::kPsiPlus, B::kPsiMinus};
    const std::vector<B> four(kAllBellLabels.begin(), kAllBellLabels.end());
    for (B b1 : kAllBellLabels)
        for (B b2 : kAllBellLabels) {
            const auto r2 = leakage_bits(alice, two, b1, b2);
            o.require(r2.consistent_count == 8 && std::abs(r2.h_apriori - 4.0) <= kExact &&
                          std::abs(r2.h_aposteriori - 3.0) <= kExact && std::abs(r2.leaked - 1.0) <= kExact,
                      "two-state set does not leak exactly 1 bit");
            const auto r4 = leakage_bits(alice, four, b1, b2);
            o.require(r4.consistent_count == 16 && std::abs(r4.leaked) <= kExact, "four-state set leaks");
        }
    o.note("leak 1 bit (4-3) for {psi+,psi-}, 0 for all four labels, every announcement pair");
    return o;
}

// ---- 5 -------------------------------------------------------------------

struct Measured {
    CheckTally tally;
    std::size_t sessions = 0;
};

Measured measure(SessionConfig cfg, const std::vector<CheckKind>& kinds) {
    Measured m;
    const std::size_t chunk = 100;
    std::uint64_t next = 0;
    while (m.tally.checks < kMinChecks) {
        for (std::size_t i = 0; i < chunk; ++i, ++next) {
            const auto r = simulate_session(cfg, next);
            for (CheckKind k : kinds) m.tally += r.tallies[static_cast<std::size_t>(k)];
        }
        m.sessions += chunk;
    }
    return m;
}

void expect_rate(Outcome& o, const std::string& name, const Measured& m, double p) {
    const double rate = m.tally.rate();
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(m.tally.checks));
    const bool ok = (p == 0.0 || p == 1.0) ? rate == p : std::abs(rate - p) <= kSigmas * se;
    o.require(m.tally.checks >= kMinChecks, name + " too few checks");
    o.require(ok, name + fmt(" rate %.5f vs %.5f", rate, p));
    o.note(name + fmt(" %.4f (oracle %.4f, n=%.0f)", rate, p, static_cast<double>(m.tally.checks)));
}

Outcome attack_detection() {
    Outcome o;
    using K = CheckKind;
    SessionConfig base;
    base.n_pairs = kAttackPairs;
    base.master_seed = 5;

    // Stage-1 tallies are complete before any abort decision, so the default
    // threshold only shortens the run.
    auto ir = base;
    ir.attack = parse_attack("intercept_resend:legs=stage1-bob");
    expect_rate(o, "intercept_resend/caseI", measure(ir, {K::kCaseI}), 0.5);

    auto fb = base;
    fb.attack = parse_attack("fake_bmo:stages=1");
    expect_rate(o, "fake_bmo/caseI", measure(fb, {K::kCaseI}), 0.5);

    for (double b2 : {0.1, 0.25, 0.5}) {
        auto em = base;
        em.attack = parse_attack("entangle_measure:legs=stage1-alice,beta2=" + fmt("%g", b2));
        expect_rate(o, "entangle_measure/beta2=" + fmt("%g", b2), measure(em, {K::kCaseI, K::kCaseIII}), b2);
    }

    auto fa = base;
    fa.error_threshold = 1.0;
    fa.attack = parse_attack("flip_all");
    expect_rate(o, "flip_all/whole", measure(fa, {K::kWholeDecoyAlice, K::kWholeDecoyBob}), 0.0);
    expect_rate(o, "flip_all/split", measure(fa, {K::kSplitDecoyAlice, K::kSplitDecoyBob}), 1.0);

    auto rp = base;
    rp.error_threshold = 1.0;
    rp.attack = parse_attack("disturb:mode=random_pauli,legs=stage2-alice+stage2-bob");
    expect_rate(o, "random_pauli/whole", measure(rp, {K::kWholeDecoyAlice, K::kWholeDecoyBob}), 2.0 / 3.0);
    expect_rate(o, "random_pauli/split", measure(rp, {K::kSplitDecoyAlice, K::kSplitDecoyBob}), 2.0 / 3.0);
    return o;
}

// ---- 6 -------------------------------------------------------------------

Outcome noise_properties() {
    Outcome o;
    std::vector<double> grid;
    for (int k = 0; k <= 16; ++k) grid.push_back(k * std::numbers::pi / 8);
    auto flat = [&](BellLabel l, NoiseChannel ch, const char* name) {
        for (const auto& pt : noise_fidelity(l, ch, grid))
            o.require(std::abs(pt.fidelity - 1.0) <= kFidelityTol, std::string(name) + fmt(" fidelity %.12f at %.4f", pt.fidelity, pt.parameter));
    };
    flat(BellLabel::kPhiPlus, NoiseChannel::kCollectiveDephasing, "phi+ dephasing");
    flat(BellLabel::kPhiMinus, NoiseChannel::kCollectiveDephasing, "phi- dephasing");
    flat(BellLabel::kPsiPlus, NoiseChannel::kCollectiveRotation, "psi+ rotation");
    flat(BellLabel::kPhiMinus, NoiseChannel::kCollectiveRotation, "phi- rotation");
    for (const auto& pt : noise_fidelity(BellLabel::kPsiPlus, NoiseChannel::kCollectiveDephasing, grid)) {
        const double c = std::cos(pt.parameter);
        o.require(std::abs(pt.fidelity - c * c) <= kFidelityTol, "psi+ dephasing differs from cos^2");
    }
    o.note(std::to_string(grid.size()) + " grid points on [0, 2pi], tol 1e-9");
    return o;
}

// ---- 7 -------------------------------------------------------------------

Outcome entangle_discrepancy() {
    Outcome o;
    const double h = 1.0 / std::sqrt(2.0);
    // Brute force: the post-CNOT state has a non-singular reduced density matrix
    // on the ancilla, so it is not a product.
    const auto v = oracle::apply(oracle::cnot(2, 1, 3), oracle::kron(oracle::psi_plus(), oracle::Vec{h, h}));
    const double det = oracle::single_qubit_cut_determinant(v, 2, 3);
    o.require(det > 1e-3, "oracle finds a product state");

    SessionConfig c;
    c.n_pairs = kAttackPairs;
    c.master_seed = 11;
    c.error_threshold = 1.0;
    c.attack = parse_attack("entangle_measure:legs=stage1-alice,alpha=" + fmt("%.17g", h) + ",beta=" + fmt("%.17g", h));
    std::size_t sessions = 0;
    std::vector<SessionReport> reports;
    std::uint64_t checks = 0;
    while (checks < kMinChecks) {
        auto r = simulate_session(c, sessions++);
        r.transcript.clear();
        checks += tally_for_stage(r.tallies, Stage::kSwap).checks;
        reports.push_back(std::move(r));
    }
    RunManifest m;
    m.config = c;
    m.sessions = sessions;
    m.seed = c.master_seed;
    const auto j = run_report(m, reports);
    const auto& atk = j.at("attack");
    o.require(atk.at("schmidt_rank") == 2, "report schmidt_rank is not 2");
    o.require(atk.at("product_state") == false, "report claims a product state");
    const auto& s1 = atk.at("measured_detection_per_check").at(0);
    const double rate = s1.at("rate").get<double>();
    const double n = s1.at("checks").get<double>();
    o.require(std::abs(rate - 0.5) <= kSigmas * std::sqrt(0.25 / n), fmt("measured %.5f", rate));
    o.note(fmt("Schmidt rank 2 (det %.3f), measured %.4f over %.0f checks, recorded in report", det, rate, n));
    return o;
}

// ---- 8 -------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    Outcome o;
    const auto dir = std::filesystem::temp_directory_path() / ("osbmdi_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::string cfg = std::string(OSBMDI_SOURCE_DIR) + "/configs/honest_qd.json";
    // One output path for both runs, since the manifest records it.
    const auto out = dir / "report.json";
    std::string dumps[2];
    for (int k = 0; k < 2; ++k) {
        const std::string cmd = std::string("\"") + OSBMDI_CLI_PATH + "\" run --config \"" + cfg +
                                "\" --sessions 300 --seed 99 --attack intercept_resend:fraction=0.25 --out \"" +
                                out.string() + "\" > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        o.require(rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) != 1, "run failed");
        dumps[k] = slurp(out);
    }
    o.require(!dumps[0].empty() && dumps[0] == dumps[1], "CLI reports differ");

    SessionConfig c;
    c.n_pairs = 16;
    c.mode = Mode::kQd;
    c.attack = parse_attack("disturb:mode=reorder,fraction=0.5");
    c.error_threshold = 1.0;
    RunManifest m;
    m.config = c;
    m.sessions = 200;
    const auto a = run_report(m, run_batch(c, BatchOptions{200, 1, false})).dump(2);
    const auto b = run_report(m, run_batch(c, BatchOptions{200, 4, false})).dump(2);
    o.require(a == b, "in-process reports differ across thread counts");
    std::filesystem::remove_all(dir);
    o.note("CLI report " + std::to_string(dumps[0].size()) + " bytes identical; in-process identical for 1 and 4 threads");
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"swap identities", swap_identities},
        {"table2 reproduction", table2_reproduction},
        {"honest end-to-end", honest_end_to_end},
        {"leakage arithmetic", leakage_arithmetic},
        {"attack detection", attack_detection},
        {"noise properties", noise_properties},
        {"entangle-measure state", entangle_discrepancy},
        {"determinism", determinism},
    };
    int failed = 0, k = 0;
    for (const auto& c : criteria) {
        ++k;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", k, c.name, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%d criteria passed\n", k - failed, k);
    return failed == 0 ? 0 : 1;
}
