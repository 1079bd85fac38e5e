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
 * @file state_vector.hpp
 * @brief Exact pure-state simulation of small named qubit registers.
 *
 * A StateVector carries an ordered list of qubit ids and 2^k amplitudes.
 * Basis ordering is lexicographic in register order: the first qubit is the
 * most significant bit of the basis index, and bit value 0 is |0>.
 *
 * Every operation returns a new state. Measurements remove the measured
 * qubits from the register.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "osbmdi/errors.hpp"
#include "osbmdi/rng.hpp"

namespace osbmdi {

enum class QubitId : std::uint32_t {};

constexpr QubitId qubit_id(std::uint32_t v) { return static_cast<QubitId>(v); }
constexpr std::uint32_t to_index(QubitId q) { return static_cast<std::uint32_t>(q); }

using Amplitude = std::complex<double>;

/// Row-major 2x2 matrix: {m00, m01, m10, m11}.
using Matrix2 = std::array<Amplitude, 4>;

inline constexpr double kAmplitudeTolerance = 1e-9;

inline bool is_unitary(const Matrix2& u, double tol = kAmplitudeTolerance) {
    // U^dagger U == I
    const Amplitude a = std::conj(u[0]) * u[0] + std::conj(u[2]) * u[2];
    const Amplitude b = std::conj(u[0]) * u[1] + std::conj(u[2]) * u[3];
    const Amplitude d = std::conj(u[1]) * u[1] + std::conj(u[3]) * u[3];
    return std::abs(a - 1.0) <= tol && std::abs(b) <= tol && std::abs(d - 1.0) <= tol;
}

class StateVector {
public:
    StateVector(std::vector<QubitId> qubits, std::vector<Amplitude> amplitudes)
        : qubits_(std::move(qubits)), amps_(std::move(amplitudes)) {
        if (qubits_.size() > 24) throw InvalidRegister("register too large");
        if (amps_.size() != (std::size_t{1} << qubits_.size()))
            throw InvalidRegister("amplitude vector length must be 2^k");
        for (std::size_t i = 0; i < qubits_.size(); ++i)
            for (std::size_t j = i + 1; j < qubits_.size(); ++j)
                if (qubits_[i] == qubits_[j]) throw InvalidRegister("duplicate qubit id");
        if (std::abs(norm_squared() - 1.0) > kAmplitudeTolerance)
            throw InvalidRegister("state is not normalized");
    }

    /// Zero-qubit state (the scalar 1).
    StateVector() : amps_{Amplitude{1.0}} {}

    static StateVector basis(QubitId q, int bit) {
        return StateVector({q}, bit ? std::vector<Amplitude>{0.0, 1.0} : std::vector<Amplitude>{1.0, 0.0});
    }

    static StateVector single(QubitId q, Amplitude zero, Amplitude one) {
        return StateVector({q}, {zero, one});
    }

    const std::vector<QubitId>& qubits() const { return qubits_; }
    std::span<const Amplitude> amplitudes() const { return amps_; }
    Amplitude amplitude(std::size_t basis_index) const { return amps_.at(basis_index); }
    std::size_t qubit_count() const { return qubits_.size(); }
    std::size_t dimension() const { return amps_.size(); }

    bool contains(QubitId q) const {
        return std::find(qubits_.begin(), qubits_.end(), q) != qubits_.end();
    }

    std::size_t position(QubitId q) const {
        const auto it = std::find(qubits_.begin(), qubits_.end(), q);
        if (it == qubits_.end())
            throw InvalidRegister("unknown qubit id " + std::to_string(to_index(q)));
        return static_cast<std::size_t>(it - qubits_.begin());
    }

    /// Bit mask selecting qubit `q` inside a basis index.
    std::size_t mask_of(QubitId q) const {
        return std::size_t{1} << (qubits_.size() - 1 - position(q));
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

private:
    std::vector<QubitId> qubits_;
    std::vector<Amplitude> amps_;
};

/// Kronecker product; the register of `b` follows that of `a`.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
    for (QubitId q : b.qubits())
        if (a.contains(q)) throw InvalidRegister("tensor of overlapping registers");
    std::vector<QubitId> ids = a.qubits();
    ids.insert(ids.end(), b.qubits().begin(), b.qubits().end());
    std::vector<Amplitude> amps;
    amps.reserve(a.dimension() * b.dimension());
    for (const auto& x : a.amplitudes())
        for (const auto& y : b.amplitudes()) amps.push_back(x * y);
    return StateVector(std::move(ids), std::move(amps));
}

/// Same state, register reordered to `order` (a permutation of the current ids).
inline StateVector permute(const StateVector& s, std::span<const QubitId> order) {
    const std::size_t k = s.qubit_count();
    if (order.size() != k) throw InvalidRegister("permutation size mismatch");
    std::vector<std::size_t> src_bit(k);
    for (std::size_t i = 0; i < k; ++i) src_bit[i] = s.mask_of(order[i]);
    std::vector<QubitId> ids(order.begin(), order.end());
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (ids[i] == ids[j]) throw InvalidRegister("duplicate qubit id in permutation");
    std::vector<Amplitude> amps(s.dimension());
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        std::size_t src = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (idx & (std::size_t{1} << (k - 1 - i))) src |= src_bit[i];
        amps[idx] = s.amplitude(src);
    }
    return StateVector(std::move(ids), std::move(amps));
}

/// Moves `front` to the start of the register, keeping the rest in order.
inline StateVector bring_to_front(const StateVector& s, std::span<const QubitId> front) {
    std::vector<QubitId> order(front.begin(), front.end());
    for (QubitId q : s.qubits())
        if (std::find(front.begin(), front.end(), q) == front.end()) order.push_back(q);
    return permute(s, order);
}

inline StateVector apply_unitary1q(const StateVector& s, QubitId q, const Matrix2& u) {
    if (!is_unitary(u)) throw InvalidOperator("single-qubit operator is not unitary");
    const std::size_t m = s.mask_of(q);
    std::vector<Amplitude> amps(s.amplitudes().begin(), s.amplitudes().end());
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & m) continue;
        const Amplitude a0 = amps[i];
        const Amplitude a1 = amps[i | m];
        amps[i] = u[0] * a0 + u[1] * a1;
        amps[i | m] = u[2] * a0 + u[3] * a1;
    }
    return StateVector(s.qubits(), std::move(amps));
}

inline StateVector apply_cnot(const StateVector& s, QubitId control, QubitId target) {
    if (control == target) throw InvalidRegister("CNOT control equals target");
    const std::size_t c = s.mask_of(control);
    const std::size_t t = s.mask_of(target);
    std::vector<Amplitude> amps(s.amplitudes().begin(), s.amplitudes().end());
    for (std::size_t i = 0; i < amps.size(); ++i)
        if ((i & c) && !(i & t)) std::swap(amps[i], amps[i | t]);
    return StateVector(s.qubits(), std::move(amps));
}

/// Result of projecting part of a register onto one outcome.
struct Projection {
    double probability = 0.0;
    std::vector<QubitId> residual_qubits;
    std::vector<Amplitude> residual;  // unnormalized

    StateVector normalized() const {
        const double n = std::sqrt(probability);
        std::vector<Amplitude> amps = residual;
        for (auto& a : amps) a /= n;
        return StateVector(residual_qubits, std::move(amps));
    }
};

/// Projects qubit `q` onto |bit>, removing it from the register.
inline Projection project_qubit(const StateVector& s, QubitId q, int bit) {
    const StateVector f = bring_to_front(s, std::span<const QubitId>(&q, 1));
    const std::size_t half = f.dimension() / 2;
    Projection p;
    p.residual_qubits.assign(f.qubits().begin() + 1, f.qubits().end());
    p.residual.resize(half);
    const std::size_t offset = bit ? half : 0;
    for (std::size_t r = 0; r < half; ++r) {
        p.residual[r] = f.amplitude(offset + r);
        p.probability += std::norm(p.residual[r]);
    }
    return p;
}

/// Samples one index from a discrete distribution given by `weights`.
inline std::size_t sample_index(std::span<const double> weights, Rng& rng) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = rng.uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        last_positive = i;
        acc += weights[i];
        if (u < acc) return i;
    }
    return last_positive;
}

/// Computational-basis measurement of `q`; the qubit is consumed.
inline std::pair<int, StateVector> comp_measure(const StateVector& s, QubitId q, Rng& rng) {
    Projection p0 = project_qubit(s, q, 0);
    Projection p1 = project_qubit(s, q, 1);
    const std::array<double, 2> w{p0.probability, p1.probability};
    const int bit = static_cast<int>(sample_index(w, rng));
    return {bit, bit ? p1.normalized() : p0.normalized()};
}

/// |<target|s>|^2. Both states must span the same qubit set; order may differ.
inline double fidelity(const StateVector& s, const StateVector& target) {
    if (s.qubit_count() != target.qubit_count())
        throw InvalidRegister("fidelity: register mismatch");
    for (QubitId q : s.qubits())
        if (!target.contains(q)) throw InvalidRegister("fidelity: register mismatch");
    const StateVector aligned = permute(s, target.qubits());
    Amplitude overlap{0.0};
    for (std::size_t i = 0; i < aligned.dimension(); ++i)
        overlap += std::conj(target.amplitude(i)) * aligned.amplitude(i);
    return std::clamp(std::norm(overlap), 0.0, 1.0);
}

/// True when the two states agree up to a global phase.
inline bool same_up_to_phase(const StateVector& a, const StateVector& b) {
    return fidelity(a, b) > 1.0 - kAmplitudeTolerance;
}

/// Schmidt rank of `s` across the cut (`part`, rest), by Gaussian elimination
/// of the reshaped coefficient matrix with pivot tolerance `tol`.
inline std::size_t schmidt_rank(const StateVector& s, std::span<const QubitId> part,
                                double tol = 1e-9) {
    const StateVector f = bring_to_front(s, part);
    const std::size_t rows = std::size_t{1} << part.size();
    const std::size_t cols = f.dimension() / rows;
    std::vector<std::vector<Amplitude>> m(rows, std::vector<Amplitude>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m[r][c] = f.amplitude(r * cols + c);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        for (std::size_t r = rank + 1; r < rows; ++r)
            if (std::abs(m[r][c]) > std::abs(m[pivot][c])) pivot = r;
        if (std::abs(m[pivot][c]) <= tol) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            const Amplitude factor = m[r][c] / m[rank][c];
            for (std::size_t cc = c; cc < cols; ++cc) m[r][cc] -= factor * m[rank][cc];
        }
        ++rank;
    }
    return rank;
}

}  // namespace osbmdi
