// Copyright 2026 The ghzsim Authors
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

#include "ghzsim/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "ghzsim/errors.hpp"

namespace ghz {

namespace {

constexpr Complex kI{0, 1};

void check_qubit(int qubit) {
    if (qubit < 1 || qubit > 3) {
        throw ContractViolation("qubit index must be 1, 2 or 3, got " + std::to_string(qubit));
    }
}

double max_abs(const Eigen::MatrixXcd &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

char axis_name(Axis axis) {
    switch (axis) {
        case Axis::X:
            return 'x';
        case Axis::Y:
            return 'y';
        case Axis::Z:
            return 'z';
    }
    return '?';
}

int qubit_bit(int index, int qubit) {
    return (index >> (3 - qubit)) & 1;
}

std::string basis_label(int index) {
    std::string out;
    for (int q = 1; q <= 3; q++) {
        out.push_back(qubit_bit(index, q) ? '1' : '0');
    }
    return out;
}

StateVector::StateVector() : amplitudes_(Amplitudes::Zero()) {
    amplitudes_[0] = 1;
}

StateVector StateVector::from_amplitudes(const Amplitudes &amplitudes) {
    double n = amplitudes.norm();
    if (!(n > 0) || !std::isfinite(n)) {
        throw ContractViolation("state vector must have finite non-zero norm");
    }
    return StateVector(amplitudes / n);
}

StateVector StateVector::basis(int index) {
    if (index < 0 || index >= kDim) {
        throw ContractViolation("basis index out of range");
    }
    Amplitudes a = Amplitudes::Zero();
    a[index] = 1;
    return StateVector(a);
}

StateVector StateVector::ghz(int sign) {
    Amplitudes a = Amplitudes::Zero();
    a[0] = M_SQRT1_2;
    a[7] = (sign >= 0 ? kI : -kI) * M_SQRT1_2;
    return StateVector(a);
}

Operator::Operator(const Matrix8 &matrix) : matrix_(matrix) {
    hermitian_ = max_abs(matrix_ - matrix_.adjoint()) < kHermitianTolerance;
    unitary_ = max_abs(matrix_.adjoint() * matrix_ - Matrix8::Identity()) < kUnitaryTolerance;
}

StateVector Operator::apply(const StateVector &state) const {
    if (!unitary_) {
        throw ContractViolation("Operator::apply requires a unitary operator");
    }
    return StateVector::from_amplitudes(matrix_ * state.amplitudes());
}

Matrix2 pauli_matrix(Axis axis) {
    Matrix2 x;
    x << 0, 1, 1, 0;
    Matrix2 z;
    z << 1, 0, 0, -1;
    switch (axis) {
        case Axis::X:
            return x;
        case Axis::Z:
            return z;
        case Axis::Y:
            return kI * x * z;
    }
    return Matrix2::Identity();
}

Operator embed(const Matrix2 &single, int qubit) {
    check_qubit(qubit);
    Matrix8 m = Matrix8::Zero();
    const int shift = 3 - qubit;
    for (int row = 0; row < kDim; row++) {
        for (int col = 0; col < kDim; col++) {
            // Other qubits must match.
            if (((row ^ col) & ~(1 << shift)) != 0) {
                continue;
            }
            m(row, col) = single((row >> shift) & 1, (col >> shift) & 1);
        }
    }
    return Operator(m);
}

Operator pauli(Axis axis, int qubit) {
    return embed(pauli_matrix(axis), qubit);
}

Matrix2 basis_rotation(Axis axis) {
    switch (axis) {
        case Axis::X:
            return (pauli_matrix(Axis::Z) + pauli_matrix(Axis::X)) / std::sqrt(2.0);
        case Axis::Y: {
            Matrix2 sum = pauli_matrix(Axis::X) + pauli_matrix(Axis::Y) + pauli_matrix(Axis::Z);
            return ((1.0 + kI) * Matrix2::Identity() + (1.0 - kI) * sum) / (2 * std::sqrt(2.0));
        }
        case Axis::Z:
            break;
    }
    return Matrix2::Identity();
}

Operator build_hamiltonian(const std::array<double, 3> &e_c, const std::array<double, 3> &e_j, double k12, double k23,
                           double k13) {
    for (int j = 0; j < 3; j++) {
        if (!std::isfinite(e_c[j]) || !std::isfinite(e_j[j])) {
            throw ContractViolation("build_hamiltonian: energies must be finite");
        }
    }
    if (!std::isfinite(k12) || !std::isfinite(k23) || !std::isfinite(k13)) {
        throw ContractViolation("build_hamiltonian: couplings must be finite");
    }
    // Diagonal part straight from the z eigenvalues, sigma_x terms as off-diagonals.
    Matrix8 h = Matrix8::Zero();
    for (int i = 0; i < kDim; i++) {
        std::array<double, 3> z{};
        for (int q = 1; q <= 3; q++) {
            z[q - 1] = qubit_bit(i, q) ? -1.0 : 1.0;
        }
        h(i, i) = 0.5 * (e_c[0] * z[0] + e_c[1] * z[1] + e_c[2] * z[2]) + k12 * z[0] * z[1] + k23 * z[1] * z[2] +
                  k13 * z[0] * z[2];
        for (int q = 1; q <= 3; q++) {
            h(i, i ^ (1 << (3 - q))) += -0.5 * e_j[q - 1];
        }
    }
    return Operator(h);
}

Operator propagator(const Operator &hamiltonian, double t_ns) {
    if (!hamiltonian.is_hermitian()) {
        throw ContractViolation("evolve: Hamiltonian is not hermitian");
    }
    if (!std::isfinite(t_ns)) {
        throw ContractViolation("evolve: duration must be finite");
    }
    Eigen::SelfAdjointEigenSolver<Matrix8> eig(hamiltonian.matrix());
    Eigen::Matrix<Complex, 8, 1> phases;
    for (int k = 0; k < kDim; k++) {
        phases[k] = std::exp(-kI * (2 * M_PI * eig.eigenvalues()[k] * t_ns));
    }
    const Matrix8 &v = eig.eigenvectors();
    return Operator(v * phases.asDiagonal() * v.adjoint());
}

StateVector evolve(const Operator &hamiltonian, double t_ns, const StateVector &state) {
    if (t_ns == 0) {
        if (!hamiltonian.is_hermitian()) {
            throw ContractViolation("evolve: Hamiltonian is not hermitian");
        }
        return state;
    }
    return propagator(hamiltonian, t_ns).apply(state);
}

Projection project(const StateVector &state, int qubit, int outcome) {
    check_qubit(qubit);
    if (outcome != 0 && outcome != 1) {
        throw ContractViolation("projection outcome must be 0 or 1");
    }
    Amplitudes kept = Amplitudes::Zero();
    for (int i = 0; i < kDim; i++) {
        if (qubit_bit(i, qubit) == outcome) {
            kept[i] = state[i];
        }
    }
    double p = kept.squaredNorm();
    if (p < 1e-12) {
        throw ContractViolation("impossible outcome: qubit " + std::to_string(qubit) + " = " +
                                std::to_string(outcome) + " has probability " + std::to_string(p));
    }
    return {StateVector::from_amplitudes(kept), p};
}

StateVector reset_from_one(const StateVector &state, int qubit) {
    return pauli(Axis::X, qubit).apply(state);
}

std::array<double, 8> probabilities(const StateVector &state) {
    std::array<double, 8> p{};
    for (int i = 0; i < kDim; i++) {
        p[i] = std::norm(state[i]);
    }
    return p;
}

double fidelity(const StateVector &a, const StateVector &b) {
    return std::min(1.0, std::norm(a.amplitudes().dot(b.amplitudes())));
}

double expectation(const Operator &op, const StateVector &state) {
    if (!op.is_hermitian()) {
        throw ContractViolation("expectation requires a hermitian operator");
    }
    return state.amplitudes().dot(op.matrix() * state.amplitudes()).real();
}

double commutator_norm(const Operator &a, const Operator &b) {
    return max_abs(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

double phase_aligned_distance(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    auto distance_at = [&](double phi) { return max_abs(a - std::exp(kI * phi) * b); };
    // Frobenius-optimal phase as the starting point, then a golden-section polish of the
    // max-entry norm around it.
    Complex overlap = (b.adjoint() * a).trace();
    double center = std::abs(overlap) > 0 ? std::arg(overlap) : 0.0;
    double best = distance_at(center);
    double lo = center - 0.5;
    double hi = center + 0.5;
    const double ratio = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = distance_at(x1);
    double f2 = distance_at(x2);
    for (int iter = 0; iter < 80; iter++) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = distance_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = distance_at(x2);
        }
    }
    return std::min({best, f1, f2});
}

double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void MeasurementRecord::add(int outcome) {
    outcomes.push_back(static_cast<std::uint8_t>(outcome));
    counts[outcome]++;
}

int draw_outcome(const std::array<double, 8> &probs, std::mt19937_64 &rng) {
    double total = 0;
    for (double p : probs) {
        total += p;
    }
    double u = uniform01(rng) * total;
    double acc = 0;
    int last_nonzero = 0;
    for (int i = 0; i < kDim; i++) {
        if (probs[i] > 0) {
            last_nonzero = i;
        }
        acc += probs[i];
        if (u < acc && probs[i] > 0) {
            return i;
        }
    }
    return last_nonzero;
}

MeasurementRecord sample(const StateVector &state, std::size_t shots, std::uint64_t seed,
                         const std::array<Axis, 3> &basis) {
    if (shots < 1) {
        throw ContractViolation("sample: shots must be at least 1");
    }
    Matrix8 rotation = Matrix8::Identity();
    for (int q = 1; q <= 3; q++) {
        rotation = embed(basis_rotation(basis[q - 1]), q).matrix() * rotation;
    }
    auto rotated = StateVector::from_amplitudes(rotation * state.amplitudes());
    auto probs = probabilities(rotated);
    // Exact zeros stay exact: amplitudes cancelled to rounding are never drawn.
    for (double &p : probs) {
        if (p < 1e-24) {
            p = 0;
        }
    }

    MeasurementRecord record;
    record.seed = seed;
    record.outcomes.reserve(shots);
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < shots; s++) {
        record.add(draw_outcome(probs, rng));
    }
    return record;
}

}  // namespace ghz
