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

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ghz {

// Three-qubit register. Basis index = 4*q1 + 2*q2 + q3, so qubit 1 is the most significant
// bit. |0> is the +1 eigenstate of sigma_z.

using Complex = std::complex<double>;
using Amplitudes = Eigen::Matrix<Complex, 8, 1>;
using Matrix8 = Eigen::Matrix<Complex, 8, 8>;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr int kDim = 8;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;

enum class Axis { X, Y, Z };

char axis_name(Axis axis);

/// Bit of qubit `qubit` (1..3) in basis index `index`.
int qubit_bit(int index, int qubit);

/// "q1q2q3" label of a basis index, e.g. 5 -> "101".
std::string basis_label(int index);

class StateVector {
   public:
    /// |000>.
    StateVector();

    /// Normalizes `amplitudes`; throws ContractViolation on a zero vector.
    static StateVector from_amplitudes(const Amplitudes &amplitudes);
    static StateVector basis(int index);
    /// (|000> + sign*i|111>)/sqrt2 with sign = +1 or -1.
    static StateVector ghz(int sign);

    const Amplitudes &amplitudes() const { return amplitudes_; }
    Complex operator[](int index) const { return amplitudes_[index]; }
    double norm() const { return amplitudes_.norm(); }

   private:
    explicit StateVector(const Amplitudes &amplitudes) : amplitudes_(amplitudes) {}
    Amplitudes amplitudes_;
};

class Operator {
   public:
    Operator() : Operator(Matrix8::Zero()) {}
    explicit Operator(const Matrix8 &matrix);

    static Operator identity() { return Operator(Matrix8::Identity()); }

    const Matrix8 &matrix() const { return matrix_; }
    bool is_hermitian() const { return hermitian_; }
    bool is_unitary() const { return unitary_; }

    Operator adjoint() const { return Operator(matrix_.adjoint()); }
    Operator operator*(const Operator &other) const { return Operator(matrix_ * other.matrix_); }
    Operator operator+(const Operator &other) const { return Operator(matrix_ + other.matrix_); }
    Operator operator-(const Operator &other) const { return Operator(matrix_ - other.matrix_); }
    Operator operator*(Complex scale) const { return Operator(scale * matrix_); }
    friend Operator operator*(Complex scale, const Operator &op) { return op * scale; }

    /// Applies a unitary. Throws ContractViolation for non-unitary operators.
    StateVector apply(const StateVector &state) const;

   private:
    Matrix8 matrix_;
    bool hermitian_ = false;
    bool unitary_ = false;
};

Matrix2 pauli_matrix(Axis axis);

/// Single-qubit operator on qubit 1..3, identity elsewhere.
Operator embed(const Matrix2 &single, int qubit);

/// sigma_axis^(qubit). sigma_y = i sigma_x sigma_z.
Operator pauli(Axis axis, int qubit);

/// S_x = (sigma_z + sigma_x)/sqrt2 and S_y = [(1+i)I + (1-i)(sigma_x + sigma_y + sigma_z)]/(2 sqrt2).
///
/// Both send the +1 eigenstate of their axis to |0> and the -1 eigenstate to |1>, so a z
/// readout of 0 after S_a means m_a = +1. For Z the identity is returned.
Matrix2 basis_rotation(Axis axis);

/// 1/2 sum_j [E_C^(j) sigma_z^(j) - E_J^(j) sigma_x^(j)] + K12 z1 z2 + K23 z2 z3 + K13 z1 z3, GHz.
Operator build_hamiltonian(const std::array<double, 3> &e_c, const std::array<double, 3> &e_j, double k12, double k23,
                           double k13 = 0);

/// exp(-i 2 pi H t), H in GHz and t in ns. Throws ContractViolation for non-hermitian H.
Operator propagator(const Operator &hamiltonian, double t_ns);

StateVector evolve(const Operator &hamiltonian, double t_ns, const StateVector &state);

struct Projection {
    StateVector state;
    double probability = 0;
};

/// Projects `qubit` onto `outcome` and renormalizes. Throws ContractViolation ("impossible
/// outcome") when the Born probability is below 1e-12.
Projection project(const StateVector &state, int qubit, int outcome);

/// Flips `qubit` back to |0> when it is known to be |1>, i.e. applies sigma_x on that qubit.
StateVector reset_from_one(const StateVector &state, int qubit);

std::array<double, 8> probabilities(const StateVector &state);

double fidelity(const StateVector &a, const StateVector &b);

/// <state|op|state> for hermitian op. Throws ContractViolation otherwise.
double expectation(const Operator &op, const StateVector &state);

/// Largest entry magnitude of AB - BA.
double commutator_norm(const Operator &a, const Operator &b);

/// min over phi of max_ij |A_ij - e^{i phi} B_ij|. Works for any square size.
double phase_aligned_distance(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);

// Random streams.
//
// Every sampler owns a std::mt19937_64 seeded with the caller's seed. Uniform deviates take the
// top 53 bits of each 64-bit draw, u = (x >> 11) * 2^-53, so the sequence depends only on the
// standard engine definition and not on the library's distribution classes.

double uniform01(std::mt19937_64 &rng);

/// splitmix64 of (seed + (index+1) * golden gamma). Used to give every scan point and
/// protocol sub-run its own stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct MeasurementRecord {
    std::vector<std::uint8_t> outcomes;  // basis indices, one per shot
    std::array<std::size_t, 8> counts{};
    std::uint64_t seed = 0;

    std::size_t shots() const { return outcomes.size(); }
    void add(int outcome);
};

/// Draws `shots` single-shot readouts after rotating qubit j into basis[j-1]. Outcome bit 0 on
/// qubit j means the +1 eigenvalue of that axis.
MeasurementRecord sample(const StateVector &state, std::size_t shots, std::uint64_t seed,
                         const std::array<Axis, 3> &basis = {Axis::Z, Axis::Z, Axis::Z});

/// Inverse-CDF draw of one basis index from `probs` using one deviate of `rng`.
int draw_outcome(const std::array<double, 8> &probs, std::mt19937_64 &rng);

}  // namespace ghz
