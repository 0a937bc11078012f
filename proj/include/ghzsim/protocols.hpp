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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghzsim/circuit.hpp"
#include "ghzsim/pulse.hpp"
#include "ghzsim/quantum.hpp"

namespace ghz {

/// How the verification rotations are realized.
///   Ideal:     exact exp(i pi/4 sigma_x) gates on an exact GHZ+ state.
///   Effective: propagators of the second-order effective Hamiltonians, GHZ+ from ghz_prepare.
///   Full:      propagators of the exact drive Hamiltonians for the same durations.
enum class ProtocolMode { Ideal, Effective, Full };

std::string mode_name(ProtocolMode mode);
ProtocolMode parse_mode(const std::string &name);

struct ProtocolOutcome {
    std::string protocol;
    ProtocolMode mode = ProtocolMode::Ideal;
    MeasurementRecord counts;
    std::size_t shots = 0;      // runs attempted
    std::size_t discarded = 0;  // runs rejected by post-selection
    std::map<std::string, double> probabilities;
    std::map<std::string, double> expectations;
    double postselect_probability = 1;
};

struct VerificationGates {
    Operator u2;   // rotation of qubit 2
    Operator u13;  // joint rotation of qubits 1 and 3
    double tau2_ns = 0;
    double tau13_ns = 0;
    double epsilon3 = 0;  // eps3 actually used (retuned for asymmetric devices)
};

VerificationGates verification_gates(const DerivedEnergies &energies, ProtocolMode mode, bool include_k13 = false);

/// Exact (noise-free) result of the verification sequence on one pure state.
struct VerificationBranch {
    double postselect_probability = 0;
    std::array<double, 4> p13{};  // P(q1 q3) for 00, 01, 10, 11 given qubit 2 read 1
    std::optional<StateVector> final_state;
};

VerificationBranch verification_branch(const StateVector &state, const VerificationGates &gates);

/// U2, projection of qubit 2 on |1> with reset to |0>, U1 x U3, then z readout of qubits 1
/// and 3. Shots that fail post-selection are counted in `discarded` only.
ProtocolOutcome verify_ghz(const DerivedEnergies &energies, ProtocolMode mode, std::size_t shots, std::uint64_t seed,
                           bool include_k13 = false);

/// Same sequence applied to a classical mixture of pure states (weights need not be
/// normalized). Probabilities are conditional on post-selection.
ProtocolOutcome verify_mixture(const std::vector<std::pair<double, StateVector>> &components,
                               const VerificationGates &gates, ProtocolMode mode, std::size_t shots,
                               std::uint64_t seed);

/// Product of sigma_{axes[j]}^(j+1).
Operator pauli_product(const std::array<Axis, 3> &axes);

struct MerminExpectations {
    double yxx = 0;
    double xyx = 0;
    double xxy = 0;
    double yyy = 0;

    /// <A_yxx> + <A_xyx> + <A_xxy> - <A_yyy>; at most 2 for product states, 4 for GHZ+.
    double mermin_sum() const { return yxx + xyx + xxy - yyy; }
};

MerminExpectations mermin_expectations(const StateVector &state);

/// Predetermined +-1 values for every sigma_alpha^(j). Index [j-1].
struct LhvAssignment {
    std::array<int, 3> mx{1, 1, 1};
    std::array<int, 3> my{1, 1, 1};
    std::array<int, 3> mz{1, 1, 1};
};

/// m_y^(1) m_y^(2) m_y^(3) of an assignment reproducing the three GHZ+ eigenvalues
/// (m_y m_x m_x = m_x m_y m_x = m_x m_x m_y = +1). Throws ContractViolation otherwise.
int lhv_prediction(const LhvAssignment &assignment);

bool lhv_consistent(const LhvAssignment &assignment);

struct LhvEnumeration {
    int total = 0;
    int consistent = 0;
    int exceptions = 0;  // consistent assignments whose y-product is not +1
};

/// All 2^9 assignments.
LhvEnumeration lhv_enumerate();

/// Every qubit read in the sigma_y basis via S_y. Outcome labels use '+'/'-' for the y
/// eigenvalue of qubits 1..3, e.g. "+-+". Reports the fraction of outcomes with an even number
/// of '-' results and the exact <A_yyy>.
ProtocolOutcome yyy_experiment(const StateVector &state, std::size_t shots, std::uint64_t seed);

int minus_count(int outcome);

/// S_a on `qubit`.
Operator basis_rotation_operator(Axis axis, int qubit);

struct DephasingReport {
    std::array<double, 3> commutator_norms{};  // [sigma_z^(j), H0]
    double max_population_drift = 0;
    double min_fidelity = 1;
    std::vector<double> times_ns;
};

/// Coupling-only Hamiltonian of the idle circuit, K12 z1 z2 + K23 z2 z3 (+ K13 z1 z3).
Operator idle_hamiltonian(const DerivedEnergies &energies, bool include_k13 = false);

/// Checks that the charge-noise coupling operators sigma_z^(j) commute with the idle
/// Hamiltonian, and that GHZ+ z populations stay fixed under idle evolution for `times_ns`.
DephasingReport dephasing_commutation_check(const DerivedEnergies &energies, std::span<const double> times_ns,
                                            bool include_k13 = false);

}  // namespace ghz
