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
#include <optional>
#include <vector>

#include "ghzsim/circuit.hpp"
#include "ghzsim/quantum.hpp"

namespace ghz {

/// Small parameters of the second-order effective Hamiltonians.
///
/// Driving qubit 2 uses zeta12 = K12/(2 eps2) and zeta23 = K23/(2 eps2). Driving qubits 1 and 3
/// together uses zeta_outer = {K12/(2 eps1), K23/(2 eps3)}. All must be below 1.
struct PerturbationParams {
    double zeta12 = 0;
    double zeta23 = 0;
    std::array<double, 2> zeta_outer{};
    std::array<double, 3> epsilon{};  // single-junction Josephson energies, GHz

    void validate() const;
    static PerturbationParams from_energies(const DerivedEnergies &energies);
};

/// -eps2 [1 + 2 zeta12^2 + 2 zeta23^2 + 4 zeta12 zeta23 z1 z3] sigma_x^(2).
Operator h_eff_qubit2(const PerturbationParams &p);

/// Duration with exp(-i 2 pi H_eff tau) = exp(i pi/4 sigma_x^(2)) where z1 z3 = +1.
double tau2(const PerturbationParams &p);

/// -sum_{j=1,3} eps_j [1 + 2 zeta_j^2 z2] sigma_x^(j), with z2 = +-1 the qubit-2 eigenvalue.
Operator h_eff_qubits13(const PerturbationParams &p, int qubit2_z);

struct Tau13 {
    double tau_ns = 0;
    double epsilon3 = 0;  // possibly retuned
    bool adjusted = false;
};

/// Joint duration for exp(i pi/4 sigma_x) on qubits 1 and 3. If eps1(1+2zeta1^2) and
/// eps3(1+2zeta3^2) differ by more than 1e-9 relative, eps3 is retuned (zeta3 held fixed) to
/// match; InfeasibleError if that exceeds `epsilon3_max`.
Tau13 tau13(const PerturbationParams &p, std::optional<double> epsilon3_max = std::nullopt);

/// eps3 with eps3 + K^2/(2 eps3) = target at fixed coupling K (larger root). Used when retuning a
/// real device, where zeta3 moves with eps3.
double match_outer_epsilon(double k32, double target);

/// Exact drive Hamiltonians from the circuit model with charging energies at zero:
/// -eps2 sigma_x^(2) + K12 z1 z2 + K23 z2 z3 (+ K13 z1 z3), and
/// -eps1 sigma_x^(1) - eps3 sigma_x^(3) + K12 z1 z2 + K23 z2 z3 (+ K13 z1 z3).
Operator h_full_qubit2(double epsilon2, double k12, double k23, double k13 = 0);
Operator h_full_qubits13(double epsilon1, double epsilon3, double k12, double k23, double k13 = 0);

/// Unitary W closest to identity with W P_k W^dag = P0_k, where P0_k / P_k are the spectral
/// projectors of `unperturbed` and the matching eigenvalue-ordered groups of `perturbed`.
/// W H W^dag is block diagonal in the unperturbed eigenspaces.
Eigen::MatrixXcd direct_rotation(const Eigen::MatrixXcd &unperturbed, const Eigen::MatrixXcd &perturbed);

enum class EffectiveModel { Qubit2, Qubits13 };

struct ErrorScanRow {
    double zeta = 0;
    double tau_ns = 0;
    double lab_error = 0;      // exact vs effective propagator in the lab frame
    double dressed_error = 0;  // same, after the direct rotation to the dressed frame
};

struct ErrorScan {
    EffectiveModel model = EffectiveModel::Qubit2;
    std::vector<ErrorScanRow> rows;
    double lab_slope = 0;  // least-squares d log(error) / d log(zeta) over zeta > 0
    double dressed_slope = 0;
};

/// Compares exact and effective propagators at the effective gate time for each zeta, on a
/// device with eps = 1 GHz on every qubit and K = 2 zeta eps on both bonds. Distances are
/// max-entry norms minimized over a global phase. The two-outer-qubit model is compared on the
/// qubit-2 = |0> subspace it is written for. Requires 0 <= zeta < 0.5.
ErrorScan effective_error_scan(const std::vector<double> &zetas, EffectiveModel model);

/// Least-squares slope of log(y) against log(x), skipping non-positive entries.
double log_log_slope(const std::vector<double> &x, const std::vector<double> &y);

}  // namespace ghz
