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

#include <Eigen/Dense>

namespace ghz {

/// Raw device geometry of the three-box chain 1 - 2 - 3. All values in attofarads.
struct CapacitanceNetwork {
    std::array<double, 3> c_junction{};
    std::array<double, 3> c_gate{};
    std::array<double, 2> c_coupler{};  // C12, C23

    /// Throws UnphysicalNetworkError on non-positive junction/gate values, negative couplers,
    /// or a non-positive determinant of the Maxwell capacitance matrix.
    void validate() const;
};

/// The effective capacitances entering the three-box Hamiltonian.
///
/// `inverse` is the inverse Maxwell capacitance matrix in 1/aF; its diagonal holds
/// 1/C~_Sigma_j and its off-diagonals 1/C~_jk. Pair capacitances of uncoupled boxes are
/// reported as +infinity.
struct EffectiveCapacitances {
    std::array<double, 3> c_sigma{};
    double c_tilde = 0;  // aF^3
    std::array<double, 3> c_tilde_sigma{};
    double c_tilde12 = 0;
    double c_tilde23 = 0;
    double c_tilde13 = 0;
    Eigen::Matrix3d inverse = Eigen::Matrix3d::Zero();
};

/// Knobs the experimenter turns: gate charges n_gj, fluxes in units of the flux quantum, and
/// single-junction Josephson energies in GHz.
struct ControlSettings {
    std::array<double, 3> gate_charge{0.5, 0.5, 0.5};
    std::array<double, 3> flux{0.5, 0.5, 0.5};
    std::array<double, 3> epsilon_j{};

    /// Degeneracy point with all Josephson energies off.
    static ControlSettings idle(const std::array<double, 3> &epsilon_j);
};

/// Energies of the pseudospin Hamiltonian, all as ordinary frequencies in GHz.
struct DerivedEnergies {
    std::array<double, 3> e_c{};
    std::array<double, 3> e_j{};
    std::array<double, 3> ej_max{};     // 2 eps_J, reached at zero flux
    std::array<double, 3> epsilon_j{};
    double k12 = 0;
    double k23 = 0;
    double k13 = 0;
    double zeta12 = 0;  // K12 / (2 eps_J^(2))
    double zeta23 = 0;  // K23 / (2 eps_J^(2))
};

struct CrosstalkRatios {
    double k13_over_k12 = 0;
    double k13_over_k23 = 0;
    bool uncoupled = false;
    bool neglect_justified = false;  // both ratios below 0.05
};

struct GateChargeSolution {
    std::array<double, 3> gate_charge{};
    bool in_range = true;  // false: some n_gj outside [0, 1]; raw solution still returned
};

struct ReadoutTiming {
    double t_c_ns = 0;
    double margin = 0;  // t_measure / t_c
    bool acceptable = false;
};

inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kCrosstalkThreshold = 0.05;

EffectiveCapacitances effective_capacitances(const CapacitanceNetwork &network);

DerivedEnergies derive_energies(const CapacitanceNetwork &network, const ControlSettings &settings);

CrosstalkRatios crosstalk_ratio(const DerivedEnergies &energies);

/// Gate charges that put the charging energies at `target_e_c` (GHz). Throws ContractViolation
/// ("degenerate control") when the charge-to-energy map is singular.
GateChargeSolution solve_gate_charges(const CapacitanceNetwork &network, const std::array<double, 3> &target_e_c);

/// Characteristic crosstalk time 1/(2 pi K) against a readout duration.
ReadoutTiming readout_timing_margin(double k_coupling_ghz, double t_measure_ns);

/// E_J = 2 eps cos(pi Phi) with Phi wrapped into [-1/2, 1/2).
double josephson_energy(double epsilon_j, double flux);

/// Flux in [0, 1/2] giving Josephson energy `e_j` out of a maximum `ej_max`.
double flux_for_josephson(double e_j, double ej_max);

}  // namespace ghz
