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

#include "ghzsim/circuit.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ghzsim/errors.hpp"

namespace ghz {

namespace {

constexpr double kAttofarad = 1e-18;

// e^2 / C for C given in aF, as a frequency in GHz.
constexpr double kChargingScaleGhz = kElementaryCharge * kElementaryCharge / kAttofarad / kPlanck / 1e9;

double reciprocal_or_inf(double x) {
    return x == 0 ? std::numeric_limits<double>::infinity() : 1.0 / x;
}

// GHz of E_C^(j) per unit of (2 n_gk - 1).
Eigen::Matrix3d charging_map(const CapacitanceNetwork &network) {
    return 2.0 * kChargingScaleGhz * effective_capacitances(network).inverse;
}

}  // namespace

void CapacitanceNetwork::validate() const {
    for (int j = 0; j < 3; j++) {
        if (!(c_junction[j] > 0) || !std::isfinite(c_junction[j])) {
            throw UnphysicalNetworkError("c_junction[" + std::to_string(j) + "] must be positive");
        }
        if (!(c_gate[j] > 0) || !std::isfinite(c_gate[j])) {
            throw UnphysicalNetworkError("c_gate[" + std::to_string(j) + "] must be positive");
        }
    }
    for (int j = 0; j < 2; j++) {
        if (!(c_coupler[j] >= 0) || !std::isfinite(c_coupler[j])) {
            throw UnphysicalNetworkError("c_coupler[" + std::to_string(j) + "] must be non-negative");
        }
    }
}

ControlSettings ControlSettings::idle(const std::array<double, 3> &epsilon_j) {
    ControlSettings s;
    s.epsilon_j = epsilon_j;
    return s;
}

EffectiveCapacitances effective_capacitances(const CapacitanceNetwork &network) {
    network.validate();
    const double c12 = network.c_coupler[0];
    const double c23 = network.c_coupler[1];

    EffectiveCapacitances out;
    out.c_sigma[0] = network.c_junction[0] + network.c_gate[0] + c12;
    out.c_sigma[1] = network.c_junction[1] + network.c_gate[1] + c12 + c23;
    out.c_sigma[2] = network.c_junction[2] + network.c_gate[2] + c23;
    const auto &[s1, s2, s3] = out.c_sigma;

    out.c_tilde = s1 * s2 * s3 - c12 * c12 * s3 - c23 * c23 * s1;
    if (!(out.c_tilde > 0)) {
        throw UnphysicalNetworkError("C~ = prod(C_Sigma) - C12^2 C_Sigma3 - C23^2 C_Sigma1 is not positive");
    }
    const double ct = out.c_tilde;

    out.c_tilde_sigma[0] = s1 / (1 + c12 * c12 * s3 / ct);
    out.c_tilde_sigma[1] = ct / (s1 * s3);
    out.c_tilde_sigma[2] = s3 / (1 + c23 * c23 * s1 / ct);

    const double inv12 = s3 * c12 / ct;
    const double inv23 = s1 * c23 / ct;
    const double inv13 = c12 * c23 / ct;
    out.c_tilde12 = reciprocal_or_inf(inv12);
    out.c_tilde23 = reciprocal_or_inf(inv23);
    out.c_tilde13 = reciprocal_or_inf(inv13);

    out.inverse << 1 / out.c_tilde_sigma[0], inv12, inv13,
                   inv12, 1 / out.c_tilde_sigma[1], inv23,
                   inv13, inv23, 1 / out.c_tilde_sigma[2];
    return out;
}

double josephson_energy(double epsilon_j, double flux) {
    double wrapped = flux - std::floor(flux + 0.5);  // [-1/2, 1/2)
    double c = std::cos(M_PI * wrapped);
    // cos(+-pi/2) is ~6e-17, pin the sweet spot to an exact zero.
    if (std::abs(wrapped) == 0.5) {
        c = 0;
    }
    return 2 * epsilon_j * c;
}

double flux_for_josephson(double e_j, double ej_max) {
    if (!(ej_max > 0) || e_j < 0 || e_j > ej_max * (1 + 1e-12)) {
        throw ContractViolation("flux_for_josephson: need 0 <= e_j <= ej_max with ej_max > 0");
    }
    return std::acos(std::min(1.0, e_j / ej_max)) / M_PI;
}

DerivedEnergies derive_energies(const CapacitanceNetwork &network, const ControlSettings &settings) {
    auto caps = effective_capacitances(network);
    Eigen::Vector3d offsets;
    for (int j = 0; j < 3; j++) {
        offsets[j] = 2 * settings.gate_charge[j] - 1;
    }
    Eigen::Vector3d e_c = 2.0 * kChargingScaleGhz * caps.inverse * offsets;

    DerivedEnergies out;
    for (int j = 0; j < 3; j++) {
        out.e_c[j] = e_c[j];
        out.epsilon_j[j] = settings.epsilon_j[j];
        out.ej_max[j] = 2 * settings.epsilon_j[j];
        out.e_j[j] = josephson_energy(settings.epsilon_j[j], settings.flux[j]);
    }
    out.k12 = kChargingScaleGhz * caps.inverse(0, 1);
    out.k23 = kChargingScaleGhz * caps.inverse(1, 2);
    out.k13 = kChargingScaleGhz * caps.inverse(0, 2);
    if (settings.epsilon_j[1] > 0) {
        out.zeta12 = out.k12 / (2 * settings.epsilon_j[1]);
        out.zeta23 = out.k23 / (2 * settings.epsilon_j[1]);
    } else {
        out.zeta12 = out.zeta23 = std::numeric_limits<double>::infinity();
    }
    return out;
}

CrosstalkRatios crosstalk_ratio(const DerivedEnergies &energies) {
    CrosstalkRatios out;
    if (energies.k12 <= 0 || energies.k23 <= 0) {
        out.uncoupled = true;
        out.neglect_justified = true;
        return out;
    }
    out.k13_over_k12 = energies.k13 / energies.k12;
    out.k13_over_k23 = energies.k13 / energies.k23;
    out.neglect_justified = out.k13_over_k12 < kCrosstalkThreshold && out.k13_over_k23 < kCrosstalkThreshold;
    return out;
}

GateChargeSolution solve_gate_charges(const CapacitanceNetwork &network, const std::array<double, 3> &target_e_c) {
    Eigen::Matrix3d map = charging_map(network);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(map);
    if (!lu.isInvertible()) {
        throw ContractViolation("degenerate control: charging-energy map is singular");
    }
    Eigen::Vector3d target(target_e_c[0], target_e_c[1], target_e_c[2]);
    Eigen::Vector3d offsets = lu.solve(target);

    GateChargeSolution out;
    for (int j = 0; j < 3; j++) {
        out.gate_charge[j] = 0.5 * (offsets[j] + 1);
        if (out.gate_charge[j] < 0 || out.gate_charge[j] > 1) {
            out.in_range = false;
        }
    }
    return out;
}

ReadoutTiming readout_timing_margin(double k_coupling_ghz, double t_measure_ns) {
    if (!(k_coupling_ghz > 0)) {
        throw ContractViolation("readout_timing_margin: coupling must be positive");
    }
    ReadoutTiming out;
    out.t_c_ns = 1.0 / (2 * M_PI * k_coupling_ghz);
    out.margin = t_measure_ns / out.t_c_ns;
    out.acceptable = out.margin < 1;
    return out;
}

}  // namespace ghz
