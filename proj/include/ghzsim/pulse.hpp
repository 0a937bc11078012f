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
#include <string>
#include <variant>
#include <vector>

#include "ghzsim/circuit.hpp"
#include "ghzsim/quantum.hpp"

namespace ghz {

/// Charging and Josephson energies set directly, bypassing the gate/flux knobs. GHz.
struct EnergyOverrides {
    std::array<double, 3> e_c{};
    std::array<double, 3> e_j{};
};

struct PulseSegment {
    double duration_ns = 0;
    std::variant<EnergyOverrides, ControlSettings> controls;
    std::string label;
};

/// Piecewise-constant control sequence. Couplings stay fixed for the whole run; segments given
/// as ControlSettings are resolved through `network`.
struct Schedule {
    std::vector<PulseSegment> segments;
    double k12 = 0;
    double k23 = 0;
    double k13 = 0;
    std::optional<CapacitanceNetwork> network;

    double total_duration() const;
};

/// All controls off: charge degeneracy and half a flux quantum on every loop.
PulseSegment idle_segment(double duration_ns, std::string label = "idle");

struct ScheduleRun {
    StateVector final_state;
    std::vector<StateVector> trajectory;  // state after each segment
};

Operator segment_hamiltonian(const Schedule &schedule, const PulseSegment &segment);

ScheduleRun run_schedule(const Schedule &schedule, const StateVector &initial);

/// Smallest t2 > 0 taking |0> to (|0> + sign*i|1>)/sqrt2 (up to global phase) under
/// -E_J/2 sigma_x, i.e. rotation phase pi E_J t2 = pi/4 for sign +1 and 3pi/4 for sign -1.
double solve_superposition_pulse(double e_j2, int sign);

/// Which way the driven qubit's |0> is sent when the control qubit is |1>:
/// PlusI realizes sin(pi E_J t) = +1 (|0> -> i|1>), MinusI realizes sin = -1 (|0> -> -i|1>).
enum class FlipPhase { PlusI, MinusI };

struct FlipSearchBounds {
    int max_m = 16;
    int max_n = 64;
};

struct FlipSolution {
    double e_j = 0;    // GHz
    double t_ns = 0;
    double gamma = 0;  // sqrt((2K)^2 + (E_J/2)^2), GHz
    int m = 0;
    int n = 0;
    FlipPhase phase = FlipPhase::PlusI;
    double sin_residual = 0;
    double cos_residual = 0;
    bool underdriven = false;  // E_J below 1e-3 of the available maximum; pulse is long
};

/// Simultaneous solution of the conditional-flip timing conditions
///   sin(pi E_J t) = +-1   and   cos(2 pi gamma t) = 1,
/// searching winding numbers (m, n) lexicographically, m <= bounds.max_m, 1 <= n <= bounds.max_n.
/// With a = pi/2 + 2 pi m (or 3pi/2 + 2 pi m for MinusI) the commensurability gives
/// E_J = 4K / sqrt((2 pi n / a)^2 - 1) and t = a / (pi E_J).
/// Throws InfeasibleError ("flip infeasible") when nothing fits under e_j_max.
FlipSolution solve_conditional_flip(double k, double e_j_max, FlipPhase phase = FlipPhase::PlusI,
                                    FlipSearchBounds bounds = {});

enum class FlipOrder { OneThenThree, ThreeThenOne };

struct GhzOptions {
    int sign = +1;
    bool include_k13 = false;
    FlipOrder order = FlipOrder::OneThenThree;
    FlipSearchBounds bounds;
    // When present, each step's charging energies are mapped back to gate charges.
    std::optional<CapacitanceNetwork> network;
};

struct GhzStepReport {
    std::string label;
    double duration_ns = 0;
    EnergyOverrides energies;
    std::array<double, 3> flux{};
    std::optional<GateChargeSolution> gate;
    double fidelity = 0;  // against the ideal state after this step
};

struct GhzPreparation {
    StateVector state;
    Schedule schedule;
    std::vector<GhzStepReport> steps;
    FlipSolution first_flip;
    FlipSolution second_flip;
    double fidelity = 0;
    // arg(<111|psi> / <000|psi>) / pi; +0.5 for GHZ+, -0.5 for GHZ-.
    double relative_phase_over_pi = 0;
};

/// Three-step preparation |000> -> (|000> + sign i|010>)/sqrt2 -> (|000> - sign|110>)/sqrt2
/// -> (|000> + sign i|111>)/sqrt2, simulated with the full three-qubit Hamiltonian.
GhzPreparation ghz_prepare(const DerivedEnergies &energies, const GhzOptions &options = {});

}  // namespace ghz
