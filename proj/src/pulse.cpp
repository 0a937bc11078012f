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

#include "ghzsim/pulse.hpp"

#include <cmath>
#include <string>

#include "ghzsim/errors.hpp"

namespace ghz {

double Schedule::total_duration() const {
    double total = 0;
    for (const auto &s : segments) {
        total += s.duration_ns;
    }
    return total;
}

PulseSegment idle_segment(double duration_ns, std::string label) {
    return {duration_ns, EnergyOverrides{}, std::move(label)};
}

Operator segment_hamiltonian(const Schedule &schedule, const PulseSegment &segment) {
    if (const auto *direct = std::get_if<EnergyOverrides>(&segment.controls)) {
        return build_hamiltonian(direct->e_c, direct->e_j, schedule.k12, schedule.k23, schedule.k13);
    }
    if (!schedule.network) {
        throw ContractViolation("segment '" + segment.label + "' uses control settings but the schedule has no network");
    }
    auto derived = derive_energies(*schedule.network, std::get<ControlSettings>(segment.controls));
    return build_hamiltonian(derived.e_c, derived.e_j, schedule.k12, schedule.k23, schedule.k13);
}

ScheduleRun run_schedule(const Schedule &schedule, const StateVector &initial) {
    if (schedule.segments.empty()) {
        throw ContractViolation("run_schedule: schedule is empty");
    }
    ScheduleRun run{initial, {}};
    run.trajectory.reserve(schedule.segments.size());
    for (const auto &segment : schedule.segments) {
        if (!(segment.duration_ns >= 0) || !std::isfinite(segment.duration_ns)) {
            throw ContractViolation("segment '" + segment.label + "' has an invalid duration");
        }
        run.final_state = evolve(segment_hamiltonian(schedule, segment), segment.duration_ns, run.final_state);
        run.trajectory.push_back(run.final_state);
    }
    return run;
}

double solve_superposition_pulse(double e_j2, int sign) {
    if (!(e_j2 > 0)) {
        throw ContractViolation("solve_superposition_pulse: E_J must be positive");
    }
    double phase = sign >= 0 ? M_PI / 4 : 3 * M_PI / 4;
    return phase / (M_PI * e_j2);
}

FlipSolution solve_conditional_flip(double k, double e_j_max, FlipPhase phase, FlipSearchBounds bounds) {
    if (!(k > 0) || !(e_j_max > 0)) {
        throw ContractViolation("solve_conditional_flip: need K > 0 and E_J max > 0");
    }
    const double base = phase == FlipPhase::PlusI ? M_PI / 2 : 3 * M_PI / 2;
    const double target_sin = phase == FlipPhase::PlusI ? 1.0 : -1.0;
    for (int m = 0; m <= bounds.max_m; m++) {
        const double a = base + 2 * M_PI * m;
        for (int n = 1; n <= bounds.max_n; n++) {
            const double r = 2 * M_PI * n / a;
            if (r <= 1) {
                continue;
            }
            const double e_j = 4 * k / std::sqrt(r * r - 1);
            if (e_j > e_j_max) {
                continue;
            }
            FlipSolution sol;
            sol.e_j = e_j;
            sol.t_ns = a / (M_PI * e_j);
            sol.gamma = std::hypot(2 * k, e_j / 2);
            sol.m = m;
            sol.n = n;
            sol.phase = phase;
            sol.sin_residual = std::abs(std::sin(M_PI * e_j * sol.t_ns) - target_sin);
            sol.cos_residual = std::abs(std::cos(2 * M_PI * sol.gamma * sol.t_ns) - 1);
            sol.underdriven = e_j < 1e-3 * e_j_max;
            return sol;
        }
    }
    throw InfeasibleError("flip infeasible: no (m <= " + std::to_string(bounds.max_m) + ", n <= " +
                          std::to_string(bounds.max_n) + ") solution with E_J <= " + std::to_string(e_j_max) +
                          " GHz for K = " + std::to_string(k) + " GHz");
}

namespace {

Amplitudes two_term(int index_a, Complex coeff_a, int index_b, Complex coeff_b) {
    Amplitudes a = Amplitudes::Zero();
    a[index_a] = coeff_a;
    a[index_b] = coeff_b;
    return a;
}

}  // namespace

GhzPreparation ghz_prepare(const DerivedEnergies &energies, const GhzOptions &options) {
    const double k12 = energies.k12;
    const double k23 = energies.k23;
    const double sign = options.sign >= 0 ? 1.0 : -1.0;
    const Complex i{0, 1};
    if (!(energies.ej_max[1] > 0)) {
        throw InfeasibleError("qubit 2 has no Josephson energy available for the superposition pulse");
    }

    const bool one_first = options.order == FlipOrder::OneThenThree;
    const int first_qubit = one_first ? 1 : 3;
    const int second_qubit = one_first ? 3 : 1;
    auto coupling_to_2 = [&](int q) { return q == 1 ? k12 : k23; };

    GhzPreparation prep;
    prep.first_flip = solve_conditional_flip(coupling_to_2(first_qubit), energies.ej_max[first_qubit - 1],
                                             FlipPhase::PlusI, options.bounds);
    prep.second_flip = solve_conditional_flip(coupling_to_2(second_qubit), energies.ej_max[second_qubit - 1],
                                              FlipPhase::MinusI, options.bounds);

    Schedule &schedule = prep.schedule;
    schedule.k12 = k12;
    schedule.k23 = k23;
    schedule.k13 = options.include_k13 ? energies.k13 : 0.0;

    // Step 1: qubit 2 into superposition; E_C^(2) cancels its coupling field with 1,3 in |0>.
    EnergyOverrides s1;
    s1.e_c = {0, -2 * (k12 + k23), 0};
    s1.e_j = {0, energies.ej_max[1], 0};
    schedule.segments.push_back({solve_superposition_pulse(energies.ej_max[1], options.sign), s1, "superpose q2"});

    // Step 2: first conditional flip. The still-unflipped outer qubit sits in |0> and would
    // imprint a q2-dependent phase through its coupling; E_C^(2) removes it.
    EnergyOverrides s2;
    s2.e_c[first_qubit - 1] = 2 * coupling_to_2(first_qubit);
    s2.e_c[1] = -2 * coupling_to_2(second_qubit);
    s2.e_j[first_qubit - 1] = prep.first_flip.e_j;
    schedule.segments.push_back({prep.first_flip.t_ns, s2, "flip q" + std::to_string(first_qubit)});

    // Step 3: second conditional flip. The flipped outer qubit now tracks qubit 2, so its
    // coupling is a global phase.
    EnergyOverrides s3;
    s3.e_c[second_qubit - 1] = 2 * coupling_to_2(second_qubit);
    s3.e_j[second_qubit - 1] = prep.second_flip.e_j;
    schedule.segments.push_back({prep.second_flip.t_ns, s3, "flip q" + std::to_string(second_qubit)});

    auto run = run_schedule(schedule, StateVector());
    prep.state = run.final_state;

    const int first_bit = 1 << (3 - first_qubit);
    const std::array<StateVector, 3> expected{
        StateVector::from_amplitudes(two_term(0, M_SQRT1_2, 0b010, sign * i * M_SQRT1_2)),
        StateVector::from_amplitudes(two_term(0, M_SQRT1_2, 0b010 | first_bit, -sign * M_SQRT1_2)),
        StateVector::ghz(options.sign),
    };

    for (std::size_t s = 0; s < schedule.segments.size(); s++) {
        const auto &segment = schedule.segments[s];
        GhzStepReport step;
        step.label = segment.label;
        step.duration_ns = segment.duration_ns;
        step.energies = std::get<EnergyOverrides>(segment.controls);
        for (int j = 0; j < 3; j++) {
            step.flux[j] = energies.ej_max[j] > 0 ? flux_for_josephson(step.energies.e_j[j], energies.ej_max[j]) : 0.5;
        }
        if (options.network) {
            step.gate = solve_gate_charges(*options.network, step.energies.e_c);
        }
        step.fidelity = fidelity(run.trajectory[s], expected[s]);
        prep.steps.push_back(step);
    }

    prep.fidelity = fidelity(prep.state, StateVector::ghz(options.sign));
    Complex a000 = prep.state[0];
    Complex a111 = prep.state[7];
    prep.relative_phase_over_pi = (std::abs(a000) > 0 && std::abs(a111) > 0) ? std::arg(a111 / a000) / M_PI : 0.0;
    return prep;
}

}  // namespace ghz
