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
#include <random>

#include "gtest/gtest.h"

#include "ghzsim/errors.hpp"
#include "test_devices.hpp"

using namespace ghz;
using ghz::testing::reference_energies;
using ghz::testing::reference_network;

namespace {

constexpr Complex kI{0, 1};

// Conditional-flip segment for qubit j in {1, 3}: E_C^(j) = 2 K_j2, flip E_J on qubit j.
Schedule flip_schedule(int qubit, double k, const FlipSolution &sol) {
    Schedule s;
    s.k12 = qubit == 1 ? k : 0.0;
    s.k23 = qubit == 3 ? k : 0.0;
    EnergyOverrides e;
    e.e_c[qubit - 1] = 2 * k;
    e.e_j[qubit - 1] = sol.e_j;
    s.segments.push_back({sol.t_ns, e, "flip"});
    return s;
}

}  // namespace

TEST(pulse, superposition_pulse_closed_form) {
    EXPECT_NEAR(solve_superposition_pulse(1.0, +1), 0.25, 1e-15);
    EXPECT_NEAR(solve_superposition_pulse(1.0, -1), 0.75, 1e-15);
    EXPECT_NEAR(solve_superposition_pulse(2.0, +1), 0.125, 1e-15);
    EXPECT_NEAR(solve_superposition_pulse(2.0, -1), 0.375, 1e-15);
    EXPECT_THROW(solve_superposition_pulse(0, +1), ContractViolation);
}

TEST(pulse, superposition_pulse_reaches_requested_phase) {
    for (int sign : {+1, -1}) {
        const double ej = 3.3;
        double t = solve_superposition_pulse(ej, sign);
        EXPECT_NEAR(std::abs(std::sin(M_PI * ej * t)), M_SQRT1_2, 1e-15);
        auto h = build_hamiltonian({0, 0, 0}, {0, ej, 0}, 0, 0);
        Amplitudes target = Amplitudes::Zero();
        target[0] = M_SQRT1_2;
        target[0b010] = static_cast<double>(sign) * kI * M_SQRT1_2;
        EXPECT_NEAR(fidelity(evolve(h, t, StateVector()), StateVector::from_amplitudes(target)), 1, 1e-14);
    }
}

TEST(pulse, conditional_flip_closed_form) {
    auto sol = solve_conditional_flip(1.0, 100.0);
    EXPECT_EQ(sol.m, 0);
    EXPECT_EQ(sol.n, 1);
    EXPECT_NEAR(sol.e_j, 4 / std::sqrt(15.0), 1e-15);
    EXPECT_NEAR(sol.t_ns, (M_PI / 2) / (M_PI * sol.e_j), 1e-15);
    // Independent evaluation of both timing conditions.
    double gamma = std::sqrt(4.0 + sol.e_j * sol.e_j / 4);
    EXPECT_NEAR(std::sin(M_PI * sol.e_j * sol.t_ns), 1, 1e-12);
    EXPECT_NEAR(std::cos(2 * M_PI * gamma * sol.t_ns), 1, 1e-12);
    EXPECT_LT(sol.sin_residual, 1e-12);
    EXPECT_LT(sol.cos_residual, 1e-12);
}

TEST(pulse, conditional_flip_minus_branch) {
    auto sol = solve_conditional_flip(1.0, 100.0, FlipPhase::MinusI);
    EXPECT_EQ(sol.m, 0);
    EXPECT_EQ(sol.n, 1);
    // a = 3pi/2, r = 4/3.
    EXPECT_NEAR(sol.e_j, 4 / std::sqrt(16.0 / 9 - 1), 1e-14);
    EXPECT_NEAR(std::sin(M_PI * sol.e_j * sol.t_ns), -1, 1e-12);
    EXPECT_LT(sol.cos_residual, 1e-12);
}

TEST(pulse, conditional_flip_respects_ej_limit) {
    // 4/sqrt(15) ~ 1.033 exceeds 1.0, so n = 2 is the first fit: r = 8, E_J = 4/sqrt(63).
    auto sol = solve_conditional_flip(1.0, 1.0);
    EXPECT_EQ(sol.m, 0);
    EXPECT_EQ(sol.n, 2);
    EXPECT_NEAR(sol.e_j, 4 / std::sqrt(63.0), 1e-15);
    EXPECT_THROW(solve_conditional_flip(1.0, 1e-3, FlipPhase::PlusI, {.max_m = 1, .max_n = 4}), InfeasibleError);
    EXPECT_THROW(solve_conditional_flip(0, 1.0), ContractViolation);
}

TEST(pulse, conditional_flip_weak_coupling_limit) {
    double previous_t = 0;
    for (double k : {1.0, 0.1, 0.01, 0.001}) {
        auto sol = solve_conditional_flip(k, 10.0);
        EXPECT_EQ(sol.n, 1);
        EXPECT_NEAR(sol.e_j, 4 * k / std::sqrt(15.0), 1e-15);
        EXPECT_GT(sol.t_ns, previous_t);
        previous_t = sol.t_ns;
    }
    EXPECT_TRUE(solve_conditional_flip(1e-4, 10.0).underdriven);
}

TEST(pulse, conditional_flip_branch_structure) {
    // Qubit 2 = |0>: identity up to phase. Qubit 2 = |1>: |0_j> -> i|1_j>.
    for (int qubit : {1, 3}) {
        const double k = 1.7;
        auto sol = solve_conditional_flip(k, 20.0);
        auto sched = flip_schedule(qubit, k, sol);
        const int target_bit = 1 << (3 - qubit);

        auto idle = run_schedule(sched, StateVector::basis(0)).final_state;
        EXPECT_NEAR(fidelity(idle, StateVector::basis(0)), 1, 1e-9);

        auto flipped = run_schedule(sched, StateVector::basis(0b010)).final_state;
        EXPECT_NEAR(std::abs(flipped[0b010 | target_bit] - kI), 0, 1e-9) << "qubit " << qubit;
    }
}

TEST(pulse, run_schedule_trajectory_and_zero_durations) {
    Schedule s;
    s.k12 = s.k23 = 1;
    s.segments = {idle_segment(0), idle_segment(0, "second")};
    auto run = run_schedule(s, StateVector::ghz(+1));
    EXPECT_EQ(run.trajectory.size(), 2u);
    EXPECT_EQ(fidelity(run.final_state, StateVector::ghz(+1)), 1);
    EXPECT_THROW(run_schedule(Schedule{}, StateVector()), ContractViolation);
}

TEST(pulse, control_settings_segments_resolve_through_network) {
    auto e = reference_energies();
    Schedule s;
    s.k12 = e.k12;
    s.k23 = e.k23;
    ControlSettings drive = ghz::testing::reference_settings();
    drive.flux[1] = 0;  // full E_J on qubit 2
    s.segments.push_back({0.1, drive, "drive"});
    EXPECT_THROW(run_schedule(s, StateVector()), ContractViolation);
    s.network = reference_network();
    auto via_settings = run_schedule(s, StateVector()).final_state;
    EnergyOverrides direct;
    direct.e_j = {0, e.ej_max[1], 0};
    s.segments[0].controls = direct;
    auto via_overrides = run_schedule(s, StateVector()).final_state;
    EXPECT_NEAR(fidelity(via_settings, via_overrides), 1, 1e-14);
}

TEST(pulse, superposition_working_point_has_no_z_field) {
    // With E_C^(2) = -2(K12 + K23) and qubits 1, 3 in |0>, the qubit-2 diagonal entries agree.
    auto e = reference_energies();
    auto h = build_hamiltonian({0, -2 * (e.k12 + e.k23), 0}, {0, 0, 0}, e.k12, e.k23);
    EXPECT_NEAR(h.matrix()(0b000, 0b000).real(), h.matrix()(0b010, 0b010).real(), 1e-14);
}

TEST(pulse, ghz_prepare_reference_device) {
    auto prep = ghz_prepare(reference_energies());
    EXPECT_GE(prep.fidelity, 1 - 1e-6);
    EXPECT_NEAR(prep.fidelity, 1, 1e-12);
    ASSERT_EQ(prep.steps.size(), 3u);
    for (const auto &step : prep.steps) {
        EXPECT_GE(step.fidelity, 1 - 1e-6) << step.label;
    }
    EXPECT_NEAR(prep.relative_phase_over_pi, 0.5, 1e-9);
    EXPECT_EQ(prep.schedule.segments.size(), 3u);
}

TEST(pulse, ghz_prepare_minus_sign) {
    GhzOptions options;
    options.sign = -1;
    auto prep = ghz_prepare(reference_energies(), options);
    EXPECT_NEAR(fidelity(prep.state, StateVector::ghz(-1)), 1, 1e-12);
    EXPECT_NEAR(prep.relative_phase_over_pi, -0.5, 1e-9);
    for (const auto &step : prep.steps) {
        EXPECT_GE(step.fidelity, 1 - 1e-6) << step.label;
    }
}

TEST(pulse, ghz_prepare_with_next_nearest_coupling) {
    auto e = reference_energies();
    GhzOptions options;
    options.include_k13 = true;
    double deficit = 1 - ghz_prepare(e, options).fidelity;
    EXPECT_GT(deficit, 1e-6);
    EXPECT_LT(deficit, 0.1);
    // The deficit is quadratic in the neglected coupling.
    auto halved = e;
    halved.k13 /= 2;
    double deficit_half = 1 - ghz_prepare(halved, options).fidelity;
    EXPECT_NEAR(deficit / deficit_half, 4, 0.4);
}

TEST(pulse, ghz_prepare_reports_gate_charges) {
    GhzOptions options;
    options.network = reference_network();
    auto e = reference_energies();
    auto prep = ghz_prepare(e, options);
    for (const auto &step : prep.steps) {
        ASSERT_TRUE(step.gate.has_value());
        ControlSettings s = ghz::testing::reference_settings();
        s.gate_charge = step.gate->gate_charge;
        auto back = derive_energies(reference_network(), s);
        for (int j = 0; j < 3; j++) {
            EXPECT_NEAR(back.e_c[j], step.energies.e_c[j], 1e-9 * (1 + std::abs(step.energies.e_c[j])));
            EXPECT_NEAR(josephson_energy(e.epsilon_j[j], step.flux[j]), step.energies.e_j[j], 1e-9);
        }
    }
}

TEST(pulse, ghz_flip_order_invariance_on_symmetric_device) {
    auto e = reference_energies();
    GhzOptions reversed;
    reversed.order = FlipOrder::ThreeThenOne;
    EXPECT_NEAR(ghz_prepare(e).fidelity, ghz_prepare(e, reversed).fidelity, 1e-9);
}

TEST(pulse, ghz_prepare_random_devices) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> k(0.1, 3.0);
    std::uniform_real_distribution<double> eps(2.0, 8.0);
    for (int trial = 0; trial < 25; trial++) {
        DerivedEnergies e;
        e.k12 = k(rng);
        e.k23 = k(rng);
        e.epsilon_j = {eps(rng), eps(rng), eps(rng)};
        for (int j = 0; j < 3; j++) {
            e.ej_max[j] = 2 * e.epsilon_j[j];
        }
        GhzOptions options;
        options.sign = trial % 2 ? -1 : +1;
        auto prep = ghz_prepare(e, options);
        EXPECT_GE(prep.fidelity, 1 - 1e-9) << "trial " << trial;
    }
}

TEST(pulse, schedules_are_deterministic) {
    auto a = ghz_prepare(reference_energies());
    auto b = ghz_prepare(reference_energies());
    ASSERT_EQ(a.schedule.segments.size(), b.schedule.segments.size());
    for (std::size_t s = 0; s < a.schedule.segments.size(); s++) {
        EXPECT_EQ(a.schedule.segments[s].duration_ns, b.schedule.segments[s].duration_ns);
    }
    EXPECT_TRUE(a.state.amplitudes() == b.state.amplitudes());
}

TEST(pulse, idle_ghz_persists) {
    auto e = reference_energies();
    Schedule s;
    s.k12 = e.k12;
    s.k23 = e.k23;
    s.k13 = e.k13;
    s.segments.push_back(idle_segment(37.5));
    auto run = run_schedule(s, StateVector::ghz(+1));
    EXPECT_NEAR(fidelity(run.final_state, StateVector::ghz(+1)), 1, 1e-12);
}
