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

#include "ghzsim/protocols.hpp"

#include <cmath>
#include <random>

#include "ghzsim/effective.hpp"
#include "ghzsim/errors.hpp"

namespace ghz {

namespace {

constexpr Complex kI{0, 1};

Matrix2 quarter_x_rotation() {
    return (Matrix2::Identity() + kI * pauli_matrix(Axis::X)) / std::sqrt(2.0);
}

std::array<double, 8> rotated_probabilities(const StateVector &state, const std::array<Axis, 3> &basis) {
    Matrix8 rotation = Matrix8::Identity();
    for (int q = 1; q <= 3; q++) {
        rotation = basis_rotation_operator(basis[q - 1], q).matrix() * rotation;
    }
    return probabilities(StateVector::from_amplitudes(rotation * state.amplitudes()));
}

int outer_pair_index(int outcome) {
    return 2 * qubit_bit(outcome, 1) + qubit_bit(outcome, 3);
}

const std::array<std::string, 4> kPairLabels{"00", "01", "10", "11"};

}  // namespace

std::string mode_name(ProtocolMode mode) {
    switch (mode) {
        case ProtocolMode::Ideal:
            return "ideal";
        case ProtocolMode::Effective:
            return "effective";
        case ProtocolMode::Full:
            return "full";
    }
    return "?";
}

ProtocolMode parse_mode(const std::string &name) {
    if (name == "ideal") {
        return ProtocolMode::Ideal;
    }
    if (name == "effective") {
        return ProtocolMode::Effective;
    }
    if (name == "full") {
        return ProtocolMode::Full;
    }
    throw ConfigError("unknown mode '" + name + "' (expected ideal, effective or full)");
}

Operator basis_rotation_operator(Axis axis, int qubit) {
    return embed(basis_rotation(axis), qubit);
}

VerificationGates verification_gates(const DerivedEnergies &energies, ProtocolMode mode, bool include_k13) {
    VerificationGates gates;
    if (mode == ProtocolMode::Ideal) {
        Matrix2 r = quarter_x_rotation();
        gates.u2 = embed(r, 2);
        gates.u13 = embed(r, 1) * embed(r, 3);
        return gates;
    }

    auto p = PerturbationParams::from_energies(energies);
    gates.tau2_ns = tau2(p);

    // Match the two outer rotation rates, retuning whichever qubit has headroom downwards.
    const double rate1 = p.epsilon[0] * (1 + 2 * p.zeta_outer[0] * p.zeta_outer[0]);
    const double rate3 = p.epsilon[2] * (1 + 2 * p.zeta_outer[1] * p.zeta_outer[1]);
    if (std::abs(rate1 - rate3) > 1e-9 * rate1) {
        if (rate3 > rate1) {
            p.epsilon[2] = match_outer_epsilon(energies.k23, rate1);
        } else {
            p.epsilon[0] = match_outer_epsilon(energies.k12, rate3);
        }
        p.zeta_outer = {energies.k12 / (2 * p.epsilon[0]), energies.k23 / (2 * p.epsilon[2])};
        p.validate();
    }
    auto matched = tau13(p);
    gates.tau13_ns = matched.tau_ns;
    gates.epsilon3 = p.epsilon[2];

    const double k13 = include_k13 ? energies.k13 : 0.0;
    if (mode == ProtocolMode::Effective) {
        gates.u2 = propagator(h_eff_qubit2(p), gates.tau2_ns);
        gates.u13 = propagator(h_eff_qubits13(p, +1), gates.tau13_ns);
    } else {
        gates.u2 = propagator(h_full_qubit2(p.epsilon[1], energies.k12, energies.k23, k13), gates.tau2_ns);
        gates.u13 = propagator(h_full_qubits13(p.epsilon[0], p.epsilon[2], energies.k12, energies.k23, k13),
                               gates.tau13_ns);
    }
    return gates;
}

VerificationBranch verification_branch(const StateVector &state, const VerificationGates &gates) {
    VerificationBranch branch;
    StateVector rotated = gates.u2.apply(state);
    double p_one = 0;
    for (int i = 0; i < kDim; i++) {
        if (qubit_bit(i, 2) == 1) {
            p_one += std::norm(rotated[i]);
        }
    }
    branch.postselect_probability = p_one;
    if (p_one < 1e-12) {
        return branch;
    }
    auto kept = project(rotated, 2, 1);
    StateVector final_state = gates.u13.apply(reset_from_one(kept.state, 2));
    auto probs = probabilities(final_state);
    for (int i = 0; i < kDim; i++) {
        branch.p13[outer_pair_index(i)] += probs[i];
    }
    branch.final_state = final_state;
    return branch;
}

ProtocolOutcome verify_mixture(const std::vector<std::pair<double, StateVector>> &components,
                               const VerificationGates &gates, ProtocolMode mode, std::size_t shots,
                               std::uint64_t seed) {
    if (components.empty()) {
        throw ContractViolation("verify: no input states");
    }
    double total_weight = 0;
    for (const auto &[w, s] : components) {
        if (!(w >= 0)) {
            throw ContractViolation("verify: mixture weights must be non-negative");
        }
        total_weight += w;
    }
    if (!(total_weight > 0)) {
        throw ContractViolation("verify: mixture weights sum to zero");
    }

    std::vector<VerificationBranch> branches;
    std::vector<double> weights;
    ProtocolOutcome out;
    out.protocol = "verify";
    out.mode = mode;
    out.postselect_probability = 0;
    std::array<double, 4> joint{};
    for (const auto &[w, s] : components) {
        branches.push_back(verification_branch(s, gates));
        weights.push_back(w / total_weight);
        out.postselect_probability += weights.back() * branches.back().postselect_probability;
        for (int k = 0; k < 4; k++) {
            joint[k] += weights.back() * branches.back().postselect_probability * branches.back().p13[k];
        }
    }
    for (int k = 0; k < 4; k++) {
        out.probabilities[kPairLabels[k]] = out.postselect_probability > 0 ? joint[k] / out.postselect_probability : 0;
    }
    out.expectations["even_parity"] = out.probabilities["00"] + out.probabilities["11"];
    out.expectations["odd_parity"] = out.probabilities["01"] + out.probabilities["10"];

    // Per shot: a component draw (mixtures only), a post-selection draw, then the readout draw.
    out.shots = shots;
    out.counts.seed = seed;
    std::mt19937_64 rng(seed);
    std::vector<std::array<double, 8>> final_probs;
    for (const auto &b : branches) {
        final_probs.push_back(b.final_state ? probabilities(*b.final_state) : std::array<double, 8>{});
    }
    for (std::size_t s = 0; s < shots; s++) {
        std::size_t c = 0;
        if (branches.size() > 1) {
            double u = uniform01(rng);
            double acc = 0;
            for (c = 0; c + 1 < branches.size(); c++) {
                acc += weights[c];
                if (u < acc) {
                    break;
                }
            }
        }
        if (!(uniform01(rng) < branches[c].postselect_probability)) {
            out.discarded++;
            continue;
        }
        out.counts.add(draw_outcome(final_probs[c], rng));
    }
    return out;
}

ProtocolOutcome verify_ghz(const DerivedEnergies &energies, ProtocolMode mode, std::size_t shots, std::uint64_t seed,
                           bool include_k13) {
    GhzOptions options;
    options.include_k13 = include_k13;
    StateVector state = mode == ProtocolMode::Ideal ? StateVector::ghz(+1) : ghz_prepare(energies, options).state;
    auto gates = verification_gates(energies, mode, include_k13);
    return verify_mixture({{1.0, state}}, gates, mode, shots, seed);
}

Operator pauli_product(const std::array<Axis, 3> &axes) {
    return pauli(axes[0], 1) * pauli(axes[1], 2) * pauli(axes[2], 3);
}

MerminExpectations mermin_expectations(const StateVector &state) {
    MerminExpectations m;
    m.yxx = expectation(pauli_product({Axis::Y, Axis::X, Axis::X}), state);
    m.xyx = expectation(pauli_product({Axis::X, Axis::Y, Axis::X}), state);
    m.xxy = expectation(pauli_product({Axis::X, Axis::X, Axis::Y}), state);
    m.yyy = expectation(pauli_product({Axis::Y, Axis::Y, Axis::Y}), state);
    return m;
}

bool lhv_consistent(const LhvAssignment &a) {
    for (int j = 0; j < 3; j++) {
        for (int v : {a.mx[j], a.my[j], a.mz[j]}) {
            if (v != 1 && v != -1) {
                return false;
            }
        }
    }
    return a.my[0] * a.mx[1] * a.mx[2] == 1 && a.mx[0] * a.my[1] * a.mx[2] == 1 && a.mx[0] * a.mx[1] * a.my[2] == 1;
}

int lhv_prediction(const LhvAssignment &a) {
    if (!lhv_consistent(a)) {
        throw ContractViolation("LHV assignment does not reproduce the three GHZ eigenvalues");
    }
    return a.my[0] * a.my[1] * a.my[2];
}

LhvEnumeration lhv_enumerate() {
    LhvEnumeration e;
    for (int bits = 0; bits < (1 << 9); bits++) {
        auto value = [&](int k) { return (bits >> k) & 1 ? -1 : 1; };
        LhvAssignment a;
        for (int j = 0; j < 3; j++) {
            a.mx[j] = value(j);
            a.my[j] = value(3 + j);
            a.mz[j] = value(6 + j);
        }
        e.total++;
        if (!lhv_consistent(a)) {
            continue;
        }
        e.consistent++;
        if (lhv_prediction(a) != 1) {
            e.exceptions++;
        }
    }
    return e;
}

int minus_count(int outcome) {
    return qubit_bit(outcome, 1) + qubit_bit(outcome, 2) + qubit_bit(outcome, 3);
}

ProtocolOutcome yyy_experiment(const StateVector &state, std::size_t shots, std::uint64_t seed) {
    const std::array<Axis, 3> basis{Axis::Y, Axis::Y, Axis::Y};
    ProtocolOutcome out;
    out.protocol = "yyy";
    out.mode = ProtocolMode::Ideal;
    out.shots = shots;
    out.counts = sample(state, shots, seed, basis);

    auto label = [](int outcome) {
        std::string s;
        for (int q = 1; q <= 3; q++) {
            s.push_back(qubit_bit(outcome, q) ? '-' : '+');
        }
        return s;
    };
    auto probs = rotated_probabilities(state, basis);
    double even_exact = 0;
    std::size_t even_sampled = 0;
    for (int i = 0; i < kDim; i++) {
        out.probabilities[label(i)] = probs[i];
        if (minus_count(i) % 2 == 0) {
            even_exact += probs[i];
            even_sampled += out.counts.counts[i];
        }
    }
    out.expectations["even_minus_probability"] = even_exact;
    out.expectations["even_minus_fraction"] = static_cast<double>(even_sampled) / static_cast<double>(shots);
    out.expectations["A_yyy"] = expectation(pauli_product(basis), state);
    return out;
}

Operator idle_hamiltonian(const DerivedEnergies &energies, bool include_k13) {
    return build_hamiltonian({0, 0, 0}, {0, 0, 0}, energies.k12, energies.k23, include_k13 ? energies.k13 : 0.0);
}

DephasingReport dephasing_commutation_check(const DerivedEnergies &energies, std::span<const double> times_ns,
                                            bool include_k13) {
    DephasingReport report;
    Operator h0 = idle_hamiltonian(energies, include_k13);
    for (int j = 1; j <= 3; j++) {
        report.commutator_norms[j - 1] = commutator_norm(pauli(Axis::Z, j), h0);
    }
    const StateVector ghz = StateVector::ghz(+1);
    const auto initial = probabilities(ghz);
    for (double t : times_ns) {
        StateVector later = evolve(h0, t, ghz);
        auto p = probabilities(later);
        for (int i = 0; i < kDim; i++) {
            report.max_population_drift = std::max(report.max_population_drift, std::abs(p[i] - initial[i]));
        }
        report.min_fidelity = std::min(report.min_fidelity, fidelity(later, ghz));
        report.times_ns.push_back(t);
    }
    return report;
}

}  // namespace ghz
