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

#include "ghzsim/effective.hpp"

#include <cmath>
#include <string>

#include "ghzsim/errors.hpp"

namespace ghz {

namespace {

void check_zeta(double zeta, const char *name) {
    if (!(zeta >= 0) || !(zeta < 1)) {
        throw ContractViolation(std::string("perturbation parameter ") + name + " must lie in [0, 1), got " +
                                std::to_string(zeta));
    }
}

double qubit2_factor(const PerturbationParams &p, int z1z3) {
    return 1 + 2 * p.zeta12 * p.zeta12 + 2 * p.zeta23 * p.zeta23 + 4 * p.zeta12 * p.zeta23 * z1z3;
}

// Qubit-2 = |0> block: indices with the middle bit clear.
constexpr std::array<int, 4> kQubit2Zero{0b000, 0b001, 0b100, 0b101};

Eigen::MatrixXcd restrict_to(const Matrix8 &m, const std::array<int, 4> &indices) {
    Eigen::MatrixXcd out(4, 4);
    for (int r = 0; r < 4; r++) {
        for (int c = 0; c < 4; c++) {
            out(r, c) = m(indices[r], indices[c]);
        }
    }
    return out;
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd &h, double t_ns) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    Eigen::VectorXcd phases(h.rows());
    for (int k = 0; k < h.rows(); k++) {
        phases[k] = std::exp(Complex(0, -2 * M_PI * eig.eigenvalues()[k] * t_ns));
    }
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

void PerturbationParams::validate() const {
    check_zeta(zeta12, "zeta12");
    check_zeta(zeta23, "zeta23");
    check_zeta(zeta_outer[0], "zeta(qubit 1)");
    check_zeta(zeta_outer[1], "zeta(qubit 3)");
    for (int j = 0; j < 3; j++) {
        if (!(epsilon[j] > 0)) {
            throw ContractViolation("effective dynamics need positive eps_J on every qubit");
        }
    }
}

PerturbationParams PerturbationParams::from_energies(const DerivedEnergies &energies) {
    PerturbationParams p;
    p.epsilon = energies.epsilon_j;
    for (int j = 0; j < 3; j++) {
        if (!(p.epsilon[j] > 0)) {
            throw ContractViolation("effective dynamics need positive eps_J on every qubit");
        }
    }
    p.zeta12 = energies.k12 / (2 * p.epsilon[1]);
    p.zeta23 = energies.k23 / (2 * p.epsilon[1]);
    p.zeta_outer = {energies.k12 / (2 * p.epsilon[0]), energies.k23 / (2 * p.epsilon[2])};
    p.validate();
    return p;
}

Operator h_eff_qubit2(const PerturbationParams &p) {
    p.validate();
    const double eps = p.epsilon[1];
    Operator zz = pauli(Axis::Z, 1) * pauli(Axis::Z, 3);
    Operator x2 = pauli(Axis::X, 2);
    const double base = 1 + 2 * p.zeta12 * p.zeta12 + 2 * p.zeta23 * p.zeta23;
    return Operator(-eps * (base * x2.matrix() + 4 * p.zeta12 * p.zeta23 * zz.matrix() * x2.matrix()));
}

double tau2(const PerturbationParams &p) {
    p.validate();
    return 1.0 / (8 * p.epsilon[1] * qubit2_factor(p, +1));
}

Operator h_eff_qubits13(const PerturbationParams &p, int qubit2_z) {
    p.validate();
    if (qubit2_z != 1 && qubit2_z != -1) {
        throw ContractViolation("qubit-2 z eigenvalue must be +1 or -1");
    }
    const double c1 = p.epsilon[0] * (1 + 2 * p.zeta_outer[0] * p.zeta_outer[0] * qubit2_z);
    const double c3 = p.epsilon[2] * (1 + 2 * p.zeta_outer[1] * p.zeta_outer[1] * qubit2_z);
    return Operator(-c1 * pauli(Axis::X, 1).matrix() - c3 * pauli(Axis::X, 3).matrix());
}

Tau13 tau13(const PerturbationParams &p, std::optional<double> epsilon3_max) {
    p.validate();
    const double rate1 = p.epsilon[0] * (1 + 2 * p.zeta_outer[0] * p.zeta_outer[0]);
    const double shift3 = 1 + 2 * p.zeta_outer[1] * p.zeta_outer[1];
    const double rate3 = p.epsilon[2] * shift3;

    Tau13 out;
    out.tau_ns = 1.0 / (8 * rate1);
    out.epsilon3 = p.epsilon[2];
    if (std::abs(rate3 - rate1) > 1e-9 * rate1) {
        out.epsilon3 = rate1 / shift3;
        out.adjusted = true;
        if (epsilon3_max && out.epsilon3 > *epsilon3_max) {
            throw InfeasibleError("tau13 matching needs eps3 = " + std::to_string(out.epsilon3) +
                                  " GHz, above the available " + std::to_string(*epsilon3_max) + " GHz");
        }
    }
    return out;
}

double match_outer_epsilon(double k32, double target) {
    const double disc = target * target - 2 * k32 * k32;
    if (!(target > 0) || disc < 0) {
        throw InfeasibleError("no eps3 reaches the matched qubit-3 rotation rate");
    }
    return 0.5 * (target + std::sqrt(disc));
}

Operator h_full_qubit2(double epsilon2, double k12, double k23, double k13) {
    return build_hamiltonian({0, 0, 0}, {0, 2 * epsilon2, 0}, k12, k23, k13);
}

Operator h_full_qubits13(double epsilon1, double epsilon3, double k12, double k23, double k13) {
    return build_hamiltonian({0, 0, 0}, {2 * epsilon1, 0, 2 * epsilon3}, k12, k23, k13);
}

Eigen::MatrixXcd direct_rotation(const Eigen::MatrixXcd &unperturbed, const Eigen::MatrixXcd &perturbed) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig0(unperturbed);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(perturbed);
    const Eigen::Index dim = unperturbed.rows();
    const auto &w0 = eig0.eigenvalues();
    const double scale = std::max(1.0, w0.cwiseAbs().maxCoeff());

    Eigen::MatrixXcd overlap = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::Index start = 0;
    while (start < dim) {
        Eigen::Index stop = start + 1;
        while (stop < dim && std::abs(w0[stop] - w0[start]) < 1e-9 * scale) {
            stop++;
        }
        const Eigen::Index width = stop - start;
        auto v0 = eig0.eigenvectors().middleCols(start, width);
        auto v = eig.eigenvectors().middleCols(start, width);
        overlap += (v0 * v0.adjoint()) * (v * v.adjoint());
        start = stop;
    }
    // Unitary polar factor of the projector overlap.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

double log_log_slope(const std::vector<double> &x, const std::vector<double> &y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); i++) {
        if (x[i] <= 0 || y[i] <= 0) {
            continue;
        }
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        n++;
    }
    if (n < 2) {
        return 0;
    }
    const double denom = n * sxx - sx * sx;
    return denom == 0 ? 0 : (n * sxy - sx * sy) / denom;
}

ErrorScan effective_error_scan(const std::vector<double> &zetas, EffectiveModel model) {
    ErrorScan scan;
    scan.model = model;
    constexpr double eps = 1.0;
    for (double zeta : zetas) {
        if (!(zeta >= 0) || !(zeta < 0.5)) {
            throw ContractViolation("effective_error_scan: zeta must lie in [0, 0.5), got " + std::to_string(zeta));
        }
        const double k = 2 * zeta * eps;
        PerturbationParams p;
        p.epsilon = {eps, eps, eps};
        p.zeta12 = p.zeta23 = zeta;
        p.zeta_outer = {zeta, zeta};

        ErrorScanRow row;
        row.zeta = zeta;
        Eigen::MatrixXcd h0, h_full, h_eff;
        if (model == EffectiveModel::Qubit2) {
            row.tau_ns = tau2(p);
            h0 = h_full_qubit2(eps, 0, 0).matrix();
            h_full = h_full_qubit2(eps, k, k).matrix();
            h_eff = h_eff_qubit2(p).matrix();
        } else {
            row.tau_ns = tau13(p).tau_ns;
            h0 = restrict_to(h_full_qubits13(eps, eps, 0, 0).matrix(), kQubit2Zero);
            h_full = restrict_to(h_full_qubits13(eps, eps, k, k).matrix(), kQubit2Zero);
            h_eff = restrict_to(h_eff_qubits13(p, +1).matrix(), kQubit2Zero);
        }
        Eigen::MatrixXcd u_full = expm_hermitian(h_full, row.tau_ns);
        Eigen::MatrixXcd u_eff = expm_hermitian(h_eff, row.tau_ns);
        row.lab_error = phase_aligned_distance(u_full, u_eff);
        Eigen::MatrixXcd w = direct_rotation(h0, h_full);
        row.dressed_error = phase_aligned_distance(w * u_full * w.adjoint(), u_eff);
        scan.rows.push_back(row);
    }

    std::vector<double> zs, lab, dressed;
    for (const auto &row : scan.rows) {
        zs.push_back(row.zeta);
        lab.push_back(row.lab_error);
        dressed.push_back(row.dressed_error);
    }
    scan.lab_slope = log_log_slope(zs, lab);
    scan.dressed_slope = log_log_slope(zs, dressed);
    return scan;
}

}  // namespace ghz
