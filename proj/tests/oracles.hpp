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

#include <cmath>
#include <random>

#include "ghzsim/quantum.hpp"

namespace ghz::testing {

// Scaled Taylor series for exp(-i 2 pi H t): scale until the exponent is small, sum the series
// until a term drops below 1e-14, then square back. Deliberately naive; it shares nothing with
// the eigendecomposition used by the library.
inline Matrix8 taylor_propagator(const Matrix8 &h, double t_ns) {
    Matrix8 a = Complex(0, -2 * M_PI * t_ns) * h;
    double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm > 0.5) {
        norm /= 2;
        squarings++;
    }
    a /= std::pow(2.0, squarings);
    Matrix8 sum = Matrix8::Identity();
    Matrix8 term = Matrix8::Identity();
    for (int k = 1; k < 200; k++) {
        term = term * a / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-14 * 1e-3) {
            break;
        }
    }
    for (int s = 0; s < squarings; s++) {
        sum = sum * sum;
    }
    return sum;
}

inline Matrix8 random_hermitian(std::mt19937_64 &rng, double scale = 1.0) {
    std::normal_distribution<double> g(0, scale);
    Matrix8 m;
    for (int r = 0; r < kDim; r++) {
        for (int c = 0; c < kDim; c++) {
            m(r, c) = Complex(g(rng), g(rng));
        }
    }
    return (m + m.adjoint()) / 2.0;
}

inline StateVector random_state(std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0, 1);
    Amplitudes a;
    for (int i = 0; i < kDim; i++) {
        a[i] = Complex(g(rng), g(rng));
    }
    return StateVector::from_amplitudes(a);
}

inline double max_abs(const Matrix8 &m) {
    return m.cwiseAbs().maxCoeff();
}

}  // namespace ghz::testing
