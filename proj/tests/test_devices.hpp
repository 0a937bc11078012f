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

#include "ghzsim/circuit.hpp"

namespace ghz::testing {

// Device values of the two-qubit experiment the three-box chain extends: C_J ~ 600 aF,
// C_m ~ 30 aF, C_g = 0.6 aF.
inline CapacitanceNetwork reference_network() {
    CapacitanceNetwork n;
    n.c_junction = {600, 600, 600};
    n.c_gate = {0.6, 0.6, 0.6};
    n.c_coupler = {30, 30};
    return n;
}

// eps_J = 5.6 GHz puts K12/(2 eps_J) near 1/4.
inline ControlSettings reference_settings() {
    return ControlSettings::idle({5.6, 5.6, 5.6});
}

inline DerivedEnergies reference_energies() {
    return derive_energies(reference_network(), reference_settings());
}

inline CapacitanceNetwork asymmetric_network() {
    CapacitanceNetwork n;
    n.c_junction = {600, 550, 620};
    n.c_gate = {0.6, 0.5, 0.7};
    n.c_coupler = {30, 25};
    return n;
}

}  // namespace ghz::testing
