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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ghzsim/circuit.hpp"
#include "ghzsim/effective.hpp"
#include "ghzsim/protocols.hpp"

namespace ghz {

enum class OutputFormat { Table, Csv, Structured };

std::string format_name(OutputFormat format);
OutputFormat parse_format(const std::string &name);

struct ProtocolConfig {
    ProtocolMode mode = ProtocolMode::Ideal;
    std::size_t shots = 0;
    std::optional<std::uint64_t> seed;
    bool include_k13 = false;
    int sign = +1;
    std::string state = "ghz";  // verify input: "ghz" or "mixture"
};

/// Parameter grid. `parameter` is one of "zeta", "coupler_af", "epsilon_j_ghz".
struct ScanConfig {
    std::string parameter;
    std::vector<double> values;
    EffectiveModel model = EffectiveModel::Qubit2;  // zeta scans only
};

struct OutputConfig {
    std::optional<std::string> path;
    OutputFormat format = OutputFormat::Table;
};

struct RunConfig {
    CapacitanceNetwork network;
    ControlSettings settings;
    ProtocolConfig protocol;
    double t_measure_ns = 100;
    std::optional<ScanConfig> scan;
    OutputConfig output;

    /// The reference device: C_J = 600 aF, C_g = 0.6 aF, C_m = 30 aF, eps_J = 5.6 GHz, idle controls.
    static RunConfig reference();

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Parses a JSON document (comments allowed). `source` prefixes diagnostics.
RunConfig parse_config(const std::string &text, const std::string &source = "<config>");
RunConfig load_config(const std::string &path);

}  // namespace ghz
