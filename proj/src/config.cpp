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

#include "ghzsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ghzsim/errors.hpp"
#include "json.hpp"

namespace ghz {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string &source, const std::string &field, const std::string &message) {
    throw ConfigError(source + ": field '" + field + "': " + message);
}

void reject_unknown(const json &node, const std::set<std::string> &allowed, const std::string &source,
                    const std::string &prefix) {
    for (const auto &item : node.items()) {
        if (!allowed.count(item.key())) {
            fail(source, prefix + item.key(), "unknown field");
        }
    }
}

const json &require_object(const json &parent, const std::string &key, const std::string &source) {
    if (!parent.contains(key)) {
        fail(source, key, "missing");
    }
    const json &node = parent.at(key);
    if (!node.is_object()) {
        fail(source, key, "expected an object");
    }
    return node;
}

double as_number(const json &node, const std::string &source, const std::string &field) {
    if (!node.is_number()) {
        fail(source, field, "expected a number");
    }
    double v = node.get<double>();
    if (!std::isfinite(v)) {
        fail(source, field, "not finite");
    }
    return v;
}

// Accepts a scalar (broadcast) or an array of exactly N numbers.
template <std::size_t N>
std::array<double, N> read_array(const json &parent, const std::string &key, const std::string &source,
                                 const std::string &prefix, std::optional<std::array<double, N>> fallback) {
    const std::string field = prefix + key;
    if (!parent.contains(key)) {
        if (fallback) {
            return *fallback;
        }
        fail(source, field, "missing");
    }
    const json &node = parent.at(key);
    std::array<double, N> out{};
    if (node.is_number()) {
        out.fill(as_number(node, source, field));
        return out;
    }
    if (!node.is_array() || node.size() != N) {
        fail(source, field, "expected a number or an array of " + std::to_string(N) + " numbers");
    }
    for (std::size_t i = 0; i < N; i++) {
        out[i] = as_number(node[i], source, field + "[" + std::to_string(i) + "]");
    }
    return out;
}

template <typename T>
T read_scalar(const json &parent, const std::string &key, const std::string &source, const std::string &prefix,
              T fallback) {
    if (!parent.contains(key)) {
        return fallback;
    }
    const json &node = parent.at(key);
    const std::string field = prefix + key;
    if constexpr (std::is_same_v<T, bool>) {
        if (!node.is_boolean()) {
            fail(source, field, "expected true or false");
        }
        return node.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!node.is_string()) {
            fail(source, field, "expected a string");
        }
        return node.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
        if (!node.is_number_unsigned()) {
            fail(source, field, "expected a non-negative integer");
        }
        return node.get<T>();
    } else {
        return as_number(node, source, field);
    }
}

template <typename F>
auto translate(const std::string &source, const std::string &field, F &&f) {
    try {
        return f();
    } catch (const ConfigError &e) {
        fail(source, field, e.what());
    }
}

}  // namespace

std::string format_name(OutputFormat format) {
    switch (format) {
        case OutputFormat::Table:
            return "table";
        case OutputFormat::Csv:
            return "csv";
        case OutputFormat::Structured:
            return "structured";
    }
    return "table";
}

OutputFormat parse_format(const std::string &name) {
    if (name == "table") {
        return OutputFormat::Table;
    }
    if (name == "csv") {
        return OutputFormat::Csv;
    }
    if (name == "structured" || name == "json") {
        return OutputFormat::Structured;
    }
    throw ConfigError("unknown output format '" + name + "' (expected table, csv or structured)");
}

RunConfig RunConfig::reference() {
    RunConfig c;
    c.network.c_junction = {600, 600, 600};
    c.network.c_gate = {0.6, 0.6, 0.6};
    c.network.c_coupler = {30, 30};
    c.settings = ControlSettings::idle({5.6, 5.6, 5.6});
    c.protocol.seed = 7;
    return c;
}

void RunConfig::validate() const {
    try {
        network.validate();
    } catch (const Error &e) {
        throw ConfigError(std::string("device: ") + e.what());
    }
    for (int j = 0; j < 3; j++) {
        if (!(settings.epsilon_j[j] > 0)) {
            throw ConfigError("field 'device.epsilon_j_ghz': must be positive");
        }
        if (!std::isfinite(settings.gate_charge[j]) || !std::isfinite(settings.flux[j])) {
            throw ConfigError("field 'device': gate_charge and flux must be finite");
        }
    }
    if (protocol.shots > 0 && !protocol.seed) {
        throw ConfigError("field 'protocol.seed': required when shots > 0");
    }
    if (!(t_measure_ns > 0)) {
        throw ConfigError("field 'readout.t_measure_ns': must be positive");
    }
    if (scan) {
        if (scan->values.empty()) {
            throw ConfigError("field 'scan.values': grid is empty");
        }
        if (scan->parameter != "zeta" && scan->parameter != "coupler_af" && scan->parameter != "epsilon_j_ghz") {
            throw ConfigError("field 'scan.parameter': unknown parameter '" + scan->parameter +
                              "' (expected zeta, coupler_af or epsilon_j_ghz)");
        }
        for (double v : scan->values) {
            if (!std::isfinite(v)) {
                throw ConfigError("field 'scan.values': entries must be finite");
            }
            if (scan->parameter == "zeta" && (v < 0 || v >= 0.5)) {
                throw ConfigError("field 'scan.values': zeta must lie in [0, 0.5)");
            }
            if (scan->parameter != "zeta" && !(v > 0)) {
                throw ConfigError("field 'scan.values': entries must be positive");
            }
        }
    }
}

RunConfig parse_config(const std::string &text, const std::string &source) {
    json root;
    try {
        root = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error &e) {
        // nlohmann reports "at line L, column C" in the message.
        throw ConfigError(source + ": " + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError(source + ": top level must be an object");
    }
    reject_unknown(root, {"device", "protocol", "readout", "scan", "output"}, source, "");

    RunConfig c;
    const json &dev = require_object(root, "device", source);
    reject_unknown(dev, {"c_junction_af", "c_gate_af", "c_coupler_af", "gate_charge", "flux", "epsilon_j_ghz"},
                   source, "device.");
    c.network.c_junction = read_array<3>(dev, "c_junction_af", source, "device.", std::nullopt);
    c.network.c_gate = read_array<3>(dev, "c_gate_af", source, "device.", std::nullopt);
    c.network.c_coupler = read_array<2>(dev, "c_coupler_af", source, "device.", std::nullopt);
    c.settings.epsilon_j = read_array<3>(dev, "epsilon_j_ghz", source, "device.", std::nullopt);
    c.settings.gate_charge =
        read_array<3>(dev, "gate_charge", source, "device.", std::array<double, 3>{0.5, 0.5, 0.5});
    c.settings.flux = read_array<3>(dev, "flux", source, "device.", std::array<double, 3>{0.5, 0.5, 0.5});

    if (root.contains("protocol")) {
        const json &p = require_object(root, "protocol", source);
        reject_unknown(p, {"mode", "shots", "seed", "include_k13", "sign", "state"}, source, "protocol.");
        std::string mode = read_scalar<std::string>(p, "mode", source, "protocol.", "ideal");
        c.protocol.mode = translate(source, "protocol.mode", [&] { return parse_mode(mode); });
        c.protocol.shots = read_scalar<std::uint64_t>(p, "shots", source, "protocol.", 0);
        if (p.contains("seed")) {
            c.protocol.seed = read_scalar<std::uint64_t>(p, "seed", source, "protocol.", 0);
        }
        c.protocol.include_k13 = read_scalar<bool>(p, "include_k13", source, "protocol.", false);
        std::string sign = read_scalar<std::string>(p, "sign", source, "protocol.", "plus");
        if (sign != "plus" && sign != "minus") {
            fail(source, "protocol.sign", "expected plus or minus");
        }
        c.protocol.sign = sign == "plus" ? +1 : -1;
        c.protocol.state = read_scalar<std::string>(p, "state", source, "protocol.", "ghz");
        if (c.protocol.state != "ghz" && c.protocol.state != "mixture") {
            fail(source, "protocol.state", "expected ghz or mixture");
        }
    }

    if (root.contains("readout")) {
        const json &r = require_object(root, "readout", source);
        reject_unknown(r, {"t_measure_ns"}, source, "readout.");
        c.t_measure_ns = read_scalar<double>(r, "t_measure_ns", source, "readout.", c.t_measure_ns);
    }

    if (root.contains("scan")) {
        const json &s = require_object(root, "scan", source);
        reject_unknown(s, {"parameter", "values", "model"}, source, "scan.");
        ScanConfig scan;
        if (!s.contains("parameter")) {
            fail(source, "scan.parameter", "missing");
        }
        scan.parameter = read_scalar<std::string>(s, "parameter", source, "scan.", "");
        if (!s.contains("values")) {
            fail(source, "scan.values", "missing");
        }
        if (!s.at("values").is_array()) {
            fail(source, "scan.values", "expected an array of numbers");
        }
        for (std::size_t i = 0; i < s.at("values").size(); i++) {
            scan.values.push_back(as_number(s.at("values")[i], source, "scan.values[" + std::to_string(i) + "]"));
        }
        std::string model = read_scalar<std::string>(s, "model", source, "scan.", "qubit2");
        if (model == "qubit2") {
            scan.model = EffectiveModel::Qubit2;
        } else if (model == "qubits13") {
            scan.model = EffectiveModel::Qubits13;
        } else {
            fail(source, "scan.model", "expected qubit2 or qubits13");
        }
        c.scan = scan;
    }

    if (root.contains("output")) {
        const json &o = require_object(root, "output", source);
        reject_unknown(o, {"path", "format"}, source, "output.");
        if (o.contains("path") && !o.at("path").is_null()) {
            c.output.path = read_scalar<std::string>(o, "path", source, "output.", "");
        }
        std::string format = read_scalar<std::string>(o, "format", source, "output.", "table");
        c.output.format = translate(source, "output.format", [&] { return parse_format(format); });
    }

    try {
        c.validate();
    } catch (const ConfigError &e) {
        throw ConfigError(source + ": " + e.what());
    }
    return c;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace ghz
