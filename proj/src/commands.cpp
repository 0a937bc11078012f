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

#include "ghzsim/commands.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <variant>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "ghzsim/effective.hpp"
#include "ghzsim/pulse.hpp"

namespace ghz {

namespace {

using nlohmann::json;
using Cell = std::variant<std::string, double, long long>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    json doc = json::object();
    std::vector<Table> tables;
    std::vector<std::string> banners;
    std::vector<std::pair<std::string, Cell>> meta;
};

std::string cell_text(const Cell &cell, bool exact) {
    if (const auto *s = std::get_if<std::string>(&cell)) {
        return *s;
    }
    if (const auto *i = std::get_if<long long>(&cell)) {
        return fmt::format("{}", *i);
    }
    double v = std::get<double>(cell);
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (v == 0) {
        v = 0;  // drop the sign of negative zero
    }
    return exact ? fmt::format("{:.17g}", v) : fmt::format("{:.10g}", v);
}

std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

std::string render_table(const Report &r, const std::string &command) {
    std::string out = "ghzsim " + command + "\n";
    for (const auto &b : r.banners) {
        out += "\n" + b + "\n";
    }
    for (const auto &t : r.tables) {
        std::vector<std::vector<std::string>> cells;
        std::vector<std::size_t> width(t.columns.size());
        for (std::size_t c = 0; c < t.columns.size(); c++) {
            width[c] = t.columns[c].size();
        }
        for (const auto &row : t.rows) {
            std::vector<std::string> line;
            for (std::size_t c = 0; c < row.size(); c++) {
                line.push_back(cell_text(row[c], false));
                width[c] = std::max(width[c], line.back().size());
            }
            cells.push_back(std::move(line));
        }
        out += "\n[" + t.name + "]\n";
        auto emit = [&](const std::vector<std::string> &line) {
            std::string text;
            for (std::size_t c = 0; c < line.size(); c++) {
                text += fmt::format("{:>{}}", line[c], width[c]);
                text += c + 1 < line.size() ? "  " : "";
            }
            out += text + "\n";
        };
        emit(t.columns);
        for (const auto &line : cells) {
            emit(line);
        }
    }
    if (!r.meta.empty()) {
        out += "\n";
        std::size_t key_width = 0;
        for (const auto &[k, v] : r.meta) {
            key_width = std::max(key_width, k.size());
        }
        for (const auto &[k, v] : r.meta) {
            out += fmt::format("{:<{}}  {}\n", k, key_width, cell_text(v, false));
        }
    }
    return out;
}

std::string render_csv(const Report &r) {
    std::string out;
    const bool many = r.tables.size() > 1;
    for (const auto &t : r.tables) {
        if (many) {
            out += "# table=" + t.name + "\n";
        }
        for (std::size_t c = 0; c < t.columns.size(); c++) {
            out += csv_escape(t.columns[c]) + (c + 1 < t.columns.size() ? "," : "\n");
        }
        for (const auto &row : t.rows) {
            for (std::size_t c = 0; c < row.size(); c++) {
                out += csv_escape(cell_text(row[c], true)) + (c + 1 < row.size() ? "," : "\n");
            }
        }
    }
    for (const auto &b : r.banners) {
        out += "# note=" + b + "\n";
    }
    for (const auto &[k, v] : r.meta) {
        out += "# " + k + "=" + cell_text(v, true) + "\n";
    }
    return out;
}

std::string render(const Report &r, const std::string &command, OutputFormat format) {
    switch (format) {
        case OutputFormat::Csv:
            return render_csv(r);
        case OutputFormat::Structured: {
            json doc = r.doc;
            doc["command"] = command;
            if (!r.banners.empty()) {
                doc["notes"] = r.banners;
            }
            return doc.dump(2) + "\n";
        }
        case OutputFormat::Table:
            break;
    }
    return render_table(r, command);
}

json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

std::string sign_name(int sign) {
    return sign >= 0 ? "plus" : "minus";
}

std::uint64_t run_seed(const RunConfig &c) {
    return c.protocol.seed.value_or(0);
}

std::string outcome_label(int index) {
    std::string s;
    for (int q = 1; q <= 3; q++) {
        s += qubit_bit(index, q) ? '-' : '+';
    }
    return s;
}

GhzOptions prepare_options(const RunConfig &c, bool include_k13) {
    GhzOptions opts;
    opts.sign = c.protocol.sign;
    opts.include_k13 = include_k13;
    opts.network = c.network;
    return opts;
}

// The state the Mermin and yyy experiments act on.
StateVector experiment_state(const RunConfig &c, const DerivedEnergies &e) {
    if (c.protocol.mode == ProtocolMode::Ideal) {
        return StateVector::ghz(c.protocol.sign);
    }
    return ghz_prepare(e, prepare_options(c, c.protocol.include_k13)).state;
}

void add_protocol_meta(Report &r, const RunConfig &c) {
    r.meta.emplace_back("mode", mode_name(c.protocol.mode));
    r.meta.emplace_back("shots", static_cast<long long>(c.protocol.shots));
    r.meta.emplace_back("seed", static_cast<long long>(run_seed(c)));
    r.doc["mode"] = mode_name(c.protocol.mode);
    r.doc["shots"] = c.protocol.shots;
    r.doc["seed"] = run_seed(c);
}

Report cmd_derive(const RunConfig &c) {
    Report r;
    const auto caps = effective_capacitances(c.network);
    const auto e = derive_energies(c.network, c.settings);
    const auto x = crosstalk_ratio(e);
    const auto t12 = readout_timing_margin(e.k12, c.t_measure_ns);
    const auto t23 = readout_timing_margin(e.k23, c.t_measure_ns);

    r.doc["device"] = {{"c_junction_af", c.network.c_junction},
                       {"c_gate_af", c.network.c_gate},
                       {"c_coupler_af", c.network.c_coupler},
                       {"gate_charge", c.settings.gate_charge},
                       {"flux", c.settings.flux},
                       {"epsilon_j_ghz", c.settings.epsilon_j}};
    r.doc["capacitances"] = {{"c_sigma_af", caps.c_sigma},
                             {"c_tilde_af3", caps.c_tilde},
                             {"c_tilde_sigma_af", caps.c_tilde_sigma},
                             {"c_tilde12_af", finite_or_null(caps.c_tilde12)},
                             {"c_tilde23_af", finite_or_null(caps.c_tilde23)},
                             {"c_tilde13_af", finite_or_null(caps.c_tilde13)}};
    r.doc["energies"] = {{"e_c_ghz", e.e_c},     {"e_j_ghz", e.e_j}, {"ej_max_ghz", e.ej_max},
                         {"k12_ghz", e.k12},     {"k23_ghz", e.k23}, {"k13_ghz", e.k13},
                         {"zeta12", e.zeta12},   {"zeta23", e.zeta23}};
    r.doc["crosstalk"] = {{"k13_over_k12", finite_or_null(x.k13_over_k12)},
                          {"k13_over_k23", finite_or_null(x.k13_over_k23)},
                          {"threshold", kCrosstalkThreshold},
                          {"uncoupled", x.uncoupled},
                          {"neglect_justified", x.neglect_justified}};
    auto timing_json = [](const ReadoutTiming &t) {
        return json{{"t_c_ns", t.t_c_ns}, {"margin", t.margin}, {"acceptable", t.acceptable}};
    };
    r.doc["readout"] = {{"t_measure_ns", c.t_measure_ns}, {"k12", timing_json(t12)}, {"k23", timing_json(t23)}};

    Table q{"qubits", {"qubit", "e_c_ghz", "e_j_ghz", "ej_max_ghz", "c_sigma_af", "c_tilde_sigma_af"}, {}};
    for (int j = 0; j < 3; j++) {
        q.rows.push_back({static_cast<long long>(j + 1), e.e_c[j], e.e_j[j], e.ej_max[j], caps.c_sigma[j],
                          caps.c_tilde_sigma[j]});
    }
    Table k{"couplings", {"pair", "k_ghz", "c_tilde_af", "zeta"}, {}};
    k.rows.push_back({std::string("12"), e.k12, caps.c_tilde12, e.zeta12});
    k.rows.push_back({std::string("23"), e.k23, caps.c_tilde23, e.zeta23});
    k.rows.push_back({std::string("13"), e.k13, caps.c_tilde13, std::string("")});
    Table t{"readout", {"pair", "k_ghz", "t_c_ns", "t_measure_ns", "margin", "acceptable"}, {}};
    t.rows.push_back({std::string("12"), e.k12, t12.t_c_ns, c.t_measure_ns, t12.margin,
                      std::string(t12.acceptable ? "yes" : "no")});
    t.rows.push_back({std::string("23"), e.k23, t23.t_c_ns, c.t_measure_ns, t23.margin,
                      std::string(t23.acceptable ? "yes" : "no")});
    r.tables = {q, k, t};

    if (x.uncoupled) {
        r.banners.push_back("K13 neglect: device is uncoupled");
    } else if (x.neglect_justified) {
        r.banners.push_back(fmt::format("K13 neglect justified: K13/K12 = {:.6g}, K13/K23 = {:.6g} (both < {:g})",
                                        x.k13_over_k12, x.k13_over_k23, kCrosstalkThreshold));
    } else {
        r.banners.push_back(fmt::format("K13 neglect NOT justified: K13/K12 = {:.6g}, K13/K23 = {:.6g} (limit {:g})",
                                        x.k13_over_k12, x.k13_over_k23, kCrosstalkThreshold));
    }
    r.meta.emplace_back("k13_over_k12", x.k13_over_k12);
    r.meta.emplace_back("k13_over_k23", x.k13_over_k23);
    r.meta.emplace_back("neglect_justified", std::string(x.neglect_justified ? "yes" : "no"));
    return r;
}

json flip_json(const FlipSolution &f) {
    return {{"e_j_ghz", f.e_j},
            {"t_ns", f.t_ns},
            {"gamma_ghz", f.gamma},
            {"m", f.m},
            {"n", f.n},
            {"phase", f.phase == FlipPhase::PlusI ? "+i" : "-i"},
            {"sin_residual", f.sin_residual},
            {"cos_residual", f.cos_residual},
            {"underdriven", f.underdriven}};
}

Report cmd_prepare(const RunConfig &c) {
    Report r;
    const auto e = derive_energies(c.network, c.settings);
    const auto prep = ghz_prepare(e, prepare_options(c, c.protocol.include_k13));

    Table s{"schedule",
            {"step", "label", "duration_ns", "e_c1_ghz", "e_c2_ghz", "e_c3_ghz", "e_j1_ghz", "e_j2_ghz", "e_j3_ghz",
             "flux1", "flux2", "flux3", "n_g1", "n_g2", "n_g3", "fidelity", "fidelity_deficit"},
            {}};
    json steps = json::array();
    for (std::size_t i = 0; i < prep.steps.size(); i++) {
        const auto &st = prep.steps[i];
        std::vector<Cell> row{static_cast<long long>(i + 1), st.label, st.duration_ns};
        for (double v : st.energies.e_c) row.push_back(v);
        for (double v : st.energies.e_j) row.push_back(v);
        for (double v : st.flux) row.push_back(v);
        for (int j = 0; j < 3; j++) {
            row.push_back(st.gate ? Cell(st.gate->gate_charge[j]) : Cell(std::string("")));
        }
        row.push_back(st.fidelity);
        row.push_back(1 - st.fidelity);
        s.rows.push_back(std::move(row));
        json js = {{"label", st.label},        {"duration_ns", st.duration_ns}, {"e_c_ghz", st.energies.e_c},
                   {"e_j_ghz", st.energies.e_j}, {"flux", st.flux},              {"fidelity", st.fidelity},
                   {"fidelity_deficit", 1 - st.fidelity}};
        if (st.gate) {
            js["gate_charge"] = st.gate->gate_charge;
            js["gate_charge_in_range"] = st.gate->in_range;
        }
        steps.push_back(js);
    }
    Table a{"final_state", {"basis", "re", "im", "probability"}, {}};
    json amps = json::array();
    for (int i = 0; i < kDim; i++) {
        Complex v = prep.state.amplitudes()[i];
        double p = std::norm(v);
        if (p > 1e-12) {
            a.rows.push_back({basis_label(i), v.real(), v.imag(), p});
        }
        amps.push_back({v.real(), v.imag()});
    }
    r.tables = {s, a};

    const std::string target = c.protocol.sign >= 0 ? "(|000> + i|111>)/sqrt2" : "(|000> - i|111>)/sqrt2";
    r.doc["target"] = target;
    r.doc["sign"] = sign_name(c.protocol.sign);
    r.doc["include_k13"] = c.protocol.include_k13;
    r.doc["k_ghz"] = {{"k12", e.k12}, {"k23", e.k23}, {"k13", e.k13}};
    r.doc["steps"] = steps;
    r.doc["first_flip"] = flip_json(prep.first_flip);
    r.doc["second_flip"] = flip_json(prep.second_flip);
    r.doc["total_duration_ns"] = prep.schedule.total_duration();
    r.doc["fidelity"] = prep.fidelity;
    r.doc["fidelity_deficit"] = 1 - prep.fidelity;
    r.doc["relative_phase_over_pi"] = prep.relative_phase_over_pi;
    r.doc["final_amplitudes"] = amps;

    r.meta.emplace_back("target", target);
    r.meta.emplace_back("include_k13", std::string(c.protocol.include_k13 ? "yes" : "no"));
    r.meta.emplace_back("total_duration_ns", prep.schedule.total_duration());
    r.meta.emplace_back("fidelity", prep.fidelity);
    r.meta.emplace_back("fidelity_deficit", 1 - prep.fidelity);
    r.meta.emplace_back("relative_phase_over_pi", prep.relative_phase_over_pi);
    return r;
}

Report cmd_timing(const RunConfig &c) {
    Report r;
    const auto e = derive_energies(c.network, c.settings);
    const auto prep = ghz_prepare(e, prepare_options(c, c.protocol.include_k13));

    Table p{"pulses", {"step", "label", "duration_ns", "driven_e_j_ghz", "m", "n", "gamma_ghz", "sin_residual",
                       "cos_residual"},
            {}};
    const auto &s1 = prep.steps.at(0);
    p.rows.push_back({1LL, s1.label, s1.duration_ns, s1.energies.e_j[1], std::string(""), std::string(""),
                      std::string(""), std::string(""), std::string("")});
    const FlipSolution *flips[2] = {&prep.first_flip, &prep.second_flip};
    for (int i = 0; i < 2; i++) {
        const auto &st = prep.steps.at(i + 1);
        const auto &f = *flips[i];
        p.rows.push_back({static_cast<long long>(i + 2), st.label, st.duration_ns, f.e_j, static_cast<long long>(f.m),
                          static_cast<long long>(f.n), f.gamma, f.sin_residual, f.cos_residual});
    }
    const auto t12 = readout_timing_margin(e.k12, c.t_measure_ns);
    const auto t23 = readout_timing_margin(e.k23, c.t_measure_ns);
    Table t{"readout", {"pair", "k_ghz", "t_c_ns", "t_measure_ns", "margin", "acceptable"}, {}};
    t.rows.push_back({std::string("12"), e.k12, t12.t_c_ns, c.t_measure_ns, t12.margin,
                      std::string(t12.acceptable ? "yes" : "no")});
    t.rows.push_back({std::string("23"), e.k23, t23.t_c_ns, c.t_measure_ns, t23.margin,
                      std::string(t23.acceptable ? "yes" : "no")});
    r.tables = {p, t};

    r.doc["superposition"] = {{"e_j2_ghz", s1.energies.e_j[1]}, {"t_ns", s1.duration_ns}};
    r.doc["first_flip"] = flip_json(prep.first_flip);
    r.doc["second_flip"] = flip_json(prep.second_flip);
    r.doc["total_duration_ns"] = prep.schedule.total_duration();
    r.doc["readout"] = {{"t_measure_ns", c.t_measure_ns},
                        {"k12", {{"t_c_ns", t12.t_c_ns}, {"margin", t12.margin}, {"acceptable", t12.acceptable}}},
                        {"k23", {{"t_c_ns", t23.t_c_ns}, {"margin", t23.margin}, {"acceptable", t23.acceptable}}}};
    r.meta.emplace_back("total_duration_ns", prep.schedule.total_duration());
    return r;
}

Report cmd_verify(const RunConfig &c) {
    Report r;
    const auto e = derive_energies(c.network, c.settings);
    ProtocolOutcome out;
    const auto gates = verification_gates(e, c.protocol.mode, c.protocol.include_k13);
    if (c.protocol.state == "mixture") {
        out = verify_mixture({{0.5, StateVector::basis(0)}, {0.5, StateVector::basis(7)}}, gates, c.protocol.mode,
                             c.protocol.shots, run_seed(c));
    } else {
        out = verify_ghz(e, c.protocol.mode, c.protocol.shots, run_seed(c), c.protocol.include_k13);
    }
    Table t{"outer_readout", {"q1q3", "probability", "count"}, {}};
    json probs = json::object();
    json counts = json::object();
    for (int q1 = 0; q1 < 2; q1++) {
        for (int q3 = 0; q3 < 2; q3++) {
            std::string label = fmt::format("{}{}", q1, q3);
            double p = out.probabilities.at(label);
            auto n = static_cast<long long>(out.counts.counts[4 * q1 + q3]);
            t.rows.push_back({label, p, n});
            probs[label] = p;
            counts[label] = n;
        }
    }
    r.tables = {t};
    add_protocol_meta(r, c);
    r.doc["state"] = c.protocol.state;
    r.doc["probabilities"] = probs;
    r.doc["counts"] = counts;
    r.doc["accepted"] = out.counts.shots();
    r.doc["discarded"] = out.discarded;
    r.doc["postselect_probability"] = out.postselect_probability;
    r.doc["tau2_ns"] = gates.tau2_ns;
    r.doc["tau13_ns"] = gates.tau13_ns;
    r.doc["epsilon3_ghz"] = gates.epsilon3;
    r.doc["expectations"] = out.expectations;
    r.meta.emplace_back("state", c.protocol.state);
    r.meta.emplace_back("accepted", static_cast<long long>(out.counts.shots()));
    r.meta.emplace_back("discarded", static_cast<long long>(out.discarded));
    r.meta.emplace_back("postselect_probability", out.postselect_probability);
    r.meta.emplace_back("tau2_ns", gates.tau2_ns);
    r.meta.emplace_back("tau13_ns", gates.tau13_ns);
    for (const auto &[k, v] : out.expectations) {
        r.meta.emplace_back(k, v);
    }
    return r;
}

double sampled_product(const StateVector &state, const std::array<Axis, 3> &axes, std::size_t shots,
                       std::uint64_t seed) {
    auto rec = sample(state, shots, seed, axes);
    long long total = 0;
    for (int i = 0; i < kDim; i++) {
        int parity = qubit_bit(i, 1) ^ qubit_bit(i, 2) ^ qubit_bit(i, 3);
        total += (parity ? -1 : 1) * static_cast<long long>(rec.counts[i]);
    }
    return static_cast<double>(total) / static_cast<double>(shots);
}

Report cmd_mermin(const RunConfig &c) {
    Report r;
    const auto e = derive_energies(c.network, c.settings);
    const auto state = experiment_state(c, e);
    const auto m = mermin_expectations(state);
    const auto lhv = lhv_enumerate();

    struct Row {
        std::string name;
        std::array<Axis, 3> axes;
        double exact;
    };
    const std::vector<Row> rows = {{"A_yxx", {Axis::Y, Axis::X, Axis::X}, m.yxx},
                                   {"A_xyx", {Axis::X, Axis::Y, Axis::X}, m.xyx},
                                   {"A_xxy", {Axis::X, Axis::X, Axis::Y}, m.xxy},
                                   {"A_yyy", {Axis::Y, Axis::Y, Axis::Y}, m.yyy}};
    const bool sampled = c.protocol.shots > 0;
    Table t{"observables", {"observable", "quantum", "lhv"}, {}};
    if (sampled) {
        t.columns = {"observable", "quantum", "sampled", "lhv"};
    }
    json obs = json::object();
    for (std::size_t k = 0; k < rows.size(); k++) {
        const auto &row = rows[k];
        // The three mixed products fix the hidden values; the LHV model then predicts A_yyy = +1.
        long long classical = 1;
        std::vector<Cell> line{row.name, row.exact};
        json entry = {{"quantum", row.exact}, {"lhv", classical}};
        if (sampled) {
            double est = sampled_product(state, row.axes, c.protocol.shots, derive_seed(run_seed(c), k));
            line.push_back(est);
            entry["sampled"] = est;
        }
        line.push_back(classical);
        t.rows.push_back(std::move(line));
        obs[row.name] = entry;
    }
    r.tables = {t};
    add_protocol_meta(r, c);
    r.doc["observables"] = obs;
    r.doc["mermin_sum"] = m.mermin_sum();
    r.doc["lhv"] = {{"total", lhv.total}, {"consistent", lhv.consistent}, {"exceptions", lhv.exceptions},
                    {"prediction_yyy", 1}};
    r.meta.emplace_back("mermin_sum", m.mermin_sum());
    r.meta.emplace_back("lhv_assignments", static_cast<long long>(lhv.total));
    r.meta.emplace_back("lhv_consistent", static_cast<long long>(lhv.consistent));
    r.meta.emplace_back("lhv_exceptions", static_cast<long long>(lhv.exceptions));

    const bool contradiction = m.yyy < 0 && lhv.exceptions == 0;
    r.doc["contradiction"] = contradiction;
    if (contradiction) {
        r.banners.push_back(fmt::format(
            "CONTRADICTION: quantum <A_yyy> = {:.6g}, but all {} local hidden-variable assignments that reproduce "
            "A_yxx = A_xyx = A_xxy = +1 predict A_yyy = +1",
            m.yyy, lhv.consistent));
    }
    return r;
}

Report cmd_yyy(const RunConfig &c) {
    if (c.protocol.shots == 0) {
        throw ConfigError("field 'protocol.shots': yyy needs at least one shot");
    }
    Report r;
    const auto e = derive_energies(c.network, c.settings);
    const auto state = experiment_state(c, e);
    const auto out = yyy_experiment(state, c.protocol.shots, run_seed(c));

    Table t{"histogram", {"outcome", "minus_count", "parity", "probability", "count", "frequency"}, {}};
    json hist = json::array();
    long long even = 0;
    for (int i = 0; i < kDim; i++) {
        std::string label = outcome_label(i);
        int minus = minus_count(i);
        auto n = static_cast<long long>(out.counts.counts[i]);
        double p = out.probabilities.at(label);
        double freq = static_cast<double>(n) / static_cast<double>(c.protocol.shots);
        if (minus % 2 == 0) {
            even += n;
        }
        t.rows.push_back({label, static_cast<long long>(minus), std::string(minus % 2 ? "odd" : "even"), p, n, freq});
        hist.push_back({{"outcome", label}, {"minus_count", minus}, {"probability", p}, {"count", n}});
    }
    r.tables = {t};
    add_protocol_meta(r, c);
    r.doc["histogram"] = hist;
    r.doc["even_minus_count"] = even;
    r.doc["expectations"] = out.expectations;
    r.meta.emplace_back("even_minus_count", even);
    for (const auto &[k, v] : out.expectations) {
        r.meta.emplace_back(k, v);
    }
    return r;
}

template <typename F>
auto parallel_map(std::size_t n, F &&f) {
    using R = decltype(f(std::size_t{0}));
    std::vector<std::future<R>> futures;
    futures.reserve(n);
    for (std::size_t i = 0; i < n; i++) {
        futures.push_back(std::async(std::launch::async, f, i));
    }
    std::vector<R> results;
    results.reserve(n);
    for (auto &fu : futures) {
        results.push_back(fu.get());
    }
    return results;
}

Report cmd_scan(const RunConfig &c) {
    if (!c.scan) {
        throw ConfigError("field 'scan': missing (the scan command needs a parameter grid)");
    }
    const auto &grid = *c.scan;
    c.validate();
    Report r;
    r.doc["parameter"] = grid.parameter;
    r.meta.emplace_back("parameter", grid.parameter);
    json rows = json::array();

    if (grid.parameter == "zeta") {
        auto points = parallel_map(grid.values.size(),
                                   [&](std::size_t i) { return effective_error_scan({grid.values[i]}, grid.model).rows.at(0); });
        std::vector<double> z, lab, dressed;
        Table t{"scan", {"index", "zeta", "tau_ns", "lab_error", "dressed_error"}, {}};
        for (std::size_t i = 0; i < points.size(); i++) {
            const auto &p = points[i];
            t.rows.push_back({static_cast<long long>(i), p.zeta, p.tau_ns, p.lab_error, p.dressed_error});
            rows.push_back({{"index", i}, {"zeta", p.zeta}, {"tau_ns", p.tau_ns}, {"lab_error", p.lab_error},
                            {"dressed_error", p.dressed_error}});
            z.push_back(p.zeta);
            lab.push_back(p.lab_error);
            dressed.push_back(p.dressed_error);
        }
        const std::string model = grid.model == EffectiveModel::Qubit2 ? "qubit2" : "qubits13";
        const double lab_slope = log_log_slope(z, lab);
        const double dressed_slope = log_log_slope(z, dressed);
        r.tables = {t};
        r.doc["model"] = model;
        r.doc["lab_slope"] = lab_slope;
        r.doc["dressed_slope"] = dressed_slope;
        r.meta.emplace_back("model", model);
        r.meta.emplace_back("lab_slope", lab_slope);
        r.meta.emplace_back("dressed_slope", dressed_slope);
    } else if (grid.parameter == "coupler_af") {
        struct Point {
            DerivedEnergies e;
            double ratio;
            double fidelity;
        };
        auto points = parallel_map(grid.values.size(), [&](std::size_t i) {
            RunConfig local = c;
            local.network.c_coupler = {grid.values[i], grid.values[i]};
            local.network.validate();
            auto e = derive_energies(local.network, local.settings);
            auto prep = ghz_prepare(e, prepare_options(local, true));
            return Point{e, crosstalk_ratio(e).k13_over_k12, prep.fidelity};
        });
        Table t{"scan", {"index", "c_coupler_af", "k12_ghz", "k13_ghz", "k13_over_k12", "fidelity", "fidelity_deficit"},
                {}};
        for (std::size_t i = 0; i < points.size(); i++) {
            const auto &p = points[i];
            t.rows.push_back({static_cast<long long>(i), grid.values[i], p.e.k12, p.e.k13, p.ratio, p.fidelity,
                              1 - p.fidelity});
            rows.push_back({{"index", i}, {"c_coupler_af", grid.values[i]}, {"k12_ghz", p.e.k12},
                            {"k13_ghz", p.e.k13}, {"k13_over_k12", p.ratio}, {"fidelity", p.fidelity},
                            {"fidelity_deficit", 1 - p.fidelity}});
        }
        r.tables = {t};
    } else {
        struct Point {
            double zeta;
            double fidelity;
            double leak;
            double postselect;
            long long sampled_leak;
            long long accepted;
        };
        auto points = parallel_map(grid.values.size(), [&](std::size_t i) {
            RunConfig local = c;
            local.settings.epsilon_j.fill(grid.values[i]);
            auto e = derive_energies(local.network, local.settings);
            auto prep = ghz_prepare(e, prepare_options(local, local.protocol.include_k13));
            auto out = verify_ghz(e, local.protocol.mode, local.protocol.shots, derive_seed(run_seed(local), i),
                                  local.protocol.include_k13);
            auto leak_counts = static_cast<long long>(out.counts.counts[0b000] + out.counts.counts[0b101]);
            return Point{e.zeta12,
                         prep.fidelity,
                         out.probabilities.at("00") + out.probabilities.at("11"),
                         out.postselect_probability,
                         leak_counts,
                         static_cast<long long>(out.counts.shots())};
        });
        Table t{"scan",
                {"index", "epsilon_j_ghz", "zeta12", "fidelity", "verify_leak", "postselect_probability",
                 "sampled_leak", "accepted"},
                {}};
        for (std::size_t i = 0; i < points.size(); i++) {
            const auto &p = points[i];
            t.rows.push_back({static_cast<long long>(i), grid.values[i], p.zeta, p.fidelity, p.leak, p.postselect,
                              p.sampled_leak, p.accepted});
            rows.push_back({{"index", i}, {"epsilon_j_ghz", grid.values[i]}, {"zeta12", p.zeta},
                            {"fidelity", p.fidelity}, {"verify_leak", p.leak},
                            {"postselect_probability", p.postselect}, {"sampled_leak", p.sampled_leak},
                            {"accepted", p.accepted}});
        }
        r.tables = {t};
        add_protocol_meta(r, c);
    }
    r.doc["rows"] = rows;
    r.meta.emplace_back("points", static_cast<long long>(grid.values.size()));
    return r;
}

}  // namespace

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config:
            return kExitConfig;
        case ErrorKind::Infeasible:
            return kExitInfeasible;
        case ErrorKind::Contract:
            return kExitContract;
    }
    return kExitContract;
}

const std::vector<std::string> &command_names() {
    static const std::vector<std::string> names = {"derive", "prepare", "verify", "mermin", "yyy", "scan", "timing"};
    return names;
}

std::string run_command(const std::string &command, const RunConfig &config) {
    config.validate();
    Report r;
    if (command == "derive") {
        r = cmd_derive(config);
    } else if (command == "prepare") {
        r = cmd_prepare(config);
    } else if (command == "verify") {
        r = cmd_verify(config);
    } else if (command == "mermin") {
        r = cmd_mermin(config);
    } else if (command == "yyy") {
        r = cmd_yyy(config);
    } else if (command == "scan") {
        r = cmd_scan(config);
    } else if (command == "timing") {
        r = cmd_timing(config);
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }
    return render(r, command, config.output.format);
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Three-qubit GHZ preparation and verification on capacitively coupled charge qubits", "ghzsim"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> shots;
    std::optional<std::string> mode, sign, format, output;
    bool include_k13 = false;
    app.add_option("--config", config_path, "JSON config file (defaults to the reference device)");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--shots", shots, "number of sampled runs");
    app.add_option("--mode", mode, "gate model")->check(CLI::IsMember({"ideal", "effective", "full"}));
    app.add_flag("--include-k13", include_k13, "keep the next-nearest-neighbour coupling");
    app.add_option("--sign", sign, "GHZ relative phase")->check(CLI::IsMember({"plus", "minus"}));
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"table", "csv", "structured"}));
    app.add_option("--output", output, "write results to this file instead of stdout");
    for (const auto &name : command_names()) {
        app.add_subcommand(name);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig::reference() : load_config(config_path);
        if (seed) config.protocol.seed = *seed;
        if (shots) config.protocol.shots = *shots;
        if (mode) config.protocol.mode = parse_mode(*mode);
        if (include_k13) config.protocol.include_k13 = true;
        if (sign) config.protocol.sign = *sign == "plus" ? +1 : -1;
        if (format) config.output.format = parse_format(*format);
        if (output) config.output.path = *output;

        const std::string command = app.get_subcommands().front()->get_name();
        const std::string text = run_command(command, config);
        if (config.output.path) {
            std::ofstream file(*config.output.path, std::ios::binary);
            if (!file) {
                throw ConfigError("cannot open output file '" + *config.output.path + "'");
            }
            file << text;
        } else {
            out << text;
        }
        return kExitOk;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception &e) {
        err << "error: internal: " << e.what() << "\n";
        return kExitContract;
    }
}

}  // namespace ghz
