#pragma once

// Experiment configuration: one human-editable JSON document with a
// versioned schema field. See README for the full schema.

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "poe/diagnostics.hpp"
#include "poe/io/errors.hpp"
#include "poe/noise.hpp"
#include "poe/records.hpp"

namespace poe::io {

using nlohmann::json;

enum class RunModeKind { Recurrence, CrossState, Subsystem };

struct OutputSpec {
    enum class Kind { Csv, Json, Svg };
    Kind kind = Kind::Json;
    std::string path;
};

struct ExperimentConfig {
    CircuitSpec circuit;
    RunModeKind mode = RunModeKind::Recurrence;
    std::string initial_state = "00";       // label form
    std::vector<Complex> initial_amplitudes;  // explicit ket, overrides label
    std::string cross_a = "00", cross_b = "+0";
    int subsystem_d = 1;
    SubsystemMode subsystem_mode = SubsystemMode::DirectMixed;
    NoiseSpec noise;
    int n_max = 35;
    long long shots = 0;  // 0 = exact simulation
    std::uint64_t seed = 0;
    FitConfig fit;
    std::vector<OutputSpec> outputs;
};

namespace detail {

inline GateKind gate_kind_from_string(const std::string& s) {
    if (s == "XX") return GateKind::XX;
    if (s == "Y") return GateKind::Y;
    if (s == "X") return GateKind::X;
    if (s == "Z") return GateKind::Z;
    if (s == "H") return GateKind::H;
    throw ConfigError("unknown gate kind '" + s + "'");
}

inline const char* gate_kind_to_string(GateKind k) {
    switch (k) {
        case GateKind::XX: return "XX";
        case GateKind::Y: return "Y";
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::H: return "H";
    }
    return "?";
}

inline std::vector<GateSpec> parse_gates(const json& arr) {
    std::vector<GateSpec> gates;
    for (const auto& g : arr) {
        GateSpec spec;
        spec.kind = gate_kind_from_string(g.at("kind").get<std::string>());
        if (g.contains("angle")) spec.angle = g.at("angle").get<double>();
        for (const auto& t : g.at("targets")) spec.targets.push_back(t.get<int>());
        gates.push_back(std::move(spec));
    }
    return gates;
}

inline NoiseSpec parse_noise(const json& j) {
    NoiseSpec noise;
    const std::string type = j.value("type", "none");
    if (type == "none") {
        noise.model = NoNoise{};
    } else if (type == "amplitude_damping") {
        AmplitudeDamping d;
        d.t1_in_cycles = j.at("t1_in_cycles").get<double>();
        d.split = j.value("split", false);
        noise.model = d;
    } else if (type == "miscalibration") {
        noise.model = Miscalibration{j.at("delta_theta").get<double>()};
    } else if (type == "drift") {
        noise.model = Drift{j.at("dtheta_per_cycle").get<double>()};
    } else if (type == "dephasing") {
        noise.model = Dephasing{j.at("p").get<double>()};
    } else if (type == "depolarizing") {
        noise.model = Depolarizing{j.at("p").get<double>()};
    } else {
        throw ConfigError("unknown noise type '" + type + "'");
    }
    if (j.contains("spam")) {
        SpamSpec spam;
        const auto& sj = j.at("spam");
        if (sj.contains("prep_mixture")) {
            for (const auto& term : sj.at("prep_mixture")) {
                SpamPrepTerm t;
                t.probability = term.at("probability").get<double>();
                if (term.contains("gates")) t.gates = parse_gates(term.at("gates"));
                spam.prep_mixture.push_back(std::move(t));
            }
        }
        if (sj.contains("detector_matrix")) {
            const auto& rows = sj.at("detector_matrix");
            const auto nrows = rows.size();
            spam.detector_matrix.resize(static_cast<Eigen::Index>(nrows),
                                        static_cast<Eigen::Index>(nrows));
            Eigen::Index i = 0;
            for (const auto& row : rows) {
                if (row.size() != nrows)
                    throw ConfigError("detector_matrix must be square");
                Eigen::Index c = 0;
                for (const auto& x : row)
                    spam.detector_matrix(i, c++) = x.get<double>();
                ++i;
            }
        }
        noise.spam = std::move(spam);
    }
    return noise;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j) {
    try {
        ExperimentConfig cfg;
        if (j.value("schema", 1) != 1)
            throw ConfigError("unsupported config schema version");

        const auto& cj = j.at("circuit");
        cfg.circuit.n_qubits = cj.at("n_qubits").get<int>();
        cfg.circuit.gates = detail::parse_gates(cj.at("gates"));
        if (cfg.circuit.n_qubits < 1 || cfg.circuit.n_qubits > 10)
            throw ConfigError("n_qubits must be in [1, 10]");
        if (cfg.circuit.gates.empty())
            throw ConfigError("circuit needs at least one gate");

        if (j.contains("mode")) {
            const auto& mj = j.at("mode");
            const std::string type = mj.value("type", "recurrence");
            if (type == "recurrence") {
                cfg.mode = RunModeKind::Recurrence;
            } else if (type == "cross_state") {
                cfg.mode = RunModeKind::CrossState;
                cfg.cross_a = mj.at("a").get<std::string>();
                cfg.cross_b = mj.at("b").get<std::string>();
            } else if (type == "subsystem") {
                cfg.mode = RunModeKind::Subsystem;
                cfg.subsystem_d = mj.at("d").get<int>();
                const std::string em = mj.value("emulation", "direct_mixed");
                if (em == "direct_mixed")
                    cfg.subsystem_mode = SubsystemMode::DirectMixed;
                else if (em == "emulated_average")
                    cfg.subsystem_mode = SubsystemMode::EmulatedAverage;
                else
                    throw ConfigError("unknown subsystem emulation '" + em + "'");
            } else {
                throw ConfigError("unknown mode '" + type + "'");
            }
        }

        if (j.contains("initial_state")) {
            const auto& is = j.at("initial_state");
            if (is.is_string()) {
                cfg.initial_state = is.get<std::string>();
            } else if (is.is_array()) {
                for (const auto& amp : is) {
                    if (amp.is_number())
                        cfg.initial_amplitudes.emplace_back(amp.get<double>(), 0.0);
                    else
                        cfg.initial_amplitudes.emplace_back(amp.at(0).get<double>(),
                                                            amp.at(1).get<double>());
                }
            } else {
                throw ConfigError("initial_state must be a label or amplitude list");
            }
        }

        if (j.contains("noise")) cfg.noise = detail::parse_noise(j.at("noise"));

        cfg.n_max = j.at("n_max").get<int>();
        if (cfg.n_max < 3) throw ConfigError("n_max must be >= 3");
        cfg.shots = j.value("shots", 0LL);
        if (cfg.shots < 0) throw ConfigError("shots must be >= 0");
        if (cfg.shots > 0 && !j.contains("seed"))
            throw ConfigError("seed is required when shots > 0");
        cfg.seed = j.value("seed", 0ULL);

        if (j.contains("fit")) {
            const auto& fj = j.at("fit");
            if (fj.contains("window")) {
                const auto& w = fj.at("window");
                cfg.fit.window = std::make_pair(w.at(0).get<int>(), w.at(1).get<int>());
                if (cfg.fit.window->first < 1 || cfg.fit.window->second > cfg.n_max ||
                    cfg.fit.window->first > cfg.fit.window->second)
                    throw ConfigError("fit window outside [1, n_max]");
            }
            cfg.fit.alpha = fj.value("alpha", 0.01);
            cfg.fit.residual_tol_ppt = fj.value("residual_tol_ppt", 1.0);
            const std::string units = fj.value("residual_units", "absolute");
            if (units == "absolute")
                cfg.fit.residuals_relative = false;
            else if (units == "relative")
                cfg.fit.residuals_relative = true;
            else
                throw ConfigError("residual_units must be absolute or relative");
        }

        if (j.contains("outputs")) {
            for (const auto& oj : j.at("outputs")) {
                OutputSpec out;
                const std::string type = oj.at("type").get<std::string>();
                if (type == "csv")
                    out.kind = OutputSpec::Kind::Csv;
                else if (type == "json")
                    out.kind = OutputSpec::Kind::Json;
                else if (type == "svg")
                    out.kind = OutputSpec::Kind::Svg;
                else
                    throw ConfigError("unknown output type '" + type + "'");
                out.path = oj.at("path").get<std::string>();
                if (out.path.empty()) throw ConfigError("output path is empty");
                cfg.outputs.push_back(std::move(out));
            }
        }
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace poe::io
