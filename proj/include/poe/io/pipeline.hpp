#pragma once

// End-to-end pipeline: simulate (or ingest) -> weighted series -> spectral
// prediction (exact mode) -> diagnostics -> emit CSV / JSON / SVG.
// Deterministic: identical (config, seed) produces byte-identical files.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "poe/diagnostics.hpp"
#include "poe/io/config.hpp"
#include "poe/io/csv.hpp"
#include "poe/io/record_file.hpp"
#include "poe/io/report.hpp"
#include "poe/io/svg.hpp"
#include "poe/records.hpp"
#include "poe/spectral.hpp"

namespace poe::io {

struct RunArtifacts {
    ExperimentConfig config;
    PoeRecord record;
    SnSeries series;
    std::optional<SpectralReport> spectral;
    FitReport fit;
    ShapeReport shape;                        // S-kind series only
    std::vector<InequalityViolation> inequality;  // S-kind series only
    VerdictReport verdict;
};

namespace detail {

inline DensityVector initial_state_for(const ExperimentConfig& cfg) {
    if (!cfg.initial_amplitudes.empty()) {
        ComplexVector ket(static_cast<Eigen::Index>(cfg.initial_amplitudes.size()));
        for (std::size_t i = 0; i < cfg.initial_amplitudes.size(); ++i)
            ket[static_cast<Eigen::Index>(i)] = cfg.initial_amplitudes[i];
        const double norm = ket.norm();
        if (norm <= 0.0) throw ConfigError("initial amplitudes are all zero");
        return pure_state(ComplexVector(ket / norm));
    }
    return pure_state(cfg.initial_state);
}

// the state the spectral prediction refers to: rho0 for recurrence,
// rho_pure (x) I/2^(N-d) for subsystem runs
inline DensityVector spectral_state_for(const ExperimentConfig& cfg) {
    if (cfg.mode == RunModeKind::Subsystem) {
        const DensityVector pure = initial_state_for(cfg);
        const int anc_dim = 1 << (cfg.circuit.n_qubits - cfg.subsystem_d);
        const ComplexMatrix block =
            ComplexMatrix::Identity(anc_dim, anc_dim) / static_cast<double>(anc_dim);
        return vectorize(kron(devectorize(pure), block));
    }
    return initial_state_for(cfg);
}

}  // namespace detail

/// Run the configured experiment and all diagnostics; no file I/O.
inline RunArtifacts execute(const ExperimentConfig& cfg) {
    RunArtifacts art;
    art.config = cfg;

    switch (cfg.mode) {
        case RunModeKind::Recurrence: {
            const DensityVector rho0 = detail::initial_state_for(cfg);
            art.record = run_recurrence(cfg.circuit, cfg.noise, rho0, cfg.n_max,
                                        cfg.shots, cfg.seed);
            break;
        }
        case RunModeKind::CrossState: {
            const DensityVector a = pure_state(cfg.cross_a);
            const DensityVector b = pure_state(cfg.cross_b);
            art.record = run_cross_state(cfg.circuit, cfg.noise, a, b, cfg.n_max,
                                         cfg.shots, cfg.seed);
            break;
        }
        case RunModeKind::Subsystem: {
            const DensityVector pure = detail::initial_state_for(cfg);
            if (pure.dim != (1 << cfg.subsystem_d))
                throw ConfigError("subsystem initial state must cover d qubits");
            art.record = run_subsystem(cfg.circuit, cfg.noise, pure, cfg.n_max,
                                       cfg.shots, cfg.seed, cfg.subsystem_mode);
            break;
        }
    }

    art.series = sn_series(art.record);

    if (cfg.shots == 0 && cfg.mode != RunModeKind::CrossState)
        art.spectral = spectral_report(unitary_superop(cycle_unitary(cfg.circuit)),
                                       detail::spectral_state_for(cfg));

    FitConfig fit_cfg = cfg.fit;
    if (!fit_cfg.window) {
        int n_lo = 1;
        if (art.spectral && art.spectral->status == SpectralStatus::Ok)
            n_lo = std::max(1, static_cast<int>(std::ceil(art.spectral->n_star)));
        fit_cfg.window = std::make_pair(n_lo, cfg.n_max);
    }
    art.fit = fit_exponential(art.series, fit_cfg);

    if (art.series.kind == SeriesKind::S) {
        art.shape = shape_check(art.series);
        // exact mode uses the fixed validation tolerance; sampled mode a
        // five-sigma floor from the largest point variance
        double tol = 1e-10;
        if (cfg.shots > 0) {
            double vmax = 0.0;
            for (double v : art.series.variances) vmax = std::max(vmax, v);
            tol = 5.0 * std::sqrt(vmax);
        }
        art.inequality = inequality_check(art.series, tol);
    }
    art.verdict = poe::verdict(art.fit, art.shape, art.inequality, fit_cfg.alpha);
    return art;
}

inline json build_report(const RunArtifacts& art) {
    json j;
    j["series"] = to_json(art.series);
    j["fit"] = to_json(art.fit);
    if (art.series.kind == SeriesKind::S) {
        j["shape"] = to_json(art.shape);
        j["inequality_violations"] = to_json(art.inequality);
    }
    if (art.spectral) j["spectral"] = to_json(*art.spectral);
    j["verdict"] = to_json(art.verdict);
    j["n_max"] = art.record.n_max;
    j["shots"] = art.record.shots;
    j["seed"] = art.record.meta.seed;
    return j;
}

/// Two stacked panels: ln S_n with the fit line, and residuals (ppt).
/// Returns false when there is nothing plottable.
inline bool write_run_svg(std::ostream& out, const SnSeries& s,
                          const FitReport& fit) {
    SvgPanel top;
    top.title = s.kind == SeriesKind::S ? "ln S_n vs n" : "ln T_n vs n";
    top.y_label = s.kind == SeriesKind::S ? "ln S_n" : "ln T_n";
    SvgSeries data;
    data.label = "data";
    for (std::size_t i = 0; i < s.values.size(); ++i)
        if (s.values[i] > 0.0)
            data.points.emplace_back(static_cast<double>(i + 1),
                                     std::log(s.values[i]));
    top.series.push_back(data);
    if (!data.points.empty() && std::isfinite(fit.slope)) {
        SvgSeries line;
        line.label = "fit";
        line.color = "#c03a2b";
        line.line = true;
        line.marker = false;
        for (int n = fit.n_lo; n <= fit.n_hi; ++n)
            line.points.emplace_back(n, fit.intercept + fit.slope * n);
        top.series.push_back(line);
        char ann[96];
        std::snprintf(ann, sizeof ann, "max |data - fit| in window: %.6g ppt",
                      fit.max_window_residual_ppt);
        top.annotation = ann;
    }

    SvgPanel bottom;
    bottom.title = "fit residuals";
    bottom.y_label = "residual (ppt)";
    SvgSeries resid;
    resid.color = "#2a7f3f";
    for (std::size_t i = 0; i < fit.residuals_ppt.size(); ++i)
        resid.points.emplace_back(static_cast<double>(i + 1), fit.residuals_ppt[i]);
    bottom.series.push_back(resid);

    return write_svg(out, {top, bottom});
}

/// Residual overlay across several runs (one curve per noise setting).
inline bool write_overlay_svg(std::ostream& out,
                              const std::vector<std::pair<std::string,
                                                          std::vector<double>>>& runs) {
    static const char* kPalette[] = {"#1f4e8c", "#c03a2b", "#2a7f3f",
                                     "#8e44ad", "#b7950b", "#16767b"};
    SvgPanel panel;
    panel.title = "fit residuals by noise setting";
    panel.y_label = "residual (ppt)";
    int idx = 0;
    for (const auto& [label, residuals] : runs) {
        SvgSeries s;
        s.label = label;
        s.color = kPalette[idx++ % 6];
        s.line = true;
        for (std::size_t i = 0; i < residuals.size(); ++i)
            s.points.emplace_back(static_cast<double>(i + 1), residuals[i]);
        panel.series.push_back(std::move(s));
    }
    return write_svg(out, {panel});
}

/// Emit every configured output; warns (returns the list of skipped
/// paths) when a plot would be empty.
inline std::vector<std::string> emit_outputs(const RunArtifacts& art) {
    std::vector<std::string> skipped;
    for (const auto& out : art.config.outputs) {
        switch (out.kind) {
            case OutputSpec::Kind::Csv:
                atomic_write(out.path, [&](std::ostream& os) {
                    write_series_csv(os, art.series, art.fit);
                });
                break;
            case OutputSpec::Kind::Json:
                atomic_write(out.path, [&](std::ostream& os) {
                    os << build_report(art).dump(2) << "\n";
                });
                break;
            case OutputSpec::Kind::Svg: {
                bool ok = true;
                std::ostringstream buf;
                ok = write_run_svg(buf, art.series, art.fit);
                if (!ok) {
                    skipped.push_back(out.path);
                    break;
                }
                atomic_write(out.path,
                             [&](std::ostream& os) { os << buf.str(); });
                break;
            }
        }
    }
    return skipped;
}

/// Ingest a measurement record file and run the same diagnostics used
/// for simulated data.
inline RunArtifacts analyze_record(const std::string& path, const FitConfig& fit_cfg) {
    RunArtifacts art;
    art.record = ingest(path);
    art.series = sn_series(art.record);
    FitConfig cfg = fit_cfg;
    if (cfg.window &&
        (cfg.window->first < 1 || cfg.window->second > art.record.n_max ||
         cfg.window->first > cfg.window->second))
        throw ConfigError("fit window outside record range");
    art.fit = fit_exponential(art.series, cfg);
    if (art.series.kind == SeriesKind::S) {
        art.shape = shape_check(art.series);
        double vmax = 0.0;
        for (double v : art.series.variances) vmax = std::max(vmax, v);
        const double tol = art.record.shots > 0 ? 5.0 * std::sqrt(vmax) : 1e-10;
        art.inequality = inequality_check(art.series, tol);
    }
    art.verdict = poe::verdict(art.fit, art.shape, art.inequality, cfg.alpha);
    return art;
}

}  // namespace poe::io
