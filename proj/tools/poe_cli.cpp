// poe — simulate periodically driven registers, derive the weighted
// survival-probability series, and diagnose breaks of unitarity or
// periodicity. All state flows through files; see README for the config
// schema and record-file format.

#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poe/io/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

int classify_exception() {
    try {
        throw;
    } catch (const poe::io::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return poe::io::kExitConfigParse;
    } catch (const poe::io::InsufficientDataError& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return poe::io::kExitInsufficientData;
    } catch (const poe::io::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return poe::io::kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return poe::io::kExitInvariant;
    }
}

void warn_skipped(const std::vector<std::string>& skipped) {
    for (const auto& path : skipped)
        std::cerr << "warning: nothing to plot, skipped '" << path << "'\n";
}

int finish_run(const poe::io::RunArtifacts& art) {
    warn_skipped(poe::io::emit_outputs(art));
    std::cout << "verdict: " << poe::to_string(art.verdict.status) << "\n";
    for (const auto& ev : art.verdict.evidence) std::cout << "  - " << ev << "\n";
    if (art.fit.verdict == poe::PoeVerdict::InsufficientData)
        return poe::io::kExitInsufficientData;
    return poe::io::kExitOk;
}

int cmd_run(const std::string& config_path) {
    const auto cfg = poe::io::load_config(config_path);
    return finish_run(poe::io::execute(cfg));
}

int cmd_analyze(const std::string& record_path, const std::string& window,
                double alpha, const std::string& csv, const std::string& json_path,
                const std::string& svg) {
    poe::FitConfig fit;
    fit.alpha = alpha;
    if (!window.empty()) {
        const auto colon = window.find(':');
        if (colon == std::string::npos)
            throw poe::io::ConfigError("--fit-window must be of the form a:b");
        fit.window = std::make_pair(std::stoi(window.substr(0, colon)),
                                    std::stoi(window.substr(colon + 1)));
    }
    auto art = poe::io::analyze_record(record_path, fit);
    if (!csv.empty()) art.config.outputs.push_back(
        {poe::io::OutputSpec::Kind::Csv, csv});
    if (!json_path.empty()) art.config.outputs.push_back(
        {poe::io::OutputSpec::Kind::Json, json_path});
    if (!svg.empty()) art.config.outputs.push_back(
        {poe::io::OutputSpec::Kind::Svg, svg});
    if (art.config.outputs.empty())
        std::cout << poe::io::build_report(art).dump(2) << "\n";
    else
        warn_skipped(poe::io::emit_outputs(art));
    if (art.fit.verdict == poe::PoeVerdict::InsufficientData)
        return poe::io::kExitInsufficientData;
    return poe::io::kExitOk;
}

int cmd_spectrum(const std::string& config_path, const std::string& out_path) {
    const auto cfg = poe::io::load_config(config_path);
    const auto rep = poe::spectral_report(
        poe::unitary_superop(poe::cycle_unitary(cfg.circuit)),
        poe::io::detail::spectral_state_for(cfg));
    const auto j = poe::io::to_json(rep);
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        poe::io::atomic_write(out_path,
                              [&](std::ostream& os) { os << j.dump(2) << "\n"; });
    return poe::io::kExitOk;
}

int cmd_sweep(const std::string& dir, const std::string& overlay, unsigned jobs) {
    std::vector<fs::path> configs;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json") configs.push_back(entry.path());
    std::sort(configs.begin(), configs.end());
    if (configs.empty()) {
        std::cerr << "no .json configs under '" << dir << "'\n";
        return poe::io::kExitConfigParse;
    }

    std::vector<poe::io::RunArtifacts> results(configs.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < configs.size(); ++i)
            results[i] = poe::io::execute(poe::io::load_config(configs[i].string()));
    } else {
        std::vector<std::future<poe::io::RunArtifacts>> futures;
        futures.reserve(configs.size());
        for (const auto& path : configs)
            futures.push_back(std::async(std::launch::async, [path] {
                return poe::io::execute(poe::io::load_config(path.string()));
            }));
        for (std::size_t i = 0; i < futures.size(); ++i) results[i] = futures[i].get();
    }

    std::vector<std::pair<std::string, std::vector<double>>> overlay_runs;
    int rc = poe::io::kExitOk;
    for (std::size_t i = 0; i < results.size(); ++i) {
        std::cout << configs[i].filename().string() << ": "
                  << poe::to_string(results[i].verdict.status) << "\n";
        warn_skipped(poe::io::emit_outputs(results[i]));
        overlay_runs.emplace_back(configs[i].stem().string(),
                                  results[i].fit.residuals_ppt);
        if (results[i].fit.verdict == poe::PoeVerdict::InsufficientData)
            rc = poe::io::kExitInsufficientData;
    }
    const std::string overlay_path =
        overlay.empty() ? (fs::path(dir) / "overlay.svg").string() : overlay;
    std::ostringstream buf;
    if (poe::io::write_overlay_svg(buf, overlay_runs))
        poe::io::atomic_write(overlay_path,
                              [&](std::ostream& os) { os << buf.str(); });
    else
        std::cerr << "warning: nothing to plot, skipped '" << overlay_path << "'\n";
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic-drive unitarity diagnostics"};
    app.require_subcommand(1);

    std::string config_path, record_path, window, csv, json_path, svg, out_path;
    std::string sweep_dir, overlay;
    double alpha = 0.01;
    unsigned jobs = 1;

    auto* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("config", config_path, "JSON config file")->required();

    auto* analyze = app.add_subcommand("analyze", "diagnose a measurement record");
    analyze->add_option("record", record_path, "record file")->required();
    analyze->add_option("--fit-window", window, "fit window a:b");
    analyze->add_option("--alpha", alpha, "significance level");
    analyze->add_option("--csv", csv, "write series CSV here");
    analyze->add_option("--json", json_path, "write JSON report here");
    analyze->add_option("--svg", svg, "write SVG plot here");

    auto* spectrum = app.add_subcommand("spectrum", "spectral report only");
    spectrum->add_option("config", config_path, "JSON config file")->required();
    spectrum->add_option("--json", out_path, "write report here (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "run every config in a directory");
    sweep->add_option("dir", sweep_dir, "directory of JSON configs")->required();
    sweep->add_option("--overlay", overlay, "residual overlay SVG path");
    sweep->add_option("--jobs", jobs, "parallel config executions");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (analyze->parsed())
            return cmd_analyze(record_path, window, alpha, csv, json_path, svg);
        if (spectrum->parsed()) return cmd_spectrum(config_path, out_path);
        if (sweep->parsed()) return cmd_sweep(sweep_dir, overlay, jobs);
    } catch (...) {
        return classify_exception();
    }
    return poe::io::kExitOk;
}
