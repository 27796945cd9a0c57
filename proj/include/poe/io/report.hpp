#pragma once

// JSON report assembly. nlohmann::json keeps object keys sorted, so the
// emitted documents are deterministic for identical inputs.

#include <json.hpp>

#include "poe/diagnostics.hpp"
#include "poe/records.hpp"
#include "poe/spectral.hpp"

namespace poe::io {

using nlohmann::json;

inline json to_json(const FitReport& fit) {
    json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["slope_stderr"] = fit.slope_stderr;
    j["intercept_stderr"] = fit.intercept_stderr;
    j["fit_window"] = {fit.n_lo, fit.n_hi};
    j["used_points"] = fit.used_points;
    j["residuals_ppt"] = fit.residuals_ppt;
    j["max_window_residual_ppt"] = fit.max_window_residual_ppt;
    j["chi2"] = fit.chi2;
    j["dof"] = fit.dof;
    if (fit.p_value) j["p_value"] = *fit.p_value;
    j["exact_mode"] = fit.exact_mode;
    j["verdict"] = to_string(fit.verdict);
    return j;
}

inline json to_json(const ShapeReport& shape) {
    json j;
    j["monotonicity_violations"] = shape.monotonicity_violations;
    j["second_difference_violations"] = shape.second_difference_violations;
    return j;
}

inline json to_json(const std::vector<InequalityViolation>& ineq) {
    json arr = json::array();
    for (const auto& v : ineq) arr.push_back({{"n", v.n}, {"value", v.value}});
    return arr;
}

inline json to_json(const SpectralReport& rep) {
    json j;
    j["eigenvalues"] = rep.eigenvalues;
    j["overlaps"] = rep.overlaps;
    j["lambda_max"] = rep.lambda_max;
    j["lambda_max2"] = rep.lambda_max2;
    j["overlap_max"] = rep.overlap_max;
    j["overlap_max2"] = rep.overlap_max2;
    j["n_star"] = rep.n_star;
    switch (rep.status) {
        case SpectralStatus::Ok:
            j["status"] = "ok";
            j["predicted_slope"] = rep.predicted_slope;
            j["predicted_offset"] = rep.predicted_offset;
            break;
        case SpectralStatus::NoDecayMode: j["status"] = "no_decay_mode"; break;
        case SpectralStatus::NoVisibleMode: j["status"] = "no_visible_mode"; break;
    }
    return j;
}

inline json to_json(const VerdictReport& v) {
    json j;
    j["status"] = to_string(v.status);
    j["evidence"] = v.evidence;
    return j;
}

inline json to_json(const SnSeries& s) {
    json j;
    j["kind"] = s.kind == SeriesKind::S ? "S" : "T";
    j["values"] = s.values;
    j["variances"] = s.variances;
    return j;
}

}  // namespace poe::io
