#pragma once

// Exponential fits of ln S_n, residual and shape analysis, and the
// overall verdict on whether the data is consistent with unitary
// periodic evolution.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "poe/records.hpp"

namespace poe {

enum class PoeVerdict {
    ConsistentWithPoe,
    PoeSensitiveErrorDetected,
    InsufficientData,
};

struct FitConfig {
    std::optional<std::pair<int, int>> window;  // [n_lo, n_hi]; default full series
    double alpha = 0.01;            // significance for the sampled-mode test
    double residual_tol_ppt = 1.0;  // exact-mode detection threshold
    bool residuals_relative = false;  // ppt relative to the fit instead of absolute
};

struct FitReport {
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    int n_lo = 0, n_hi = 0;
    std::vector<int> used_points;       // n values that entered the fit
    std::vector<double> residuals_ppt;  // per n = 1..n_max, linear space x1000
    double chi2 = 0.0;
    int dof = 0;
    std::optional<double> p_value;  // sampled mode only
    bool exact_mode = true;
    double max_window_residual_ppt = 0.0;
    PoeVerdict verdict = PoeVerdict::InsufficientData;
};

namespace detail {

// regularized upper incomplete gamma Q(a, x): series for x < a+1,
// continued fraction otherwise
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (x == 0.0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a, sum = term, ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

inline double chi2_p_value(double chi2, int dof) {
    return gamma_q(0.5 * dof, 0.5 * chi2);
}

}  // namespace detail

/// Weighted least squares of ln S_n vs n. Points with S_n <= 0 or (in
/// sampled mode) below three standard deviations of the noise floor are
/// excluded. In exact mode the fit is unweighted and detection falls back
/// to the residual threshold, since there is no statistic to test.
inline FitReport fit_exponential(const SnSeries& s, const FitConfig& cfg = {}) {
    const int n_max = static_cast<int>(s.values.size());
    FitReport rep;
    rep.n_lo = cfg.window ? cfg.window->first : 1;
    rep.n_hi = cfg.window ? cfg.window->second : n_max;
    if (rep.n_lo < 1 || rep.n_hi > n_max || rep.n_lo > rep.n_hi)
        throw std::invalid_argument("fit_exponential: window outside series");

    bool sampled = false;
    for (double v : s.variances)
        if (v > 0.0) sampled = true;
    rep.exact_mode = !sampled;

    for (int n = rep.n_lo; n <= rep.n_hi; ++n) {
        const double v = s.values[static_cast<std::size_t>(n - 1)];
        const double var = s.variances[static_cast<std::size_t>(n - 1)];
        if (v <= 0.0) continue;
        if (sampled && v < 3.0 * std::sqrt(var)) continue;  // noise floor
        rep.used_points.push_back(n);
    }
    if (rep.used_points.size() < 3) {
        rep.verdict = PoeVerdict::InsufficientData;
        return rep;
    }

    // normal equations for y = intercept + slope * n with weights
    // 1/Var(ln S) = S^2/Var(S) (all-ones in exact mode)
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (int n : rep.used_points) {
        const double v = s.values[static_cast<std::size_t>(n - 1)];
        const double var = s.variances[static_cast<std::size_t>(n - 1)];
        const double w = sampled ? v * v / var : 1.0;
        const double y = std::log(v);
        sw += w;
        swx += w * n;
        swy += w * y;
        swxx += w * static_cast<double>(n) * n;
        swxy += w * n * y;
    }
    const double det = sw * swxx - swx * swx;
    rep.slope = (sw * swxy - swx * swy) / det;
    rep.intercept = (swxx * swy - swx * swxy) / det;

    if (sampled) {
        // weights are inverse variances, so the parameter covariance is
        // the inverse normal matrix directly
        rep.intercept_stderr = std::sqrt(swxx / det);
        rep.slope_stderr = std::sqrt(sw / det);
    } else {
        double ssr = 0;
        for (int n : rep.used_points) {
            const double r =
                std::log(s.values[static_cast<std::size_t>(n - 1)]) -
                (rep.intercept + rep.slope * n);
            ssr += r * r;
        }
        const double s2 = ssr / (static_cast<double>(rep.used_points.size()) - 2);
        rep.intercept_stderr = std::sqrt(s2 * swxx / det);
        rep.slope_stderr = std::sqrt(s2 * sw / det);
    }

    rep.residuals_ppt.resize(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const double fitted = std::exp(rep.intercept + rep.slope * n);
        const double diff = s.values[static_cast<std::size_t>(n - 1)] - fitted;
        rep.residuals_ppt[static_cast<std::size_t>(n - 1)] =
            (cfg.residuals_relative ? diff / fitted : diff) * 1000.0;
    }
    for (int n : rep.used_points)
        rep.max_window_residual_ppt =
            std::max(rep.max_window_residual_ppt,
                     std::abs(rep.residuals_ppt[static_cast<std::size_t>(n - 1)]));

    rep.dof = static_cast<int>(rep.used_points.size()) - 2;
    if (sampled) {
        for (int n : rep.used_points) {
            const double fitted = std::exp(rep.intercept + rep.slope * n);
            const double diff = s.values[static_cast<std::size_t>(n - 1)] - fitted;
            rep.chi2 += diff * diff / s.variances[static_cast<std::size_t>(n - 1)];
        }
        rep.p_value = detail::chi2_p_value(rep.chi2, rep.dof);
        rep.verdict = (*rep.p_value < cfg.alpha)
                          ? PoeVerdict::PoeSensitiveErrorDetected
                          : PoeVerdict::ConsistentWithPoe;
    } else {
        rep.verdict = (rep.max_window_residual_ppt > cfg.residual_tol_ppt)
                          ? PoeVerdict::PoeSensitiveErrorDetected
                          : PoeVerdict::ConsistentWithPoe;
    }
    return rep;
}

struct SeriesComparison {
    std::vector<double> diff_ppt;  // (measured - reference) x1000 per n
    std::vector<double> variances;
};

inline SeriesComparison compare_to_reference(const SnSeries& measured,
                                             const SnSeries& reference) {
    if (measured.values.size() != reference.values.size())
        throw std::invalid_argument("compare_to_reference: length mismatch");
    SeriesComparison out;
    out.diff_ppt.resize(measured.values.size());
    out.variances.resize(measured.values.size());
    for (std::size_t i = 0; i < measured.values.size(); ++i) {
        out.diff_ppt[i] = (measured.values[i] - reference.values[i]) * 1000.0;
        out.variances[i] = measured.variances[i] + reference.variances[i];
    }
    return out;
}

struct ShapeReport {
    // n such that S_{n+1} - S_n > tol
    std::vector<int> monotonicity_violations;
    // n such that S_{n+1} - 2 S_n + S_{n-1} < -tol
    std::vector<int> second_difference_violations;
};

/// First/second-difference checks: under unitary periodic evolution S_n
/// is non-increasing and its second difference is nonnegative. tol
/// defaults to 1e-10 in exact mode and three combined standard deviations
/// per point in sampled mode.
inline ShapeReport shape_check(const SnSeries& s,
                               std::optional<double> tol = std::nullopt) {
    if (s.values.size() < 3)
        throw std::invalid_argument("shape_check: need at least 3 points");
    bool sampled = false;
    for (double v : s.variances)
        if (v > 0.0) sampled = true;
    ShapeReport rep;
    const auto& v = s.values;
    const auto& var = s.variances;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double t =
            tol ? *tol : (sampled ? 3.0 * std::sqrt(var[i] + var[i + 1]) : 1e-10);
        if (v[i + 1] - v[i] > t)
            rep.monotonicity_violations.push_back(static_cast<int>(i) + 1);
    }
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double t =
            tol ? *tol
                : (sampled ? 3.0 * std::sqrt(var[i + 1] + 4 * var[i] + var[i - 1])
                           : 1e-10);
        if (v[i + 1] - 2 * v[i] + v[i - 1] < -t)
            rep.second_difference_violations.push_back(static_cast<int>(i) + 1);
    }
    return rep;
}

struct VerdictReport {
    PoeVerdict status = PoeVerdict::InsufficientData;
    std::vector<std::string> evidence;
};

/// Combine the three signatures. Any firing signature means detection;
/// an insufficient fit with no other evidence stays insufficient.
inline VerdictReport verdict(const FitReport& fit, const ShapeReport& shape,
                             const std::vector<InequalityViolation>& ineq,
                             double alpha) {
    VerdictReport rep;
    if (fit.verdict == PoeVerdict::PoeSensitiveErrorDetected) {
        std::ostringstream os;
        if (fit.p_value)
            os << "exponential-fit p-value " << *fit.p_value << " below alpha "
               << alpha;
        else
            os << "exponential-fit residual " << fit.max_window_residual_ppt
               << " ppt above threshold (exact mode)";
        rep.evidence.push_back(os.str());
    }
    for (int n : shape.monotonicity_violations) {
        std::ostringstream os;
        os << "monotonicity violation at n=" << n;
        rep.evidence.push_back(os.str());
    }
    for (int n : shape.second_difference_violations) {
        std::ostringstream os;
        os << "second-difference violation at n=" << n;
        rep.evidence.push_back(os.str());
    }
    for (const auto& viol : ineq) {
        std::ostringstream os;
        os << "positivity violation at n=" << viol.n << " (S=" << viol.value << ")";
        rep.evidence.push_back(os.str());
    }
    if (!rep.evidence.empty())
        rep.status = PoeVerdict::PoeSensitiveErrorDetected;
    else if (fit.verdict == PoeVerdict::InsufficientData)
        rep.status = PoeVerdict::InsufficientData;
    else
        rep.status = PoeVerdict::ConsistentWithPoe;
    return rep;
}

inline const char* to_string(PoeVerdict v) {
    switch (v) {
        case PoeVerdict::ConsistentWithPoe: return "consistent_with_POE";
        case PoeVerdict::PoeSensitiveErrorDetected:
            return "POE_sensitive_error_detected";
        case PoeVerdict::InsufficientData: return "insufficient_data";
    }
    return "unknown";
}

}  // namespace poe
