#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "poe/diagnostics.hpp"
#include "poe/spectral.hpp"

using namespace poe;

namespace {

SnSeries synthetic_exponential(double amplitude, double lambda, int n_max) {
    SnSeries s;
    for (int n = 1; n <= n_max; ++n) {
        s.values.push_back(amplitude * std::pow(lambda, n));
        s.variances.push_back(0.0);
    }
    return s;
}

SnSeries demo_series(const NoiseSpec& noise, int n_max = 35) {
    return sn_series(
        run_recurrence(demo_circuit(), noise, pure_state("00"), n_max, 0, 0));
}

FitConfig window(int lo, int hi) {
    FitConfig cfg;
    cfg.window = {lo, hi};
    return cfg;
}

}  // namespace

TEST_CASE("exact exponential input recovers parameters to machine precision") {
    const auto s = synthetic_exponential(0.25, 0.9, 30);
    const auto fit = fit_exponential(s);
    CHECK(fit.exact_mode);
    CHECK(fit.slope == Catch::Approx(std::log(0.9)).margin(1e-12));
    CHECK(fit.intercept == Catch::Approx(std::log(0.25)).margin(1e-12));
    for (double r : fit.residuals_ppt) CHECK(std::abs(r) < 1e-9);
    CHECK(fit.verdict == PoeVerdict::ConsistentWithPoe);
    CHECK_FALSE(fit.p_value.has_value());
}

TEST_CASE("demo-circuit slope matches the spectral prediction") {
    const auto fit = fit_exponential(demo_series(NoiseSpec{}), window(5, 35));
    const auto rep = spectral_report(unitary_superop(cycle_unitary(demo_circuit())),
                                     pure_state("00"));
    CHECK(std::abs(fit.slope - rep.predicted_slope) <
          1e-3 * std::abs(rep.predicted_slope));
}

TEST_CASE("damping inflates fit residuals above the noiseless baseline") {
    const auto base = fit_exponential(demo_series(NoiseSpec{}), window(5, 35));
    NoiseSpec damped;
    damped.model = AmplitudeDamping{20.0};
    const auto noisy = fit_exponential(demo_series(damped), window(5, 35));
    CHECK(noisy.max_window_residual_ppt > base.max_window_residual_ppt);
    CHECK(noisy.max_window_residual_ppt > 1.0);  // tens of ppt in practice
}

TEST_CASE("scale invariance of the fit") {
    const auto s = demo_series(NoiseSpec{});
    SnSeries scaled = s;
    const double c = 3.7;
    for (double& v : scaled.values) v *= c;

    FitConfig cfg = window(5, 35);
    cfg.residuals_relative = true;
    const auto base = fit_exponential(s, cfg);
    const auto shifted = fit_exponential(scaled, cfg);
    CHECK(shifted.slope == Catch::Approx(base.slope).margin(1e-12));
    CHECK(shifted.intercept - base.intercept == Catch::Approx(std::log(c)).margin(1e-12));
    for (std::size_t i = 0; i < base.residuals_ppt.size(); ++i)
        CHECK(shifted.residuals_ppt[i] ==
              Catch::Approx(base.residuals_ppt[i]).margin(1e-6));
}

TEST_CASE("insufficient data verdict") {
    SnSeries s;
    s.values = {0.5, -0.1, -0.2};  // one usable point
    s.variances = {0.0, 0.0, 0.0};
    const auto fit = fit_exponential(s);
    CHECK(fit.verdict == PoeVerdict::InsufficientData);
    CHECK(fit.used_points.empty() == false);
    CHECK(fit.used_points.size() < 3);
}

TEST_CASE("noise-floor points are excluded in sampled mode") {
    SnSeries s = synthetic_exponential(0.25, 0.8, 12);
    for (std::size_t i = 0; i < s.values.size(); ++i) s.variances[i] = 1e-8;
    // the late tail drops below 3 sigma = 3e-4
    const auto fit = fit_exponential(s);
    CHECK_FALSE(fit.exact_mode);
    for (int n : fit.used_points)
        CHECK(s.values[static_cast<std::size_t>(n - 1)] >= 3e-4);
    CHECK(fit.p_value.has_value());
}

TEST_CASE("sampled-mode chi-square flags damped data") {
    NoiseSpec damped;
    damped.model = AmplitudeDamping{10.0};
    const auto series = sn_series(
        run_recurrence(demo_circuit(), damped, pure_state("00"), 25, 100000, 3));
    const auto fit = fit_exponential(series);
    REQUIRE(fit.p_value.has_value());
    CHECK(*fit.p_value < 0.01);
    CHECK(fit.verdict == PoeVerdict::PoeSensitiveErrorDetected);
}

TEST_CASE("sampled-mode clean data stays consistent") {
    const auto series = sn_series(
        run_recurrence(demo_circuit(), NoiseSpec{}, pure_state("00"), 25, 100000, 11));
    const auto fit = fit_exponential(series);
    REQUIRE(fit.p_value.has_value());
    CHECK(fit.verdict == PoeVerdict::ConsistentWithPoe);
}

TEST_CASE("chi-square tail probabilities") {
    CHECK(detail::chi2_p_value(0.0, 4) == Catch::Approx(1.0).margin(1e-12));
    CHECK(detail::chi2_p_value(5.99146, 2) == Catch::Approx(0.05).margin(1e-4));
    CHECK(detail::chi2_p_value(200.0, 4) < 1e-12);
}

TEST_CASE("compare_to_reference") {
    const auto s = demo_series(NoiseSpec{}, 20);
    const auto same = compare_to_reference(s, s);
    for (double d : same.diff_ppt) CHECK(d == 0.0);

    // a fixed over-rotation changes S_n even though both series fit an
    // exponential cleanly
    NoiseSpec miscal;
    miscal.model = Miscalibration{0.1};
    const auto shifted = demo_series(miscal, 20);
    const auto cmp = compare_to_reference(shifted, s);
    double max_diff = 0;
    for (double d : cmp.diff_ppt) max_diff = std::max(max_diff, std::abs(d));
    CHECK(max_diff > 1.0);
    const auto fit = fit_exponential(shifted, window(5, 20));
    CHECK(fit.verdict == PoeVerdict::ConsistentWithPoe);

    SnSeries shorter = s;
    shorter.values.pop_back();
    shorter.variances.pop_back();
    CHECK_THROWS_AS(compare_to_reference(shorter, s), std::invalid_argument);
}

TEST_CASE("sampled series sits within five combined sigmas of exact") {
    const auto exact = demo_series(NoiseSpec{}, 15);
    const auto sampled = sn_series(run_recurrence(demo_circuit(), NoiseSpec{},
                                                  pure_state("00"), 15, 1000000, 19));
    const auto cmp = compare_to_reference(sampled, exact);
    for (std::size_t i = 0; i < cmp.diff_ppt.size(); ++i) {
        const double sigma_ppt = 1000.0 * std::sqrt(cmp.variances[i]);
        CHECK(std::abs(cmp.diff_ppt[i]) <= 5.0 * sigma_ppt + 1e-9);
    }
}

TEST_CASE("shape_check on clean and broken series") {
    CHECK(shape_check(demo_series(NoiseSpec{})).monotonicity_violations.empty());
    CHECK(shape_check(demo_series(NoiseSpec{})).second_difference_violations.empty());

    SnSeries rising;
    rising.values = {0.1, 0.2, 0.3, 0.4};
    rising.variances = {0, 0, 0, 0};
    const auto rep = shape_check(rising);
    CHECK(rep.monotonicity_violations.size() == 3);

    SnSeries tiny;
    tiny.values = {0.1, 0.05};
    tiny.variances = {0, 0};
    CHECK_THROWS_AS(shape_check(tiny), std::invalid_argument);
}

TEST_CASE("slow drift eventually breaks monotonicity") {
    // dtheta = 0.05 per cycle stays monotone-concave through n = 35 but
    // violates monotonicity by n = 60 and positivity from n = 40
    NoiseSpec drift;
    drift.model = Drift{0.05};
    const auto series = demo_series(drift, 60);
    const auto rep = shape_check(series);
    CHECK_FALSE(rep.monotonicity_violations.empty());
    CHECK(rep.monotonicity_violations.front() >= 36);
    CHECK_FALSE(inequality_check(series, 1e-10).empty());

    const auto short_series = demo_series(drift, 35);
    CHECK(shape_check(short_series).monotonicity_violations.empty());
    CHECK(shape_check(short_series).second_difference_violations.empty());
}

TEST_CASE("faster drift violates positivity within 35 cycles") {
    NoiseSpec drift;
    drift.model = Drift{0.1};
    const auto series = demo_series(drift, 35);
    const auto violations = inequality_check(series, 1e-10);
    REQUIRE_FALSE(violations.empty());
    CHECK(violations.front().n == 33);
}

TEST_CASE("sampled shape tolerance follows the point variances") {
    SnSeries s = synthetic_exponential(0.3, 0.95, 10);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        s.variances[i] = 1e-6;
        s.values[i] += (i % 2 ? 1.0 : -1.0) * 1e-3;  // within 3 sigma
    }
    const auto rep = shape_check(s);
    CHECK(rep.monotonicity_violations.empty());
    CHECK(rep.second_difference_violations.empty());
}

TEST_CASE("verdict aggregation") {
    const auto clean_fit = fit_exponential(demo_series(NoiseSpec{}), window(5, 35));
    const auto clean = verdict(clean_fit, ShapeReport{}, {}, 0.01);
    CHECK(clean.status == PoeVerdict::ConsistentWithPoe);
    CHECK(clean.evidence.empty());

    const auto with_ineq =
        verdict(clean_fit, ShapeReport{}, {{2, -0.125}}, 0.01);
    CHECK(with_ineq.status == PoeVerdict::PoeSensitiveErrorDetected);
    REQUIRE(with_ineq.evidence.size() == 1);
    CHECK(with_ineq.evidence[0].find("positivity") != std::string::npos);

    // damped exact run: detection is carried by the fit residual rule
    NoiseSpec damped;
    damped.model = AmplitudeDamping{5.0};
    const auto series = demo_series(damped);
    const auto fit = fit_exponential(series, window(5, 35));
    const auto shape = shape_check(series);
    const auto ineq = inequality_check(series, 1e-10);
    CHECK(shape.monotonicity_violations.empty());
    CHECK(ineq.empty());
    const auto rep = verdict(fit, shape, ineq, 0.01);
    CHECK(rep.status == PoeVerdict::PoeSensitiveErrorDetected);
    REQUIRE_FALSE(rep.evidence.empty());
    CHECK(rep.evidence[0].find("residual") != std::string::npos);
}

TEST_CASE("SPAM shifts the intercept but not the slope") {
    SpamSpec spam;
    spam.prep_mixture = {{0.95, {}}, {0.05, {GateSpec{GateKind::X, 0.0, {0}}}}};
    RealMatrix m1(2, 2);
    m1 << 0.98, 0.02, 0.02, 0.98;
    spam.detector_matrix = kron(ComplexMatrix(m1.cast<Complex>()),
                                ComplexMatrix(m1.cast<Complex>()))
                               .real();
    NoiseSpec noise;
    noise.spam = spam;

    const auto base = fit_exponential(demo_series(NoiseSpec{}), window(5, 35));
    const auto spammed = fit_exponential(demo_series(noise), window(5, 35));
    CHECK(std::abs(spammed.slope - base.slope) <= 1e-6);
    CHECK(std::abs(spammed.intercept - base.intercept) > 0.01);
}
