#pragma once

// Measurement records from periodic driving and the weighted series
// derived from them.
//
// The central identity: with w_0 = C(2n,n)/4^n and
// w_k = 2 (-1)^k C(2n,n-k)/4^n, the combination
//
//     S_n = sum_{k=0..n} w_k R_k
//
// of recurrence probabilities equals <rho0| F^n |rho0> whenever the
// evolution is one fixed unitary per cycle, where
// F = 1/2 - (U_L + U_L^dag)/4 is positive semidefinite. S_n is then
// nonnegative, monotone non-increasing, and asymptotically a single
// exponential. Incoherent noise or cycle-to-cycle parameter drift breaks
// the identity, which is what the diagnostics detect.
//
// The cross-state series T_n applies the same weight vector to
// symmetrized two-way transition probabilities; the k = 0 entry is the
// state overlap <b|a>. T_n equals <b| F^n |a> and shares the exponential
// decay but carries no positivity guarantee.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "poe/circuits.hpp"
#include "poe/liouville.hpp"
#include "poe/noise.hpp"

namespace poe {

enum class RecordKind { Recurrence, CrossState, Subsystem };
enum class SeriesKind { S, T };
enum class SubsystemMode { DirectMixed, EmulatedAverage };

struct RecordMeta {
    std::vector<std::string> state_labels;
    CircuitSpec circuit;
    NoiseSpec noise;
    std::uint64_t seed = 0;
};

/// A measured or simulated series of survival / transition probabilities
/// for k = 0..n_max. shots == 0 means exact simulation (zero variance).
struct PoeRecord {
    RecordKind kind = RecordKind::Recurrence;
    int n_max = 0;
    std::vector<double> values;
    long long shots = 0;
    std::vector<double> variances;
    std::vector<double> forward;  // cross-state raw families; empty otherwise
    std::vector<double> reverse;
    RecordMeta meta;
};

/// Derived S_n (or T_n) values for n = 1..n_max with propagated variances.
struct SnSeries {
    SeriesKind kind = SeriesKind::S;
    std::vector<double> values;
    std::vector<double> variances;
    std::vector<std::vector<double>> weights_used;
};

/// Weight vector (w_0..w_n). No raw factorials: for 2n <= 56 the running
/// binomial coefficient stays below 2^53 and division by 4^n is exact, so
/// small-n weights are bit-exact; larger n starts from lgamma in
/// log-space. Both branches use the ratio recurrence
/// C(2n,n-k-1) = C(2n,n-k) * (n-k)/(n+k+1).
inline std::vector<double> binomial_weights(int n) {
    if (n < 1)
        throw std::invalid_argument("binomial_weights: n must be >= 1 "
                                    "(S_0 = R_0 carries no decay information)");
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    double central;  // C(2n,n)/4^n
    if (2 * n <= 56) {
        double c = 1.0;
        for (int j = 1; j <= n; ++j) c = c * (n + j) / j;  // exact integers
        central = std::ldexp(c, -2 * n);
    } else {
        central = std::exp(std::lgamma(2.0 * n + 1) - 2 * std::lgamma(n + 1.0) -
                           n * std::log(4.0));
    }
    w[0] = central;
    double c = central;
    for (int k = 1; k <= n; ++k) {
        c *= static_cast<double>(n - k + 1) / (n + k);
        w[static_cast<std::size_t>(k)] = (k % 2 == 0 ? 2.0 : -2.0) * c;
    }
    return w;
}

namespace detail {

// fixed-offset seed splitting so measurement families are independent
// but reproducible from one root seed
inline std::uint64_t family_seed(std::uint64_t root, std::uint64_t family) {
    return root ^ (0x9E3779B97F4A7C15ULL * (family + 1));
}

struct PointSampler {
    long long shots = 0;
    std::mt19937_64 rng;

    PointSampler(long long shots_, std::uint64_t seed) : shots(shots_), rng(seed) {}

    // exact mode passes the probability through with zero variance;
    // sampled mode draws counts and reports the binomial variance estimate
    std::pair<double, double> operator()(double p) {
        if (p < -1e-12 || p > 1.0 + 1e-12)
            throw std::runtime_error("probability outside [0,1]");
        p = std::min(1.0, std::max(0.0, p));
        if (shots == 0) return {p, 0.0};
        std::binomial_distribution<long long> dist(shots, p);
        const double v = static_cast<double>(dist(rng)) / shots;
        return {v, v * (1.0 - v) / shots};
    }
};

// evolve `init` and record its overlap with `target` after each cycle
inline void run_family(const CircuitSpec& circuit, const NoiseSpec& noise,
                       const DensityVector& init, const DensityVector& target,
                       int n_max, PointSampler& sampler,
                       std::vector<double>& values, std::vector<double>& variances) {
    values.resize(static_cast<std::size_t>(n_max) + 1);
    variances.resize(static_cast<std::size_t>(n_max) + 1);
    const bool rebuild = is_cycle_dependent(noise);
    Superoperator channel;
    if (!rebuild) channel = cycle_channel(circuit, noise, 0);
    DensityVector state = init;
    for (int k = 0; k <= n_max; ++k) {
        const auto [v, var] = sampler(inner(target, state));
        values[static_cast<std::size_t>(k)] = v;
        variances[static_cast<std::size_t>(k)] = var;
        if (k == n_max) break;
        state = apply(rebuild ? cycle_channel(circuit, noise, k) : channel, state);
    }
}

inline DensityVector prep_side(const DensityVector& rho0, const NoiseSpec& noise,
                               int n_qubits) {
    if (!noise.spam) return rho0;
    return apply_spam(rho0, *noise.spam, SpamSide::Prep, n_qubits);
}

inline DensityVector measure_side(const DensityVector& target,
                                  const NoiseSpec& noise, int n_qubits) {
    if (!noise.spam) return target;
    return apply_spam(target, *noise.spam, SpamSide::Measure, n_qubits);
}

inline void check_pure(const DensityVector& v, const char* who) {
    if (std::abs(inner(v, v) - 1.0) > 1e-8)
        throw std::invalid_argument(std::string(who) +
                                    ": cross-state probes must be pure states");
}

}  // namespace detail

/// Recurrence record: R_k = <rho0|rho_k> with one cycle channel applied
/// per step. R_0 is measured the same way (it probes SPAM error).
inline PoeRecord run_recurrence(const CircuitSpec& circuit, const NoiseSpec& noise,
                                const DensityVector& rho0, int n_max,
                                long long shots, std::uint64_t seed) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (rho0.dim != (1 << circuit.n_qubits))
        throw std::invalid_argument("state dimension does not match circuit");
    PoeRecord rec;
    rec.kind = RecordKind::Recurrence;
    rec.n_max = n_max;
    rec.shots = shots;
    rec.meta = {{"rho0"}, circuit, noise, seed};
    const DensityVector init = detail::prep_side(rho0, noise, circuit.n_qubits);
    const DensityVector target = detail::measure_side(rho0, noise, circuit.n_qubits);
    detail::PointSampler sampler(shots, detail::family_seed(seed, 0));
    detail::run_family(circuit, noise, init, target, n_max, sampler, rec.values,
                       rec.variances);
    return rec;
}

/// Two independently measured transition families between pure states a
/// and b, stored raw and symmetrized: values[k] = (P_k^{a->b} + P_k^{b->a})/2.
/// In hardware terms the forward family is measured in the basis
/// containing b (reached by a basis-change gate) and the reverse family
/// in the basis containing a.
inline PoeRecord run_cross_state(const CircuitSpec& circuit, const NoiseSpec& noise,
                                 const DensityVector& a, const DensityVector& b,
                                 int n_max, long long shots, std::uint64_t seed) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (a.dim != (1 << circuit.n_qubits) || b.dim != a.dim)
        throw std::invalid_argument("state dimensions do not match circuit");
    detail::check_pure(a, "run_cross_state");
    detail::check_pure(b, "run_cross_state");
    PoeRecord rec;
    rec.kind = RecordKind::CrossState;
    rec.n_max = n_max;
    rec.shots = shots;
    rec.meta = {{"a", "b"}, circuit, noise, seed};
    const DensityVector init_a = detail::prep_side(a, noise, circuit.n_qubits);
    const DensityVector init_b = detail::prep_side(b, noise, circuit.n_qubits);
    const DensityVector meas_a = detail::measure_side(a, noise, circuit.n_qubits);
    const DensityVector meas_b = detail::measure_side(b, noise, circuit.n_qubits);
    std::vector<double> var_f, var_r;
    detail::PointSampler fwd(shots, detail::family_seed(seed, 0));
    detail::PointSampler rev(shots, detail::family_seed(seed, 1));
    detail::run_family(circuit, noise, init_a, meas_b, n_max, fwd, rec.forward, var_f);
    detail::run_family(circuit, noise, init_b, meas_a, n_max, rev, rec.reverse, var_r);
    rec.values.resize(rec.forward.size());
    rec.variances.resize(rec.forward.size());
    for (std::size_t k = 0; k < rec.values.size(); ++k) {
        rec.values[k] = 0.5 * (rec.forward[k] + rec.reverse[k]);
        rec.variances[k] = 0.25 * (var_f[k] + var_r[k]);
    }
    return rec;
}

/// Recurrence of rho_pure (x) I/2^(N-d): either run directly on the mixed
/// state, or emulate it with one experiment per computational basis state
/// of the ancilla block and average the records. Both measure against the
/// mixed target, so the 1/2^(N-d) prefactor is part of every value.
inline PoeRecord run_subsystem(const CircuitSpec& circuit, const NoiseSpec& noise,
                               const DensityVector& pure_part, int n_max,
                               long long shots, std::uint64_t seed,
                               SubsystemMode mode) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    int d = 0;
    while ((1 << d) < pure_part.dim) ++d;
    if ((1 << d) != pure_part.dim)
        throw std::invalid_argument("pure part dimension must be a power of 2");
    const int n_qubits = circuit.n_qubits;
    if (d >= n_qubits)
        throw std::invalid_argument("pure part must leave at least one mixed qubit");
    const int n_anc = n_qubits - d;
    const int anc_dim = 1 << n_anc;

    const ComplexMatrix rho_pure = devectorize(pure_part);
    const ComplexMatrix mixed_block =
        ComplexMatrix::Identity(anc_dim, anc_dim) / static_cast<double>(anc_dim);
    const DensityVector rho_m = vectorize(kron(rho_pure, mixed_block));

    PoeRecord rec;
    rec.kind = RecordKind::Subsystem;
    rec.n_max = n_max;
    rec.shots = shots;
    rec.meta = {{"rho_pure"}, circuit, noise, seed};

    if (mode == SubsystemMode::DirectMixed) {
        const DensityVector init = detail::prep_side(rho_m, noise, n_qubits);
        const DensityVector target = detail::measure_side(rho_m, noise, n_qubits);
        detail::PointSampler sampler(shots, detail::family_seed(seed, 0));
        detail::run_family(circuit, noise, init, target, n_max, sampler, rec.values,
                           rec.variances);
        return rec;
    }

    // emulated average: ancilla prepared in each basis state in turn
    const DensityVector target = detail::measure_side(rho_m, noise, n_qubits);
    rec.values.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    rec.variances.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int j = 0; j < anc_dim; ++j) {
        ComplexMatrix anc = ComplexMatrix::Zero(anc_dim, anc_dim);
        anc(j, j) = 1.0;
        const DensityVector prep =
            detail::prep_side(vectorize(kron(rho_pure, anc)), noise, n_qubits);
        std::vector<double> vals, vars;
        detail::PointSampler sampler(shots, detail::family_seed(seed, j));
        detail::run_family(circuit, noise, prep, target, n_max, sampler, vals, vars);
        for (std::size_t k = 0; k < vals.size(); ++k) {
            rec.values[k] += vals[k] / anc_dim;
            rec.variances[k] += vars[k] / (static_cast<double>(anc_dim) * anc_dim);
        }
    }
    return rec;
}

/// (S_n, Var S_n) from the first n+1 record points. Cross-state records
/// produce T_n: identical weighted sum, since their k = 0 value is the
/// overlap <b|a>. Variances combine as sum w_k^2 Var_k (independent
/// points, one experiment family per k).
inline std::pair<double, double> sn_from_record(const PoeRecord& rec, int n) {
    if (n < 1 || n > rec.n_max)
        throw std::invalid_argument("sn_from_record: n outside record range");
    const std::vector<double> w = binomial_weights(n);
    double value = 0.0, variance = 0.0;
    for (int k = 0; k <= n; ++k) {
        value += w[static_cast<std::size_t>(k)] * rec.values[static_cast<std::size_t>(k)];
        variance += w[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(k)] *
                    rec.variances[static_cast<std::size_t>(k)];
    }
    return {value, variance};
}

inline SnSeries sn_series(const PoeRecord& rec) {
    SnSeries s;
    s.kind = rec.kind == RecordKind::CrossState ? SeriesKind::T : SeriesKind::S;
    s.values.reserve(static_cast<std::size_t>(rec.n_max));
    s.variances.reserve(static_cast<std::size_t>(rec.n_max));
    s.weights_used.reserve(static_cast<std::size_t>(rec.n_max));
    for (int n = 1; n <= rec.n_max; ++n) {
        const auto [v, var] = sn_from_record(rec, n);
        s.values.push_back(v);
        s.variances.push_back(var);
        s.weights_used.push_back(binomial_weights(n));
    }
    return s;
}

struct InequalityViolation {
    int n = 0;
    double value = 0.0;
};

/// Every n with S_n < -tol. Only S-kind series carry the positivity
/// guarantee; T_n has none, so asking is rejected.
inline std::vector<InequalityViolation> inequality_check(const SnSeries& s,
                                                         double tol) {
    if (s.kind != SeriesKind::S)
        throw std::invalid_argument(
            "inequality_check: no positivity bound exists for T-kind series");
    std::vector<InequalityViolation> out;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        if (s.values[i] < -tol)
            out.push_back({static_cast<int>(i) + 1, s.values[i]});
    return out;
}

}  // namespace poe
