#pragma once

// Injectable error models: per-cycle amplitude damping, a fixed coherent
// miscalibration of the XX angle, linear per-cycle angle drift, dephasing
// and depolarizing probes, plus SPAM (preparation mixture and detector
// confusion matrix).
//
// Incoherent channels act once per cycle, after the cycle unitary (an
// optional split applies half the damping before and half after).
// Miscalibration is k-independent; drift is not. SPAM never touches the
// cycle channel itself, only the prepared state and the measurement.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "poe/circuits.hpp"
#include "poe/liouville.hpp"

namespace poe {

struct NoNoise {};

struct AmplitudeDamping {
    double t1_in_cycles = 0.0;  // |1> lifetime in units of one cycle
    bool split = false;         // half the damping before, half after
};

struct Miscalibration {
    double delta_theta = 0.0;  // fixed offset added to every XX angle
};

struct Drift {
    double dtheta_per_cycle = 0.0;  // XX angle grows by k * dtheta at cycle k
};

struct Dephasing {
    double p = 0.0;
};

struct Depolarizing {
    double p = 0.0;
};

using NoiseModel = std::variant<NoNoise, AmplitudeDamping, Miscalibration,
                                Drift, Dephasing, Depolarizing>;

/// One term of the preparation-error mixture; an empty gate list is the
/// identity.
struct SpamPrepTerm {
    double probability = 1.0;
    std::vector<GateSpec> gates;
};

/// detector_matrix(i, j) = probability of reporting outcome i given true
/// outcome j; each ROW sums to 1 (fixed orientation, reported
/// distribution is M * q).
struct SpamSpec {
    std::vector<SpamPrepTerm> prep_mixture;  // empty = perfect preparation
    RealMatrix detector_matrix;              // size 0 = perfect detector
};

struct NoiseSpec {
    NoiseModel model = NoNoise{};
    std::optional<SpamSpec> spam;
};

/// Per-cycle decay probability for a |1> lifetime of t1 cycles.
inline double damping_gamma(double t1_in_cycles) {
    if (!(t1_in_cycles > 0.0))
        throw std::invalid_argument("t1 must be positive");
    return -std::expm1(-1.0 / t1_in_cycles);
}

inline void validate_spam(const SpamSpec& spam, int dim) {
    if (!spam.prep_mixture.empty()) {
        double total = 0.0;
        for (const auto& term : spam.prep_mixture) {
            if (term.probability < 0.0 || term.probability > 1.0)
                throw std::invalid_argument("prep mixture probability outside [0,1]");
            total += term.probability;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("prep mixture probabilities must sum to 1");
    }
    const auto& m = spam.detector_matrix;
    if (m.size() != 0) {
        if (m.rows() != dim || m.cols() != dim)
            throw std::invalid_argument("detector matrix has wrong dimension");
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            double row = 0.0;
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                if (m(i, j) < 0.0 || m(i, j) > 1.0)
                    throw std::invalid_argument("detector matrix entry outside [0,1]");
                row += m(i, j);
            }
            if (std::abs(row - 1.0) > 1e-12)
                throw std::invalid_argument("detector matrix rows must sum to 1");
        }
    }
}

namespace detail {

inline std::vector<ComplexMatrix> damping_kraus(double gamma) {
    ComplexMatrix k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
    k1 << 0, std::sqrt(gamma), 0, 0;
    return {k0, k1};
}

inline std::vector<ComplexMatrix> dephasing_kraus(double p) {
    return {std::sqrt(1.0 - p) * ComplexMatrix::Identity(2, 2),
            ComplexMatrix(std::sqrt(p) * pauli_z())};
}

inline std::vector<ComplexMatrix> depolarizing_kraus(double p) {
    ComplexMatrix sy(2, 2);
    sy << 0, Complex(0, -1), Complex(0, 1), 0;
    return {std::sqrt(1.0 - p) * ComplexMatrix::Identity(2, 2),
            ComplexMatrix(std::sqrt(p / 3) * pauli_x()),
            ComplexMatrix(std::sqrt(p / 3) * sy),
            ComplexMatrix(std::sqrt(p / 3) * pauli_z())};
}

/// Same single-qubit Kraus set applied to every qubit of the register.
inline Superoperator per_qubit_channel(const std::vector<ComplexMatrix>& kraus1q,
                                       int n_qubits) {
    Superoperator s = identity_superop(1 << n_qubits);
    for (int q = 0; q < n_qubits; ++q) {
        std::vector<ComplexMatrix> embedded;
        embedded.reserve(kraus1q.size());
        for (const auto& k : kraus1q)
            embedded.push_back(embed_single(k, q, n_qubits));
        s = compose(s, kraus_superop(embedded));
    }
    return s;
}

inline CircuitSpec with_xx_offset(const CircuitSpec& c, double offset) {
    CircuitSpec out = c;
    for (auto& g : out.gates)
        if (g.kind == GateKind::XX) g.angle += offset;
    return out;
}

}  // namespace detail

inline bool is_cycle_dependent(const NoiseSpec& noise) {
    return std::holds_alternative<Drift>(noise.model);
}

/// Full channel for the k-th drive cycle (k counts from 0).
inline Superoperator cycle_channel(const CircuitSpec& circuit,
                                   const NoiseSpec& noise, int k) {
    if (k < 0) throw std::invalid_argument("cycle index must be >= 0");
    if (std::holds_alternative<NoNoise>(noise.model))
        return unitary_superop(cycle_unitary(circuit));
    if (const auto* damp = std::get_if<AmplitudeDamping>(&noise.model)) {
        const Superoperator u = unitary_superop(cycle_unitary(circuit));
        if (damp->split) {
            const double half = -std::expm1(-0.5 / damp->t1_in_cycles);
            const Superoperator d =
                detail::per_qubit_channel(detail::damping_kraus(half), circuit.n_qubits);
            return compose(compose(d, u), d);
        }
        const double gamma = damping_gamma(damp->t1_in_cycles);
        return compose(u, detail::per_qubit_channel(detail::damping_kraus(gamma),
                                                    circuit.n_qubits));
    }
    if (const auto* mis = std::get_if<Miscalibration>(&noise.model))
        return unitary_superop(
            cycle_unitary(detail::with_xx_offset(circuit, mis->delta_theta)));
    if (const auto* drift = std::get_if<Drift>(&noise.model))
        return unitary_superop(cycle_unitary(
            detail::with_xx_offset(circuit, k * drift->dtheta_per_cycle)));
    if (const auto* deph = std::get_if<Dephasing>(&noise.model)) {
        if (deph->p < 0.0 || deph->p > 1.0)
            throw std::invalid_argument("dephasing probability outside [0,1]");
        return compose(unitary_superop(cycle_unitary(circuit)),
                       detail::per_qubit_channel(detail::dephasing_kraus(deph->p),
                                                 circuit.n_qubits));
    }
    if (const auto* depo = std::get_if<Depolarizing>(&noise.model)) {
        if (depo->p < 0.0 || depo->p > 1.0)
            throw std::invalid_argument("depolarizing probability outside [0,1]");
        return compose(unitary_superop(cycle_unitary(circuit)),
                       detail::per_qubit_channel(detail::depolarizing_kraus(depo->p),
                                                 circuit.n_qubits));
    }
    throw std::invalid_argument("unknown noise model");
}

enum class SpamSide { Prep, Measure };

/// Reported outcome distribution under detector confusion: q -> M q.
/// Renormalization is deliberately not applied; with a row-stochastic M
/// the total can deviate from 1.
inline RealVector apply_spam(const RealVector& outcome_probs,
                             const SpamSpec& spam) {
    if (spam.detector_matrix.size() == 0) return outcome_probs;
    if (spam.detector_matrix.cols() != outcome_probs.size())
        throw std::invalid_argument("detector matrix / distribution size mismatch");
    return spam.detector_matrix * outcome_probs;
}

/// Prep side: the convex mixture sum_m p_m U_m rho U_m^dag.
/// Measure side: the effective measurement state <rho|M, i.e. the target
/// with its computational-basis populations pulled back through the
/// detector matrix (diagonal -> M^T diagonal, coherences unchanged); for
/// a basis-state target this is exactly the confused-outcome probe.
inline DensityVector apply_spam(const DensityVector& state, const SpamSpec& spam,
                                SpamSide side, int n_qubits) {
    validate_spam(spam, state.dim);
    if (side == SpamSide::Prep) {
        if (spam.prep_mixture.empty()) return state;
        const ComplexMatrix rho = devectorize(state);
        ComplexMatrix mixed = ComplexMatrix::Zero(state.dim, state.dim);
        for (const auto& term : spam.prep_mixture) {
            ComplexMatrix u = ComplexMatrix::Identity(state.dim, state.dim);
            for (const auto& g : term.gates) u = gate_matrix(g, n_qubits) * u;
            mixed += term.probability * (u * rho * u.adjoint());
        }
        return vectorize(mixed);
    }
    if (spam.detector_matrix.size() == 0) return state;
    ComplexMatrix rho = devectorize(state);
    RealVector diag(state.dim);
    for (int i = 0; i < state.dim; ++i) diag[i] = rho(i, i).real();
    const RealVector pulled = spam.detector_matrix.transpose() * diag;
    for (int i = 0; i < state.dim; ++i) rho(i, i) = pulled[i];
    DensityVector out;
    out.dim = state.dim;
    out.amps.resize(state.amps.size());
    for (int i = 0; i < state.dim; ++i)
        for (int j = 0; j < state.dim; ++j)
            out.amps[i * state.dim + j] = rho(i, j);
    return out;
}

}  // namespace poe
