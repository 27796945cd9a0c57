#pragma once

// Gate construction for the periodically driven register.
// Qubit 0 is the most significant bit of the computational basis index,
// so for two qubits the basis order is |00>, |01>, |10>, |11> with the
// left character belonging to qubit 0.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "poe/liouville.hpp"

namespace poe {

enum class GateKind { XX, Y, X, Z, H };

struct GateSpec {
    GateKind kind = GateKind::X;
    double angle = 0.0;        // radians; unused for X, Z, H
    std::vector<int> targets;  // 2 qubits for XX, 1 otherwise
};

/// One drive cycle: gates applied left-to-right.
struct CircuitSpec {
    int n_qubits = 0;
    std::vector<GateSpec> gates;
};

namespace detail {

inline ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline ComplexMatrix hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix m(2, 2);
    m << s, s, s, -s;
    return m;
}

// exp(-i phi/2 sigma_y) is the real rotation [[c,-s],[s,c]]
inline ComplexMatrix y_rotation(double phi) {
    const double c = std::cos(phi / 2), s = std::sin(phi / 2);
    ComplexMatrix m(2, 2);
    m << c, -s, s, c;
    return m;
}

// embed a single-qubit gate at position q (qubit 0 = leftmost kron factor)
inline ComplexMatrix embed_single(const ComplexMatrix& g, int q, int n_qubits) {
    ComplexMatrix out(1, 1);
    out(0, 0) = 1.0;
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    for (int i = 0; i < n_qubits; ++i) out = kron(out, i == q ? g : id);
    return out;
}

inline void check_targets(const GateSpec& g, int n_qubits) {
    const std::size_t want = (g.kind == GateKind::XX) ? 2 : 1;
    if (g.targets.size() != want)
        throw std::invalid_argument("gate has wrong number of targets");
    for (int t : g.targets)
        if (t < 0 || t >= n_qubits)
            throw std::invalid_argument("gate target outside register");
    if (want == 2 && g.targets[0] == g.targets[1])
        throw std::invalid_argument("XX targets must be distinct");
    if (!std::isfinite(g.angle))
        throw std::invalid_argument("gate angle must be finite");
}

}  // namespace detail

/// Full 2^n x 2^n unitary embedding the gate on its targets.
inline ComplexMatrix gate_matrix(const GateSpec& g, int n_qubits) {
    detail::check_targets(g, n_qubits);
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    switch (g.kind) {
        case GateKind::XX: {
            // exp(-i theta/2 sx_a sx_b) = cos(theta/2) I - i sin(theta/2) sx_a sx_b
            const ComplexMatrix xa =
                detail::embed_single(detail::pauli_x(), g.targets[0], n_qubits);
            const ComplexMatrix xb =
                detail::embed_single(detail::pauli_x(), g.targets[1], n_qubits);
            return std::cos(g.angle / 2) * ComplexMatrix::Identity(dim, dim) -
                   Complex(0, 1) * std::sin(g.angle / 2) * (xa * xb);
        }
        case GateKind::Y:
            return detail::embed_single(detail::y_rotation(g.angle),
                                        g.targets[0], n_qubits);
        case GateKind::X:
            return detail::embed_single(detail::pauli_x(), g.targets[0], n_qubits);
        case GateKind::Z:
            return detail::embed_single(detail::pauli_z(), g.targets[0], n_qubits);
        case GateKind::H:
            return detail::embed_single(detail::hadamard(), g.targets[0], n_qubits);
    }
    throw std::invalid_argument("unknown gate kind");
}

/// Ordered product of the cycle's gates; the first gate in the list acts
/// first (i.e. it is the rightmost factor).
inline ComplexMatrix cycle_unitary(const CircuitSpec& c) {
    if (c.n_qubits < 1) throw std::invalid_argument("register must have qubits");
    if (c.gates.empty()) throw std::invalid_argument("circuit has no gates");
    const Eigen::Index dim = Eigen::Index(1) << c.n_qubits;
    ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
    for (const auto& g : c.gates) u = gate_matrix(g, c.n_qubits) * u;
    return u;
}

/// The two-qubit demo cycle: XX(1.0) on qubits (0,1), then Y(2.4) on
/// qubit 0. Which qubit carries the Y rotation is a free choice; edit the
/// returned spec to move it.
inline CircuitSpec demo_circuit(double theta = 1.0, double phi = 2.4) {
    CircuitSpec c;
    c.n_qubits = 2;
    c.gates = {GateSpec{GateKind::XX, theta, {0, 1}},
               GateSpec{GateKind::Y, phi, {0}}};
    return c;
}

/// Tensor-product ket from a label over {0, 1, +, -}; leftmost character
/// is qubit 0.
inline ComplexVector ket_from_label(const std::string& label) {
    if (label.empty()) throw std::invalid_argument("empty state label");
    const double s = 1.0 / std::sqrt(2.0);
    ComplexVector ket(1);
    ket[0] = 1.0;
    for (char ch : label) {
        ComplexVector q(2);
        switch (ch) {
            case '0': q << 1, 0; break;
            case '1': q << 0, 1; break;
            case '+': q << s, s; break;
            case '-': q << s, -s; break;
            default:
                throw std::invalid_argument(
                    std::string("unknown state label character '") + ch + "'");
        }
        ComplexVector next(ket.size() * 2);
        for (Eigen::Index i = 0; i < ket.size(); ++i) {
            next[2 * i] = ket[i] * q[0];
            next[2 * i + 1] = ket[i] * q[1];
        }
        ket = next;
    }
    return ket;
}

inline DensityVector pure_state(const ComplexVector& ket) {
    const double norm = ket.norm();
    if (std::abs(norm - 1.0) > 1e-8)
        throw std::invalid_argument("ket is not normalized");
    const Eigen::Index n = ket.size();
    ComplexMatrix rho(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            rho(i, j) = ket[i] * std::conj(ket[j]);
    return vectorize(rho);
}

inline DensityVector pure_state(const std::string& label) {
    return pure_state(ket_from_label(label));
}

}  // namespace poe
