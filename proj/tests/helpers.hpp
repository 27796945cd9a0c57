#pragma once

// Shared test utilities: Haar-random unitaries, random states, and the
// frozen reference constants for the two-qubit demo cycle. The constants
// were computed with an independent dense-matrix implementation and are
// re-derived in-test wherever a criterion calls for an oracle.

#include <random>

#include "poe/circuits.hpp"
#include "poe/liouville.hpp"
#include "poe/records.hpp"

namespace poe_test {

using poe::Complex;
using poe::ComplexMatrix;
using poe::ComplexVector;

// |<00|U|00>|^2 for the demo cycle XX(1.0) then Y(2.4) on qubit 0
inline constexpr double kDemoR1 = 0.10112326637182106;
// largest F eigenvalue visible to |00><00|; equals 1 - cos^2(0.5) cos^2(1.2)
inline constexpr double kDemoLambdaMax = 0.8988767336281789;

inline ComplexMatrix random_ginibre(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    return g;
}

// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal
// phases divided out
inline ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
    const ComplexMatrix g = random_ginibre(dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
    }
    return q;
}

inline ComplexVector random_ket(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    ComplexVector ket(dim);
    for (int i = 0; i < dim; ++i) ket[i] = Complex(gauss(rng), gauss(rng));
    ket /= ket.norm();
    return ket;
}

inline poe::DensityVector random_pure_state(int dim, std::mt19937_64& rng) {
    return poe::pure_state(random_ket(dim, rng));
}

// exact recurrence record for an arbitrary unitary, built directly from
// the Liouville primitives (no CircuitSpec involved)
inline poe::PoeRecord exact_record_for_unitary(const ComplexMatrix& u,
                                               const poe::DensityVector& rho0,
                                               int n_max) {
    const poe::Superoperator s = poe::unitary_superop(u);
    poe::PoeRecord rec;
    rec.kind = poe::RecordKind::Recurrence;
    rec.n_max = n_max;
    rec.shots = 0;
    rec.values.resize(static_cast<std::size_t>(n_max) + 1);
    rec.variances.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    poe::DensityVector state = rho0;
    for (int k = 0; k <= n_max; ++k) {
        rec.values[static_cast<std::size_t>(k)] = poe::inner(rho0, state);
        if (k < n_max) state = poe::apply(s, state);
    }
    return rec;
}

}  // namespace poe_test
