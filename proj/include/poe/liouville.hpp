#pragma once

// Dense Liouville-space linear algebra: density matrices flattened to
// length-N^2 complex vectors, channels as N^2 x N^2 superoperators.
//
// Conventions fixed for the whole library:
//   * vectorization is the row-major reshape, amps[i*N + j] = rho(i, j)
//   * under that convention the channel rho -> U rho U^dag becomes the
//     matrix kron(U, conj(U)) acting on the flattened state
//   * inner(a, b) = sum_i conj(a_i) b_i = Tr(A^dag B), reported as its
//     real part (the imaginary part must be negligible for valid states)

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace poe {

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// State and channel invariants are enforced at this tolerance.
inline constexpr double kValidationTol = 1e-10;
// Independent oracle computations must agree at this tolerance.
inline constexpr double kOracleTol = 1e-12;

/// Flattened N x N density matrix (row-major) living in Liouville space.
struct DensityVector {
    int dim = 0;         // Hilbert dimension N
    ComplexVector amps;  // length N^2
};

enum class ChannelKind { General, Cptp };

/// N^2 x N^2 map acting on DensityVectors by matrix-vector product.
struct Superoperator {
    int dim = 0;  // Hilbert dimension N; entries is N^2 x N^2
    ComplexMatrix entries;
    ChannelKind kind = ChannelKind::General;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

inline double hermiticity_error(const ComplexMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double unitarity_error(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return (m.adjoint() * m -
            ComplexMatrix::Identity(m.rows(), m.cols()))
        .cwiseAbs()
        .maxCoeff();
}

inline double min_eigenvalue(const ComplexMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian,
                                                    Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline void validate_density_matrix(const ComplexMatrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 1)
        throw std::invalid_argument("density matrix must be square");
    if (!rho.allFinite())
        throw std::invalid_argument("density matrix has non-finite entries");
    if (hermiticity_error(rho) > kValidationTol)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > kValidationTol)
        throw std::invalid_argument("density matrix does not have unit trace");
    if (min_eigenvalue(rho) < -kValidationTol)
        throw std::invalid_argument("density matrix is not positive semidefinite");
}

/// Row-major flatten of a validated density matrix.
inline DensityVector vectorize(const ComplexMatrix& rho) {
    validate_density_matrix(rho);
    const int n = static_cast<int>(rho.rows());
    DensityVector v;
    v.dim = n;
    v.amps.resize(static_cast<Eigen::Index>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v.amps[i * n + j] = rho(i, j);
    return v;
}

/// Exact inverse of vectorize (pure reshape, no validation).
inline ComplexMatrix devectorize(const DensityVector& v) {
    const int n = v.dim;
    if (n < 1 || v.amps.size() != static_cast<Eigen::Index>(n) * n)
        throw std::invalid_argument("density vector length is not dim^2");
    ComplexMatrix rho(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rho(i, j) = v.amps[i * n + j];
    return rho;
}

/// Liouville representation of rho -> U rho U^dag: kron(U, conj(U)).
inline Superoperator unitary_superop(const ComplexMatrix& u) {
    if (unitarity_error(u) > kValidationTol)
        throw std::invalid_argument("matrix is not unitary");
    Superoperator s;
    s.dim = static_cast<int>(u.rows());
    s.entries = kron(u, u.conjugate());
    s.kind = ChannelKind::Cptp;
    return s;
}

/// Channel sum_i K_i rho K_i^dag for a complete Kraus set.
inline Superoperator kraus_superop(const std::vector<ComplexMatrix>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("empty Kraus set");
    const Eigen::Index n = kraus.front().rows();
    ComplexMatrix completeness = ComplexMatrix::Zero(n, n);
    for (const auto& k : kraus) {
        if (k.rows() != n || k.cols() != n)
            throw std::invalid_argument("Kraus operators must share one dimension");
        completeness += k.adjoint() * k;
    }
    if ((completeness - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() >
        kValidationTol)
        throw std::invalid_argument("Kraus set violates completeness");
    Superoperator s;
    s.dim = static_cast<int>(n);
    s.entries = ComplexMatrix::Zero(n * n, n * n);
    for (const auto& k : kraus) s.entries += kron(k, k.conjugate());
    s.kind = ChannelKind::Cptp;
    return s;
}

/// Real part of <a|b> = Tr(A^dag B); throws if the imaginary part is
/// large enough to signal a corrupted state.
inline double inner(const DensityVector& a, const DensityVector& b) {
    if (a.dim != b.dim)
        throw std::invalid_argument("inner: dimension mismatch");
    const Complex z = a.amps.dot(b.amps);  // Eigen conjugates the left side
    if (std::abs(z.imag()) > kValidationTol)
        throw std::runtime_error("inner: non-real overlap, state corrupted");
    return z.real();
}

inline DensityVector apply(const Superoperator& s, const DensityVector& v) {
    if (s.dim != v.dim)
        throw std::invalid_argument("apply: dimension mismatch");
    DensityVector out;
    out.dim = v.dim;
    out.amps = s.entries * v.amps;
    if (s.kind == ChannelKind::Cptp) {
        // CPTP channels must return a valid state
        const ComplexMatrix rho = devectorize(out);
        if (hermiticity_error(rho) > kValidationTol ||
            std::abs(rho.trace() - Complex(1.0)) > kValidationTol ||
            min_eigenvalue(rho) < -kValidationTol)
            throw std::runtime_error("apply: CPTP channel produced an invalid state");
    }
    return out;
}

/// Channel composition: the result applies `first`, THEN `second`.
/// In matrix terms that is second.entries * first.entries (the later
/// channel multiplies from the left).
inline Superoperator compose(const Superoperator& first,
                             const Superoperator& second) {
    if (first.dim != second.dim)
        throw std::invalid_argument("compose: dimension mismatch");
    Superoperator s;
    s.dim = first.dim;
    s.entries = second.entries * first.entries;
    s.kind = (first.kind == ChannelKind::Cptp && second.kind == ChannelKind::Cptp)
                 ? ChannelKind::Cptp
                 : ChannelKind::General;
    return s;
}

inline Superoperator identity_superop(int dim) {
    Superoperator s;
    s.dim = dim;
    s.entries = ComplexMatrix::Identity(static_cast<Eigen::Index>(dim) * dim,
                                        static_cast<Eigen::Index>(dim) * dim);
    s.kind = ChannelKind::Cptp;
    return s;
}

}  // namespace poe
