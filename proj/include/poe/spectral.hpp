#pragma once

// The Liouville-space operator F = 1/2 - (U_L + U_L^dag)/4 built from a
// unitary cycle channel, its spectrum, and the exact matrix-element
// oracles <rho0|F^n|rho0> and <b|F^n|a>.
//
// For unitary U_L the eigenvalues of F are (1 - cos D)/2 over eigenphase
// differences D of U, so they all lie in [0, 1]; the largest eigenvalue
// visible to the initial state sets the asymptotic decay rate of S_n and
// the second-largest sets how many cycles are needed before single-mode
// dominance (n_star).

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "poe/liouville.hpp"

namespace poe {

enum class SpectralStatus {
    Ok,             // slope and offset well defined
    NoDecayMode,    // largest visible eigenvalue is 0: S_n = 0 for n >= 1
    NoVisibleMode,  // every overlap below cutoff: slope undefined
};

struct SpectralReport {
    std::vector<double> eigenvalues;  // sorted descending
    std::vector<double> overlaps;     // |<rho0|j>|^2, same ordering
    double lambda_max = 0.0;          // largest eigenvalue with visible overlap
    double lambda_max2 = 0.0;         // next distinct visible eigenvalue
    double overlap_max = 0.0;         // overlap mass of the lambda_max cluster
    double overlap_max2 = 0.0;
    double predicted_slope = std::numeric_limits<double>::quiet_NaN();
    double predicted_offset = std::numeric_limits<double>::quiet_NaN();
    double n_star = 0.0;  // cycles until single-mode dominance
    SpectralStatus status = SpectralStatus::Ok;
};

// eigenvalues closer than this are treated as one clustered mode
inline constexpr double kClusterTol = 1e-9;

/// F = 1/2 - (U_L + U_L^dag)/4. Requires a unitary channel; positivity of
/// F is only guaranteed there.
inline Superoperator build_F(const Superoperator& u_super) {
    if (unitarity_error(u_super.entries) > kValidationTol)
        throw std::invalid_argument("build_F: channel is not unitary");
    const Eigen::Index d = u_super.entries.rows();
    Superoperator f;
    f.dim = u_super.dim;
    f.entries = 0.5 * ComplexMatrix::Identity(d, d) -
                0.25 * (u_super.entries + u_super.entries.adjoint());
    f.kind = ChannelKind::General;
    return f;
}

/// Eigendecompose F and predict the decay law for the given initial
/// state. Eigenvalues invisible to rho0 (overlap below cutoff) cannot
/// dominate the series and are excluded from the lambda_max selection;
/// clustered eigenvalues merge their overlap mass.
inline SpectralReport spectral_report(const Superoperator& u_super,
                                      const DensityVector& rho0,
                                      double overlap_cutoff = 1e-12) {
    if (u_super.dim != rho0.dim)
        throw std::invalid_argument("spectral_report: dimension mismatch");
    const Superoperator f = build_F(u_super);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(f.entries);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral_report: eigendecomposition failed");

    const Eigen::Index m = es.eigenvalues().size();
    SpectralReport rep;
    rep.eigenvalues.resize(static_cast<std::size_t>(m));
    rep.overlaps.resize(static_cast<std::size_t>(m));
    // SelfAdjointEigenSolver sorts ascending; store descending
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index src = m - 1 - i;
        rep.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()[src];
        const Complex amp = es.eigenvectors().col(src).dot(rho0.amps);
        rep.overlaps[static_cast<std::size_t>(i)] = std::norm(amp);
    }
    for (double lam : rep.eigenvalues)
        if (lam < -kValidationTol || lam > 1.0 + kValidationTol)
            throw std::runtime_error("spectral_report: eigenvalue outside [0,1]");
    double total_overlap = 0.0;
    for (double o : rep.overlaps) total_overlap += o;
    if (std::abs(total_overlap - inner(rho0, rho0)) > kValidationTol)
        throw std::runtime_error("spectral_report: overlap completeness check failed");

    // cluster in descending order, merging overlap mass
    struct Cluster {
        double lambda;
        double mass;
    };
    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
        if (!clusters.empty() &&
            clusters.back().lambda - rep.eigenvalues[i] < kClusterTol)
            clusters.back().mass += rep.overlaps[i];
        else
            clusters.push_back({rep.eigenvalues[i], rep.overlaps[i]});
    }

    const Cluster* first = nullptr;
    const Cluster* second = nullptr;
    for (const auto& c : clusters) {
        if (c.mass <= overlap_cutoff) continue;
        if (!first)
            first = &c;
        else if (!second) {
            second = &c;
            break;
        }
    }
    if (!first) {
        rep.status = SpectralStatus::NoVisibleMode;
        return rep;
    }
    rep.lambda_max = first->lambda;
    rep.overlap_max = first->mass;
    if (second) {
        rep.lambda_max2 = second->lambda;
        rep.overlap_max2 = second->mass;
    }
    if (rep.lambda_max < 1e-14) {
        rep.status = SpectralStatus::NoDecayMode;  // e.g. U = identity
        return rep;
    }
    rep.predicted_slope = std::log(rep.lambda_max);
    rep.predicted_offset = std::log(rep.overlap_max);
    if (second && second->lambda > 0.0) {
        const double num =
            std::log(std::sqrt(second->mass) / std::sqrt(first->mass));
        const double den = std::log(first->lambda / second->lambda);
        rep.n_star = std::max(0.0, num / den);
    }
    return rep;
}

namespace detail {

inline ComplexVector apply_F_power(const Superoperator& f, ComplexVector v, int n) {
    for (int i = 0; i < n; ++i) v = f.entries * v;
    return v;
}

}  // namespace detail

/// <rho0|F^n|rho0> by n successive matrix-vector products (never an
/// explicit matrix power). Exact reference for sn_from_record.
inline double direct_sn(const Superoperator& u_super, const DensityVector& rho0,
                        int n) {
    if (n < 0) throw std::invalid_argument("direct_sn: n must be >= 0");
    const Superoperator f = build_F(u_super);
    const ComplexVector v = detail::apply_F_power(f, rho0.amps, n);
    const Complex z = rho0.amps.dot(v);
    if (std::abs(z.imag()) > kValidationTol)
        throw std::runtime_error("direct_sn: non-real matrix element");
    return z.real();
}

/// Re <b|F^n|a> for pure states a, b; the imaginary part must vanish
/// (F preserves Hermiticity) and a residue above tolerance signals a
/// vectorization-convention bug.
inline double direct_tn(const Superoperator& u_super, const DensityVector& a,
                        const DensityVector& b, int n) {
    if (n < 0) throw std::invalid_argument("direct_tn: n must be >= 0");
    if (a.dim != b.dim || a.dim != u_super.dim)
        throw std::invalid_argument("direct_tn: dimension mismatch");
    if (std::abs(inner(a, a) - 1.0) > 1e-8 || std::abs(inner(b, b) - 1.0) > 1e-8)
        throw std::invalid_argument("direct_tn: probes must be pure states");
    const Superoperator f = build_F(u_super);
    const ComplexVector v = detail::apply_F_power(f, a.amps, n);
    const Complex z = b.amps.dot(v);
    if (std::abs(z.imag()) > kValidationTol)
        throw std::runtime_error("direct_tn: non-real matrix element");
    return z.real();
}

}  // namespace poe
