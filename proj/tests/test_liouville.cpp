#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "poe/liouville.hpp"

using namespace poe;
using poe_test::random_pure_state;
using poe_test::random_unitary;

namespace {

ComplexMatrix basis_projector(int dim, int idx) {
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    rho(idx, idx) = 1.0;
    return rho;
}

ComplexMatrix plus_projector() {
    ComplexMatrix rho(2, 2);
    rho << 0.5, 0.5, 0.5, 0.5;
    return rho;
}

}  // namespace

TEST_CASE("vectorize produces row-major amplitudes") {
    const DensityVector v0 = vectorize(basis_projector(2, 0));
    REQUIRE(v0.dim == 2);
    CHECK(v0.amps[0] == Complex(1, 0));
    CHECK(v0.amps[1] == Complex(0, 0));
    CHECK(v0.amps[2] == Complex(0, 0));
    CHECK(v0.amps[3] == Complex(0, 0));

    const DensityVector mixed = vectorize(ComplexMatrix::Identity(2, 2) * 0.5);
    CHECK(mixed.amps[0] == Complex(0.5, 0));
    CHECK(mixed.amps[3] == Complex(0.5, 0));
    CHECK(mixed.amps[1] == Complex(0, 0));

    const DensityVector plus = vectorize(plus_projector());
    for (int i = 0; i < 4; ++i) CHECK(plus.amps[i] == Complex(0.5, 0));
}

TEST_CASE("vectorize rejects invalid density matrices") {
    ComplexMatrix bad_trace = ComplexMatrix::Identity(2, 2);
    CHECK_THROWS_AS(vectorize(bad_trace), std::invalid_argument);

    ComplexMatrix non_hermitian(2, 2);
    non_hermitian << 0.5, 0.3, 0.0, 0.5;
    CHECK_THROWS_AS(vectorize(non_hermitian), std::invalid_argument);

    ComplexMatrix non_psd(2, 2);
    non_psd << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(vectorize(non_psd), std::invalid_argument);
}

TEST_CASE("devectorize inverts vectorize bit-exactly") {
    CHECK(devectorize(vectorize(basis_projector(2, 0))) == basis_projector(2, 0));
    CHECK(devectorize(vectorize(ComplexMatrix::Identity(2, 2) * 0.5)) ==
          ComplexMatrix(ComplexMatrix::Identity(2, 2) * 0.5));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 1 << (1 + static_cast<int>(rng() % 3));
        const DensityVector v = random_pure_state(dim, rng);
        const DensityVector round = vectorize(devectorize(v));
        REQUIRE(round.amps.size() == v.amps.size());
        for (Eigen::Index i = 0; i < v.amps.size(); ++i)
            CHECK(round.amps[i] == v.amps[i]);  // pure reshape, exact
    }

    DensityVector bad;
    bad.dim = 2;
    bad.amps.resize(3);
    CHECK_THROWS_AS(devectorize(bad), std::invalid_argument);
}

TEST_CASE("unitary_superop identity and bit flip") {
    const Superoperator id = unitary_superop(ComplexMatrix::Identity(2, 2));
    const DensityVector v = vectorize(plus_projector());
    const DensityVector w = apply(id, v);
    CHECK((w.amps - v.amps).cwiseAbs().maxCoeff() == 0.0);

    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    const DensityVector flipped = apply(unitary_superop(x), vectorize(basis_projector(2, 0)));
    CHECK((flipped.amps - vectorize(basis_projector(2, 1)).amps).cwiseAbs().maxCoeff() <
          kOracleTol);
}

TEST_CASE("unitary_superop rejects non-unitary input") {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, 0.5;
    CHECK_THROWS_AS(unitary_superop(m), std::invalid_argument);
}

TEST_CASE("unitary_superop agrees with direct conjugation") {
    // oracle: U rho U^dag computed with plain matrix algebra
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const int dim = 1 << (1 + static_cast<int>(rng() % 3));
        const ComplexMatrix u = random_unitary(dim, rng);
        const DensityVector v = random_pure_state(dim, rng);
        const ComplexMatrix direct = u * devectorize(v) * u.adjoint();
        const DensityVector via_super = apply(unitary_superop(u), v);
        CHECK((devectorize(via_super) - direct).cwiseAbs().maxCoeff() < kOracleTol);
    }
}

TEST_CASE("kraus_superop basics") {
    const Superoperator id =
        kraus_superop({ComplexMatrix(ComplexMatrix::Identity(2, 2))});
    CHECK((id.entries - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    const auto damping = [](double gamma) {
        ComplexMatrix k0(2, 2), k1(2, 2);
        k0 << 1, 0, 0, std::sqrt(1 - gamma);
        k1 << 0, std::sqrt(gamma), 0, 0;
        return std::vector<ComplexMatrix>{k0, k1};
    };

    // full decay: |1><1| -> |0><0|
    const DensityVector one = vectorize(basis_projector(2, 1));
    const DensityVector decayed = apply(kraus_superop(damping(1.0)), one);
    CHECK((decayed.amps - vectorize(basis_projector(2, 0)).amps).cwiseAbs().maxCoeff() <
          kOracleTol);

    // gamma = 0.5: populations (0.5, 0.5)
    const ComplexMatrix half = devectorize(apply(kraus_superop(damping(0.5)), one));
    CHECK(half(0, 0).real() == Catch::Approx(0.5).margin(1e-12));
    CHECK(half(1, 1).real() == Catch::Approx(0.5).margin(1e-12));

    // incomplete Kraus set is rejected
    ComplexMatrix k0(2, 2);
    k0 << 1, 0, 0, 0.5;
    CHECK_THROWS_AS(kraus_superop({k0}), std::invalid_argument);
}

TEST_CASE("inner products of basic states") {
    const DensityVector zero = vectorize(basis_projector(2, 0));
    const DensityVector one = vectorize(basis_projector(2, 1));
    const DensityVector plus = vectorize(plus_projector());
    CHECK(inner(zero, zero) == Catch::Approx(1.0).margin(1e-14));
    CHECK(inner(zero, one) == Catch::Approx(0.0).margin(1e-14));
    CHECK(inner(zero, plus) == Catch::Approx(0.5).margin(1e-14));

    DensityVector small;
    small.dim = 1;
    small.amps.resize(1);
    small.amps[0] = 1.0;
    CHECK_THROWS_AS(inner(zero, small), std::invalid_argument);
}

TEST_CASE("apply twice equals squared-unitary conjugation") {
    const ComplexMatrix u = cycle_unitary(demo_circuit());
    const Superoperator s = unitary_superop(u);
    const DensityVector v0 = pure_state("00");
    const DensityVector twice = apply(s, apply(s, v0));
    const ComplexMatrix u2 = u * u;
    const ComplexMatrix direct = u2 * devectorize(v0) * u2.adjoint();
    CHECK((devectorize(twice) - direct).cwiseAbs().maxCoeff() < kOracleTol);
}

TEST_CASE("compose applies first then second") {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    const Superoperator sx = unitary_superop(x);
    const Superoperator id = identity_superop(2);

    CHECK((compose(sx, id).entries - sx.entries).cwiseAbs().maxCoeff() == 0.0);
    CHECK((compose(sx, sx).entries - id.entries).cwiseAbs().maxCoeff() < kOracleTol);

    // compose(unitary, damping) equals sequential apply calls
    ComplexMatrix k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(0.7);
    k1 << 0, std::sqrt(0.3), 0, 0;
    const Superoperator damp = kraus_superop({k0, k1});
    const DensityVector v = vectorize(plus_projector());
    const DensityVector via_compose = apply(compose(sx, damp), v);
    const DensityVector sequential = apply(damp, apply(sx, v));
    CHECK((via_compose.amps - sequential.amps).cwiseAbs().maxCoeff() < kOracleTol);
}

TEST_CASE("overlap identity against direct trace algebra") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 1 << (1 + static_cast<int>(rng() % 2));
        const ComplexMatrix u = random_unitary(dim, rng);
        const DensityVector v = random_pure_state(dim, rng);
        const ComplexMatrix rho = devectorize(v);
        const double direct = (rho * u * rho * u.adjoint()).trace().real();
        CHECK(inner(v, apply(unitary_superop(u), v)) ==
              Catch::Approx(direct).margin(kOracleTol));
    }
}

TEST_CASE("survival probability identity for pure states") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const int dim = 4;
        const ComplexMatrix u = random_unitary(dim, rng);
        const ComplexVector psi = poe_test::random_ket(dim, rng);
        const DensityVector v0 = pure_state(psi);
        const Superoperator s = unitary_superop(u);
        DensityVector v = v0;
        ComplexVector phi = psi;
        for (int k = 1; k <= 6; ++k) {
            v = apply(s, v);
            phi = u * phi;
            const double amp2 = std::norm(psi.dot(phi));
            CHECK(inner(v0, v) == Catch::Approx(amp2).margin(kOracleTol));
        }
    }
}

TEST_CASE("CPTP channels preserve trace and Hermiticity") {
    std::mt19937_64 rng(53);
    ComplexMatrix k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(0.6);
    k1 << 0, std::sqrt(0.4), 0, 0;
    const Superoperator damp = kraus_superop({k0, k1});
    for (int trial = 0; trial < 10; ++trial) {
        const DensityVector v = random_pure_state(2, rng);
        const ComplexMatrix out = devectorize(apply(damp, v));  // apply validates
        CHECK(std::abs(out.trace() - Complex(1.0)) < kValidationTol);
        CHECK(hermiticity_error(out) < kValidationTol);
    }
}
