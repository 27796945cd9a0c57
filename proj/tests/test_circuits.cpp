#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "poe/circuits.hpp"

using namespace poe;

TEST_CASE("XX(0) is the identity") {
    const ComplexMatrix m = gate_matrix(GateSpec{GateKind::XX, 0.0, {0, 1}}, 2);
    CHECK((m - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Y rotation on |0>") {
    const double phi = 2.4;
    const ComplexMatrix y = gate_matrix(GateSpec{GateKind::Y, phi, {0}}, 1);
    ComplexVector ket(2);
    ket << 1, 0;
    const ComplexVector out = y * ket;
    CHECK(out[0].real() == Catch::Approx(std::cos(phi / 2)).margin(1e-15));
    CHECK(out[1].real() == Catch::Approx(std::sin(phi / 2)).margin(1e-15));
    CHECK(std::abs(out[0].imag()) < 1e-15);
    CHECK(std::abs(out[1].imag()) < 1e-15);
}

TEST_CASE("XX(pi) fully transfers |00> to -i|11>") {
    const ComplexMatrix m =
        gate_matrix(GateSpec{GateKind::XX, M_PI, {0, 1}}, 2);
    ComplexVector ket = ComplexVector::Zero(4);
    ket[0] = 1;
    const ComplexVector out = m * ket;
    CHECK(std::abs(out[3] - Complex(0, -1)) < 1e-15);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(out[i]) < 1e-15);
}

TEST_CASE("XX embedding matches the closed form") {
    const double theta = 0.8;
    const ComplexMatrix m =
        gate_matrix(GateSpec{GateKind::XX, theta, {0, 1}}, 2);
    ComplexMatrix sx(2, 2);
    sx << 0, 1, 1, 0;
    const ComplexMatrix closed =
        std::cos(theta / 2) * ComplexMatrix::Identity(4, 4) -
        Complex(0, 1) * std::sin(theta / 2) * kron(sx, sx);
    CHECK((m - closed).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("gate target validation") {
    CHECK_THROWS_AS(gate_matrix(GateSpec{GateKind::XX, 1.0, {0, 0}}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(gate_matrix(GateSpec{GateKind::XX, 1.0, {0, 2}}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(gate_matrix(GateSpec{GateKind::Y, 1.0, {0, 1}}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(gate_matrix(GateSpec{GateKind::X, 0.0, {-1}}, 2),
                    std::invalid_argument);
}

TEST_CASE("cycle_unitary composes in list order") {
    CircuitSpec single;
    single.n_qubits = 2;
    single.gates = {GateSpec{GateKind::XX, 0.7, {0, 1}}};
    CHECK((cycle_unitary(single) - gate_matrix(single.gates[0], 2))
              .cwiseAbs()
              .maxCoeff() == 0.0);

    CircuitSpec two_x;
    two_x.n_qubits = 1;
    two_x.gates = {GateSpec{GateKind::X, 0.0, {0}}, GateSpec{GateKind::X, 0.0, {0}}};
    CHECK((cycle_unitary(two_x) - ComplexMatrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-15);

    // first gate in the list acts first: U = Y * XX for the demo order
    const CircuitSpec demo = demo_circuit();
    const ComplexMatrix expected =
        gate_matrix(demo.gates[1], 2) * gate_matrix(demo.gates[0], 2);
    CHECK((cycle_unitary(demo) - expected).cwiseAbs().maxCoeff() == 0.0);

    CircuitSpec empty;
    empty.n_qubits = 1;
    CHECK_THROWS_AS(cycle_unitary(empty), std::invalid_argument);
}

TEST_CASE("demo circuit shape and unitarity") {
    const CircuitSpec c = demo_circuit();
    CHECK(c.n_qubits == 2);
    CHECK(c.gates.size() == 2);
    CHECK(c.gates[0].kind == GateKind::XX);
    CHECK(c.gates[0].angle == 1.0);
    CHECK(c.gates[1].kind == GateKind::Y);
    CHECK(c.gates[1].angle == 2.4);
    CHECK(unitarity_error(cycle_unitary(c)) < kOracleTol);
}

TEST_CASE("every produced gate matrix is unitary") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        GateSpec g;
        const int kind = static_cast<int>(rng() % 5);
        g.kind = static_cast<GateKind>(kind);
        g.angle = angle(rng);
        if (g.kind == GateKind::XX && n == 1) continue;
        g.targets = {static_cast<int>(rng() % n)};
        if (g.kind == GateKind::XX) {
            int other = static_cast<int>(rng() % n);
            while (other == g.targets[0]) other = static_cast<int>(rng() % n);
            g.targets.push_back(other);
        }
        CHECK(unitarity_error(gate_matrix(g, n)) < kOracleTol);
    }
}

TEST_CASE("state labels") {
    const ComplexVector plus0 = ket_from_label("+0");
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(plus0[0] - Complex(s, 0)) < 1e-15);
    CHECK(std::abs(plus0[2] - Complex(s, 0)) < 1e-15);
    CHECK(std::abs(plus0[1]) < 1e-15);
    CHECK(std::abs(plus0[3]) < 1e-15);

    const ComplexVector minus = ket_from_label("-");
    CHECK(std::abs(minus[1] - Complex(-s, 0)) < 1e-15);

    CHECK_THROWS_AS(ket_from_label("0q"), std::invalid_argument);
    CHECK_THROWS_AS(ket_from_label(""), std::invalid_argument);

    const DensityVector rho = pure_state("00");
    CHECK(rho.dim == 4);
    CHECK(inner(rho, rho) == Catch::Approx(1.0).margin(1e-14));
}
