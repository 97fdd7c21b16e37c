#include <catch2/catch_amalgamated.hpp>

#include "slq/operators.hpp"

using namespace slq;
using Catch::Approx;

TEST_CASE("bosonic ladder operators") {
    auto b = ops::bosonic_ops(5);
    REQUIRE(b.a(0, 1) == Complex(1.0, 0.0));
    REQUIRE(b.a(3, 4) == Complex(2.0, 0.0));
    REQUIRE((b.a_dag - b.a.adjoint()).norm() == 0.0);
    // number is the exact level counter, matching a†a except nowhere truncated
    REQUIRE((b.number - b.a_dag * b.a).norm() == Approx(0.0).margin(1e-14));
    // truncated commutator: identity except the last diagonal entry (1 − dim)
    Matrix comm = b.a * b.a_dag - b.a_dag * b.a;
    for (int k = 0; k < 4; ++k) REQUIRE(comm(k, k).real() == Approx(1.0));
    REQUIRE(comm(4, 4).real() == Approx(1.0 - 5.0));
}

TEST_CASE("charge basis operators") {
    auto ch = ops::charge_basis_ops(3);
    REQUIRE(ch.n_hat(0, 0) == Complex(-1.0, 0.0));
    REQUIRE(ch.n_hat(2, 2) == Complex(1.0, 0.0));
    // 3×3 tridiagonal cos operator has eigenvalues ∓1/√2, 0
    auto es = eig_herm(ch.cos_phi);
    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE(es.values[0] == Approx(-r));
    REQUIRE(es.values[1] == Approx(0.0).margin(1e-14));
    REQUIRE(es.values[2] == Approx(r));
    REQUIRE_THROWS_AS(ops::charge_basis_ops(4), std::invalid_argument);
}

TEST_CASE("pauli strings") {
    Matrix xz = ops::pauli_string("XZ");
    REQUIRE(xz(0, 2) == Complex(1.0, 0.0));
    REQUIRE(xz(1, 3) == Complex(-1.0, 0.0));
    REQUIRE(xz(2, 0) == Complex(1.0, 0.0));
    auto labels = ops::pauli_labels(2);
    REQUIRE(labels.size() == 16);
    REQUIRE(labels[0] == "II");
    REQUIRE(labels[1] == "IX");
    REQUIRE(labels[15] == "ZZ");
    REQUIRE(ops::pauli('Y')(0, 1) == Complex(0.0, -1.0));
}

TEST_CASE("tensor embeddings and basis kets") {
    TensorSpace sp{{2, 3}};
    REQUIRE(sp.total_dim() == 6);
    Matrix z = ops::pauli('Z');
    Matrix embedded = embed(z, sp, 0);
    REQUIRE(embedded.rows() == 6);
    REQUIRE(embedded(0, 0) == Complex(1.0, 0.0));
    REQUIRE(embedded(3, 3) == Complex(-1.0, 0.0));  // |1⟩⊗|0⟩ picks up −1
    Vector ket = basis_ket(sp, {1, 2});
    REQUIRE(ket[5] == Complex(1.0, 0.0));
    REQUIRE(ket.squaredNorm() == Approx(1.0));
    REQUIRE_THROWS_AS(basis_ket(sp, {2, 0}), std::invalid_argument);
}

TEST_CASE("hermitian eigensolver and phase convention") {
    Matrix h(2, 2);
    h << 1.0, Complex(0.0, -0.5), Complex(0.0, 0.5), -1.0;
    auto es = eig_herm(h);
    REQUIRE(es.values[0] < es.values[1]);
    REQUIRE(es.values[1] == Approx(std::sqrt(1.25)));
    // largest-magnitude entry of each eigenvector is real positive
    for (int k = 0; k < 2; ++k) {
        Eigen::Index imax = 0;
        es.vectors.col(k).cwiseAbs().maxCoeff(&imax);
        REQUIRE(es.vectors(imax, k).imag() == Approx(0.0).margin(1e-14));
        REQUIRE(es.vectors(imax, k).real() > 0.0);
    }
    Matrix skew(2, 2);
    skew << 0.0, 1.0, 2.0, 0.0;
    REQUIRE_THROWS_AS(eig_herm(skew), std::invalid_argument);
}

TEST_CASE("hermitian exponential") {
    Matrix x = ops::pauli('X');
    const double theta = 0.7;
    Matrix u = expm_herm(x, Complex(0.0, -theta));
    REQUIRE(u(0, 0).real() == Approx(std::cos(theta)));
    REQUIRE(u(0, 1).imag() == Approx(-std::sin(theta)));
    REQUIRE((u * u.adjoint() - Matrix::Identity(2, 2)).norm() == Approx(0.0).margin(1e-14));
}
