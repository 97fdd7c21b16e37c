// operators.hpp — bosonic ladder operators, charge-basis operators for the
// cosine potential, and Pauli strings.
#pragma once

#include "linalg.hpp"

#include <array>
#include <string>

namespace slq::ops {

using slq::Matrix;

struct BosonicOps {
    Matrix a;       // annihilation, a|n⟩ = √n |n−1⟩
    Matrix a_dag;   // creation
    Matrix number;  // a†a (exact diag(0..dim−1), not the truncated product)
};

inline BosonicOps bosonic_ops(int dim) {
    if (dim <= 0) throw std::invalid_argument("bosonic_ops: dim must be > 0");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    Matrix num = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) num(n, n) = n;
    return {a, a.adjoint(), num};
}

struct ChargeOps {
    Matrix n_hat;    // diag(−N..N) for n_charge = 2N+1 states
    Matrix cos_phi;  // ½ Σ (|k⟩⟨k+1| + h.c.)
};

inline ChargeOps charge_basis_ops(int n_charge) {
    if (n_charge <= 0 || n_charge % 2 == 0)
        throw std::invalid_argument("charge_basis_ops: n_charge must be odd and > 0");
    const int N = (n_charge - 1) / 2;
    Matrix n_hat = Matrix::Zero(n_charge, n_charge);
    for (int k = 0; k < n_charge; ++k) n_hat(k, k) = k - N;
    Matrix cp = Matrix::Zero(n_charge, n_charge);
    for (int k = 0; k + 1 < n_charge; ++k) {
        cp(k, k + 1) = 0.5;
        cp(k + 1, k) = 0.5;
    }
    return {n_hat, cp};
}

// ---------- Pauli matrices and strings ----------

inline Matrix pauli(char c) {
    Matrix m(2, 2);
    switch (c) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument(std::string("pauli: unknown label '") + c + "'");
    }
    return m;
}

// Tensor product of single-qubit Paulis, e.g. "IZZI".
inline Matrix pauli_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("pauli_string: empty label");
    Matrix out = pauli(s[0]);
    for (size_t k = 1; k < s.size(); ++k) out = Eigen::kroneckerProduct(out, pauli(s[k])).eval();
    return out;
}

// All 4^n Pauli-string labels in lexicographic I,X,Y,Z order.
inline std::vector<std::string> pauli_labels(int n_qubits) {
    if (n_qubits <= 0 || n_qubits > 8) throw std::invalid_argument("pauli_labels: n_qubits out of range");
    static constexpr std::array<char, 4> letters{'I', 'X', 'Y', 'Z'};
    std::vector<std::string> labels(1, "");
    for (int q = 0; q < n_qubits; ++q) {
        std::vector<std::string> next;
        next.reserve(labels.size() * 4);
        for (const auto& p : labels)
            for (char c : letters) next.push_back(p + c);
        labels = std::move(next);
    }
    return labels;
}

}  // namespace slq::ops
