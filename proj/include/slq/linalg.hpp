// linalg.hpp — dense complex linear algebra: eigensolver with a fixed phase
// convention, Hermitian exponentials, and tensor-product embeddings.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace slq {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr Complex im{0.0, 1.0};

// ---------- errors ----------

struct calibration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct labeling_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct integration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------- Hermitian eigendecomposition ----------

inline bool is_hermitian(const Matrix& m, double tol = 1e-10) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Make the largest-magnitude entry of each column real and positive.
inline void fix_phases(Matrix& vectors) {
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
        Eigen::Index imax = 0;
        vectors.col(k).cwiseAbs().maxCoeff(&imax);
        const Complex z = vectors(imax, k);
        if (std::abs(z) > 0.0) vectors.col(k) *= std::conj(z) / std::abs(z);
    }
}

struct EigenSystem {
    RealVector values;  // ascending
    Matrix vectors;     // column k ↔ values[k]
};

// Eigendecomposition of a Hermitian matrix. Values ascend; each eigenvector's
// largest-magnitude entry is made real positive so bases are reproducible.
inline EigenSystem eig_herm(const Matrix& m, double herm_tol = 1e-9) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eig_herm: matrix must be square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (!is_hermitian(m, herm_tol * scale))
        throw std::invalid_argument("eig_herm: matrix is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eig_herm: eigensolver failed");
    EigenSystem sys{solver.eigenvalues(), solver.eigenvectors()};
    fix_phases(sys.vectors);
    return sys;
}

// exp(c·M) for Hermitian M via eigendecomposition (exact up to roundoff).
inline Matrix expm_herm(const Matrix& m, Complex c) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) throw std::runtime_error("expm_herm: eigensolver failed");
    const auto& v = solver.eigenvectors();
    Vector phases(m.rows());
    for (Eigen::Index k = 0; k < m.rows(); ++k) phases[k] = std::exp(c * solver.eigenvalues()[k]);
    return v * phases.asDiagonal() * v.adjoint();
}

// ---------- tensor-product spaces ----------

struct TensorSpace {
    std::vector<int> dims;  // subsystem dimensions, leftmost factor first

    int total_dim() const {
        int d = 1;
        for (int x : dims) d *= x;
        return d;
    }
};

// Embed a single-subsystem operator at position `index` (identities elsewhere).
inline Matrix embed(const Matrix& op, const TensorSpace& space, int index) {
    if (index < 0 || index >= static_cast<int>(space.dims.size()))
        throw std::invalid_argument("embed: subsystem index out of range");
    if (op.rows() != space.dims[index] || op.cols() != space.dims[index])
        throw std::invalid_argument("embed: operator dimension mismatch at index " + std::to_string(index));
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < static_cast<int>(space.dims.size()); ++k) {
        const Matrix& factor = (k == index) ? op : Matrix(Matrix::Identity(space.dims[k], space.dims[k]));
        out = Eigen::kroneckerProduct(out, factor).eval();
    }
    return out;
}

// Product basis ket |levels[0], levels[1], ...⟩.
inline Vector basis_ket(const TensorSpace& space, const std::vector<int>& levels) {
    if (levels.size() != space.dims.size()) throw std::invalid_argument("basis_ket: level count mismatch");
    int idx = 0;
    for (size_t k = 0; k < levels.size(); ++k) {
        if (levels[k] < 0 || levels[k] >= space.dims[k])
            throw std::invalid_argument("basis_ket: level out of range");
        idx = idx * space.dims[k] + levels[k];
    }
    Vector v = Vector::Zero(space.total_dim());
    v[idx] = 1.0;
    return v;
}

inline double frobenius(const Matrix& m) { return m.norm(); }

}  // namespace slq
