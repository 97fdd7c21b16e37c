// channels.hpp — Pauli-twirled error channels: the process-matrix diagonal of
// a projected error block, the analytic Z-error probability for a shifted
// idle, frequency-shift gate experiments, the four-subsystem simultaneous-gate
// cross-talk analyzer, and the parity-readout error conversion.
#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "slq/gates.hpp"
#include "slq/io.hpp"
#include "slq/linalg.hpp"
#include "slq/models.hpp"

namespace slq::channels {

// ---------- twirled channel ----------

// Pauli-string probabilities of a twirled error block plus the weight that
// left the computational subspace.
struct TwirledChannel {
    std::map<std::string, double> probabilities;
    double leakage = 0.0;

    double total() const {
        double s = leakage;
        for (const auto& [k, v] : probabilities) s += v;
        return s;
    }
};

namespace detail {

inline const std::vector<Matrix>& pauli_2x2() {
    static const std::vector<Matrix> p = [] {
        std::vector<Matrix> m(4, Matrix::Zero(2, 2));
        m[0] = Matrix::Identity(2, 2);
        m[1](0, 1) = m[1](1, 0) = 1.0;                            // X
        m[2](0, 1) = Complex(0, -1), m[2](1, 0) = Complex(0, 1);  // Y
        m[3](0, 0) = 1.0, m[3](1, 1) = -1.0;                      // Z
        return m;
    }();
    return p;
}

constexpr const char* kPauliNames = "IXYZ";

// Pauli on the first two levels of a dim-dimensional subsystem; rows and
// columns beyond the qubit subspace are zero (the identity becomes the
// qubit-subspace projector, so trace overlaps stay confined to qubits).
inline Matrix embedded_pauli(int which, int dim) {
    Matrix p = Matrix::Zero(dim, dim);
    p.topLeftCorner(2, 2) = pauli_2x2()[which];
    return p;
}

}  // namespace detail

// Diagonal of the process matrix in the Pauli basis: Pr(P) = |Tr(P·E)|²/d²
// with E = ideal†·projected the error block on the computational subspace.
// Off-diagonal process elements are discarded (Pauli-twirl approximation);
// the probability deficit is reported as leakage.
inline TwirledChannel chi_diag_twirl(const Matrix& projected, const Matrix& ideal, int n_qubits) {
    if (n_qubits != 1 && n_qubits != 2)
        throw std::invalid_argument("chi_diag_twirl: one or two qubits only");
    const int d = 1 << n_qubits;
    if (projected.rows() != d || projected.cols() != d || ideal.rows() != d || ideal.cols() != d)
        throw std::invalid_argument("chi_diag_twirl: blocks must be d x d with d = 2^n");
    const Matrix e = ideal.adjoint() * projected;
    const auto& sig = detail::pauli_2x2();

    TwirledChannel out;
    if (n_qubits == 1) {
        for (int i = 0; i < 4; ++i) {
            const Complex tr = (sig[i] * e).trace();
            out.probabilities[std::string(1, detail::kPauliNames[i])] = std::norm(tr) / (d * d);
        }
    } else {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const Matrix p = Eigen::kroneckerProduct(sig[i], sig[j]);
                const Complex tr = (p * e).trace();
                const std::string name{detail::kPauliNames[i], detail::kPauliNames[j]};
                out.probabilities[name] = std::norm(tr) / (d * d);
            }
    }
    double sum = 0.0;
    for (const auto& [k, v] : out.probabilities) sum += v;
    out.leakage = 1.0 - sum;
    return out;
}

// ---------- analytic Z-error of a shifted idle ----------

// Z-error probability accumulated by an undressed idle of length T_g under a
// frequency shift of period T_s: exact sin²(π·T_g/T_s) and the small-angle
// limit (π·T_g/T_s)².
struct PzAnalytic {
    double exact = 0.0;
    double small_angle = 0.0;
};

inline PzAnalytic pz_analytic(double T_g, double T_s) {
    if (T_s == 0.0) throw std::invalid_argument("pz_analytic: T_s must be nonzero");
    const double x = slq::pi * T_g / T_s;
    return {std::sin(x) * std::sin(x), x * x};
}

// ---------- frequency-shift gate experiments ----------

enum class ShiftTarget { data = 0, ancilla = 1, coupler = 2 };

struct ShiftResult {
    double avg_infidelity = 0.0;  // against the unshifted run of the same pulse
    TwirledChannel channel;       // twirl of the error block vs the unshifted run
    gates::GateResult shifted;    // raw shifted-gate result
};

// Runs the same gate twice — without and with a constant number-operator
// shift ζ = 2π/T_s on the chosen subsystem — and twirls the relative error
// block.  The unshifted run defines the reference dynamics, so calibration
// residuals cancel and only the shift-induced channel remains.
template <typename Runner>
ShiftResult shift_experiment(Runner&& run, const models::ModelSpec& m, ShiftTarget target,
                             double T_s) {
    if (T_s == 0.0) throw std::invalid_argument("shift_experiment: T_s must be nonzero");
    const double zeta = 2.0 * slq::pi / T_s;
    const gates::GateResult base = run(m);
    const gates::GateResult shifted =
        run(models::shift_injection(m, zeta, static_cast<int>(target)));
    const int n_qubits = base.projected.rows() == 2 ? 1 : 2;

    ShiftResult out;
    out.shifted = shifted;
    out.avg_infidelity = 1.0 - gates::avg_fidelity(shifted.projected, base.projected);
    out.channel = chi_diag_twirl(shifted.projected, base.projected, n_qubits);
    return out;
}

// ---------- simultaneous-gate cross-talk chain ----------

enum class ChainGate { zz, swap02 };

// Exact four-subsystem analysis of two simultaneous pair gates joined by a
// residual middle coupling: U = exp(−iθ(G⁰¹ + G²³ + r·Z¹Z²)) against the
// r = 0 reference U₀.  Pauli-string probabilities are qubit-subspace trace
// overlaps: Pr = |Tr(σ⊗σ⊗σ⊗σ · U₀†U)/2⁴|².
//   swap02 — dims (2,3,2,3), G = |11⟩⟨02| + h.c. on each (qubit, qutrit)
//            pair: a gate whose zeroth-order dynamics already leaves the
//            qubit subspace;
//   zz     — dims (2,2,2,2), G = ZZ on each pair (everything commutes, so
//            only the middle-pair string survives).
inline TwirledChannel crosstalk_chain(ChainGate kind, double theta, double r) {
    if (r < 0.0) throw std::invalid_argument("crosstalk_chain: r must be non-negative");
    const TensorSpace sp{kind == ChainGate::swap02 ? std::vector<int>{2, 3, 2, 3}
                                                   : std::vector<int>{2, 2, 2, 2}};

    // Two-subsystem generator on the adjacent pair (a, a+1), identities
    // elsewhere (pairs are adjacent, so a single Kronecker chain suffices).
    auto pair_gate = [&](int a) -> Matrix {
        const int da = sp.dims[a], db = sp.dims[a + 1];
        Matrix gp;
        if (kind == ChainGate::zz) {
            gp = Eigen::kroneckerProduct(detail::embedded_pauli(3, da),
                                         detail::embedded_pauli(3, db));
        } else {
            auto level_ket = [](int dim, int level) {
                Vector v = Vector::Zero(dim);
                v[level] = 1.0;
                return v;
            };
            const Vector v11 = Eigen::kroneckerProduct(level_ket(da, 1), level_ket(db, 1));
            const Vector v02 = Eigen::kroneckerProduct(level_ket(da, 0), level_ket(db, 2));
            gp = v11 * v02.adjoint() + v02 * v11.adjoint();
        }
        Matrix full = Matrix::Identity(1, 1);
        for (int s = 0; s < static_cast<int>(sp.dims.size());) {
            if (s == a) {
                full = Eigen::kroneckerProduct(full, gp).eval();
                s += 2;
            } else {
                full = Eigen::kroneckerProduct(full, Matrix(Matrix::Identity(sp.dims[s], sp.dims[s])))
                           .eval();
                s += 1;
            }
        }
        return full;
    };

    const Matrix zz_mid = embed(detail::embedded_pauli(3, sp.dims[1]), sp, 1) *
                          embed(detail::embedded_pauli(3, sp.dims[2]), sp, 2);
    const Matrix g = pair_gate(0) + pair_gate(2);

    const Matrix u = expm_herm(g + r * zz_mid, Complex(0.0, -theta));
    const Matrix u0 = expm_herm(g, Complex(0.0, -theta));
    const Matrix e = u0.adjoint() * u;

    std::vector<std::vector<Matrix>> sig(4);
    for (int s = 0; s < 4; ++s)
        for (int w = 0; w < 4; ++w) sig[s].push_back(embed(detail::embedded_pauli(w, sp.dims[s]), sp, s));

    TwirledChannel out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Matrix left = sig[0][i] * sig[1][j];
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    const Complex tr = (left * sig[2][k] * sig[3][l] * e).trace();
                    const std::string name{detail::kPauliNames[i], detail::kPauliNames[j],
                                           detail::kPauliNames[k], detail::kPauliNames[l]};
                    out.probabilities[name] = std::norm(tr / 16.0);
                }
        }
    double sum = 0.0;
    for (const auto& [k, v] : out.probabilities) sum += v;
    out.leakage = 1.0 - sum;
    return out;
}

// ---------- parity-readout error conversion ----------

// Probability that an odd number of independent Z errors among four data
// qubits flips a parity readout: 4p(1−p)³ + 4p³(1−p).
inline double readout_error_prob(double pr_z) {
    if (pr_z < 0.0 || pr_z > 1.0)
        throw std::invalid_argument("readout_error_prob: probability outside [0, 1]");
    const double q = 1.0 - pr_z;
    return 4.0 * pr_z * q * q * q + 4.0 * pr_z * pr_z * pr_z * q;
}

// ---------- export ----------

// Channel table as CSV: one row per Pauli string plus a trailing leakage row.
inline void write_channel_csv(const std::string& path, const TwirledChannel& ch) {
    std::vector<io::Row> rows;
    for (const auto& [name, prob] : ch.probabilities) rows.push_back({name, io::fmt(prob)});
    rows.push_back({"leakage", io::fmt(ch.leakage)});
    io::write_csv(path, {"pauli_string", "probability"}, rows);
}

}  // namespace slq::channels
