// models.hpp — Hamiltonian models: Kerr oscillator (rotating frame and lab
// frame), the full cosine-potential transmon, and the driven
// qubit–coupler–qubit system, plus frequency-shift injection.
#pragma once

#include "linalg.hpp"
#include "operators.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <utility>

namespace slq::models {

using slq::Matrix;
using slq::RealVector;
using slq::TensorSpace;
using slq::Vector;

// ---------- parameter types (angular frequencies in rad/ns, times in ns) ----------

struct TransmonParams {
    double omega = 0.0;  // qubit 0–1 angular frequency
    double eta = 0.0;    // anharmonicity (positive for a transmon)
};

struct DriveSpec {
    double Omega = 0.0;    // drive amplitude
    double omega_d = 0.0;  // drive angular frequency
    double delta = 0.0;    // detuning, delta = omega_d − omega_qubit
};

inline DriveSpec make_drive(double omega_qubit, double Omega, double delta) {
    return {Omega, omega_qubit + delta, delta};
}

struct CosineParams {
    double E_C = 0.0;    // charging energy (rad/ns)
    double E_J = 0.0;    // Josephson energy (rad/ns)
    int n_charge = 401;  // charge states kept (odd)
    int n_project = 10;  // lowest levels kept after diagonalization
};

// Calibrated cosine qubit: projected spectrum and charge operator.
struct CosineQubit {
    CosineParams params;
    double omega = 0.0;  // realized E1 − E0
    double eta = 0.0;    // realized 2(E1−E0) − (E2−E0)
    RealVector energies;  // n_project lowest eigenvalues, ground-referenced
    Matrix n_proj;        // charge operator in the projected eigenbasis
};

// ---------- static builders ----------

// Rotating-frame Kerr Hamiltonian: −δ a†a − (η/2) a†²a² + (Ω/2)(a + a†).
inline Matrix build_kerr_rwa(const TransmonParams& p, const DriveSpec& d, int dim) {
    auto b = ops::bosonic_ops(dim);
    Matrix nn = b.number * (b.number - Matrix::Identity(dim, dim));  // a†²a²
    return -d.delta * b.number - 0.5 * p.eta * nn + 0.5 * d.Omega * (b.a + b.a_dag);
}

// Cosine-potential transmon in the charge basis: 4 E_C n̂² − E_J cos φ̂,
// diagonalized and projected onto the lowest n_project levels.
inline CosineQubit build_cosine_static(const CosineParams& p) {
    if (p.n_project < 3) throw std::invalid_argument("build_cosine_static: need n_project >= 3");
    if (p.n_charge < 2 * p.n_project + 1)
        throw std::invalid_argument("build_cosine_static: n_charge too small for requested projection");
    auto ch = ops::charge_basis_ops(p.n_charge);
    Eigen::MatrixXd h = (4.0 * p.E_C * (ch.n_hat * ch.n_hat) - p.E_J * ch.cos_phi).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) throw std::runtime_error("build_cosine_static: eigensolver failed");

    Eigen::MatrixXd vecs = solver.eigenvectors().leftCols(p.n_project);
    for (int k = 0; k < p.n_project; ++k) {  // largest-magnitude entry positive
        Eigen::Index imax = 0;
        vecs.col(k).cwiseAbs().maxCoeff(&imax);
        if (vecs(imax, k) < 0) vecs.col(k) *= -1.0;
    }

    CosineQubit q;
    q.params = p;
    q.energies = solver.eigenvalues().head(p.n_project).array() - solver.eigenvalues()[0];
    q.omega = q.energies[1];
    q.eta = 2.0 * q.energies[1] - q.energies[2];
    Eigen::MatrixXd n_real = vecs.transpose() * ch.n_hat.real() * vecs;
    // Charge-basis eigenvectors are real, which leaves the projected charge
    // operator real.  Re-gauge level phases so nearest-neighbor charge
    // elements are −i·|n|, the ladder convention of (a − a†)/i; every model
    // that drives or couples through the charge operator then shares the
    // oscillator phase convention.
    Vector gauge(p.n_project);
    gauge[0] = Complex(1.0, 0.0);
    for (int k = 1; k < p.n_project; ++k) {
        double s = n_real(k - 1, k) >= 0 ? 1.0 : -1.0;
        gauge[k] = gauge[k - 1] * Complex(0.0, -s);
    }
    q.n_proj = gauge.conjugate().asDiagonal() * n_real.cast<Complex>() * gauge.asDiagonal();
    return q;
}

// Solve (E_C, E_J) so the cosine spectrum realizes (omega, eta) targets.
// Damped 2-D Newton with finite-difference Jacobian.
inline CosineParams calibrate_cosine(double omega_target, double eta_target, int n_charge = 401,
                                     int n_project = 10) {
    if (omega_target <= 0 || eta_target <= 0)
        throw std::invalid_argument("calibrate_cosine: targets must be positive");

    auto residual = [&](double ec, double ej) -> std::pair<double, double> {
        CosineParams p{ec, ej, n_charge, std::max(n_project, 3)};
        auto q = build_cosine_static(p);
        return {q.omega - omega_target, q.eta - eta_target};
    };

    double ec = eta_target;  // transmon asymptotics seed
    double ej = (omega_target + ec) * (omega_target + ec) / (8.0 * ec);
    auto [r1, r2] = residual(ec, ej);
    const double scale = omega_target;

    for (int it = 0; it < 60; ++it) {
        if (std::abs(r1) <= 1e-12 * scale && std::abs(r2) <= 1e-12 * scale) break;
        const double hc = 1e-6 * ec, hj = 1e-6 * ej;
        auto [r1c, r2c] = residual(ec + hc, ej);
        auto [r1j, r2j] = residual(ec, ej + hj);
        const double j11 = (r1c - r1) / hc, j12 = (r1j - r1) / hj;
        const double j21 = (r2c - r2) / hc, j22 = (r2j - r2) / hj;
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-30) throw calibration_error("calibrate_cosine: singular Jacobian");
        double dc = -(j22 * r1 - j12 * r2) / det;
        double dj = -(-j21 * r1 + j11 * r2) / det;
        double damp = 1.0;  // keep parameters positive
        while (ec + damp * dc <= 0 || ej + damp * dj <= 0) damp *= 0.5;
        for (; damp > 1e-6; damp *= 0.5) {
            auto [n1, n2] = residual(ec + damp * dc, ej + damp * dj);
            if (std::hypot(n1, n2) < std::hypot(r1, r2)) {
                ec += damp * dc;
                ej += damp * dj;
                r1 = n1;
                r2 = n2;
                break;
            }
        }
        if (damp <= 1e-6)
            throw calibration_error("calibrate_cosine: line search stalled, residuals (" +
                                    std::to_string(r1) + ", " + std::to_string(r2) + ")");
    }
    if (std::abs(r1) > 1e-9 * scale || std::abs(r2) > 1e-9 * scale)
        throw calibration_error("calibrate_cosine: no convergence, residuals (" + std::to_string(r1) +
                                ", " + std::to_string(r2) + ")");
    if (ej / ec < 20.0)
        std::cerr << "calibrate_cosine: warning: E_J/E_C = " << ej / ec
                  << " is outside the transmon regime (< 20)\n";
    if (ej / ec > 5e4)
        std::cerr << "calibrate_cosine: warning: E_J/E_C = " << ej / ec
                  << " approaches the harmonic limit; anharmonicity is numerically fragile\n";
    return {ec, ej, n_charge, n_project};
}

// ---------- time-dependent Hamiltonian carrier ----------

// H(t) = h0 + Σ_k coeff_k(t) · op_k  with real coefficients and Hermitian ops.
struct Hamiltonian {
    Matrix h0;
    struct Term {
        std::function<double(double)> coeff;
        Matrix op;
    };
    std::vector<Term> terms;

    int dim() const { return static_cast<int>(h0.rows()); }
    bool is_static() const { return terms.empty(); }

    Matrix at(double t) const {
        Matrix h = h0;
        for (const auto& term : terms) h += term.coeff(t) * term.op;
        return h;
    }
};

// ---------- model specification ----------

enum class ModelKind { kerr_rwa, kerr_lab, cosine_driven, bbq };

struct Shift {
    int subsystem = 0;
    double zeta = 0.0;  // added as ζ·N̂_subsystem
};

struct BbqParams {
    double omega2 = 0.0, eta2 = 0.0;          // second (undriven) qubit
    double omega_c = 0.0, eta_c = 0.0;        // coupler at its static frequency
    double g1c = 0.0, g2c = 0.0, g12 = 0.0;   // couplings
    int dim2 = 4, dimc = 4;
    std::function<double(double)> omega_c_pulse;  // optional ω_c(t); empty = static
};

struct ModelSpec {
    ModelKind kind = ModelKind::kerr_rwa;
    TransmonParams transmon;  // kerr models
    int fock_dim = 10;        // kerr models
    CosineQubit qubit;        // cosine_driven and bbq q1
    DriveSpec drive;
    BbqParams bbq;
    std::vector<Shift> shifts;

    double qubit_omega() const {
        return (kind == ModelKind::kerr_rwa || kind == ModelKind::kerr_lab) ? transmon.omega
                                                                            : qubit.omega;
    }
    double qubit_eta() const {
        return (kind == ModelKind::kerr_rwa || kind == ModelKind::kerr_lab) ? transmon.eta
                                                                            : qubit.eta;
    }
    bool time_dependent() const { return kind != ModelKind::kerr_rwa; }
    double period() const {
        if (drive.omega_d <= 0) throw std::invalid_argument("ModelSpec: drive frequency not set");
        return 2.0 * slq::pi / drive.omega_d;
    }

    TensorSpace space() const {
        switch (kind) {
            case ModelKind::kerr_rwa:
            case ModelKind::kerr_lab: return {{fock_dim}};
            case ModelKind::cosine_driven: return {{qubit.params.n_project}};
            case ModelKind::bbq: return {{qubit.params.n_project, bbq.dim2, bbq.dimc}};
        }
        throw std::logic_error("ModelSpec: unknown kind");
    }

    // Level-number operator of one subsystem, embedded in the full space.
    Matrix number_op(int subsystem = 0) const {
        auto sp = space();
        const int d = sp.dims.at(subsystem);
        Matrix num = Matrix::Zero(d, d);
        for (int k = 0; k < d; ++k) num(k, k) = k;
        return embed(num, sp, subsystem);
    }

    Hamiltonian hamiltonian() const;

    // Reference kets for dressed-state labeling: the O(ε⁰) dressed pattern
    // (|0⟩±|1⟩)/√2 for the driven qubit, bare kets elsewhere.
    static std::vector<Vector> dressed_pattern(int dim) {
        std::vector<Vector> refs;
        refs.reserve(dim);
        Vector plus = Vector::Zero(dim), minus = Vector::Zero(dim);
        plus[0] = plus[1] = 1.0 / std::sqrt(2.0);
        minus[0] = 1.0 / std::sqrt(2.0);
        minus[1] = -1.0 / std::sqrt(2.0);
        refs.push_back(plus);
        refs.push_back(minus);
        for (int k = 2; k < dim; ++k) {
            Vector v = Vector::Zero(dim);
            v[k] = 1.0;
            refs.push_back(v);
        }
        return refs;
    }
};

inline Hamiltonian ModelSpec::hamiltonian() const {
    Hamiltonian h;
    switch (kind) {
        case ModelKind::kerr_rwa: {
            h.h0 = build_kerr_rwa(transmon, drive, fock_dim);
            break;
        }
        case ModelKind::kerr_lab: {
            auto b = ops::bosonic_ops(fock_dim);
            Matrix nn = b.number * (b.number - Matrix::Identity(fock_dim, fock_dim));
            h.h0 = transmon.omega * b.number - 0.5 * transmon.eta * nn;
            Matrix quad = -slq::im * (b.a - b.a_dag);  // (a − a†)/i
            const double Om = drive.Omega, wd = drive.omega_d;
            h.terms.push_back({[Om, wd](double t) { return -Om * std::sin(wd * t); }, quad});
            break;
        }
        case ModelKind::cosine_driven: {
            h.h0 = qubit.energies.cast<Complex>().asDiagonal();
            const double Om = drive.Omega, wd = drive.omega_d;
            h.terms.push_back({[Om, wd](double t) { return -Om * std::sin(wd * t); }, qubit.n_proj});
            break;
        }
        case ModelKind::bbq: {
            auto sp = space();
            const int d1 = sp.dims[0], d2 = sp.dims[1], dc = sp.dims[2];
            auto b2 = ops::bosonic_ops(d2);
            auto bc = ops::bosonic_ops(dc);
            Matrix n1 = embed(qubit.n_proj, sp, 0);
            Matrix h1 = embed(qubit.energies.cast<Complex>().asDiagonal(), sp, 0);
            Matrix nn2 = b2.number * (b2.number - Matrix::Identity(d2, d2));
            Matrix h2 = embed(bbq.omega2 * b2.number - 0.5 * bbq.eta2 * nn2, sp, 1);
            Matrix nnc = bc.number * (bc.number - Matrix::Identity(dc, dc));
            Matrix hc_anh = embed(-0.5 * bbq.eta_c * nnc, sp, 2);
            Matrix nc = embed(bc.number, sp, 2);
            Matrix qc = embed(Matrix(-slq::im * (bc.a - bc.a_dag)), sp, 2);   // (c − c†)/i
            Matrix q2 = embed(Matrix(-slq::im * (b2.a - b2.a_dag)), sp, 1);   // (q₂ − q₂†)/i
            h.h0 = h1 + h2 + hc_anh + bbq.g1c * (n1 * qc) + bbq.g2c * (q2 * qc) + bbq.g12 * (n1 * q2);

            const double Om = drive.Omega, wd = drive.omega_d;
            h.terms.push_back({[Om, wd](double t) { return -Om * std::sin(wd * t); }, n1});
            // The static coupler frequency always lives in h0 (its diagonal is
            // integrated exactly); a pulse contributes only its excursion.
            h.h0 += bbq.omega_c * nc;
            if (bbq.omega_c_pulse) {
                auto pulse = bbq.omega_c_pulse;
                const double wc0 = bbq.omega_c;
                h.terms.push_back({[pulse, wc0](double t) { return pulse(t) - wc0; }, nc});
            }
            break;
        }
    }
    for (const auto& s : shifts)
        if (s.zeta != 0.0) h.h0 += s.zeta * number_op(s.subsystem);
    return h;
}

// ---------- model constructors ----------

inline ModelSpec make_kerr_rwa(const TransmonParams& p, const DriveSpec& d, int dim = 10) {
    ModelSpec m;
    m.kind = ModelKind::kerr_rwa;
    m.transmon = p;
    m.fock_dim = dim;
    m.drive = d;
    return m;
}

inline ModelSpec make_kerr_lab(const TransmonParams& p, const DriveSpec& d, int dim = 10) {
    ModelSpec m = make_kerr_rwa(p, d, dim);
    m.kind = ModelKind::kerr_lab;
    return m;
}

inline ModelSpec make_cosine_driven(const CosineQubit& q, const DriveSpec& d) {
    ModelSpec m;
    m.kind = ModelKind::cosine_driven;
    m.qubit = q;
    m.drive = d;
    return m;
}

inline ModelSpec make_bbq(const CosineQubit& q1, const DriveSpec& d, const BbqParams& p) {
    ModelSpec m;
    m.kind = ModelKind::bbq;
    m.qubit = q1;
    m.drive = d;
    m.bbq = p;
    return m;
}

// Copy of `model` with detuning δ (drive frequency follows the qubit).
inline ModelSpec with_delta(ModelSpec model, double delta) {
    model.drive.delta = delta;
    model.drive.omega_d = model.qubit_omega() + delta;
    return model;
}

// Copy of `model` with ζ·N̂ added on one subsystem (a quasi-static frequency shift).
inline ModelSpec shift_injection(ModelSpec model, double zeta, int subsystem = 0) {
    model.shifts.push_back({subsystem, zeta});
    return model;
}

}  // namespace slq::models
