// gates.hpp — end-to-end gate simulations on the locked qubit: DRAG
// single-qubit rotations in the dressed basis, the adiabatic conditional-Z
// via the coupler pulse, dressing/undressing ramps, virtual-Z compensation,
// fidelity and leakage metrics, and pulse-parameter optimization.
#pragma once

#include "dynamics.hpp"
#include "floquet.hpp"
#include "models.hpp"
#include "optimize.hpp"
#include "pulses.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace slq::gates {

// ---------- metrics ----------

// Two-design average gate fidelity for a (possibly non-trace-preserving)
// projected block P against a unitary target:
//   F = (|Tr(target† P)|² + Tr(P† P)) / (d(d+1)).
inline double avg_fidelity(const Matrix& projected, const Matrix& target) {
    if (projected.rows() != projected.cols() || target.rows() != target.cols() ||
        projected.rows() != target.rows())
        throw std::invalid_argument("avg_fidelity: dimension mismatch");
    const double d = static_cast<double>(projected.rows());
    const Complex tr = (target.adjoint() * projected).trace();
    const double pp = (projected.adjoint() * projected).trace().real();
    return (std::norm(tr) + pp) / (d * (d + 1.0));
}

// Population weight leaving the computational block, averaged over basis
// inputs: 1 − Tr(P†P)/d.
inline double leakage(const Matrix& projected) {
    const double d = static_cast<double>(projected.rows());
    return 1.0 - (projected.adjoint() * projected).trace().real() / d;
}

// ---------- virtual-Z compensation ----------

namespace detail {

// Diagonal phase generator for angle index j: each qubit contributes a σ_z
// pattern; pre-angles come first, then post-angles, one per qubit.
inline Vector z_generator(int n_qubits, int qubit) {
    const int d = 1 << n_qubits;
    Vector g(d);
    for (int b = 0; b < d; ++b) {
        const int bit = (b >> (n_qubits - 1 - qubit)) & 1;
        g[b] = (bit == 0) ? 1.0 : -1.0;
    }
    return g;
}

inline Matrix diag_exp(const Vector& g, double theta) {
    Vector d(g.size());
    for (int k = 0; k < g.size(); ++k) d[k] = std::exp(Complex(0.0, theta * g[k].real()));
    return d.asDiagonal();
}

}  // namespace detail

// Maximize avg_fidelity(Zpre(θ)·projected·Zpost(θ), target) over per-qubit Z
// angles (one pre and one post angle per qubit).  Each coordinate update is
// analytic: the trace is A·e^{iθ} + B·e^{−iθ}, maximized at
// θ* = −arg(A·conj(B))/2, so coordinate descent converges in a few sweeps.
inline std::pair<std::vector<double>, double> virtual_z_fit(const Matrix& projected,
                                                            const Matrix& target, int n_qubits) {
    if (n_qubits != 1 && n_qubits != 2)
        throw std::invalid_argument("virtual_z_fit: n_qubits must be 1 or 2");
    const int d = 1 << n_qubits;
    if (projected.rows() != d || projected.cols() != d || target.rows() != d || target.cols() != d)
        throw std::invalid_argument("virtual_z_fit: block dimension must match qubit count");

    std::vector<Vector> gens;
    for (int q = 0; q < n_qubits; ++q) gens.push_back(detail::z_generator(n_qubits, q));

    const int n_angles = 2 * n_qubits;  // pre angles then post angles
    std::vector<double> theta(n_angles, 0.0);

    auto dressed = [&](const std::vector<double>& th) {
        Matrix pre = Matrix::Identity(d, d), post = Matrix::Identity(d, d);
        for (int q = 0; q < n_qubits; ++q) {
            pre = detail::diag_exp(gens[q], th[q]) * pre;
            post = detail::diag_exp(gens[q], th[n_qubits + q]) * post;
        }
        return Matrix(pre * projected * post);
    };
    auto trace_of = [&](const std::vector<double>& th) {
        return (target.adjoint() * dressed(th)).trace();
    };

    const double pp = (projected.adjoint() * projected).trace().real();
    auto fidelity = [&](const std::vector<double>& th) {
        return (std::norm(trace_of(th)) + pp) / (d * (d + 1.0));
    };

    double best = fidelity(theta);
    for (int sweep = 0; sweep < 100; ++sweep) {
        const double before = best;
        for (int j = 0; j < n_angles; ++j) {
            std::vector<double> th = theta;
            th[j] = 0.0;
            const Complex t0 = trace_of(th);
            th[j] = 0.5 * slq::pi;
            const Complex t1 = trace_of(th);
            const Complex a = 0.5 * (t0 - Complex(0.0, 1.0) * t1);
            const Complex b = 0.5 * (t0 + Complex(0.0, 1.0) * t1);
            if (std::abs(a) * std::abs(b) > 1e-300) {
                theta[j] = -0.5 * std::arg(a * std::conj(b));
            }
        }
        best = fidelity(theta);
        if (best - before < 1e-16) break;
    }
    return {theta, best};
}

// ---------- gate results ----------

struct GateResult {
    Matrix full_propagator;  // square propagator, or its action on the
                             // computational reference columns for the
                             // three-body gate (dim × 4)
    Matrix projected;        // block on the computational dressed subspace
    double avg_fidelity = 0.0;
    double leakage = 0.0;
    std::vector<double> optimal_z_angles;
};

// Dressed charge matrix element |⟨0̃|n̂|1̃⟩| from the model's Floquet basis;
// enters the in-plane DRAG normalization.  The element itself is purely
// imaginary in a smooth mode gauge, so only the magnitude is well defined
// here; the sign of A/n01 is a physical part of each calibrated pulse set and
// is recorded alongside (A, l_D, ω'_d, T_g) wherever those sets appear.
inline double dressed_n01(const models::ModelSpec& m) {
    if (m.kind != models::ModelKind::cosine_driven)
        throw std::invalid_argument("dressed_n01: needs the driven cosine-potential model");
    auto fb = floquet::detail::model_floquet(m);
    return std::abs(static_cast<Complex>(fb.modes.col(0).adjoint() * m.qubit.n_proj *
                                         fb.modes.col(1)));
}

namespace detail {

// Steps shared by the gate runners: extend the window to a whole number of
// lock periods (the added tail evolves under the undriven-pulse Hamiltonian,
// i.e. pure lock), propagate, project onto the Floquet modes at phase zero,
// and absorb dressed-frame phases with the virtual-Z fit.
inline int whole_periods(double duration, double period) {
    return static_cast<int>(std::ceil(duration / period - 1e-9));
}

}  // namespace detail

// Single-qubit rotation in the dressed basis: the lock drive stays on and the
// two DRAG quadratures −Ω'_x(τ)sin(ω'_d τ) + Ω'_y(τ)cos(ω'_d τ) (τ measured
// from the gate origin t0, an integer number of lock periods) act through the
// charge operator.  Target defaults to the dressed X when empty.
inline GateResult run_single_qubit_gate(const models::ModelSpec& m, const pulses::DragParams& drag,
                                        Matrix target = Matrix(), double t0 = 0.0,
                                        double max_step = 0.0) {
    if (m.kind != models::ModelKind::cosine_driven)
        throw std::invalid_argument("run_single_qubit_gate: needs the driven cosine model");
    if (target.size() == 0) {
        target = Matrix::Zero(2, 2);
        target(0, 1) = target(1, 0) = 1.0;
    }
    const double T = m.period();
    auto fb = floquet::detail::model_floquet(m);

    models::Hamiltonian h = m.hamiltonian();
    const double wd2 = drag.omega_d_prime;
    const double eta = m.qubit_eta();
    h.terms.push_back({[drag, eta, wd2, t0](double t) {
                           const double tau = t - t0;
                           if (tau < 0.0 || tau > drag.T_g) return 0.0;
                           auto [ox, oy] = pulses::drag_envelopes(drag, eta, tau);
                           return -ox * std::sin(wd2 * tau) + oy * std::cos(wd2 * tau);
                       },
                       m.qubit.n_proj});

    dynamics::Schedule s;
    s.t_start = t0;
    s.t_end = t0 + detail::whole_periods(drag.T_g, T) * T;
    s.max_step = (max_step > 0.0) ? max_step : T / 64.0;
    auto res = dynamics::propagate(h, s);

    GateResult out;
    out.full_propagator = res.propagator;
    out.projected = fb.modes.adjoint() * res.propagator * fb.modes;
    auto [angles, fid] = virtual_z_fit(out.projected, target, 1);
    out.optimal_z_angles = angles;
    out.avg_fidelity = fid;
    out.leakage = leakage(out.projected);
    return out;
}

// Adiabatic conditional-Z: the coupler frequency follows the flat-top pulse
// while qubit 1 stays locked.  The model must sit at the calibrated idle
// point with the pulse parked at the model's static coupler frequency.
inline GateResult run_cz(const models::ModelSpec& m, const pulses::CzPulseParams& pulse,
                         double t0 = 0.0, double max_step = 0.0) {
    if (m.kind != models::ModelKind::bbq)
        throw std::invalid_argument("run_cz: needs the three-body model");
    if (std::abs(pulse.omega_s - m.bbq.omega_c) > 1e-9 * std::abs(m.bbq.omega_c))
        throw std::invalid_argument("run_cz: pulse must park at the model's coupler frequency");

    const double T = m.period();
    models::ModelSpec idle = m;
    idle.bbq.omega_c_pulse = nullptr;
    auto fb = floquet::detail::model_floquet(idle);

    models::ModelSpec gate = m;
    gate.bbq.omega_c_pulse = [pulse, t0](double t) { return pulses::cz_omega_c(pulse, t - t0); };

    dynamics::Schedule s;
    s.t_start = t0;
    s.t_end = t0 + detail::whole_periods(pulse.T_g(), T) * T;
    s.max_step = (max_step > 0.0) ? max_step : T / 64.0;
    auto res = dynamics::propagate(gate.hamiltonian(), s, fb.modes);

    Matrix target = Matrix::Identity(4, 4);
    target(3, 3) = -1.0;

    GateResult out;
    out.full_propagator = res.propagator;  // action on the four reference columns
    out.projected = fb.modes.adjoint() * res.propagator;
    auto [angles, fid] = virtual_z_fit(out.projected, target, 2);
    out.optimal_z_angles = angles;
    out.avg_fidelity = fid;
    out.leakage = leakage(out.projected);
    return out;
}

enum class RampDirection { up, down };

// Dressing (up) or undressing (down) ramp: the envelope's two quadratures
// drive the charge operator at the lock carrier; the figure of merit is the
// average fidelity of the induced map between the bare and dressed pairs,
// after absorbing per-state phases.
inline double run_ramp(const models::ModelSpec& m, const pulses::Envelope& env,
                       RampDirection direction, double t_ramp = 0.0, double max_step = 0.0) {
    if (m.kind != models::ModelKind::cosine_driven)
        throw std::invalid_argument("run_ramp: needs the driven cosine model");
    const double T = m.period();
    if (t_ramp <= 0.0) {
        if (env.is_sampled())
            t_ramp = env.times.back();
        else
            throw std::invalid_argument("run_ramp: parametric envelope needs explicit t_ramp");
    }

    const int dim = m.space().total_dim();
    Matrix bare = Matrix::Zero(dim, 2);
    bare(0, 0) = 1.0;
    bare(1, 1) = 1.0;

    Matrix dressed_modes;
    if (m.drive.Omega == 0.0) {
        dressed_modes = bare;  // no lock: the dressed pair is the bare pair
    } else {
        auto fb = floquet::detail::model_floquet(m);
        dressed_modes = fb.modes;
    }

    // Undriven base + the enveloped drive (the model's own CW term is
    // replaced; at the dressed end the envelope holds the CW amplitude).
    models::Hamiltonian h;
    h.h0 = m.qubit.energies.cast<Complex>().asDiagonal();
    const double wd = m.drive.omega_d;
    h.terms.push_back({[env, wd](double t) {
                           auto [ox, oy] = env.at(t);
                           return -ox * std::sin(wd * t) + oy * std::cos(wd * t);
                       },
                       m.qubit.n_proj});

    dynamics::Schedule s;
    s.t_start = 0.0;
    s.t_end = detail::whole_periods(t_ramp, T) * T;
    s.max_step = (max_step > 0.0) ? max_step : T / 64.0;

    Matrix start = (direction == RampDirection::up) ? bare : dressed_modes;
    Matrix finish = (direction == RampDirection::up) ? dressed_modes : bare;
    auto res = dynamics::propagate(h, s, start);
    Matrix p = finish.adjoint() * res.propagator;
    auto [angles, fid] = virtual_z_fit(p, Matrix::Identity(2, 2), 1);
    (void)angles;
    return fid;
}

// Derivative-free pulse-parameter search: simplex descent over the objective
// (an infidelity), converging on simplex diameter < 1e−6 relative or
// returning best-so-far on budget exhaustion.
inline opt::OptimResult optimize_params(const opt::Objective& objective,
                                        const std::vector<double>& initial,
                                        const std::vector<double>& lower = {},
                                        const std::vector<double>& upper = {},
                                        int max_evals = 400, double initial_step = 0.05) {
    opt::NelderMeadOptions o;
    o.max_evals = max_evals;
    o.x_tol = 1e-6;
    // Converge on simplex geometry alone; the value spread near a flat
    // optimum of a noisy propagation objective never tightens reliably.
    o.f_tol = std::numeric_limits<double>::infinity();
    o.initial_step = initial_step;
    o.lower = lower;
    o.upper = upper;
    return opt::nelder_mead(objective, initial, o);
}

}  // namespace slq::gates
