// dynamics.hpp — time evolution of Hamiltonian models.
//
// Static Hamiltonians evolve exactly through their eigendecomposition.
// Time-dependent Hamiltonians use a 4th-order commutator-free exponential
// integrator (two exponentials per step, Gauss–Legendre nodes) applied in the
// interaction picture of the static diagonal, so step sizes are set by the
// drive period rather than by absolute energies.  Exponentials act on the
// propagated columns via a scaled truncated Taylor series, which keeps the
// cost at dense matrix–vector products.
//
// Sampling: explicit `strobe_times` yield full column snapshots; a
// `stroboscopic_period` yields population records (optionally projected onto
// a supplied orthonormal basis) at integer multiples of that period.
#pragma once

#include "linalg.hpp"
#include "models.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace slq::dynamics {

using slq::Matrix;
using slq::Vector;

struct Schedule {
    double t_start = 0.0;
    double t_end = 0.0;
    double max_step = 0.0;             // required > 0 for time-dependent models
    double tolerance = 1e-10;          // local-error contract; must be ≤ 1e-8
    double stroboscopic_period = 0.0;  // > 0: record populations at multiples
    std::vector<double> strobe_times;  // optional full-snapshot record points
};

struct StroboscopicRecord {
    double time = 0.0;
    Eigen::MatrixXd populations;  // (basis kets) × (propagated columns), values in [0,1]
};

struct PropagationResult {
    Matrix propagator;                        // columns at t_end (dim × ncols)
    std::vector<Matrix> strobes;              // columns at each strobe time, in given order
    std::vector<StroboscopicRecord> records;  // populations at stroboscopic sample times
    long steps = 0;
    double unitarity_defect = 0.0;  // ‖W†W − I‖_F at t_end
};

namespace detail {

inline double isometry_defect(const Matrix& w) {
    const auto cols = w.cols();
    return (w.adjoint() * w - Matrix::Identity(cols, cols)).norm();
}

// w ← exp(a) · w via truncated Taylor with splitting when ‖a‖ is large.
inline void apply_exp_taylor(const Matrix& a, Matrix& w) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
    int splits = 0;
    while ((norm / static_cast<double>(1 << splits)) > 0.5 && splits < 30) ++splits;
    const long reps = 1L << splits;
    const double inv = 1.0 / static_cast<double>(reps);
    for (long r = 0; r < reps; ++r) {
        Matrix term = w;
        double wnorm = w.norm();
        bool converged = false;
        for (int k = 1; k <= 40; ++k) {
            term = (a * term) * (inv / k);
            w += term;
            if (term.norm() <= 1e-16 * wnorm) {
                converged = true;
                break;
            }
        }
        if (!converged) throw integration_error("apply_exp_taylor: series did not converge");
    }
}

// Interaction-picture generator at time t: phases ⊙ (H(t) − diag(d0)).
// twiddle(i,j) = exp(i (d0_i − d0_j) t).
inline Matrix picture_generator(const models::Hamiltonian& h, const Eigen::VectorXd& d0,
                                const Matrix& v_static, double t) {
    Matrix v = v_static;
    for (const auto& term : h.terms) v += term.coeff(t) * term.op;
    Vector p(d0.size());
    for (Eigen::Index i = 0; i < d0.size(); ++i)
        p[i] = Complex(std::cos(d0[i] * t), std::sin(d0[i] * t));
    return (p * p.adjoint()).cwiseProduct(v);
}

// Gauss–Legendre nodes and 4th-order commutator-free weights.
constexpr double cf4_node1() { return 0.5 - 0.2886751345948128823; }  // 1/2 − √3/6
constexpr double cf4_node2() { return 0.5 + 0.2886751345948128823; }
constexpr double cf4_w_small() { return (3.0 - 2.0 * 1.7320508075688772935) / 12.0; }
constexpr double cf4_w_large() { return (3.0 + 2.0 * 1.7320508075688772935) / 12.0; }

struct Landing {
    double t = 0.0;
    bool snapshot = false;  // full columns into .strobes
    bool record = false;    // populations into .records
};

inline Eigen::MatrixXd populations_of(const Matrix& psi, const Matrix& basis) {
    if (basis.size() == 0) return psi.cwiseAbs2();
    return (basis.adjoint() * psi).cwiseAbs2();
}

}  // namespace detail

// One 4th-order commutator-free step u ← U(t+dt, t)·u, sampling h at the two
// Gauss–Legendre nodes inside the step.  Exactly unitary for exact
// exponentials; local error O(dt⁵).
inline void step_kernel(const models::Hamiltonian& h, double t, double dt, Matrix& u) {
    const double c1 = detail::cf4_node1(), c2 = detail::cf4_node2();
    const double a1 = detail::cf4_w_small(), a2 = detail::cf4_w_large();
    Matrix h1 = h.at(t + c1 * dt);
    Matrix h2 = h.at(t + c2 * dt);
    Matrix x_first = Complex(0, -dt) * (a2 * h1 + a1 * h2);
    Matrix x_second = Complex(0, -dt) * (a1 * h1 + a2 * h2);
    detail::apply_exp_taylor(x_first, u);
    detail::apply_exp_taylor(x_second, u);
}

// Propagate `init` (dim × ncols) from t_start to t_end under h.  Works in
// either time direction.  `basis` (optional, orthonormal columns) defines the
// kets whose populations enter the stroboscopic records; empty means the bare
// basis.
inline PropagationResult propagate(const models::Hamiltonian& h, const Schedule& s,
                                   const Matrix& init, const Matrix& basis = Matrix()) {
    const int dim = h.dim();
    if (init.rows() != dim) throw std::invalid_argument("propagate: init has wrong row count");
    if (basis.size() != 0 && basis.rows() != dim)
        throw std::invalid_argument("propagate: projection basis has wrong row count");
    if (s.tolerance > 1e-8) throw std::invalid_argument("propagate: tolerance must be <= 1e-8");
    const double span = s.t_end - s.t_start;
    const double dir = (span >= 0) ? 1.0 : -1.0;
    for (double ts : s.strobe_times)
        if ((ts - s.t_start) * dir < -1e-12 || (s.t_end - ts) * dir < -1e-12)
            throw std::invalid_argument("propagate: strobe time outside schedule");
    if (!std::is_sorted(s.strobe_times.begin(), s.strobe_times.end(),
                        [dir](double a, double b) { return a * dir < b * dir; }))
        throw std::invalid_argument("propagate: strobe times must be monotonic in the time direction");

    // Merge snapshot times and stroboscopic record times into one landing list.
    std::vector<detail::Landing> landings;
    for (double ts : s.strobe_times) landings.push_back({ts, true, false});
    if (s.stroboscopic_period > 0) {
        const long nper = static_cast<long>(std::floor(std::abs(span) / s.stroboscopic_period + 1e-9));
        for (long k = 0; k <= nper; ++k)
            landings.push_back({s.t_start + dir * k * s.stroboscopic_period, false, true});
    }
    std::stable_sort(landings.begin(), landings.end(),
                     [dir](const detail::Landing& a, const detail::Landing& b) { return a.t * dir < b.t * dir; });
    // Coalesce coincident landings; then ensure a final landing at t_end.
    std::vector<detail::Landing> merged;
    const double coincide = 1e-9 + 1e-12 * std::abs(span);
    for (const auto& l : landings) {
        if (!merged.empty() && std::abs(l.t - merged.back().t) <= coincide) {
            merged.back().snapshot |= l.snapshot;
            merged.back().record |= l.record;
        } else {
            merged.push_back(l);
        }
    }
    if (merged.empty() || std::abs(merged.back().t - s.t_end) > coincide)
        merged.push_back({s.t_end, false, false});
    else
        merged.back().t = s.t_end;

    PropagationResult out;
    auto land = [&](const Matrix& cols, const detail::Landing& l) {
        if (l.snapshot) out.strobes.push_back(cols);
        if (l.record) out.records.push_back({l.t, detail::populations_of(cols, basis)});
        double defect = detail::isometry_defect(cols);
        if (defect > 1e-6)
            throw integration_error("propagate: unitarity defect " + std::to_string(defect) +
                                    " at t = " + std::to_string(l.t) + " exceeds 1e-6");
    };

    if (h.is_static()) {
        auto es = eig_herm(h.h0);
        auto evolve_to = [&](double t) -> Matrix {
            Vector ph(dim);
            for (int i = 0; i < dim; ++i) {
                const double a = -es.values[i] * (t - s.t_start);
                ph[i] = Complex(std::cos(a), std::sin(a));
            }
            return es.vectors * (ph.asDiagonal() * (es.vectors.adjoint() * init));
        };
        for (const auto& l : merged) {
            Matrix cols = evolve_to(l.t);
            land(cols, l);
            if (&l == &merged.back()) out.propagator = std::move(cols);
        }
        out.unitarity_defect = detail::isometry_defect(out.propagator);
        return out;
    }

    if (s.max_step <= 0)
        throw std::invalid_argument("propagate: max_step required for a time-dependent model");

    // Interaction picture of the static diagonal.
    const Eigen::VectorXd d0 = h.h0.diagonal().real();
    Matrix v_static = h.h0;
    v_static.diagonal() -= h.h0.diagonal();  // h0 minus its diagonal

    auto picture_phase = [&](double t, double sign) -> Vector {
        Vector p(dim);
        for (int i = 0; i < dim; ++i)
            p[i] = Complex(std::cos(d0[i] * t), sign * std::sin(d0[i] * t));
        return p;
    };

    const double c1 = detail::cf4_node1(), c2 = detail::cf4_node2();
    const double a1 = detail::cf4_w_small(), a2 = detail::cf4_w_large();

    Matrix w = picture_phase(s.t_start, +1.0).asDiagonal() * init;
    double t = s.t_start;
    for (const auto& l : merged) {
        const double seg = l.t - t;
        if (seg != 0.0) {
            const long n = std::max<long>(1, static_cast<long>(std::ceil(std::abs(seg) / s.max_step)));
            const double dt = seg / static_cast<double>(n);
            for (long i = 0; i < n; ++i) {
                const double tstep = t + i * dt;
                Matrix h1 = detail::picture_generator(h, d0, v_static, tstep + c1 * dt);
                Matrix h2 = detail::picture_generator(h, d0, v_static, tstep + c2 * dt);
                Matrix x_first = Complex(0, -dt) * (a2 * h1 + a1 * h2);
                Matrix x_second = Complex(0, -dt) * (a1 * h1 + a2 * h2);
                detail::apply_exp_taylor(x_first, w);
                detail::apply_exp_taylor(x_second, w);
                ++out.steps;
            }
        }
        t = l.t;
        Matrix cols = picture_phase(t, -1.0).asDiagonal() * w;
        land(cols, l);
        if (&l == &merged.back()) out.propagator = std::move(cols);
    }

    out.unitarity_defect = detail::isometry_defect(out.propagator);
    if (out.unitarity_defect > 1e-6)
        throw integration_error("propagate: unitarity defect " +
                                std::to_string(out.unitarity_defect) + " exceeds 1e-6");
    return out;
}

inline PropagationResult propagate(const models::Hamiltonian& h, const Schedule& s) {
    return propagate(h, s, Matrix::Identity(h.dim(), h.dim()));
}

}  // namespace slq::dynamics
