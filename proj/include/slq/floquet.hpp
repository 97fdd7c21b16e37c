// floquet.hpp — dressed-basis machinery for continuously driven qubits:
// period propagators, labeled Floquet modes, dressed gaps, phase-noise
// sensitivity measures, the clock-condition solver, static-coupler ZZ
// extraction, the idle-point calibration loop, and closed-form second-order
// references for the dressed spectrum and operators.
#pragma once

#include "dynamics.hpp"
#include "models.hpp"
#include "operators.hpp"
#include "optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace slq::floquet {

using slq::Complex;
using slq::Matrix;
using slq::RealVector;
using slq::Vector;

// Fold x into the window (−w/2, w/2].
inline double fold(double x, double w) {
    double y = std::remainder(x, w);
    if (y <= -0.5 * w) y += w;
    return y;
}

// ---------- dressed spectrum of static Hamiltonians ----------

// Energies ordered highest → lowest, so index 0 is the upper dressed qubit
// state and index 1 the lower one.
struct DressedSpectrum {
    RealVector energies;
    Matrix states;  // columns match `energies`
};

inline DressedSpectrum dressed_spectrum(const Matrix& h) {
    auto es = eig_herm(h);  // ascending
    DressedSpectrum ds;
    ds.energies = es.values.reverse();
    ds.states = es.vectors.rowwise().reverse();
    return ds;
}

inline DressedSpectrum dressed_spectrum(const models::ModelSpec& m) {
    auto h = m.hamiltonian();
    if (!h.is_static())
        throw std::logic_error("dressed_spectrum: model is time-dependent; use floquet_modes");
    return dressed_spectrum(h.h0);
}

// ---------- Floquet modes ----------

// Labeled eigenstates of a one-period propagator.  Columns of `modes` are in
// the order of the reference kets handed to floquet_modes; `labels` keeps the
// raw eigendecomposition index each reference ended up on (a bijection).
struct FloquetBasis {
    double period = 0.0;
    Vector eigenvalues;         // unit-modulus Floquet multipliers, reference order
    RealVector quasi_energies;  // −arg(λ)/T on the branch (−π/T, π/T]
    Matrix modes;               // columns in reference order
    std::vector<int> labels;
    RealVector margins;      // labeling margin per reference
    double min_margin = 1.0;
};

inline FloquetBasis floquet_modes(const Matrix& u_t, double period,
                                  const std::vector<Vector>& reference) {
    const int n = static_cast<int>(u_t.rows());
    const int nref = static_cast<int>(reference.size());
    if (u_t.cols() != n) throw std::invalid_argument("floquet_modes: propagator must be square");
    if (period <= 0) throw std::invalid_argument("floquet_modes: period must be positive");
    if (nref == 0 || nref > n) throw std::invalid_argument("floquet_modes: bad reference count");
    for (const auto& r : reference)
        if (r.size() != n) throw std::invalid_argument("floquet_modes: reference dimension mismatch");
    if ((u_t.adjoint() * u_t - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-7)
        throw std::invalid_argument("floquet_modes: propagator is not unitary");

    Eigen::ComplexEigenSolver<Matrix> ces(u_t, true);
    if (ces.info() != Eigen::Success) throw std::runtime_error("floquet_modes: eigensolver failed");
    const Vector lam = ces.eigenvalues();
    const Matrix vecs = ces.eigenvectors();

    // Group eigenvalues into phase clusters: within a cluster the individual
    // eigenvectors may be arbitrarily mixed (degeneracy or folding accident),
    // but the spanned subspace is well defined, so references are projected
    // onto cluster subspaces rather than matched to raw eigenvectors.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> th(n);
    for (int k = 0; k < n; ++k) th[k] = std::arg(lam[k]);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return th[a] < th[b]; });
    const double tol_cluster = 1e-5;  // radians on the unit circle
    std::vector<std::vector<int>> clusters;
    for (int k : order) {
        if (clusters.empty() || th[k] - th[clusters.back().back()] > tol_cluster)
            clusters.push_back({});
        clusters.back().push_back(k);
    }
    if (clusters.size() >= 2) {  // circular wrap at ±π
        const double wrap_gap = th[clusters.front().front()] + 2.0 * slq::pi - th[clusters.back().back()];
        if (wrap_gap <= tol_cluster) {
            auto& first = clusters.front();
            first.insert(first.end(), clusters.back().begin(), clusters.back().end());
            clusters.pop_back();
        }
    }
    const int nc = static_cast<int>(clusters.size());

    // Orthonormal basis per cluster subspace.
    std::vector<Matrix> qbasis(nc);
    for (int c = 0; c < nc; ++c) {
        const int sz = static_cast<int>(clusters[c].size());
        Matrix block(n, sz);
        for (int j = 0; j < sz; ++j) block.col(j) = vecs.col(clusters[c][j]);
        Eigen::HouseholderQR<Matrix> qr(block);
        qbasis[c] = qr.householderQ() * Matrix::Identity(n, sz);
    }

    // Overlap of each reference with each cluster subspace.
    Eigen::MatrixXd overlap(nref, nc);
    for (int i = 0; i < nref; ++i)
        for (int c = 0; c < nc; ++c) overlap(i, c) = (qbasis[c].adjoint() * reference[i]).squaredNorm();

    // Greedy assignment on descending overlap, with per-reference margins.
    FloquetBasis fb;
    fb.period = period;
    fb.eigenvalues = Vector::Zero(nref);
    fb.quasi_energies = RealVector::Zero(nref);
    fb.modes = Matrix::Zero(n, nref);
    fb.labels.assign(nref, -1);
    fb.margins = RealVector::Zero(nref);

    std::vector<int> capacity(nc);
    for (int c = 0; c < nc; ++c) capacity[c] = static_cast<int>(clusters[c].size());
    std::vector<bool> assigned(nref, false);
    std::vector<std::vector<int>> cluster_members(nc);  // references hosted per cluster

    for (int round = 0; round < nref; ++round) {
        int bi = -1, bc = -1;
        double bo = -1.0;
        for (int i = 0; i < nref; ++i) {
            if (assigned[i]) continue;
            for (int c = 0; c < nc; ++c) {
                if (capacity[c] <= 0) continue;
                if (overlap(i, c) > bo) {
                    bo = overlap(i, c);
                    bi = i;
                    bc = c;
                }
            }
        }
        double runner_up = 0.0;
        for (int c = 0; c < nc; ++c)
            if (c != bc && capacity[c] > 0) runner_up = std::max(runner_up, overlap(bi, c));
        const double margin = bo - runner_up;
        if (bo < 0.5)
            throw labeling_error("floquet_modes: no mode has majority overlap with reference " +
                                 std::to_string(bi) + " (best " + std::to_string(bo) + ")");
        if (margin < 0.05)
            throw labeling_error("floquet_modes: ambiguous labeling for reference " +
                                 std::to_string(bi) + " (margin " + std::to_string(margin) + ")");

        // Mode = projection of the reference onto the cluster subspace,
        // orthogonalized against references already hosted by this cluster.
        Vector mode = qbasis[bc] * (qbasis[bc].adjoint() * reference[bi]);
        for (int prev : cluster_members[bc])
            mode -= fb.modes.col(prev) * (fb.modes.col(prev).adjoint() * mode);
        const double nrm = mode.norm();
        if (nrm * nrm < 0.25)
            throw labeling_error("floquet_modes: cluster subspace cannot host reference " +
                                 std::to_string(bi));
        mode /= nrm;

        Complex mult = (mode.adjoint() * (u_t * mode))(0, 0);  // Rayleigh quotient
        mult /= std::abs(mult);
        double qe = -std::arg(mult) / period;
        if (qe <= -slq::pi / period) qe += 2.0 * slq::pi / period;

        fb.modes.col(bi) = mode;
        fb.eigenvalues[bi] = mult;
        fb.quasi_energies[bi] = qe;
        fb.labels[bi] = clusters[bc][cluster_members[bc].size()];
        fb.margins[bi] = margin;
        assigned[bi] = true;
        cluster_members[bc].push_back(bi);
        --capacity[bc];
    }
    fb.min_margin = fb.margins.minCoeff();

    const double ortho = (fb.modes.adjoint() * fb.modes - Matrix::Identity(nref, nref))
                             .cwiseAbs()
                             .maxCoeff();
    if (ortho > 1e-9)
        throw labeling_error("floquet_modes: labeled modes not orthonormal (defect " +
                             std::to_string(ortho) + ")");
    fix_phases(fb.modes);
    return fb;
}

// ---------- model-specific plumbing ----------

// One-period propagator U(T) of a driven model, with a hard unitarity gate.
inline Matrix period_propagator(const models::ModelSpec& m, double max_step = 0.0) {
    const double T = m.period();
    dynamics::Schedule s;
    s.t_start = 0.0;
    s.t_end = T;
    s.max_step = (max_step > 0.0) ? max_step : T / 64.0;
    auto res = dynamics::propagate(m.hamiltonian(), s);
    const int n = static_cast<int>(res.propagator.rows());
    const double defect =
        (res.propagator.adjoint() * res.propagator - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > 1e-8)
        throw integration_error("period_propagator: unitarity defect " + std::to_string(defect) +
                                " exceeds 1e-8; reduce max_step");
    return res.propagator;
}

// Reference kets for labeling a model's computational dressed states.
// Driven single-qubit models: (|0⟩±|1⟩)/√2 (bare |0⟩,|1⟩ when the drive is
// off).  Three-body models: the q1-dressed pattern with q2 ∈ {0,1} and the
// coupler in its ground state, ordered {0̃0, 0̃1, 1̃0, 1̃1}.
inline std::vector<Vector> model_references(const models::ModelSpec& m) {
    const bool driven = (m.drive.Omega != 0.0);
    if (m.kind == models::ModelKind::bbq) {
        auto sp = m.space();
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        std::vector<Vector> refs;
        for (int d1 = 0; d1 < 2; ++d1)
            for (int j2 = 0; j2 < 2; ++j2) {
                Vector v;
                if (driven) {
                    const double sign = (d1 == 0) ? 1.0 : -1.0;
                    v = inv_sqrt2 * (basis_ket(sp, {0, j2, 0}) + sign * basis_ket(sp, {1, j2, 0}));
                } else {
                    v = basis_ket(sp, {d1, j2, 0});
                }
                refs.push_back(v);
            }
        return refs;
    }
    const int dim = m.space().total_dim();
    auto pattern = models::ModelSpec::dressed_pattern(dim);
    if (!driven) {
        Vector g = Vector::Zero(dim), e = Vector::Zero(dim);
        g[0] = 1.0;
        e[1] = 1.0;
        return {g, e};
    }
    return {pattern[0], pattern[1]};
}

namespace detail {

// Index pair whose quasi-energy difference is the driven-qubit gap.
inline std::pair<int, int> gap_pair(const models::ModelSpec& m) {
    if (m.kind == models::ModelKind::bbq) return {0, 2};  // 0̃0 vs 1̃0
    return {0, 1};
}

inline FloquetBasis model_floquet(const models::ModelSpec& m, double max_step = 0.0) {
    return floquet_modes(period_propagator(m, max_step), m.period(), model_references(m));
}

// Golden-section minimum with re-centering expansion when the argmin lands on
// an edge of the window.  Returns (argmin, value).
inline std::pair<double, double> golden_expand(const std::function<double(double)>& f, double lo,
                                               double hi, double x_tol, int max_rounds = 10) {
    for (int round = 0; round < max_rounds; ++round) {
        auto r = opt::golden_section(f, lo, hi, x_tol);
        const double w = hi - lo;
        if (r.x - lo > 3.0 * x_tol && hi - r.x > 3.0 * x_tol) return {r.x, r.value};
        if (hi - r.x <= 3.0 * x_tol) {
            lo = hi - 0.1 * w;
            hi = hi + 2.0 * w;
        } else {
            hi = lo + 0.1 * w;
            lo = lo - 2.0 * w;
        }
    }
    throw solver_error("golden_expand: no interior minimum found");
}

}  // namespace detail

// ---------- dressed gaps ----------

inline double dressed_gap(const DressedSpectrum& ds) {
    if (ds.energies.size() < 2) throw std::invalid_argument("dressed_gap: need two levels");
    return ds.energies[0] - ds.energies[1];
}

// Branch-safe quasi-energy difference ε_i − ε_j from the eigenvalue product,
// valid while the physical gap is below half the drive frequency.
inline double dressed_gap(const FloquetBasis& fb, int i = 0, int j = 1) {
    if (std::max(i, j) >= fb.eigenvalues.size() || std::min(i, j) < 0)
        throw std::invalid_argument("dressed_gap: labels missing from basis");
    return -std::arg(fb.eigenvalues[i] * std::conj(fb.eigenvalues[j])) / fb.period;
}

// Gap of a model at detuning δ (static models exactly, driven models via the
// period propagator).
inline double dressed_gap(const models::ModelSpec& m, double delta) {
    auto md = models::with_delta(m, delta);
    if (!md.time_dependent()) return dressed_gap(dressed_spectrum(md));
    auto [i, j] = detail::gap_pair(md);
    return dressed_gap(detail::model_floquet(md), i, j);
}

// ---------- sensitivity measures and the clock condition ----------

// |⟨0̃|N̂|0̃⟩ − ⟨1̃|N̂|1̃⟩| of the driven qubit at detuning δ.  Static models
// take the expectation directly; driven models use a centered finite
// difference of the stroboscopic gap against a number-shift injection
// (step 2π·10 kHz), which matches by the Hellmann–Feynman relation.
inline double sensitivity(const models::ModelSpec& m, double delta) {
    auto md = models::with_delta(m, delta);
    if (!md.time_dependent()) {
        if (md.drive.Omega == 0.0) return 1.0;  // bare |0⟩,|1⟩ differ by one quantum
        auto ds = dressed_spectrum(md);
        const int dim = static_cast<int>(ds.states.rows());
        auto nexp = [&](int col) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += k * std::norm(ds.states(k, col));
            return s;
        };
        return std::abs(nexp(0) - nexp(1));
    }
    const double h = 2.0 * slq::pi * 1e-5;
    auto gap_shifted = [&](double z) {
        auto mz = models::shift_injection(md, z, 0);
        auto [i, j] = detail::gap_pair(mz);
        return dressed_gap(detail::model_floquet(mz), i, j);
    };
    return std::abs(gap_shifted(h) - gap_shifted(-h)) / (2.0 * h);
}

// Symmetric sensitivity for the three-body model: the average of the
// driven-qubit measure with the second qubit in |0⟩ and in |1⟩.
inline double hybrid_sensitivity(const models::ModelSpec& m, double delta) {
    if (m.kind != models::ModelKind::bbq)
        throw std::invalid_argument("hybrid_sensitivity: three-body model required");
    auto md = models::with_delta(m, delta);
    const double h = 2.0 * slq::pi * 1e-5;
    auto gaps = [&](double z) -> std::pair<double, double> {
        auto fb = detail::model_floquet(models::shift_injection(md, z, 0));
        return {dressed_gap(fb, 0, 2), dressed_gap(fb, 1, 3)};
    };
    auto [ap, bp] = gaps(+h);
    auto [am, bm] = gaps(-h);
    return 0.5 * (std::abs(ap - am) + std::abs(bp - bm)) / (2.0 * h);
}

// Detuning δ* that minimizes the sensitivity measure at drive amplitude Ω.
// Golden-section over [0, 2Ω²/η] with expanding fallback windows.
inline double solve_clock(const models::ModelSpec& m, double Omega) {
    if (Omega == 0.0) return 0.0;
    const double eta = m.qubit_eta();
    if (eta <= 0) throw std::invalid_argument("solve_clock: anharmonicity not set");
    if (std::abs(Omega) > 0.5 * eta * (1.0 + 1e-12))
        throw std::invalid_argument("solve_clock: |Omega| > eta/2 is outside the validated range");
    auto mm = m;
    mm.drive.Omega = Omega;
    auto objective = [&](double d) { return sensitivity(mm, d); };
    const double x_tol = std::max(1e-7 * std::abs(Omega), 1e-12);
    auto [delta_star, value] =
        detail::golden_expand(objective, 0.0, 2.0 * Omega * Omega / eta, x_tol);
    if (value > 1e-6)
        throw calibration_error("solve_clock: residual sensitivity " + std::to_string(value) +
                                " above 1e-6 at delta = " + std::to_string(delta_star));
    return delta_star;
}

// Signed population difference ⟨0̃|N̂|0̃⟩ − ⟨1̃|N̂|1̃⟩ of the driven qubit at
// detuning δ.  Static models evaluate it on the dressed eigenstates, driven
// models on the stroboscopic modes (eigenvectors of the one-period propagator
// anchored at the drive-phase origin).  For static models a zero of this
// function coincides with the sensitivity minimum; for lab-frame driven models
// the two calibrations differ by a counter-rotating correction of order
// Ω²/ω_d (≈ 0.4–0.9 MHz for Ω between 0.2η and 0.3η at ω_q/2π = 5 GHz).
inline double population_imbalance(const models::ModelSpec& m, double delta) {
    auto md = models::with_delta(m, delta);
    if (md.kind == models::ModelKind::bbq)
        throw std::invalid_argument("population_imbalance: single-qubit models only");
    const Matrix nq = md.number_op(0);
    auto nexp = [&](const Vector& v) { return (v.adjoint() * nq * v)(0, 0).real(); };
    if (!md.time_dependent()) {
        if (md.drive.Omega == 0.0) return -1.0;  // bare |0⟩,|1⟩ differ by one quantum
        auto ds = dressed_spectrum(md);
        return nexp(ds.states.col(0)) - nexp(ds.states.col(1));
    }
    auto fb = detail::model_floquet(md);
    return nexp(fb.modes.col(0)) - nexp(fb.modes.col(1));
}

// Detuning δ* at which the stroboscopic dressed populations match,
// population_imbalance(δ*) = 0.  This is the calibration convention under
// which the reference single-qubit pulse parameter sets were tuned; use it to
// set the lock detuning when reproducing those gates.  solve_clock (the
// sensitivity minimum) is the dephasing-protection optimum and is the right
// choice everywhere else; the two agree for static models and differ by
// ≲ 1 MHz for the lab-frame models in the validated range.
inline double solve_clock_populations(const models::ModelSpec& m, double Omega) {
    if (Omega == 0.0) return 0.0;
    const double eta = m.qubit_eta();
    if (eta <= 0) throw std::invalid_argument("solve_clock_populations: anharmonicity not set");
    if (std::abs(Omega) > 0.5 * eta * (1.0 + 1e-12))
        throw std::invalid_argument(
            "solve_clock_populations: |Omega| > eta/2 is outside the validated range");
    auto mm = m;
    mm.drive.Omega = Omega;
    auto f = [&](double d) { return population_imbalance(mm, d); };
    double lo = 0.0, hi = 2.0 * Omega * Omega / eta;
    double f_lo = f(lo), f_hi = f(hi);
    for (int grow = 0; f_lo * f_hi > 0.0 && grow < 4; ++grow) {
        hi *= 2.0;
        f_hi = f(hi);
    }
    if (f_lo * f_hi > 0.0)
        throw calibration_error("solve_clock_populations: no sign change up to delta = " +
                                std::to_string(hi));
    const double x_tol = std::max(1e-7 * std::abs(Omega), 1e-12);
    while (hi - lo > x_tol) {
        const double mid = 0.5 * (lo + hi), f_mid = f(mid);
        if (f_lo * f_mid <= 0.0) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    return 0.5 * (lo + hi);
}

// ---------- static-coupler ZZ ----------

// ZZ coefficient ¼(E_0̃0 − E_0̃1 − E_1̃0 + E_1̃1) at a static coupler
// frequency, from the branch-safe product of the four Floquet multipliers.
inline double gzz(const models::ModelSpec& m, double omega_c) {
    if (m.kind != models::ModelKind::bbq)
        throw std::invalid_argument("gzz: three-body model required");
    auto mm = m;
    mm.bbq.omega_c = omega_c;
    mm.bbq.omega_c_pulse = nullptr;  // static-coupler diagnostic
    auto fb = detail::model_floquet(mm);
    const Complex prod = fb.eigenvalues[0] * std::conj(fb.eigenvalues[1]) *
                         std::conj(fb.eigenvalues[2]) * fb.eigenvalues[3];
    return -std::arg(prod) / (4.0 * fb.period);
}

namespace detail {

struct ZzSearch {
    std::optional<double> root;
    bool degenerate = false;  // |g̃_zz| below 2π·1 Hz everywhere sampled
};

// Scan [lo, hi] on a fixed grid for a sign change of g̃_zz(ω_c) and refine it
// with Brent.  The search never leaves the bracket: the curve has resonance
// poles outside any sensible window, so expanding would chase artifacts.
// Grid points where mode labeling fails (avoided crossings) are skipped.
inline ZzSearch zz_free_scan(const models::ModelSpec& m, double lo, double hi) {
    auto f = [&](double wc) { return gzz(m, wc); };
    constexpr int kGrid = 13;
    std::vector<std::pair<double, double>> pts;  // (ω_c, g̃_zz) at labelable points
    for (int k = 0; k < kGrid; ++k) {
        const double wc = lo + (hi - lo) * k / (kGrid - 1);
        try {
            pts.emplace_back(wc, f(wc));
        } catch (const labeling_error&) {
        }
    }
    if (pts.empty()) throw calibration_error("find_zz_free: labeling failed across the bracket");

    ZzSearch out;
    const double floor_hz = 2.0 * slq::pi * 1e-9;  // 1 Hz
    out.degenerate = true;
    for (const auto& [wc, g] : pts) out.degenerate = out.degenerate && std::abs(g) <= floor_hz;
    if (out.degenerate) return out;

    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (pts[k].second * pts[k + 1].second <= 0.0) {
            const double root = opt::brent_root(f, pts[k].first, pts[k + 1].first,
                                                2.0 * slq::pi * 1e-7);
            if (std::abs(f(root)) > 2.0 * slq::pi * 1e-6)
                throw calibration_error("find_zz_free: residual ZZ above 1 kHz at the root");
            out.root = root;
            return out;
        }
    }
    return out;  // no sign change inside the bracket
}

}  // namespace detail

// Coupler frequency ω_s inside [lo, hi] where g̃_zz crosses zero.
inline double find_zz_free(const models::ModelSpec& m, double lo, double hi) {
    auto search = detail::zz_free_scan(m, lo, hi);
    if (search.degenerate)
        throw solver_error(
            "find_zz_free: degenerate bracket — ZZ vanishes everywhere (couplings off?)");
    if (!search.root)
        throw solver_error("find_zz_free: no sign change of the ZZ rate inside the bracket");
    return *search.root;
}

// ---------- idle-point calibration ----------

struct IdleCalibration {
    double omega_d = 0.0;  // drive frequency at the fixed point
    double omega_s = 0.0;  // ZZ-free static coupler frequency
    double delta = 0.0;    // omega_d minus the bare qubit frequency
    int iterations = 0;
    double sensitivity = 0.0;  // hybrid sensitivity at the fixed point
    double gzz = 0.0;          // residual ZZ at the fixed point
};

// Iterate (clock δ) → (ZZ-free ω_c) → (δ correction by hybrid sensitivity)
// until both stop moving by more than 1 kHz.  The seed δ comes from the
// isolated driven qubit; coupler-induced static shifts are absorbed by the
// correction step.
inline IdleCalibration calibrate_idle(const models::ModelSpec& m, double omega_c_lo = 0.0,
                                      double omega_c_hi = 0.0) {
    if (m.kind != models::ModelKind::bbq)
        throw std::invalid_argument("calibrate_idle: three-body model required");
    auto mm = m;
    mm.bbq.omega_c_pulse = nullptr;
    if (omega_c_lo == 0.0 && omega_c_hi == 0.0) {
        omega_c_lo = mm.bbq.omega_c - slq::pi;  // ±0.5 GHz window around the seed
        omega_c_hi = mm.bbq.omega_c + slq::pi;
    }

    auto isolated = models::make_cosine_driven(mm.qubit, mm.drive);
    double delta = solve_clock(isolated, mm.drive.Omega);
    double omega_c = mm.bbq.omega_c;

    const double tol = 2.0 * slq::pi * 1e-6;       // 1 kHz fixed-point tolerance
    const double x_tol = 2.0 * slq::pi * 1e-7;     // 0.1 kHz inner-search tolerance
    double window = 2.0 * slq::pi * 50e-3;         // ±50 MHz first correction window

    for (int iter = 1; iter <= 50; ++iter) {
        auto mi = models::with_delta(mm, delta);
        mi.bbq.omega_c = omega_c;
        // Before the first δ correction the curve may not cross zero at all
        // (the coupler statically shifts the qubit, detuning the lock); keep
        // the current coupler frequency and revisit after fixing δ.
        const double omega_c_new =
            detail::zz_free_scan(mi, omega_c_lo, omega_c_hi).root.value_or(omega_c);
        mi.bbq.omega_c = omega_c_new;

        // Far-off detunings tilt the locked states until labeling is
        // genuinely ambiguous; penalize those so the search stays physical.
        auto objective = [&](double d) {
            try {
                return hybrid_sensitivity(mi, d);
            } catch (const labeling_error&) {
                return 1e6;
            }
        };
        auto [delta_new, hybrid_value] =
            detail::golden_expand(objective, delta - window, delta + window, x_tol);

        const double d_delta = std::abs(delta_new - delta);
        const double d_omega = std::abs(omega_c_new - omega_c);
        delta = delta_new;
        omega_c = omega_c_new;
        if (d_delta <= tol && d_omega <= tol) {
            IdleCalibration out;
            out.omega_d = mm.qubit_omega() + delta;
            out.omega_s = omega_c;
            out.delta = delta;
            out.iterations = iter;
            out.sensitivity = hybrid_value;
            auto mf = models::with_delta(mm, delta);
            out.gzz = gzz(mf, omega_c);
            return out;
        }
        window = std::max(4.0 * d_delta, 2.0 * slq::pi * 1e-3);
    }
    throw calibration_error("calibrate_idle: no convergence in 50 iterations (last delta " +
                            std::to_string(delta) + ", omega_c " + std::to_string(omega_c) + ")");
}

// ---------- closed-form second-order references ----------

// Dressed energies (Ẽ0, Ẽ1, Ẽ2, Ẽ3) to second order in ε = Ω/η.
inline std::array<double, 4> analytic_dressed_energies(double Omega, double eta) {
    const double eps = Omega / eta;
    return {0.5 * Omega, -0.5 * Omega, eta * (-1.0 - 9.0 * eps * eps / 8.0),
            eta * (-3.0 - 37.0 * eps * eps / 24.0)};
}

// Change of basis bare → dressed (columns are |0̃⟩…|4̃⟩) to second order.
inline Matrix analytic_U(double eps) {
    const double e2 = eps * eps;
    const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
    Eigen::MatrixXd u(5, 5);
    u << 1.0 / s2, 1.0 / s2, e2 / (2.0 * s2), 0.0, 0.0,                                  //
        1.0 / s2 - e2 / (4.0 * s2), -1.0 / s2 + e2 / (4.0 * s2), -eps / s2, e2 / (4.0 * s6), 0.0,  //
        eps / 2.0 - e2 / 4.0, -eps / 2.0 - e2 / 4.0, 1.0 - 11.0 * e2 / 32.0, -s3 * eps / 4.0,
        e2 / (10.0 * s3),  //
        e2 / (4.0 * s3), -e2 / (4.0 * s3), s3 * eps / 4.0, 1.0 - 43.0 * e2 / 288.0, -eps / 3.0,  //
        0.0, 0.0, s3 * e2 / 20.0, eps / 3.0, 1.0;
    return u.cast<Complex>();
}

// Annihilation operator in the dressed basis (U†aU) to second order.
inline Matrix analytic_a_dressed(double eps) {
    const double e2 = eps * eps;
    const double s3 = std::sqrt(3.0);
    Eigen::MatrixXd a(5, 5);
    a << (1.0 + eps) / 2.0 - 3.0 * e2 / 8.0, (-1.0 - eps) / 2.0 - e2 / 8.0,
        (2.0 - eps) / 2.0 - 7.0 * e2 / 32.0, (6.0 * eps - 5.0 * e2) / (8.0 * s3), e2 / (10.0 * s3),  //
        (1.0 - eps) / 2.0 + e2 / 8.0, (-1.0 + eps) / 2.0 + 3.0 * e2 / 8.0,
        (-2.0 - eps) / 2.0 + 7.0 * e2 / 32.0, (-5.0 * e2 - 6.0 * eps) / (8.0 * s3),
        -e2 / (10.0 * s3),                                                            //
        0.0, 0.0, -eps / 4.0, (144.0 - 11.0 * e2) / (48.0 * s3), eps / (2.0 * s3),    //
        0.0, 0.0, -e2 / (80.0 * s3), -eps / 12.0, (288.0 - 23.0 * e2) / 144.0,        //
        0.0, 0.0, 0.0, -11.0 * e2 / 90.0, -2.0 * eps / 3.0;
    return a.cast<Complex>();
}

}  // namespace slq::floquet
