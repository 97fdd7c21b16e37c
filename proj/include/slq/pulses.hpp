// pulses.hpp — control envelopes: DRAG quadratures for the dressed-basis
// single-qubit gate, the flat-top coupler frequency pulse, the sin² ramp
// ansatz, file-based envelope playback, and phase tracking for drives on
// qubits whose frequency moves in time.
#pragma once

#include "io.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <utility>
#include <vector>

namespace slq::pulses {

// ---------- DRAG pulse on top of the continuous lock ----------

struct DragParams {
    double A = 0.0;              // dimensionless area parameter
    double l_D = 0.0;            // dimensionless derivative coefficient
    double omega_d_prime = 0.0;  // pulse carrier (rad/ns), free parameter
    double T_g = 0.0;            // gate duration (ns)
    double n01 = 0.0;            // dressed charge element ⟨0̃|n̂|1̃⟩
};

// (Ω'_x, Ω'_y) at time t.  Ω'_x = A/(T_g·n01)·(1 − cos(2πt/T_g)), and the
// second quadrature is the exact derivative rule Ω'_y = −(l_D/η)·dΩ'_x/dt.
// Outside [0, T_g] both quadratures clamp to zero (warned once per process).
inline std::pair<double, double> drag_envelopes(const DragParams& p, double eta, double t) {
    if (p.T_g <= 0) throw std::invalid_argument("drag_envelopes: T_g must be positive");
    if (p.n01 == 0) throw std::invalid_argument("drag_envelopes: n01 must be nonzero");
    if (t < 0.0 || t > p.T_g) {
        static bool warned = false;
        if (!warned) {
            std::cerr << "drag_envelopes: time outside [0, T_g], clamping to zero\n";
            warned = true;
        }
        return {0.0, 0.0};
    }
    const double w = 2.0 * slq::pi / p.T_g;
    const double amp = p.A / (p.T_g * p.n01);
    const double ox = amp * (1.0 - std::cos(w * t));
    const double oy = -(p.l_D / eta) * amp * w * std::sin(w * t);
    return {ox, oy};
}

// ---------- flat-top coupler frequency pulse ----------

struct CzPulseParams {
    double omega_s = 0.0;  // parked (ZZ-free) coupler frequency (rad/ns)
    double omega_f = 0.0;  // flat-top coupler frequency (rad/ns)
    double T_r = 0.0;      // ramp duration (ns)
    double T_f = 0.0;      // flat-top duration (ns)
    double m = 1.0;        // inner shape exponent
    double n = 1.0;        // outer shape exponent

    double T_g() const { return T_f + 2.0 * T_r; }
    double T_fr() const { return T_f + T_r; }
    double omega_fs() const { return omega_f - omega_s; }
};

// Coupler frequency at time t: nested-exponent sine ramp up, flat top, and
// the mirrored ramp down; parks at ω_s outside [0, T_g].
inline double cz_omega_c(const CzPulseParams& p, double t) {
    if (p.T_r <= 0) throw std::invalid_argument("cz_omega_c: T_r must be positive");
    if (p.T_f < 0) throw std::invalid_argument("cz_omega_c: T_f must be non-negative");
    if (p.m <= 0 || p.n <= 0) throw std::invalid_argument("cz_omega_c: exponents must be positive");
    if (t <= 0.0 || t >= p.T_g()) return p.omega_s;
    auto shape = [&](double s) {  // s = sin(...) ∈ [0, 1]
        return std::pow(1.0 - std::pow(1.0 - s, p.m), p.n);
    };
    if (t < p.T_r) return p.omega_s + p.omega_fs() * shape(std::sin(slq::pi * t / (2.0 * p.T_r)));
    if (t <= p.T_fr()) return p.omega_f;
    return p.omega_s + p.omega_fs() * shape(std::sin(slq::pi * (t - p.T_f) / (2.0 * p.T_r)));
}

// ---------- two-quadrature envelopes ----------

// An envelope is (Ω_x(t), Ω_y(t)), either closed-form or linearly
// interpolated samples (clamped to the end values outside the sample range).
struct Envelope {
    std::function<std::pair<double, double>(double)> fn;  // parametric form
    std::vector<double> times;                            // sampled form
    std::vector<double> omega_x;
    std::vector<double> omega_y;

    bool is_sampled() const { return !times.empty(); }

    std::pair<double, double> at(double t) const {
        if (!is_sampled()) {
            if (!fn) throw std::logic_error("Envelope: neither samples nor function set");
            return fn(t);
        }
        if (t <= times.front()) return {omega_x.front(), omega_y.front()};
        if (t >= times.back()) return {omega_x.back(), omega_y.back()};
        auto it = std::upper_bound(times.begin(), times.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - times.begin());
        const double u = (t - times[k - 1]) / (times[k] - times[k - 1]);
        return {omega_x[k - 1] + u * (omega_x[k] - omega_x[k - 1]),
                omega_y[k - 1] + u * (omega_y[k] - omega_y[k - 1])};
    }
};

// Smooth ramp-up ansatz.  The base shape is Ω_x = Ω sin²(πt/2T_r) with the
// derivative rule Ω_y = −(l/η)·dΩ_x/dt; the optional Fourier corrections add
// Ω·Σ_k a_k sin²(πτ)sin(kπτ) to Ω_x and Ω·Σ_k c_k sin²(πτ)sin(kπτ) to Ω_y
// (τ = t/T_r).  Every correction term vanishes with zero slope at both ends,
// so the boundary values Ω_x(0)=Ω_y(0)=Ω_y(T_r)=0 and Ω_x(T_r)=Ω hold
// exactly for any shape vector.  Layout: shape = {l, a_1..a_K, c_1..c_K}
// (odd length; {l} alone reproduces the bare two-parameter form).
inline Envelope ramp_ansatz(double Omega, double T_r, const std::vector<double>& shape,
                            double eta) {
    if (T_r <= 0) throw std::invalid_argument("ramp_ansatz: T_r must be positive");
    if (shape.empty() || shape.size() % 2 == 0)
        throw std::invalid_argument("ramp_ansatz: shape must be {l, a_1..a_K, c_1..c_K}");
    const std::size_t K = (shape.size() - 1) / 2;
    Envelope env;
    env.fn = [=](double t) -> std::pair<double, double> {
        if (t <= 0.0) return {0.0, 0.0};
        if (t >= T_r) return {Omega, 0.0};
        const double tau = t / T_r;
        const double s = std::sin(slq::pi * tau / 2.0);
        const double s2 = std::sin(slq::pi * tau) * std::sin(slq::pi * tau);
        double ox = Omega * s * s;
        double dox_dt = Omega * (slq::pi / (2.0 * T_r)) * std::sin(slq::pi * tau);
        double oy_free = 0.0;
        for (std::size_t k = 1; k <= K; ++k) {
            const double sk = std::sin(k * slq::pi * tau);
            const double ck = std::cos(k * slq::pi * tau);
            ox += Omega * shape[k] * s2 * sk;
            dox_dt += Omega * shape[k] *
                      (slq::pi / T_r) * (std::sin(2.0 * slq::pi * tau) * sk + k * s2 * ck);
            oy_free += Omega * shape[K + k] * s2 * sk;
        }
        const double oy = -(shape[0] / eta) * dox_dt + oy_free;
        return {ox, oy};
    };
    return env;
}

// Two-parameter convenience form: base shape with the derivative coefficient
// only.
inline Envelope ramp_ansatz(double Omega, double T_r, double l, double eta) {
    return ramp_ansatz(Omega, T_r, std::vector<double>{l}, eta);
}

// Time-reversed copy over [0, duration]: value at t is the original's at
// duration − t ("initial and final conditions are reversed").
inline Envelope reversed(const Envelope& env, double duration) {
    Envelope out;
    if (env.is_sampled()) {
        const std::size_t n = env.times.size();
        out.times.resize(n);
        out.omega_x.resize(n);
        out.omega_y.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            out.times[k] = duration - env.times[n - 1 - k];
            out.omega_x[k] = env.omega_x[n - 1 - k];
            out.omega_y[k] = env.omega_y[n - 1 - k];
        }
        return out;
    }
    auto fn = env.fn;
    out.fn = [fn, duration](double t) { return fn(duration - t); };
    return out;
}

// ---------- envelope files ----------

// CSV columns: t_ns, omega_x_MHz, omega_y_MHz (ordinary frequencies in
// files; converted to rad/ns here).
inline Envelope load_envelope(const std::string& path) {
    io::Csv csv = io::read_csv(path);
    if (csv.header.size() != 3 || csv.header[0] != "t_ns" || csv.header[1] != "omega_x_MHz" ||
        csv.header[2] != "omega_y_MHz")
        throw parse_error("load_envelope: expected header t_ns,omega_x_MHz,omega_y_MHz in " + path);
    Envelope env;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        if (row.size() != 3)
            throw parse_error("load_envelope: row " + std::to_string(r + 2) + " has " +
                              std::to_string(row.size()) + " fields");
        const std::string ctx = path + " row " + std::to_string(r + 2);
        double t = io::parse_double(row[0], ctx);
        if (!env.times.empty() && t <= env.times.back())
            throw parse_error("load_envelope: non-monotonic time at row " + std::to_string(r + 2));
        env.times.push_back(t);
        env.omega_x.push_back(io::mhz_to_rad_ns(io::parse_double(row[1], ctx)));
        env.omega_y.push_back(io::mhz_to_rad_ns(io::parse_double(row[2], ctx)));
    }
    if (env.times.size() < 2) throw parse_error("load_envelope: need at least two samples");
    return env;
}

inline void save_envelope(const std::string& path, const Envelope& env) {
    if (!env.is_sampled())
        throw std::invalid_argument("save_envelope: only sampled envelopes can be written");
    std::vector<io::Row> rows;
    rows.reserve(env.times.size());
    for (std::size_t k = 0; k < env.times.size(); ++k)
        rows.push_back({io::fmt(env.times[k]), io::fmt(io::rad_ns_to_mhz(env.omega_x[k])),
                        io::fmt(io::rad_ns_to_mhz(env.omega_y[k]))});
    io::write_csv(path, {"t_ns", "omega_x_MHz", "omega_y_MHz"}, rows);
}

// Sample a parametric envelope onto a uniform grid (endpoints included).
inline Envelope sampled(const Envelope& env, double t0, double t1, int count) {
    if (count < 2) throw std::invalid_argument("sampled: need at least two samples");
    Envelope out;
    out.times.resize(count);
    out.omega_x.resize(count);
    out.omega_y.resize(count);
    for (int k = 0; k < count; ++k) {
        const double t = t0 + (t1 - t0) * k / (count - 1);
        auto [ox, oy] = env.at(t);
        out.times[k] = t;
        out.omega_x[k] = ox;
        out.omega_y[k] = oy;
    }
    return out;
}

// ---------- phase tracking for moving qubit frequencies ----------

// φ(t) = ∫₀ᵗ (ω(s) + δ*) ds accumulated by the trapezoid rule on the ω(t)
// samples (exact for piecewise-linear ω); φ̇ − ω(t) = δ* everywhere, so a
// drive sin(φ(t)) stays locked to a qubit whose frequency drifts.
struct PhaseTrack {
    std::vector<double> times;
    std::vector<double> omega;  // ω(t_k) + δ*, rad/ns
    std::vector<double> phi;    // accumulated phase at t_k

    double operator()(double t) const {
        if (times.empty()) throw std::logic_error("PhaseTrack: empty");
        if (t <= times.front()) return phi.front() + (t - times.front()) * omega.front();
        if (t >= times.back()) return phi.back() + (t - times.back()) * omega.back();
        auto it = std::upper_bound(times.begin(), times.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - times.begin());
        const double dt = t - times[k - 1];
        const double u = dt / (times[k] - times[k - 1]);
        const double w_t = omega[k - 1] + u * (omega[k] - omega[k - 1]);
        return phi[k - 1] + 0.5 * (omega[k - 1] + w_t) * dt;
    }
};

inline PhaseTrack phase_tracked_drive(const std::vector<double>& times,
                                      const std::vector<double>& omega_of_t, double delta_star) {
    if (times.size() != omega_of_t.size() || times.size() < 2)
        throw std::invalid_argument("phase_tracked_drive: need matching samples (≥ 2)");
    PhaseTrack track;
    track.times = times;
    track.omega.resize(times.size());
    track.phi.resize(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0 && times[k] <= times[k - 1])
            throw std::invalid_argument("phase_tracked_drive: times must increase");
        track.omega[k] = omega_of_t[k] + delta_star;
    }
    track.phi[0] = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k)
        track.phi[k] = track.phi[k - 1] +
                       0.5 * (track.omega[k - 1] + track.omega[k]) * (times[k] - times[k - 1]);
    return track;
}

}  // namespace slq::pulses
