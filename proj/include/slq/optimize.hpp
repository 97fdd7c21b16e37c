// optimize.hpp — derivative-free numeric kit: Nelder–Mead simplex,
// golden-section minimization, and Brent root bracketing/refinement.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "linalg.hpp"

namespace slq::opt {

using Objective = std::function<double(const std::vector<double>&)>;

struct NelderMeadOptions {
    int max_evals = 2000;
    double x_tol = 1e-9;       // simplex diameter (relative to scale)
    double f_tol = 1e-12;      // spread of simplex values
    double initial_step = 0.1; // per-coordinate step when building the simplex
    std::vector<double> lower; // optional box bounds (empty = unbounded)
    std::vector<double> upper;
};

struct OptimResult {
    std::vector<double> x;
    double value = 0.0;
    int evals = 0;
    bool converged = false;
};

// Standard Nelder–Mead with box clipping. Deterministic for a given start.
inline OptimResult nelder_mead(const Objective& f, std::vector<double> x0,
                               const NelderMeadOptions& opts = {}) {
    const size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");

    auto clip = [&](std::vector<double>& x) {
        for (size_t i = 0; i < n; ++i) {
            if (i < opts.lower.size()) x[i] = std::max(x[i], opts.lower[i]);
            if (i < opts.upper.size()) x[i] = std::min(x[i], opts.upper[i]);
        }
    };

    int evals = 0;
    auto eval = [&](std::vector<double> x) {
        clip(x);
        ++evals;
        return f(x);
    };

    clip(x0);
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (size_t i = 0; i < n; ++i) {
        double step = opts.initial_step * std::max(1.0, std::abs(x0[i]));
        pts[i + 1][i] += step;
    }
    for (size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

    auto order = [&] {
        std::vector<size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), size_t{0});
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> p2(n + 1);
        std::vector<double> v2(n + 1);
        for (size_t i = 0; i <= n; ++i) {
            p2[i] = pts[idx[i]];
            v2[i] = vals[idx[i]];
        }
        pts = std::move(p2);
        vals = std::move(v2);
    };

    while (evals < opts.max_evals) {
        order();
        double diam = 0.0, scale = 1.0;
        for (size_t i = 0; i < n; ++i) {
            double lo = pts[0][i], hi = pts[0][i];
            for (size_t k = 1; k <= n; ++k) {
                lo = std::min(lo, pts[k][i]);
                hi = std::max(hi, pts[k][i]);
            }
            diam = std::max(diam, hi - lo);
            scale = std::max(scale, std::abs(pts[0][i]));
        }
        if (diam <= opts.x_tol * scale && std::abs(vals[n] - vals[0]) <= opts.f_tol)
            return {pts[0], vals[0], evals, true};

        std::vector<double> centroid(n, 0.0);
        for (size_t k = 0; k < n; ++k)
            for (size_t i = 0; i < n; ++i) centroid[i] += pts[k][i] / static_cast<double>(n);

        auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
            std::vector<double> r(n);
            for (size_t i = 0; i < n; ++i) r[i] = a[i] + t * (b[i] - a[i]);
            clip(r);
            return r;
        };

        auto xr = blend(centroid, pts[n], -1.0);  // reflection
        double fr = eval(xr);
        if (fr < vals[0]) {
            auto xe = blend(centroid, pts[n], -2.0);  // expansion
            double fe = eval(xe);
            if (fe < fr) { pts[n] = xe; vals[n] = fe; }
            else { pts[n] = xr; vals[n] = fr; }
        } else if (fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            auto xc = blend(centroid, pts[n], fr < vals[n] ? -0.5 : 0.5);  // contraction
            double fc = eval(xc);
            if (fc < std::min(fr, vals[n])) { pts[n] = xc; vals[n] = fc; }
            else {  // shrink toward best
                for (size_t k = 1; k <= n; ++k) {
                    pts[k] = blend(pts[0], pts[k], 0.5);
                    vals[k] = eval(pts[k]);
                }
            }
        }
    }
    order();
    return {pts[0], vals[0], evals, false};
}

// ---------- 1-D minimization ----------

struct GoldenResult {
    double x = 0.0;
    double value = 0.0;
    int evals = 0;
};

// Golden-section minimization of f on [a, b] to an abscissa tolerance.
inline GoldenResult golden_section(const std::function<double(double)>& f, double a, double b,
                                   double x_tol, int max_evals = 400) {
    if (!(b > a)) std::swap(a, b);
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    int evals = 2;
    while ((b - a) > x_tol && evals < max_evals) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    return fc < fd ? GoldenResult{c, fc, evals} : GoldenResult{d, fd, evals};
}

// ---------- 1-D root finding ----------

// Brent's method on a sign-changing bracket [a, b].
inline double brent_root(const std::function<double(double)>& f, double a, double b,
                         double x_tol = 1e-13, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw solver_error("brent_root: bracket does not change sign");
    if (std::abs(fa) < std::abs(fb)) { std::swap(a, b); std::swap(fa, fb); }
    double c = a, fc = fa, s = b, d = b - a;
    bool mflag = true;
    for (int it = 0; it < max_iter; ++it) {
        if (fb == 0.0 || std::abs(b - a) < x_tol) return b;
        if (fa != fc && fb != fc) {  // inverse quadratic
            s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {  // secant
            s = b - fb * (b - a) / (fb - fa);
        }
        const double lo = (3.0 * a + b) / 4.0;
        const bool out = !((s > std::min(lo, b) && s < std::max(lo, b)));
        const double step_prev = mflag ? std::abs(b - c) : std::abs(c - d);
        if (out || std::abs(s - b) >= step_prev / 2.0 || step_prev < x_tol) {
            s = (a + b) / 2.0;
            mflag = true;
        } else {
            mflag = false;
        }
        const double fs = f(s);
        d = c;
        c = b; fc = fb;
        if (fa * fs < 0.0) { b = s; fb = fs; }
        else { a = s; fa = fs; }
        if (std::abs(fa) < std::abs(fb)) { std::swap(a, b); std::swap(fa, fb); }
    }
    return b;
}

// Expand a bracket geometrically around [a, b] until f changes sign.
inline std::pair<double, double> expand_bracket(const std::function<double(double)>& f, double a,
                                                double b, int max_expand = 60) {
    double fa = f(a), fb = f(b);
    double w = b - a;
    for (int k = 0; k < max_expand; ++k) {
        if (fa * fb <= 0.0) return {a, b};
        w *= 1.6;
        if (std::abs(fa) < std::abs(fb)) { a -= w; fa = f(a); }
        else { b += w; fb = f(b); }
    }
    throw solver_error("expand_bracket: no sign change found");
}

}  // namespace slq::opt
