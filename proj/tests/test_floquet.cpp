#include <catch2/catch_amalgamated.hpp>

#include "slq/floquet.hpp"
#include "slq/io.hpp"
#include "slq/operators.hpp"

using namespace slq;
using Catch::Approx;

namespace {

const models::TransmonParams kTransmon{io::ghz_to_rad_ns(5.0), io::ghz_to_rad_ns(0.3)};

const models::CosineQubit& cosine_qubit() {
    static models::CosineQubit q = models::build_cosine_static(
        models::calibrate_cosine(kTransmon.omega, kTransmon.eta));
    return q;
}

models::ModelSpec rwa_model(double Omega, double delta, int dim = 10) {
    return models::make_kerr_rwa(kTransmon, models::make_drive(kTransmon.omega, Omega, delta),
                                 dim);
}

models::BbqParams coupled_params() {
    models::BbqParams p;
    p.omega2 = io::ghz_to_rad_ns(4.55);
    p.eta2 = io::ghz_to_rad_ns(0.2);
    p.omega_c = io::ghz_to_rad_ns(3.58);
    p.eta_c = io::ghz_to_rad_ns(0.2);
    p.g1c = io::mhz_to_rad_ns(190.0);
    p.g2c = io::mhz_to_rad_ns(200.0);
    p.g12 = io::mhz_to_rad_ns(-30.0);
    return p;
}

}  // namespace

TEST_CASE("fold maps into the half-open symmetric window") {
    REQUIRE(floquet::fold(2.0 * pi + 0.3, 2.0 * pi) == Approx(0.3));
    REQUIRE(floquet::fold(-pi, 2.0 * pi) == Approx(pi));  // branch is (−w/2, w/2]
    REQUIRE(floquet::fold(7.0, 2.0 * pi) == Approx(7.0 - 2.0 * pi));
    REQUIRE(floquet::fold(-0.2, 2.0 * pi) == Approx(-0.2));
}

TEST_CASE("dressed spectrum orders energies from the top") {
    auto m = rwa_model(0.2 * kTransmon.eta, 0.5 * 0.04 * kTransmon.eta);
    auto sp = floquet::dressed_spectrum(m);
    REQUIRE(sp.energies.size() == 10);
    for (int k = 0; k + 1 < 10; ++k) REQUIRE(sp.energies[k] > sp.energies[k + 1]);
    // top pair splits by slightly less than the drive amplitude
    double gap = floquet::dressed_gap(sp);
    REQUIRE(gap / (0.2 * kTransmon.eta) > 0.985);
    REQUIRE(gap / (0.2 * kTransmon.eta) < 0.995);
    // time-dependent models must be rejected on the static path
    auto lab = models::make_kerr_lab(kTransmon, m.drive, 10);
    REQUIRE_THROWS_AS(floquet::dressed_spectrum(lab), std::logic_error);
}

TEST_CASE("closed-form dressed energies track the numerical spectrum") {
    const double eta = kTransmon.eta;
    for (double eps : {0.025, 0.05}) {
        auto m = rwa_model(eps * eta, 0.5 * eps * eps * eta);
        auto sp = floquet::dressed_spectrum(m);
        auto analytic = floquet::analytic_dressed_energies(eps * eta, eta);
        for (int k = 0; k < 4; ++k)
            REQUIRE(std::abs(sp.energies[k] - analytic[k]) < 5.0 * eps * eps * eps * eta);
    }
}

TEST_CASE("closed-form dressed frame is unitary to cubic order") {
    auto defect4 = [](double eps) {
        Matrix u = floquet::analytic_U(eps);
        Matrix g = u.adjoint() * u - Matrix::Identity(5, 5);
        return g.block(0, 0, 4, 4).norm();
    };
    double ratio = defect4(0.1) / defect4(0.05);
    REQUIRE(ratio > 8.0 * 0.7);
    REQUIRE(ratio < 8.0 * 1.3);
}

TEST_CASE("closed-form dressed lowering operator matches the five-level model") {
    auto distance = [](double eps) {
        const double eta = kTransmon.eta;
        auto m = rwa_model(eps * eta, 0.5 * eps * eps * eta, 5);
        auto sp = floquet::dressed_spectrum(m);
        Matrix a = ops::bosonic_ops(5).a;
        Matrix numeric = sp.states.adjoint() * a * sp.states;
        return (numeric - floquet::analytic_a_dressed(eps)).norm();
    };
    double d05 = distance(0.05);
    double d10 = distance(0.1);
    REQUIRE(d05 < 1.6 * 0.05 * 0.05 * 0.05);
    double ratio = d10 / d05;
    REQUIRE(ratio > 8.0 * 0.7);
    REQUIRE(ratio < 8.0 * 1.3);
}

namespace {

std::vector<Vector> basis_refs(int dim, int count) {
    std::vector<Vector> refs;
    for (int k = 0; k < count; ++k) {
        Vector v = Vector::Zero(dim);
        v[k] = Complex(1.0, 0.0);
        refs.push_back(v);
    }
    return refs;
}

}  // namespace

TEST_CASE("mode labeling on simple one-period propagators") {
    SECTION("identity propagator returns the references unchanged") {
        Matrix u = Matrix::Identity(3, 3);
        std::vector<Vector> refs;
        Vector v0 = Vector::Zero(3);
        v0[0] = Complex(1.0, 0.0);
        Vector v1 = Vector::Zero(3);
        v1[1] = Complex(0.6, 0.0);
        v1[2] = Complex(0.8, 0.0);
        refs.push_back(v0);
        refs.push_back(v1);
        auto fb = floquet::floquet_modes(u, 2.0, refs);
        REQUIRE((fb.modes.col(0) - v0).norm() == Approx(0.0).margin(1e-12));
        REQUIRE((fb.modes.col(1) - v1).norm() == Approx(0.0).margin(1e-12));
        REQUIRE(std::abs(fb.eigenvalues[0] - Complex(1.0, 0.0)) < 1e-12);
        REQUIRE(fb.quasi_energies[0] == Approx(0.0).margin(1e-12));
        REQUIRE(fb.min_margin == Approx(1.0));
    }
    SECTION("diagonal propagator recovers phases on the principal branch") {
        Matrix u = Matrix::Zero(2, 2);
        const double period = 2.0;
        u(0, 0) = std::exp(Complex(0.0, -0.3 * period));
        u(1, 1) = std::exp(Complex(0.0, -1.4 * period));
        auto fb = floquet::floquet_modes(u, period, basis_refs(2, 2));
        REQUIRE(fb.quasi_energies[0] == Approx(0.3));
        REQUIRE(fb.quasi_energies[1] == Approx(1.4));
    }
    SECTION("a half-turn lands on the positive branch edge") {
        Matrix u = -Matrix::Identity(1, 1);
        auto fb = floquet::floquet_modes(u, 1.0, basis_refs(1, 1));
        REQUIRE(fb.quasi_energies[0] == Approx(pi));
    }
    SECTION("ambiguous references fail loudly") {
        Matrix u = ops::pauli('X');  // eigenvectors at 45 degrees to the references
        REQUIRE_THROWS_AS(floquet::floquet_modes(u, 1.0, basis_refs(2, 2)), labeling_error);
    }
    SECTION("non-unitary input is rejected") {
        Matrix u = 0.9 * Matrix::Identity(2, 2);
        REQUIRE_THROWS_AS(floquet::floquet_modes(u, 1.0, basis_refs(2, 2)),
                          std::invalid_argument);
    }
}

TEST_CASE("undriven one-period propagator reproduces static phases") {
    models::DriveSpec d = models::make_drive(kTransmon.omega, 0.0, 0.0);
    auto lab = models::make_kerr_lab(kTransmon, d, 6);
    Matrix u = floquet::period_propagator(lab);
    Matrix exact = expm_herm(lab.hamiltonian().h0, Complex(0.0, -lab.period()));
    REQUIRE((u - exact).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("reference states follow the drive") {
    auto driven = rwa_model(0.1 * kTransmon.eta, 0.0);
    auto refs = floquet::model_references(driven);
    REQUIRE(refs.size() == 2);
    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE(refs[0][0].real() == Approx(r));
    REQUIRE(refs[0][1].real() == Approx(r));
    REQUIRE(refs[1][1].real() == Approx(-r));

    auto idle = rwa_model(0.0, 0.0);
    auto bare = floquet::model_references(idle);
    REQUIRE(bare[0][0].real() == Approx(1.0));
    REQUIRE(bare[1][1].real() == Approx(1.0));

    auto bbq = models::make_bbq(cosine_qubit(),
                                models::make_drive(cosine_qubit().omega, 0.1, 0.0),
                                coupled_params());
    auto refs4 = floquet::model_references(bbq);
    REQUIRE(refs4.size() == 4);
    TensorSpace sp = bbq.space();
    Vector expect0 = (basis_ket(sp, {0, 0, 0}) + basis_ket(sp, {1, 0, 0})) / std::sqrt(2.0);
    Vector expect1 = (basis_ket(sp, {0, 1, 0}) + basis_ket(sp, {1, 1, 0})) / std::sqrt(2.0);
    REQUIRE((refs4[0] - expect0).norm() == Approx(0.0).margin(1e-12));
    REQUIRE((refs4[1] - expect1).norm() == Approx(0.0).margin(1e-12));
}

TEST_CASE("lab-frame quasi-energy gap matches the rotating frame") {
    const double Omega = 0.05 * kTransmon.eta;
    const double delta = 0.5 * Omega * Omega / kTransmon.eta;
    double gap_rwa = floquet::dressed_gap(rwa_model(Omega, delta), delta);
    auto lab = models::make_kerr_lab(kTransmon,
                                     models::make_drive(kTransmon.omega, Omega, delta), 10);
    double gap_lab = floquet::dressed_gap(lab, delta);
    REQUIRE(gap_lab == Approx(gap_rwa).epsilon(0.01));
    REQUIRE(std::abs(gap_lab - gap_rwa) < 5e-4);  // counter-rotating shift is small
}

TEST_CASE("clock detuning on the rotating-frame model") {
    auto m = rwa_model(0.0, 0.0);
    const double eta = kTransmon.eta;

    SECTION("zero drive needs no detuning") {
        REQUIRE(floquet::solve_clock(m, 0.0) == 0.0);
    }
    SECTION("weak drive matches the quadratic law with a small deficit") {
        double Omega = 0.02 * eta;
        double delta = floquet::solve_clock(m, Omega);
        double lead = 0.5 * Omega * Omega / eta;
        REQUIRE(delta / lead > 0.995);
        REQUIRE(delta / lead < 1.0);
        auto tuned = models::with_delta(rwa_model(Omega, 0.0), delta);
        REQUIRE(floquet::sensitivity(tuned, delta) < 1e-6);
    }
    SECTION("detuning is even in the drive amplitude") {
        double Omega = 0.05 * eta;
        double dplus = floquet::solve_clock(m, Omega);
        double dminus = floquet::solve_clock(m, -Omega);
        REQUIRE(std::abs(dplus - dminus) < 1e-7);
    }
    SECTION("zero-drive sensitivity is the bare number gap") {
        REQUIRE(floquet::sensitivity(m, 0.0) == Approx(1.0));
    }
    SECTION("overly strong drives are rejected") {
        REQUIRE_THROWS_AS(floquet::solve_clock(m, 0.6 * eta), std::invalid_argument);
    }
}

TEST_CASE("gap curvature at the clock point scales as the inverse drive") {
    auto m = rwa_model(0.0, 0.0);
    const double eta = kTransmon.eta;
    for (double frac : {0.05, 0.1}) {
        double Omega = frac * eta;
        auto driven = rwa_model(Omega, 0.0);
        double dstar = floquet::solve_clock(m, Omega);
        const double h = 1e-3 * eta;
        double g0 = floquet::dressed_gap(driven, dstar);
        double gp = floquet::dressed_gap(driven, dstar + h);
        double gm = floquet::dressed_gap(driven, dstar - h);
        double curvature = (gp + gm - 2.0 * g0) / (h * h);
        double ratio = curvature * Omega;
        REQUIRE(ratio > 0.7);
        REQUIRE(ratio < 1.3);
    }
}

TEST_CASE("clock detuning agrees between rotating-frame and lab-frame models") {
    const double Omega = 0.05 * kTransmon.eta;
    double d_rwa = floquet::solve_clock(rwa_model(0.0, 0.0), Omega);
    auto lab = models::make_kerr_lab(kTransmon, models::make_drive(kTransmon.omega, 0.0, 0.0),
                                     10);
    double d_lab = floquet::solve_clock(lab, Omega);
    REQUIRE(std::abs(d_lab - d_rwa) < 2e-4);  // counter-rotating shift stays tens of kHz
}

TEST_CASE("clock detuning on the cosine-potential model stays near the quadratic law") {
    const double Omega = 0.05 * kTransmon.eta;
    auto m = models::make_cosine_driven(cosine_qubit(),
                                        models::make_drive(cosine_qubit().omega, 0.0, 0.0));
    double delta = floquet::solve_clock(m, Omega);
    double lead = 0.5 * Omega * Omega / kTransmon.eta;
    REQUIRE(std::abs(delta - lead) < io::mhz_to_rad_ns(1.0));
}

TEST_CASE("population-matching calibration variant") {
    SECTION("coincides with the sensitivity minimum on static models") {
        for (double r : {0.2, 0.3}) {
            const double Omega = r * kTransmon.eta;
            double ds = floquet::solve_clock(rwa_model(0.0, 0.0), Omega);
            double dp = floquet::solve_clock_populations(rwa_model(0.0, 0.0), Omega);
            REQUIRE(std::abs(dp - ds) < io::mhz_to_rad_ns(1e-4));
        }
    }
    SECTION("sits a counter-rotating offset above it on the driven cosine model") {
        auto m = models::make_cosine_driven(cosine_qubit(),
                                            models::make_drive(cosine_qubit().omega, 0.0, 0.0));
        // frozen: 6.570760 vs 6.173744 MHz at 0.2η, 13.484052 vs 12.655357 at 0.3η
        const double O2 = 0.2 * kTransmon.eta;
        double gap2 = floquet::solve_clock_populations(m, O2) - floquet::solve_clock(m, O2);
        REQUIRE(io::rad_ns_to_mhz(gap2) == Approx(0.397).margin(0.02));
        const double O3 = 0.3 * kTransmon.eta;
        double gap3 = floquet::solve_clock_populations(m, O3) - floquet::solve_clock(m, O3);
        REQUIRE(io::rad_ns_to_mhz(gap3) == Approx(0.829).margin(0.04));
        // the offset is a counter-rotating effect: it scales like Ω²
        REQUIRE(gap3 / gap2 == Approx(2.25).margin(0.25));
    }
    SECTION("zero at zero drive and a zero of the imbalance at the solution") {
        auto m = rwa_model(0.0, 0.0);
        REQUIRE(floquet::solve_clock_populations(m, 0.0) == 0.0);
        const double Omega = 0.1 * kTransmon.eta;
        double dp = floquet::solve_clock_populations(m, Omega);
        auto tuned = m;
        tuned.drive.Omega = Omega;
        REQUIRE(std::abs(floquet::population_imbalance(tuned, dp)) < 1e-6);
    }
}

TEST_CASE("uncoupled three-body model reduces to the single qubit") {
    models::BbqParams p = coupled_params();
    p.g1c = p.g2c = p.g12 = 0.0;
    p.dim2 = 2;
    p.dimc = 2;
    const double Omega = 0.2 * kTransmon.eta;
    auto single = models::make_cosine_driven(cosine_qubit(),
                                             models::make_drive(cosine_qubit().omega, Omega, 0.0));
    double d_single = floquet::solve_clock(single, Omega);

    auto m = models::make_bbq(cosine_qubit(),
                              models::make_drive(cosine_qubit().omega, Omega, d_single), p);

    SECTION("zz rate vanishes identically") {
        REQUIRE(std::abs(floquet::gzz(m, p.omega_c)) < 1e-8);
    }
    SECTION("hybrid sensitivity equals the single-qubit sensitivity off the clock point") {
        double probe = d_single + io::mhz_to_rad_ns(5.0);
        double s1 = floquet::sensitivity(single, probe);
        double sh = floquet::hybrid_sensitivity(m, probe);
        REQUIRE(std::abs(sh - s1) < 1e-3);
    }
    SECTION("idle calibration converges immediately onto the single-qubit point") {
        auto cal = floquet::calibrate_idle(m);
        REQUIRE(cal.iterations <= 3);
        REQUIRE(std::abs(cal.delta - d_single) < io::mhz_to_rad_ns(2e-3));
        REQUIRE(cal.omega_s == Approx(p.omega_c));
        REQUIRE(cal.omega_d == Approx(cosine_qubit().omega + cal.delta));
        REQUIRE(std::abs(cal.gzz) < 1e-8);
        REQUIRE(cal.sensitivity < 1e-6);
    }
}

TEST_CASE("coupled three-body model: zz rate and zero crossing", "[slow]") {
    // The couplings Lamb-shift the locked qubit by tens of MHz, so the
    // single-qubit clock detuning is far off the coupled fixed point.  The
    // full correction loop (calibrate_idle) is exercised by the acceptance
    // suite; here the converged lock detuning for these parameters is frozen
    // as a fixture so the ZZ diagnostics can be checked in isolation.
    models::BbqParams p = coupled_params();
    const double Omega = 0.2 * kTransmon.eta;
    const double d_cal = 0.193795;  // rad/ns ≈ 2π·30.84 MHz, calibrated fixed point
    auto m = models::make_bbq(cosine_qubit(),
                              models::make_drive(cosine_qubit().omega, Omega, d_cal), p);

    SECTION("labeling margins stay healthy at full size") {
        Matrix u = floquet::period_propagator(m);
        auto fb = floquet::floquet_modes(u, m.period(), floquet::model_references(m));
        REQUIRE(fb.min_margin > 0.3);
    }
    SECTION("the calibrated detuning beats the single-qubit seed on sensitivity") {
        auto single = models::make_cosine_driven(
            cosine_qubit(), models::make_drive(cosine_qubit().omega, Omega, 0.0));
        double d_single = floquet::solve_clock(single, Omega);
        REQUIRE(floquet::hybrid_sensitivity(m, d_cal) <
                0.1 * floquet::hybrid_sensitivity(m, d_single));
    }
    SECTION("zz rate near the operating point") {
        double g = floquet::gzz(m, io::ghz_to_rad_ns(4.31));
        REQUIRE(std::abs(io::rad_ns_to_mhz(g)) > 2.0);
        REQUIRE(std::abs(io::rad_ns_to_mhz(g)) < 3.0);
    }
    SECTION("zz-free coupler frequency sits near 3.58 GHz") {
        double ws = floquet::find_zz_free(m, io::ghz_to_rad_ns(3.45), io::ghz_to_rad_ns(3.70));
        REQUIRE(io::rad_ns_to_ghz(ws) == Approx(3.58).margin(0.03));
    }
}
