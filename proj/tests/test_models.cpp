#include <catch2/catch_amalgamated.hpp>

#include "slq/io.hpp"
#include "slq/models.hpp"
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

}  // namespace

TEST_CASE("rotating-frame Kerr Hamiltonian entries") {
    models::DriveSpec d = models::make_drive(kTransmon.omega, 0.1 * kTransmon.eta, 0.0);
    Matrix h = models::build_kerr_rwa(kTransmon, d, 6);
    const double eta = kTransmon.eta;
    REQUIRE(h(0, 0).real() == Approx(0.0).margin(1e-14));
    REQUIRE(h(1, 1).real() == Approx(0.0).margin(1e-13));          // δ=0: level 1 unshifted
    REQUIRE(h(2, 2).real() == Approx(-eta));                        // anharmonic ladder
    REQUIRE(h(3, 3).real() == Approx(-3.0 * eta));
    REQUIRE(h(0, 1).real() == Approx(0.05 * eta));                  // Ω/2 coupling
    REQUIRE(h(1, 2).real() == Approx(0.05 * eta * std::sqrt(2.0)));
    REQUIRE(is_hermitian(h));

    models::DriveSpec d2 = models::make_drive(kTransmon.omega, 0.0, 0.01 * eta);
    Matrix h2 = models::build_kerr_rwa(kTransmon, d2, 4);
    REQUIRE(h2(1, 1).real() == Approx(-0.01 * eta));                // −δ per excitation
    REQUIRE(h2(2, 2).real() == Approx(-0.02 * eta - eta));
}

TEST_CASE("cosine-potential qubit calibration hits targets") {
    const auto& q = cosine_qubit();
    REQUIRE(q.omega == Approx(kTransmon.omega).epsilon(1e-9));
    REQUIRE(q.eta == Approx(kTransmon.eta).epsilon(1e-7));
    REQUIRE(q.energies.size() == 10);
    // charge-dispersion-free regime sanity: deep transmon E_J/E_C well above 20
    REQUIRE(q.params.E_J / q.params.E_C > 20.0);
    // realized spectrum reproduces ω and η from its first three levels
    const double w01 = q.energies[1] - q.energies[0];
    const double w12 = q.energies[2] - q.energies[1];
    REQUIRE(w01 == Approx(kTransmon.omega).epsilon(1e-9));
    REQUIRE(w01 - w12 == Approx(kTransmon.eta).epsilon(1e-7));
}

TEST_CASE("model specs expose qubit frequency, eta, and period") {
    models::DriveSpec d = models::make_drive(kTransmon.omega, 0.06 * kTransmon.eta,
                                             0.0018 * kTransmon.eta);
    auto rwa = models::make_kerr_rwa(kTransmon, d);
    REQUIRE(rwa.qubit_omega() == Approx(kTransmon.omega));
    REQUIRE(rwa.qubit_eta() == Approx(kTransmon.eta));
    REQUIRE_FALSE(rwa.time_dependent());

    auto lab = models::make_kerr_lab(kTransmon, d);
    REQUIRE(lab.time_dependent());
    REQUIRE(lab.period() == Approx(2.0 * pi / d.omega_d));

    auto cos_m = models::make_cosine_driven(cosine_qubit(), d);
    REQUIRE(cos_m.qubit_omega() == Approx(kTransmon.omega).epsilon(1e-9));
    REQUIRE(cos_m.qubit_eta() == Approx(kTransmon.eta).epsilon(1e-7));
    REQUIRE(cos_m.space().total_dim() == 10);

    auto shifted = models::with_delta(cos_m, 0.002 * kTransmon.eta);
    REQUIRE(shifted.drive.delta == Approx(0.002 * kTransmon.eta));
    REQUIRE(shifted.drive.omega_d ==
            Approx(cos_m.qubit_omega() + 0.002 * kTransmon.eta).epsilon(1e-12));
}

TEST_CASE("lab-frame Kerr Hamiltonian carries the sine drive") {
    models::DriveSpec d = models::make_drive(kTransmon.omega, 0.1 * kTransmon.eta, 0.0);
    auto lab = models::make_kerr_lab(kTransmon, d, 6);
    auto h = lab.hamiltonian();
    REQUIRE_FALSE(h.is_static());
    // static part is the bare Kerr ladder in the lab frame
    REQUIRE(h.h0(1, 1).real() == Approx(kTransmon.omega));
    REQUIRE(h.h0(2, 2).real() == Approx(2.0 * kTransmon.omega - kTransmon.eta));
    // drive −Ω sin(ω_d t)(a − a†)/i vanishes at t=0 and peaks a quarter period in
    Matrix h_quarter = h.at(0.25 * lab.period());
    REQUIRE((h.at(0.0) - h.h0).norm() == Approx(0.0).margin(1e-12));
    Matrix drive = h_quarter - h.h0;
    REQUIRE(std::abs(drive(0, 1)) == Approx(0.1 * kTransmon.eta).epsilon(1e-9));
    REQUIRE(is_hermitian(h_quarter));
}

TEST_CASE("driven cosine model couples through the charge operator") {
    models::DriveSpec d = models::make_drive(cosine_qubit().omega, 0.1 * kTransmon.eta, 0.0);
    auto m = models::make_cosine_driven(cosine_qubit(), d);
    auto h = m.hamiltonian();
    Matrix n1 = m.number_op(0);
    REQUIRE(n1.rows() == 10);
    REQUIRE(n1(0, 0) == Complex(0.0, 0.0));
    REQUIRE(n1(1, 1) == Complex(1.0, 0.0));
    // drive term is proportional to the projected charge matrix element
    Matrix drive = h.at(0.25 * m.period()) - h.h0;
    REQUIRE(std::abs(drive(0, 1)) > 0.0);
    REQUIRE(is_hermitian(drive, 1e-9));
}

TEST_CASE("three-body model dimensions and reference structure") {
    models::DriveSpec d = models::make_drive(cosine_qubit().omega, 0.2 * kTransmon.eta, 0.0);
    models::BbqParams p;
    p.omega2 = io::ghz_to_rad_ns(4.55);
    p.eta2 = io::ghz_to_rad_ns(0.2);
    p.omega_c = io::ghz_to_rad_ns(3.58);
    p.eta_c = io::ghz_to_rad_ns(0.2);
    p.g1c = io::mhz_to_rad_ns(190.0);
    p.g2c = io::mhz_to_rad_ns(200.0);
    p.g12 = io::mhz_to_rad_ns(-30.0);
    auto m = models::make_bbq(cosine_qubit(), d, p);
    REQUIRE(m.space().total_dim() == 160);
    auto h = m.hamiltonian();
    REQUIRE(h.dim() == 160);
    // with no pulse the only time dependence is the charge drive on qubit 1
    REQUIRE(h.terms.size() == 1);
    // coupler frequency pulse adds exactly one more term carrying the excursion
    auto m2 = m;
    const double ws = p.omega_c;
    m2.bbq.omega_c_pulse = [ws](double) { return ws; };
    auto h2 = m2.hamiltonian();
    REQUIRE(h2.terms.size() == 2);
    REQUIRE(std::abs(h2.terms.back().coeff(3.7)) == Approx(0.0).margin(1e-14));
    // shift injection adds a ζ·N term on the requested subsystem
    auto m3 = models::shift_injection(m, 0.25, 0);
    Matrix dh = m3.hamiltonian().h0 - h.h0;
    REQUIRE((dh - 0.25 * m.number_op(0)).norm() == Approx(0.0).margin(1e-12));
}
