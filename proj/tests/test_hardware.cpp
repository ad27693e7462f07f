#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chi2cav/hardware.hpp"

using namespace chi2cav;

namespace {

hw::HardwareParams scenario1() {
    hw::HardwareParams p;
    p.Q = 1e7;
    p.chi2 = 31e-12;
    p.V_shg = 800e-18;
    p.lambda_a = 750e-9;
    p.n = 2.2;
    return p;
}

hw::HardwareParams scenario2() {
    hw::HardwareParams p;
    p.Q = 2e8;
    p.chi2 = 100e-12;
    p.lambda_a = 750e-9;
    p.n = 2.2;
    p.V_shg = 1e-3 * hw::lambda3_over_n3(p.lambda_a, p.n);
    return p;
}

}  // namespace

TEST_CASE("figure of merit scenarios") {
    const double n1 = hw::figure_of_merit(scenario1());
    CHECK(n1 > 0.003);   // within one order of magnitude of 0.03
    CHECK(n1 < 0.3);
    const double n2 = hw::figure_of_merit(scenario2());
    CHECK(n2 > 200.0);   // within one order of magnitude of 2000
    CHECK(n2 < 20000.0);
}

TEST_CASE("figure of merit scaling laws") {
    hw::HardwareParams p = scenario1();
    const double base = hw::figure_of_merit(p);

    hw::HardwareParams q = p;
    q.Q *= 2.0;
    CHECK(hw::figure_of_merit(q) == doctest::Approx(2.0 * base).epsilon(1e-12));

    q = p;
    q.chi2 *= 3.0;
    CHECK(hw::figure_of_merit(q) == doctest::Approx(3.0 * base).epsilon(1e-12));

    q = p;
    q.V_shg *= 4.0;
    CHECK(hw::figure_of_merit(q) == doctest::Approx(base / 2.0).epsilon(1e-12));

    q = p;
    q.n *= 2.0;
    CHECK(hw::figure_of_merit(q) == doctest::Approx(base / 8.0).epsilon(1e-12));

    // (Q, χ⁽²⁾) → (kQ, χ/k) leaves N unchanged.
    q = p;
    q.Q *= 7.0;
    q.chi2 /= 7.0;
    CHECK(hw::figure_of_merit(q) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("cavity lifetime") {
    const double omega_a = scenario2().omega_a();
    CHECK(omega_a == doctest::Approx(2.513e15).epsilon(1e-3));
    const double tau = hw::cavity_lifetime(2e8, omega_a);
    CHECK(tau == doctest::Approx(1.59e-7).epsilon(1e-2));
    CHECK(hw::cavity_lifetime(4e8, omega_a) == doctest::Approx(2.0 * tau));
    CHECK(hw::cavity_lifetime(2e8, 2.0 * omega_a) == doctest::Approx(0.5 * tau));
    CHECK_THROWS_AS(hw::cavity_lifetime(-1.0, omega_a), std::invalid_argument);
}

TEST_CASE("pulse unit and drive photons") {
    hw::HardwareParams p = scenario1();
    p.V_twm = p.V_shg;
    const double wb = p.omega_a() / 2.0;
    p.omega_b = wb;
    p.omega_c = wb / 2.0;
    p.omega_p = wb / 2.0;

    const double up = hw::pulse_unit(p);
    // V_twm=V_shg, ω_a=2ω_b, ω_c=ω_b/2: u_p = √(ℏ·2ω_b·ω_b/(8·ω_b/2)) = √(ℏω_b/2)
    CHECK(up == doctest::Approx(std::sqrt(hw::kHbar * wb / 2.0)).epsilon(1e-12));

    hw::HardwareParams q = p;
    q.V_twm *= 4.0;
    CHECK(hw::pulse_unit(q) == doctest::Approx(2.0 * up).epsilon(1e-12));

    CHECK(hw::drive_photon_number(0.0, p) == 0.0);
    const double n1 = hw::drive_photon_number(1.0, p);
    CHECK(hw::drive_photon_number(2.0, p) == doctest::Approx(4.0 * n1).epsilon(1e-12));
    // (1/4)·1·(2ω_b·ω_b)/((ω_b/2)²) = 2 photons at |p| = 1.
    CHECK(n1 == doctest::Approx(2.0).epsilon(1e-12));

    hw::HardwareParams bad = p;
    bad.omega_b = p.omega_a();  // breaks ω_a = 2ω_b
    CHECK_THROWS_AS(hw::figure_of_merit(bad), std::invalid_argument);
}
