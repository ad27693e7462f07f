#include "chi2cav/hardware.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chi2cav::hw {

double HardwareParams::omega_a() const { return 2.0 * std::numbers::pi * kSpeedOfLight / lambda_a; }

double HardwareParams::omega_b_eff() const { return omega_b ? *omega_b : omega_a() / 2.0; }

void HardwareParams::validate() const {
    if (Q <= 0.0 || chi2 <= 0.0 || V_shg <= 0.0 || lambda_a <= 0.0 || n <= 0.0)
        throw std::invalid_argument("HardwareParams: non-positive field");
    if (V_twm < 0.0) throw std::invalid_argument("HardwareParams: negative V_twm");
    if (omega_b && std::abs(omega_a() - 2.0 * *omega_b) > 1e-6 * omega_a())
        throw std::invalid_argument("HardwareParams: omega_a != 2*omega_b");
    if (omega_b && omega_c && omega_p &&
        std::abs(*omega_c + *omega_p - *omega_b) > 1e-6 * *omega_b)
        throw std::invalid_argument("HardwareParams: omega_c + omega_p != omega_b");
}

double lambda3_over_n3(double lambda_a, double n) {
    const double lam = 2.0 * lambda_a;  // fundamental (mode b) wavelength
    return lam * lam * lam / (n * n * n);
}

double figure_of_merit(const HardwareParams& p) {
    p.validate();
    return std::sqrt(kHbar / (8.0 * kEps0)) * std::sqrt(p.omega_a()) / (p.n * p.n * p.n) * p.Q *
           p.chi2 / std::sqrt(p.V_shg);
}

double cavity_lifetime(double Q, double omega_a) {
    if (Q <= 0.0 || omega_a <= 0.0) throw std::invalid_argument("cavity_lifetime: non-positive input");
    return 2.0 * Q / omega_a;
}

double pulse_unit(const HardwareParams& p) {
    p.validate();
    if (p.V_twm <= 0.0 || !p.omega_c)
        throw std::invalid_argument("pulse_unit: V_twm and omega_c required");
    return std::sqrt((1.0 / 8.0) * (p.V_twm / p.V_shg) * kHbar * p.omega_a() * p.omega_b_eff() /
                     *p.omega_c);
}

double drive_photon_number(double p_amplitude, const HardwareParams& p) {
    p.validate();
    if (!std::isfinite(p_amplitude)) throw std::invalid_argument("drive_photon_number: non-finite p");
    if (p.V_twm <= 0.0 || !p.omega_c || !p.omega_p)
        throw std::invalid_argument("drive_photon_number: V_twm, omega_c, omega_p required");
    return 0.25 * (p.V_twm / p.V_shg) * p.omega_a() * p.omega_b_eff() / (*p.omega_c * *p.omega_p) *
           p_amplitude * p_amplitude;
}

}  // namespace chi2cav::hw
