// hardware.hpp — Closed-form device figures of merit.

#pragma once

#include <optional>

namespace chi2cav::hw {

// CODATA values, fixed here for reproducibility.
inline constexpr double kHbar = 1.054571817e-34;      // J·s
inline constexpr double kEps0 = 8.8541878128e-12;     // F/m
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct HardwareParams {
    double Q{0.0};          // quality factor
    double chi2{0.0};       // second-order susceptibility, m/V
    double V_shg{0.0};      // SHG mode volume, m³
    double V_twm{0.0};      // three-wave-mixing mode volume, m³
    double lambda_a{0.0};   // wavelength of mode a, m
    double n{2.2};          // refractive index
    // Optional drive-side frequencies (rad/s); omega_a derives from lambda_a
    // and omega_b defaults to omega_a/2.
    std::optional<double> omega_b, omega_c, omega_p;

    double omega_a() const;        // 2πc/λ_a
    double omega_b_eff() const;    // supplied or ω_a/2
    void validate() const;         // positivity and frequency matching
};

// λ³/n³ convenience volume; λ is the fundamental (mode b) wavelength 2λ_a.
double lambda3_over_n3(double lambda_a, double n);

// N = √(ℏ/8ε₀)·(√ω_a/n³)·(Q·χ⁽²⁾/√V_shg)
double figure_of_merit(const HardwareParams& p);

// τ = 2Q/ω_a
double cavity_lifetime(double Q, double omega_a);

// u_p = √((1/8)(V_twm/V_shg)(ℏ·ω_a·ω_b/ω_c))
double pulse_unit(const HardwareParams& p);

// (1/4)(V_twm/V_shg)(ω_a·ω_b/(ω_c·ω_p))·|p|²
double drive_photon_number(double p_amplitude, const HardwareParams& p);

}  // namespace chi2cav::hw
