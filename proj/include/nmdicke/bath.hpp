// bath.hpp - sub-ohmic bath: spectral density, self-energies, thermal factor

#pragma once

#include <complex>
#include <stdexcept>

namespace nmdicke {

using cplx = std::complex<double>;

struct BathParams {
    double gamma{0.1};     // dissipation strength
    double s{0.5};         // sub-ohmic exponent, 0 < s < 1
    double omega_z{1.0};   // spectral reference frequency
    double omega_M{1.0e4}; // UV cutoff
    double T_b{0.0};       // bath temperature (k_B = 1)
    double mu_b{0.0};      // bath chemical potential, <= 0

    void validate() const;
};

enum class Branch { retarded, advanced };

// gamma * Theta(w) (w/omega_z)^s / (1 + (w/omega_M)^2)
double spectral_density(double omega, const BathParams& p);

// Cutoff-free limit, which is what the closed-form self-energy is consistent with.
double spectral_density_nocut(double omega, const BathParams& p);

// (pi gamma / sin(pi s)) |w/omega_z|^s (Theta(w) e^{-+ i pi s} + Theta(-w)); zero at w = 0.
cplx self_energy_closed(double omega, const BathParams& p, Branch b = Branch::retarded);

// Principal-value route with the finite cutoff. The static part K(0) is subtracted so the
// result is directly comparable to the closed form (which vanishes at w = 0).
cplx self_energy_pv(double omega, const BathParams& p, double tol = 1e-10,
                    Branch b = Branch::retarded);

// K_pv(0): the (negative) static shift removed above.
double self_energy_static_shift(const BathParams& p);

// coth((w - mu)/2T) for T > 0, sgn(w - mu) for T = 0 (0 exactly at w = mu).
double thermal_factor(double omega, double T_b, double mu_b);

struct QuadratureError : std::runtime_error {
    double estimate;
    QuadratureError(const std::string& what, double est)
        : std::runtime_error(what), estimate(est) {}
};

} // namespace nmdicke
