// greens.hpp - inverse Green's functions of the driven-dissipative Dicke model
//
// Conventions: the 2x2 blocks act on (field(w), conj-field(-w)). The real order
// parameter x = a + a* (photon) or phi = b + b* (atom) is the projection onto u = (1,1).

#pragma once

#include "nmdicke/bath.hpp"

#include <Eigen/Dense>

#include <optional>

namespace nmdicke {

enum class Scenario {
    both,     // Markovian + sub-ohmic bath, T_b = 0 (or mu_b < 0)
    thermal,  // both baths, T_b > 0 and mu_b = 0
    mb_only,  // cavity loss only
    nmb_only  // sub-ohmic bath only (kappa = 0)
};

enum class SelfEnergyMode { closed, pv };

enum class Field { photon, atom };

struct ModelParams {
    double delta{2.0};   // cavity detuning
    double kappa{0.5};   // cavity decay
    double omega_z{1.0}; // atomic frequency
    // distance from the critical coupling, (y_c - y)/y_c; stored instead of y so that
    // tiny distances keep full relative precision
    double dy_rel{1.0};
    BathParams bath;
    bool markovian_on{true};
    bool nonmarkovian_on{true};
    double n_atoms{1.0};
    SelfEnergyMode self_energy{SelfEnergyMode::closed};

    void validate() const;

    double kappa_eff_rate() const { return markovian_on ? kappa : 0.0; }
    double y_c() const;
    double delta_y() const { return dy_rel * y_c(); }
    double y() const { return y_c() * (1.0 - dy_rel); }

    // copies with a different distance to the critical point
    ModelParams with_y(double y) const;
    ModelParams with_dy_rel(double d) const {
        ModelParams c = *this;
        c.dy_rel = d;
        return c;
    }
};

Scenario scenario_of(const ModelParams& p);
const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);
// Switch flags/temperature of p so that it represents the named scenario.
ModelParams apply_scenario(ModelParams p, Scenario s);

struct Triple {
    cplx R, A, K;
};

struct InverseGreens2x2 {
    Eigen::Matrix2cd pR, pA, pK;
    double omega{0.0};
    cplx det_r; // det pR, assembled without the O(1) cancellation near criticality
};

double critical_coupling(const ModelParams& p);

// K^R of the atoms with the mode selected in p (zero when the sub-ohmic bath is off)
cplx atom_self_energy(double omega, const ModelParams& p);

Triple bare_inverse(Field which, double omega, const ModelParams& p);

InverseGreens2x2 photon_effective_inverse(double omega, const ModelParams& p);
InverseGreens2x2 atom_effective_inverse(double omega, const ModelParams& p);

// delta Sigma_ph(w, y) = Sigma_ph(w, y) - Sigma_ph(0, y_c)
cplx photon_self_energy_shift(double omega, const ModelParams& p);

// Exact scalar theory of the projection onto u = (1,1).
Triple project_real_mode(const InverseGreens2x2& m);
Triple x_inverse_exact(double omega, const ModelParams& p);
Triple phi_inverse_exact(double omega, const ModelParams& p);

// Rotated photon basis (x, z): returns (P~^R, P~^K).
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> photon_rotated_inverse(double omega,
                                                                     const ModelParams& p);

struct LowFreqCoeffs {
    double r{0.0};
    double v_I{0.0};
    double v_R{0.0};
    double v{0.0};
    double kappa_eff{0.0};
    double g_ph{0.0};
    double g_at{0.0};
    std::optional<double> T_eff; // undefined without cavity loss
    double r_at{0.0};
    double v_atI{0.0};
    double v_atR{0.0};
    double chi{0.0};
};

LowFreqCoeffs lowfreq_coefficients(const ModelParams& p);

Triple x_inverse_lowfreq(double omega, double delta_y, const ModelParams& p, Scenario sc);

// Cubic coefficient of the mean-field equation for phi_cl, solved through the photon
// equation numerically and rescaled to the r_at phi + g phi^3 / N convention.
double mean_field_cubic_coefficient(const ModelParams& p);

enum class ModeKind { photon_x, atom_phi };

// F = G^K / (G^R - G^A) of the exact scalar theory
double distribution_function(ModeKind which, double omega, const ModelParams& p);
// Leading low-frequency asymptote of F_x for the scenario (Table-I style column).
double distribution_lowfreq(double omega, const ModelParams& p, Scenario sc);

} // namespace nmdicke
