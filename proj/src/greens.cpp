#include "nmdicke/greens.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nmdicke {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

double gamma_eff(const ModelParams& p) { return p.nonmarkovian_on ? p.bath.gamma : 0.0; }

// K^A(-w) = conj(K^R(-w))
cplx atom_self_energy_adv_neg(double omega, const ModelParams& p) {
    return std::conj(atom_self_energy(-omega, p));
}

// P^K_at = -2i Im K^R(w) F(w); equals 2i pi rho(w) F(w) for the rho consistent with K
cplx atom_keldysh(double omega, const ModelParams& p) {
    if (!p.nonmarkovian_on || omega <= 0.0) return {0.0, 0.0};
    double im = std::imag(atom_self_energy(omega, p));
    double F = thermal_factor(omega, p.bath.T_b, p.bath.mu_b);
    return cplx{0.0, -2.0 * im * F};
}

} // namespace

void ModelParams::validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("model: delta must be > 0");
    if (!(kappa >= 0.0)) throw std::invalid_argument("model: kappa must be >= 0");
    if (!(omega_z > 0.0)) throw std::invalid_argument("model: omega_z must be > 0");
    if (!(dy_rel >= 0.0 && dy_rel <= 1.0))
        throw std::invalid_argument("model: coupling must satisfy 0 <= y <= y_c");
    if (!(n_atoms >= 1.0)) throw std::invalid_argument("model: n_atoms must be >= 1");
    if (!markovian_on && !nonmarkovian_on)
        throw std::invalid_argument("model: at least one bath must be on");
    if (markovian_on && !(kappa > 0.0))
        throw std::invalid_argument("model: Markovian bath on requires kappa > 0");
    bath.validate();
    if (std::abs(bath.omega_z - omega_z) > 1e-14 * omega_z)
        throw std::invalid_argument("model: bath.omega_z must equal omega_z");
}

double ModelParams::y_c() const { return critical_coupling(*this); }

ModelParams ModelParams::with_y(double y) const {
    ModelParams c = *this;
    c.dy_rel = 1.0 - y / y_c();
    return c;
}

Scenario scenario_of(const ModelParams& p) {
    if (!p.markovian_on) return Scenario::nmb_only;
    if (!p.nonmarkovian_on) return Scenario::mb_only;
    if (p.bath.T_b > 0.0 && p.bath.mu_b == 0.0) return Scenario::thermal;
    return Scenario::both;
}

const char* scenario_name(Scenario s) {
    switch (s) {
    case Scenario::both: return "both";
    case Scenario::thermal: return "thermal";
    case Scenario::mb_only: return "mb-only";
    case Scenario::nmb_only: return "nmb-only";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "both") return Scenario::both;
    if (name == "thermal") return Scenario::thermal;
    if (name == "mb-only" || name == "mb_only") return Scenario::mb_only;
    if (name == "nmb-only" || name == "nmb_only") return Scenario::nmb_only;
    throw std::invalid_argument("unknown scenario '" + name + "' (both|thermal|mb-only|nmb-only)");
}

ModelParams apply_scenario(ModelParams p, Scenario s) {
    switch (s) {
    case Scenario::both:
        p.markovian_on = p.nonmarkovian_on = true;
        if (p.bath.T_b > 0.0 && p.bath.mu_b == 0.0) p.bath.T_b = 0.0;
        break;
    case Scenario::thermal:
        p.markovian_on = p.nonmarkovian_on = true;
        if (p.bath.T_b <= 0.0) p.bath.T_b = p.omega_z;
        p.bath.mu_b = 0.0;
        break;
    case Scenario::mb_only:
        p.markovian_on = true;
        p.nonmarkovian_on = false;
        break;
    case Scenario::nmb_only:
        p.markovian_on = false;
        p.nonmarkovian_on = true;
        break;
    }
    return p;
}

double critical_coupling(const ModelParams& p) {
    double k = p.kappa_eff_rate();
    return std::sqrt((p.delta * p.delta + k * k) * p.omega_z / p.delta);
}

cplx atom_self_energy(double omega, const ModelParams& p) {
    if (!p.nonmarkovian_on) return {0.0, 0.0};
    if (p.self_energy == SelfEnergyMode::pv) return self_energy_pv(omega, p.bath, 1e-11);
    return self_energy_closed(omega, p.bath, Branch::retarded);
}

Triple bare_inverse(Field which, double omega, const ModelParams& p) {
    if (which == Field::photon) {
        double k = p.kappa_eff_rate();
        cplx R{omega - p.delta, k};
        return {R, std::conj(R), cplx{0.0, 2.0 * k}};
    }
    cplx R = omega - p.omega_z - atom_self_energy(omega, p);
    return {R, std::conj(R), atom_keldysh(omega, p)};
}

cplx photon_self_energy_shift(double omega, const ModelParams& p) {
    const double y = p.y(), dy = p.delta_y(), yc = p.y_c();
    const cplx kr = atom_self_energy(omega, p);
    const cplx ka = atom_self_energy_adv_neg(omega, p);
    const cplx A = omega - p.omega_z - kr;  // P^R_at(w)
    const cplx B = -omega - p.omega_z - ka; // P^A_at(-w)
    // 1/A + 1/omega_z = (omega - K^R)/(A omega_z), likewise for B
    cplx bracket = (omega - kr) / A + (-omega - ka) / B;
    return -(y * y / (4.0 * p.omega_z)) * bracket - dy * (2.0 * yc - dy) / (2.0 * p.omega_z);
}

InverseGreens2x2 photon_effective_inverse(double omega, const ModelParams& p) {
    const double y = p.y(), k = p.kappa_eff_rate();
    const double s0 = (p.delta * p.delta + k * k) / (2.0 * p.delta); // Sigma(0, y_c)
    const cplx dS = photon_self_energy_shift(omega, p);
    const cplx S = s0 + dS;

    const Triple at_p = bare_inverse(Field::atom, omega, p);
    const Triple at_m = bare_inverse(Field::atom, -omega, p);
    if (std::abs(at_p.R) == 0.0 || std::abs(at_m.R) == 0.0)
        throw std::domain_error("photon_effective_inverse: atomic inverse propagator vanishes");

    const cplx d = (y * y / 4.0) * (at_p.K / std::norm(at_p.R) + at_m.K / std::norm(at_m.R));

    InverseGreens2x2 m;
    m.omega = omega;
    m.pR << cplx{omega - p.delta, k} + S, S, S, cplx{-omega - p.delta, -k} + S;
    m.pA = m.pR.adjoint();
    const cplx kk{0.0, 2.0 * k};
    m.pK << kk + d, d, d, kk + d;
    m.det_r = -2.0 * p.delta * dS - 2.0 * I * k * omega - omega * omega;
    return m;
}

InverseGreens2x2 atom_effective_inverse(double omega, const ModelParams& p) {
    const double y = p.y(), yc = p.y_c(), k = p.kappa_eff_rate();
    const double D2 = p.delta * p.delta + k * k;
    const cplx P0{-p.delta, k}, Q0{-p.delta, -k};
    const cplx Pw{omega - p.delta, k}, Qw{-omega - p.delta, -k};

    const double sig0 = p.omega_z / 2.0; // Sigma_at(0, y_c)
    const cplx dS = (y * y - yc * yc) * p.delta / (2.0 * D2) -
                    (y * y / 4.0) * (-omega / (Pw * P0) + omega / (Qw * Q0));
    const cplx S = sig0 + dS;

    const cplx a = omega - atom_self_energy(omega, p);
    const cplx b = -omega - atom_self_energy_adv_neg(omega, p);
    const cplx A = -p.omega_z + a, B = -p.omega_z + b;

    const Triple ph_p = bare_inverse(Field::photon, omega, p);
    const Triple ph_m = bare_inverse(Field::photon, -omega, p);
    const cplx g = (y * y / 4.0) * (ph_p.K / std::norm(ph_p.R) + ph_m.K / std::norm(ph_m.R));

    InverseGreens2x2 m;
    m.omega = omega;
    m.pR << A + S, S, S, B + S;
    m.pA = m.pR.adjoint();
    m.pK << atom_keldysh(omega, p) + g, g, g, atom_keldysh(-omega, p) + g;
    m.det_r = a * b - 0.5 * p.omega_z * (a + b) - 2.0 * p.omega_z * dS + dS * (a + b);
    return m;
}

Triple project_real_mode(const InverseGreens2x2& m) {
    const auto& P = m.pR;
    const cplx w0 = P(1, 1) - P(1, 0), w1 = P(0, 0) - P(0, 1); // u^T adj(P)
    const cplx uau = w0 + w1;
    const cplx R = m.det_r / uau;
    // w P^K w^dagger / |u^T adj u|^2
    Eigen::RowVector2cd w;
    w << w0, w1;
    const cplx K = (w * m.pK * w.adjoint())(0, 0) / std::norm(uau);
    return {R, std::conj(R), cplx{0.0, K.imag()}};
}

Triple x_inverse_exact(double omega, const ModelParams& p) {
    return project_real_mode(photon_effective_inverse(omega, p));
}

Triple phi_inverse_exact(double omega, const ModelParams& p) {
    return project_real_mode(atom_effective_inverse(omega, p));
}

std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> photon_rotated_inverse(double omega,
                                                                     const ModelParams& p) {
    const double k = p.kappa_eff_rate();
    const double ang = std::atan2(-p.delta, k);
    const cplx e = std::polar(1.0, ang);
    Eigen::Matrix2cd Rcl, Rq;
    Rcl << 1.0, 1.0, std::conj(e), e;
    Rq << 1.0, 1.0, -e, -std::conj(e);
    const auto m = photon_effective_inverse(omega, p);
    const Eigen::Matrix2cd Rcl_inv = Rcl.inverse();
    const Eigen::Matrix2cd Rq_inv_dag = Rq.inverse().adjoint();
    return {Rq_inv_dag * m.pR * Rcl_inv, Rq_inv_dag * m.pK * Rq.inverse()};
}

LowFreqCoeffs lowfreq_coefficients(const ModelParams& p) {
    LowFreqCoeffs c;
    const double k = p.kappa_eff_rate();
    const double s = p.bath.s, wz = p.omega_z, D = p.delta;
    const double yc = p.y_c(), dy = p.delta_y();
    const double g = gamma_eff(p);
    c.chi = k / D;
    c.r = yc * dy / wz;
    c.v_I = yc * yc * pi * g / (4.0 * wz * wz);
    c.v_R = c.v_I / std::tan(0.5 * pi * s);
    c.v = c.v_I / (std::sin(0.5 * pi * s) * std::pow(wz, s));
    c.kappa_eff = 0.5 * k * (1.0 + c.chi * c.chi);
    c.g_ph = std::pow(D * D + k * k, 2) / (2.0 * D * D * wz);
    c.g_at = 0.5 * yc * yc * D / (D * D + k * k);
    if (k > 0.0) c.T_eff = (k * k + D * D) / (4.0 * D);
    c.r_at = dy * yc * D / (k * k + D * D);
    c.v_atI = pi * g / 4.0;
    c.v_atR = c.v_atI / std::tan(0.5 * pi * s);
    return c;
}

Triple x_inverse_lowfreq(double omega, double delta_y, const ModelParams& p, Scenario sc) {
    if (delta_y < 0.0) throw std::invalid_argument("x_inverse_lowfreq: delta_y must be >= 0");
    ModelParams q = p;
    q.dy_rel = delta_y / p.y_c();
    const LowFreqCoeffs c = lowfreq_coefficients(q);
    const double s = p.bath.s, wz = p.omega_z;
    const double ws = std::pow(std::abs(omega) / wz, s);
    cplx R, K;
    switch (sc) {
    case Scenario::both:
        R = -c.r + ws * cplx{-c.v_R, c.v_I * sgn(omega)};
        K = {0.0, 2.0 * c.kappa_eff};
        break;
    case Scenario::thermal:
        R = -c.r + ws * cplx{-c.v_R, c.v_I * sgn(omega)};
        K = {0.0, 4.0 * c.v_I * p.bath.T_b * std::pow(wz, -s) * std::pow(std::abs(omega), s - 1.0)};
        break;
    case Scenario::mb_only:
        R = cplx{-c.r, omega * c.chi};
        K = {0.0, 2.0 * c.kappa_eff};
        break;
    case Scenario::nmb_only:
        R = -c.r + ws * cplx{-c.v_R, c.v_I * sgn(omega)};
        K = {0.0, 2.0 * c.v_I * ws};
        break;
    default: throw std::invalid_argument("x_inverse_lowfreq: unknown scenario");
    }
    return {R, std::conj(R), K};
}

double mean_field_cubic_coefficient(const ModelParams& p) {
    // photon equation: (P_ph(0)/(2i sin a)) x e^{ia} - (y/2) phi + (y/32N) phi^3 = 0
    // atom equation:   (P_at(0)/2) phi + x (-(y/2) + (3y/32N) phi^2) = 0
    const double y = p.y(), N = p.n_atoms;
    const double ang = std::atan2(-p.delta, p.kappa_eff_rate());
    const cplx Pph = bare_inverse(Field::photon, 0.0, p).R;
    const cplx c = 2.0 * I * std::sin(ang) / (Pph * std::polar(1.0, ang));
    // x = c (a1 phi + a3 phi^3), second bracket b0 + b2 phi^2
    const double a1 = y / 2.0, a3 = -y / (32.0 * N);
    const double b0 = -y / 2.0, b2 = 3.0 * y / (32.0 * N);
    const cplx cubic = c * (a1 * b2 + a3 * b0);
    if (std::abs(cubic.imag()) > 1e-12 * std::abs(cubic))
        throw std::runtime_error("mean_field_cubic_coefficient: complex coefficient");
    // phi -> 2 phi and overall sign so the equation reads r_at phi + g phi^3 / N = 0
    return -4.0 * N * cubic.real();
}

double distribution_function(ModeKind which, double omega, const ModelParams& p) {
    const Triple t = which == ModeKind::photon_x ? x_inverse_exact(omega, p) : phi_inverse_exact(omega, p);
    const double den = 2.0 * t.R.imag();
    if (den == 0.0) throw std::domain_error("distribution_function: G^R = G^A at this frequency");
    return t.K.imag() / den;
}

double distribution_lowfreq(double omega, const ModelParams& p, Scenario sc) {
    const Triple t = x_inverse_lowfreq(omega, 0.0, p, sc);
    const double den = 2.0 * t.R.imag();
    if (den == 0.0) throw std::domain_error("distribution_lowfreq: degenerate denominator");
    return t.K.imag() / den;
}

} // namespace nmdicke
