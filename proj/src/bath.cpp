#include "nmdicke/bath.hpp"

#include "nmdicke/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nmdicke {

namespace {

constexpr double pi = std::numbers::pi;

struct Accum {
    double value{0.0};
    double err{0.0};
    bool ok{true};
};

template <class F>
void add_range(Accum& acc, F&& f, double a, double b, double tol, double abs_tol) {
    auto br = log_breaks(a, b, 4.0);
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        auto r = integrate_adaptive(f, br[i], br[i + 1], tol, abs_tol, 400);
        acc.value += r.value;
        acc.err += r.error;
        acc.ok = acc.ok && r.converged;
    }
}

} // namespace

void BathParams::validate() const {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("bath: s must lie in (0,1)");
    if (!(gamma > 0.0)) throw std::invalid_argument("bath: gamma must be > 0");
    if (!(omega_z > 0.0)) throw std::invalid_argument("bath: omega_z must be > 0");
    if (!(omega_M > 0.0)) throw std::invalid_argument("bath: omega_M must be > 0");
    if (!(T_b >= 0.0)) throw std::invalid_argument("bath: T_b must be >= 0");
    if (!(mu_b <= 0.0)) throw std::invalid_argument("bath: mu_b must be <= 0");
}

double spectral_density(double omega, const BathParams& p) {
    if (omega <= 0.0) return 0.0;
    double u = omega / p.omega_M;
    return p.gamma * std::pow(omega / p.omega_z, p.s) / (1.0 + u * u);
}

double spectral_density_nocut(double omega, const BathParams& p) {
    if (omega <= 0.0) return 0.0;
    return p.gamma * std::pow(omega / p.omega_z, p.s);
}

cplx self_energy_closed(double omega, const BathParams& p, Branch b) {
    if (omega == 0.0) return {0.0, 0.0};
    double mag = pi * p.gamma / std::sin(pi * p.s) * std::pow(std::abs(omega) / p.omega_z, p.s);
    if (omega < 0.0) return {mag, 0.0};
    double ph = (b == Branch::retarded ? -1.0 : 1.0) * pi * p.s;
    return std::polar(mag, ph);
}

double self_energy_static_shift(const BathParams& p) {
    // -int rho(x)/x dx = -gamma omega_M^s pi / (2 sin(pi s/2)) in omega_z units
    return -p.gamma * std::pow(p.omega_M / p.omega_z, p.s) * pi / (2.0 * std::sin(0.5 * pi * p.s));
}

cplx self_energy_pv(double omega, const BathParams& p, double tol, Branch b) {
    if (omega == 0.0) return {0.0, 0.0};
    if (!(tol > 0.0)) throw std::invalid_argument("self_energy_pv: tol must be > 0");

    // K(w) - K(0) = P int_0^inf h(x)/(w - x) dx with h(x) = rho(x) w / x
    auto h = [&](double x) { return spectral_density(x, p) * omega / x; };
    auto regular = [&](double x) { return h(x) / (omega - x); };

    const double w = std::abs(omega);
    const double x_hi = 1.0e2 * p.omega_M;
    const double eps = 1e-14 * w;
    Accum acc;

    // below eps the integrand is rho(x)/x
    acc.value += p.gamma * std::pow(eps / p.omega_z, p.s) / p.s;

    // the subtracted integrand is O(|K|); use that as the absolute error scale
    const double abs_tol = 1e-3 * tol * pi * p.gamma * std::pow(w / p.omega_z, p.s);
    if (omega > 0.0) {
        const double a = 0.5 * w;
        const double h0 = h(omega);
        auto subtracted = [&](double x) {
            if (x == omega) return 0.0;
            return (h(x) - h0) / (omega - x);
        };
        add_range(acc, regular, eps, w - a, tol, abs_tol);
        add_range(acc, subtracted, w - a, w + a, tol, abs_tol);
        add_range(acc, regular, w + a, x_hi, tol, abs_tol);
    } else {
        add_range(acc, regular, eps, x_hi, tol, abs_tol);
    }
    // beyond x_hi: rho ~ gamma omega_M^2 x^{s-2} omega_z^{-s}, integrand ~ -rho w / x^2
    acc.value += -p.gamma * std::pow(p.omega_z, -p.s) * p.omega_M * p.omega_M * omega *
                 std::pow(x_hi, p.s - 3.0) / (3.0 - p.s);

    if (!acc.ok)
        throw QuadratureError("self_energy_pv: principal-value quadrature did not converge, error " +
                                  std::to_string(acc.err),
                              acc.err);
    double im = (b == Branch::retarded ? -1.0 : 1.0) * pi * spectral_density(omega, p);
    return {acc.value, im};
}

double thermal_factor(double omega, double T_b, double mu_b) {
    double x = omega - mu_b;
    if (T_b > 0.0) return 1.0 / std::tanh(0.5 * x / T_b);
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;
}

} // namespace nmdicke
