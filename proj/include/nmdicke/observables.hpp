// observables.hpp - photon number, time-domain correlation/response functions, MSD

#pragma once

#include "nmdicke/greens.hpp"

#include <functional>
#include <vector>

namespace nmdicke {

struct QuadConfig {
    double rel_tol{1e-10};
    double omega_min{1e-16}; // IR floor, units of omega_z
    double omega_max{1e3};   // start of the analytic 1/w^2 tail
    int max_subdivisions{4000};

    void validate() const;
};

struct IntegrationError : std::runtime_error {
    double estimate;
    IntegrationError(const std::string& what, double est) : std::runtime_error(what), estimate(est) {}
};

// Which Green's function the time-domain quantities refer to.
enum class Correlator {
    photon,         // [G]_11 of the cavity field a
    order_parameter, // exact scalar theory of x = a + a*
    order_parameter_lowfreq // leading low-frequency theory of x; MB-only (1/w^2 tails) only
};

// i[G^K(w)]_11 = <|a_cl(w)|^2>, real and positive
double photon_keldysh_spectrum(double omega, const ModelParams& p);
// [G^R(w)]_11
cplx photon_retarded(double omega, const ModelParams& p);
// i G^K_x(w) and G^R_x(w) of the order parameter
double x_keldysh_spectrum(double omega, const ModelParams& p);
cplx x_retarded(double omega, const ModelParams& p);

double photon_number(const ModelParams& p, const QuadConfig& q = {});

// Spectral representation of a function on the real axis, built once and transformed
// at many times: int dw/2pi F(w) e^{-iwt}.
class SpectralTransform {
public:
    using Fn = std::function<cplx(double)>;
    // t_max bounds the times that will be requested (sets the IR floor).
    SpectralTransform(Fn F, const QuadConfig& q, double t_max);

    cplx operator()(double t) const;
    // int dw/2pi F(w) (1 - cos wt), integrated as a difference (IR-safe)
    double one_minus_cos(double t) const;

    std::size_t panel_count() const { return panels_.size(); }
    double ir_power() const { return ir_pow_[0]; }

private:
    struct Panel {
        double m, h;                 // centre and half width
        int side;                    // +1: w > 0, -1: w < 0 (stored as |w|)
        std::vector<cplx> coef;      // Legendre coefficients of F
        std::vector<cplx> node_vals; // F at the Gauss nodes
    };
    void build_side(int side);

    Fn F_;
    QuadConfig q_;
    double floor_{0.0};
    std::vector<Panel> panels_;
    cplx ir_val_[2];
    double ir_pow_[2]{0.0, 0.0};
    cplx uv_coef_[2];
};

// One-shot convenience wrapper.
cplx fourier_oscillatory(const std::function<cplx(double)>& F, double t, const QuadConfig& q = {});

// Re iG^K(t) (the time-symmetrized correlator); time grids reuse one transform.
std::vector<double> correlation_time(const std::vector<double>& t, const ModelParams& p,
                                     const QuadConfig& q = {}, Correlator c = Correlator::photon);
double correlation_time(double t, const ModelParams& p, const QuadConfig& q = {},
                        Correlator c = Correlator::photon);

// Response function, zero for t < 0. Order parameter: R(t) = -G^R_x(t), real.
// Photon: |G^R_11(t)| (the long-time photon response carries a constant complex phase).
std::vector<double> response_time(const std::vector<double>& t, const ModelParams& p,
                                  const QuadConfig& q = {}, Correlator c = Correlator::photon);
double response_time(double t, const ModelParams& p, const QuadConfig& q = {},
                     Correlator c = Correlator::photon);

// 2 (C(0) - C(t)) from the pointwise difference integrand
std::vector<double> mean_square_displacement(const std::vector<double>& t, const ModelParams& p,
                                             const QuadConfig& q = {},
                                             Correlator c = Correlator::photon);

// log-spaced grid, per_decade points per decade including both ends
std::vector<double> log_grid(double lo, double hi, int per_decade = 12);

} // namespace nmdicke
