// langevin.hpp - fractional Langevin integrator (Grunwald-Letnikov) and ensemble estimators

#pragma once

#include "nmdicke/exponents.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nmdicke {

enum class NoiseKind { white, colored };

struct SimConfig {
    double s{0.7};
    double v{1.0};
    double r{0.0};
    double kappa_eff{1.0};
    double g{0.0};
    double n_atoms{1.0};
    double dt{0.01};
    long steps{1000};
    long burn_in{-1}; // -1: first 20% of steps
    int ensemble{1};
    std::uint64_t seed{1};
    NoiseKind noise{NoiseKind::white};
    double T_b{0.0};     // colored noise only
    double v_I{0.0};     // colored noise amplitude coefficient
    double omega_z{1.0};
    double x0{0.0};
    double overflow{1e8};

    void validate() const;
    long burn() const { return burn_in < 0 ? steps / 5 : burn_in; }
    // v, r, kappa_eff, v_I from the low-frequency theory of a model (g = g_ph)
    static SimConfig from_model(const ModelParams& p);
};

struct Trajectory {
    std::vector<double> samples; // x_n for n = burn_in .. steps-1
    double dt{0.0};
    std::uint64_t seed{0};
    int member{0};
    SimConfig config;
};

struct SimulationDiverged : std::runtime_error {
    long step;
    SimulationDiverged(const std::string& w, long n) : std::runtime_error(w), step(n) {}
};

// w_0 = 1, w_k = w_{k-1} (k-1-s)/k
std::vector<double> gl_weights(double s, std::size_t n);

// Single member of the ensemble (member index enters the seed).
Trajectory simulate(const SimConfig& c, int member = 0);
// All c.ensemble members, in parallel over NMDICKE_THREADS threads (default: hardware).
// Output order and content do not depend on the thread count.
std::vector<Trajectory> simulate_ensemble(const SimConfig& c);

// Stationary Gaussian noise with PSD 4 v_I T_b omega_z^-s |w|^(s-1), by spectral synthesis.
std::vector<double> colored_noise(double s, double T_b, double v_I, double omega_z, double dt, std::size_t n,
                                  std::uint64_t seed);

// Stationary <x^2> of the linear theory: int dw/2pi S(w) / |r + v(-iw)^s|^2, with S the
// noise spectrum (2 kappa_eff, or the colored PSD). `discrete` replaces (-iw)^s by the
// Grunwald-Letnikov symbol dt^-s (1 - e^{iw dt})^s (the semi-implicit scheme's own
// transfer function), integrated over the Nyquist band.
double linear_variance(const SimConfig& c, bool discrete = false, double rel_tol = 1e-8);

struct MomentEstimate {
    double value{0.0};
    double stderr_{0.0};
};

// Time- and ensemble-averaged <x^2>; throws std::runtime_error if the mean of x^2 over
// the first and second halves differs by more than 3 standard errors.
MomentEstimate stationary_second_moment(const std::vector<Trajectory>& ens, bool check_stationarity = true);

// <x(t)^2> over the ensemble at each stored sample index (requires burn_in = 0, x0 = 0).
std::vector<double> ensemble_msd_from_origin(const std::vector<Trajectory>& ens);

// Time-averaged increments <(x(t+tau) - x(t))^2> over the stored samples, for lags in steps.
std::vector<double> time_averaged_msd(const std::vector<Trajectory>& ens, const std::vector<long>& lags);

struct FiniteSizePoint {
    double N;
    MomentEstimate x2;
    double t_N{0.0}; // 1/e crossing time of the autocorrelation, 0 if not resolved
};

struct FiniteSizeResult {
    std::vector<FiniteSizePoint> points;
    PowerLawFit alpha;               // <x^2> ~ N^alpha
    std::optional<PowerLawFit> zeta; // t_N ~ N^zeta, when resolved at all N
};

// Requires r = 0, g > 0 and N_list spanning at least 1.5 decades.
FiniteSizeResult finite_size_scan(const SimConfig& tmpl, const std::vector<double>& N_list);

// Autocorrelation 1/e crossing time (ensemble-averaged, FFT-based), 0 if not reached.
double autocorrelation_time(const std::vector<Trajectory>& ens);

} // namespace nmdicke
