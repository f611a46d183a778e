// exponents.hpp - power-law fits, predicted exponent tables, crossover times

#pragma once

#include "nmdicke/observables.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nmdicke {

struct PowerLawFit {
    double exponent{0.0};  // slope of log y vs log x
    double amplitude{0.0}; // y = amplitude * x^exponent
    double stderr_exponent{0.0};
    double r2{0.0};
    int n_points{0};
};

struct Window {
    double lo, hi;
};

// OLS on (log x, log y) restricted to lo <= x <= hi. Throws std::invalid_argument on
// fewer than min_points points in the window or nonpositive data there.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y, Window w, int min_points = 6);
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pts, Window w);

// A table entry: a number, or one of the two qualitative markers.
struct Exponent {
    enum Kind { value, ir_divergent, exp_decay } kind{value};
    double v{0.0};

    static Exponent num(double x) { return {value, x}; }
    static Exponent ir() { return {ir_divergent, 0.0}; }
    static Exponent decay() { return {exp_decay, 0.0}; }
    bool is_value() const { return kind == value; }
    std::string str() const;
};

// Exponents are quoted as positive decay rates: n ~ dy^-nu, C(t) ~ t^-nu_t, etc.
struct ScenarioPrediction {
    Scenario scenario;
    double s;
    Exponent photon_flux;
    Exponent corr_critical;
    Exponent corr_away;
    Exponent resp_critical;
    Exponent resp_away;
    Exponent finite_size;
    Exponent crossover;        // t_c ~ dy^-zeta_c
    Exponent finite_size_time; // t_N ~ N^zeta
};

ScenarioPrediction predicted_exponents(Scenario sc, double s);

// n(dy) sampled on a log grid of the window (per_decade points/decade) and fitted
PowerLawFit photon_flux_fit(const ModelParams& p, Window w, int per_decade = 12, const QuadConfig& q = {});

// Same data, exponent held fixed: only the amplitude is fitted.
PowerLawFit fit_amplitude(const std::vector<double>& x, const std::vector<double>& y, Window w, double exponent);

struct CrossoverResult {
    double t_c;
    PowerLawFit early, late; // free fits (diagnostics)
    double early_slope, late_slope; // slopes of the intersected lines
};

// How the two lines are drawn: free OLS slopes, or the predicted slopes -nu_t with
// fitted amplitudes (the lines of the crossover figure).
enum class CrossoverMethod { free_slopes, predicted_slopes };

// Intersection of the early (critical) and late (off-critical) power laws of the
// correlation function. Throws std::runtime_error when either free fit has r2 < 0.99 or
// the two slopes differ by less than 0.1 (no crossover resolved).
CrossoverResult crossover_time(const ModelParams& p, Window early, Window late, const QuadConfig& q = {},
                               CrossoverMethod m = CrossoverMethod::predicted_slopes);
// Same, on externally supplied samples of C(t); predicted slopes are passed explicitly
// (as signed log-log slopes) when wanted.
CrossoverResult crossover_time(const std::vector<double>& t, const std::vector<double>& C, Window early,
                               Window late, std::optional<std::pair<double, double>> fixed_slopes = std::nullopt);

// Table entries that are not numbers are checked as properties, not fitted.
struct QualitativeCheck {
    bool confirmed{false};
    double measure{0.0}; // IR: spectral power p in |F| ~ |w|^p; decay: envelope ratio
    std::string detail;
};

// IR-divergent: the spectrum behind C(t) (or R(t)) goes as |w|^p with p <= -1, and its
// weight regularized at an IR floor keeps growing as the floor drops (1e-6, 1e-8, 1e-10).
QualitativeCheck verify_ir_divergence(const ModelParams& p, bool response, const QuadConfig& q = {},
                                      Correlator c = Correlator::photon);
// Exponential decay: with tau the last time after t = 1 where |f| exceeds max|f|/e,
// max|f| over [20 tau, 40 tau] is below 1e-6 max|f| over [tau, 2 tau] (any power law
// with exponent < 4 fails this).
QualitativeCheck verify_exp_decay(const ModelParams& p, bool response, const QuadConfig& q = {},
                                  Correlator c = Correlator::photon);

// Photon-flux fits over each window; requires T_b > 0 and mu_b < 0.
std::vector<PowerLawFit> finite_temperature_window_study(const ModelParams& p, const std::vector<Window>& windows,
                                                         const QuadConfig& q = {});

} // namespace nmdicke
