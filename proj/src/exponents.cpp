#include "nmdicke/exponents.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace nmdicke {

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y, Window w, int min_points) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: x and y differ in length");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < w.lo || x[i] > w.hi) continue;
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument(fmt::format("fit_power_law: nonpositive data at x={:g}, y={:g}", x[i], y[i]));
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const int n = static_cast<int>(lx.size());
    if (n < std::max(2, min_points))
        throw std::invalid_argument(fmt::format("fit_power_law: {} points in [{:g}, {:g}], need at least {}", n, w.lo,
                                                w.hi, std::max(2, min_points)));
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) mx += lx[i], my += ly[i];
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    PowerLawFit f;
    f.n_points = n;
    f.exponent = sxy / sxx;
    const double b = my - f.exponent * mx;
    f.amplitude = std::exp(b);
    double sse = 0;
    for (int i = 0; i < n; ++i) {
        double e = ly[i] - b - f.exponent * lx[i];
        sse += e * e;
    }
    f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
    f.stderr_exponent = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
    return f;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pts, Window w) {
    std::vector<double> x, y;
    for (auto& [a, b] : pts) x.push_back(a), y.push_back(b);
    return fit_power_law(x, y, w);
}

std::string Exponent::str() const {
    switch (kind) {
    case ir_divergent: return "IR-divergent";
    case exp_decay: return "exp-decay";
    default: return fmt::format("{:.6g}", v);
    }
}

ScenarioPrediction predicted_exponents(Scenario sc, double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("predicted_exponents: s must lie in (0,1)");
    using E = Exponent;
    ScenarioPrediction p{sc, s, {}, {}, {}, {}, {}, {}, {}, {}};
    switch (sc) {
    case Scenario::both:
        p.photon_flux = E::num(s > 0.5 ? 2.0 - 1.0 / s : 0.0);
        p.corr_critical = s > 0.5 ? E::ir() : E::num(1.0 - 2.0 * s);
        p.corr_away = E::num(1.0 + s);
        p.resp_critical = E::num(1.0 - s);
        p.resp_away = E::num(1.0 + s);
        p.finite_size = E::num(s > 0.5 ? (2.0 * s - 1.0) / (3.0 * s - 1.0) : 0.0);
        p.crossover = E::num(1.0 / s);
        p.finite_size_time = E::num(s > 1.0 / 3.0 ? 1.0 / (3.0 * s - 1.0) : 0.0);
        break;
    case Scenario::thermal:
        p.photon_flux = E::num(1.0);
        p.corr_critical = E::ir();
        p.corr_away = E::num(s);
        p.resp_critical = E::num(1.0 - s);
        p.resp_away = E::num(1.0 + s);
        p.finite_size = E::num(0.5);
        p.crossover = E::num(1.0 / s);
        p.finite_size_time = E::num(1.0 / (2.0 * s));
        break;
    case Scenario::mb_only:
        p.photon_flux = E::num(1.0);
        p.corr_critical = E::ir();
        p.corr_away = E::decay();
        p.resp_critical = E::ir();
        p.resp_away = E::decay();
        p.finite_size = E::num(0.5);
        p.crossover = E::num(1.0);
        p.finite_size_time = E::num(0.5);
        break;
    case Scenario::nmb_only:
        p.photon_flux = E::num(0.0);
        p.corr_critical = E::num(1.0 - s);
        p.corr_away = E::num(1.0 + s);
        p.resp_critical = E::num(1.0 - s);
        p.resp_away = E::num(1.0 + s);
        p.finite_size = E::num(0.0);
        p.crossover = E::num(1.0 / s);
        p.finite_size_time = E::num(s > 0.5 ? 1.0 / (2.0 * s - 1.0) : 0.0);
        break;
    }
    return p;
}

PowerLawFit photon_flux_fit(const ModelParams& p, Window w, int per_decade, const QuadConfig& q) {
    const auto g = log_grid(w.lo, w.hi, per_decade);
    std::vector<double> n;
    n.reserve(g.size());
    for (double d : g) n.push_back(photon_number(p.with_dy_rel(d), q));
    auto f = fit_power_law(g, n, w);
    f.exponent = -f.exponent; // report nu with n ~ dy^-nu
    return f;
}

PowerLawFit fit_amplitude(const std::vector<double>& x, const std::vector<double>& y, Window w, double exponent) {
    PowerLawFit f = fit_power_law(x, y, w); // validates the window
    double acc = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < w.lo || x[i] > w.hi) continue;
        acc += std::log(y[i]) - exponent * std::log(x[i]);
        ++n;
    }
    f.exponent = exponent;
    f.amplitude = std::exp(acc / n);
    f.stderr_exponent = 0.0;
    return f;
}

CrossoverResult crossover_time(const std::vector<double>& t, const std::vector<double>& C, Window early,
                               Window late, std::optional<std::pair<double, double>> fixed_slopes) {
    CrossoverResult r{0.0, fit_power_law(t, C, early), fit_power_law(t, C, late), 0.0, 0.0};
    for (const auto* f : {&r.early, &r.late})
        if (f->r2 < 0.99)
            throw std::runtime_error(fmt::format("crossover_time: fit window is not a clean power law (r2={:.4f})", f->r2));
    if (std::abs(r.early.exponent - r.late.exponent) < 0.1)
        throw std::runtime_error("crossover_time: no crossover resolved (slopes differ by < 0.1)");
    PowerLawFit e = r.early, l = r.late;
    if (fixed_slopes) {
        e = fit_amplitude(t, C, early, fixed_slopes->first);
        l = fit_amplitude(t, C, late, fixed_slopes->second);
    }
    r.early_slope = e.exponent;
    r.late_slope = l.exponent;
    // A1 t^a1 = A2 t^a2
    r.t_c = std::exp((std::log(l.amplitude) - std::log(e.amplitude)) / (e.exponent - l.exponent));
    return r;
}

CrossoverResult crossover_time(const ModelParams& p, Window early, Window late, const QuadConfig& q,
                               CrossoverMethod m) {
    if (!(p.dy_rel > 0.0)) throw std::invalid_argument("crossover_time: requires delta_y > 0");
    std::optional<std::pair<double, double>> slopes;
    if (m == CrossoverMethod::predicted_slopes) {
        const auto pr = predicted_exponents(scenario_of(p), p.bath.s);
        if (!pr.corr_critical.is_value() || !pr.corr_away.is_value())
            throw std::invalid_argument("crossover_time: no predicted power laws for this scenario and s");
        slopes = std::make_pair(-pr.corr_critical.v, -pr.corr_away.v);
    }
    auto t = log_grid(early.lo, early.hi, 12);
    auto tl = log_grid(late.lo, late.hi, 12);
    t.insert(t.end(), tl.begin(), tl.end());
    return crossover_time(t, correlation_time(t, p, q), early, late, slopes);
}

std::vector<PowerLawFit> finite_temperature_window_study(const ModelParams& p, const std::vector<Window>& windows,
                                                         const QuadConfig& q) {
    if (!(p.bath.T_b > 0.0) || !(p.bath.mu_b < 0.0))
        throw std::invalid_argument("finite_temperature_window_study: requires T_b > 0 and mu_b < 0");
    std::vector<PowerLawFit> out;
    for (const auto& w : windows) out.push_back(photon_flux_fit(p, w, 12, q));
    return out;
}

namespace {

std::function<double(double)> spectrum_magnitude(const ModelParams& p, bool response, Correlator c) {
    const bool photon = c == Correlator::photon;
    if (response) {
        if (photon) return [p](double w) { return std::abs(photon_retarded(w, p)); };
        return [p](double w) { return std::abs(x_retarded(w, p)); };
    }
    if (photon) return [p](double w) { return std::abs(photon_keldysh_spectrum(w, p)); };
    return [p](double w) { return std::abs(x_keldysh_spectrum(w, p)); };
}

// int_{floor}^{hi} (|F(w)| + |F(-w)|) dw, Gauss-Legendre per decade in log w
double two_sided_weight(const std::function<double(double)>& F, double floor, double hi) {
    using boost::math::quadrature::gauss;
    double total = 0.0;
    for (double a = std::log(floor); a < std::log(hi) - 1e-12; a += std::log(10.0)) {
        const double b = std::min(a + std::log(10.0), std::log(hi));
        total += gauss<double, 30>::integrate(
            [&](double u) {
                const double w = std::exp(u);
                return (F(w) + F(-w)) * w;
            },
            a, b);
    }
    return total;
}

} // namespace

QualitativeCheck verify_ir_divergence(const ModelParams& p, bool response, const QuadConfig& q, Correlator c) {
    (void)q;
    const auto F = spectrum_magnitude(p, response, c);
    QualitativeCheck r;
    const double f0 = F(1e-10) + F(-1e-10), f1 = F(1e-9) + F(-1e-9);
    if (!(f0 > 0.0) || !(f1 > 0.0)) {
        r.detail = "spectrum vanishes at low frequency";
        return r;
    }
    r.measure = std::log10(f1 / f0);
    const double W6 = two_sided_weight(F, 1e-6, 1.0), W8 = two_sided_weight(F, 1e-8, 1.0),
                 W10 = two_sided_weight(F, 1e-10, 1.0);
    const double A = W8 - W6, B = W10 - W8;
    r.confirmed = r.measure <= -0.999 && A > 0.0 && B >= 0.9 * A;
    r.detail = fmt::format("IR power {:.4f}; floor-regularized weight {:.4g}, {:.4g}, {:.4g} at floors 1e-6, 1e-8, 1e-10",
                           r.measure, W6, W8, W10);
    return r;
}

QualitativeCheck verify_exp_decay(const ModelParams& p, bool response, const QuadConfig& q, Correlator c) {
    if (!(p.dy_rel > 0.0)) throw std::invalid_argument("verify_exp_decay: requires delta_y > 0");
    QualitativeCheck r;
    const auto t = log_grid(1.0, 1e12, 24);
    auto f = response ? response_time(t, p, q, c) : correlation_time(t, p, q, c);
    for (auto& v : f) v = std::abs(v);
    // last time at which |f| still exceeds max|f|/e (skips fast transients near t = 1)
    const double fmax = *std::max_element(f.begin(), f.end());
    std::size_t k = t.size() - 1;
    while (k > 0 && f[k] < fmax / std::exp(1.0)) --k;
    const double tau = t[k];
    if (40.0 * tau > t.back()) {
        r.detail = fmt::format("no 1/e drop resolved before t = {:.3g}", t.back() / 40.0);
        return r;
    }
    // dense grid for the two envelopes (decaying tails may oscillate)
    auto envelope = [&](double lo, double hi) {
        std::vector<double> g;
        for (int i = 0; i <= 64; ++i) g.push_back(lo + (hi - lo) * i / 64.0);
        auto v = response ? response_time(g, p, q, c) : correlation_time(g, p, q, c);
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    const double e1 = envelope(tau, 2.0 * tau), e2 = envelope(20.0 * tau, 40.0 * tau);
    r.measure = e1 > 0.0 ? e2 / e1 : 1.0;
    r.confirmed = r.measure < 1e-6;
    r.detail = fmt::format("tau = {:.4g}; envelope ratio {:.3g} between [20,40] tau and [1,2] tau", tau, r.measure);
    return r;
}

} // namespace nmdicke
