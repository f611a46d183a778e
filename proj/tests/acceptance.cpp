// acceptance - one PASS/FAIL line per acceptance criterion, detail lines indented.
// Exit status is the number of failed criteria.

#include "nmdicke/langevin.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace nmdicke;

namespace {

int failures = 0;

void detail(const std::string& s) { std::printf("    %s\n", s.c_str()); }

void criterion(int id, const std::string& title, const std::function<bool()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string err;
    try {
        ok = body();
    } catch (const std::exception& e) {
        err = e.what();
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!err.empty()) detail("exception: " + err);
    std::printf("%s criterion %2d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, title.c_str(), sec);
    std::fflush(stdout);
    if (!ok) ++failures;
}

bool within(const std::string& what, double got, double target, double tol) {
    const bool ok = std::abs(got - target) <= tol;
    detail(fmt::format("{:<48} {:>10.5f}  target {:.5f} +- {:g}  {}", what, got, target, tol, ok ? "ok" : "MISS"));
    return ok;
}

ModelParams model(double s, double dy = 0.0) {
    ModelParams p;
    p.bath.s = s;
    p.dy_rel = dy;
    return p;
}

double slope(const ModelParams& p, Window w, bool response, Correlator c = Correlator::photon) {
    const auto t = log_grid(w.lo, w.hi, 12);
    auto y = response ? response_time(t, p, {}, c) : correlation_time(t, p, {}, c);
    return fit_power_law(t, y, w).exponent;
}

} // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);

    criterion(1, "photon-flux exponent nu = 2 - 1/s; no divergence for s < 1/2", [] {
        bool ok = true;
        for (double s : {0.6, 0.7, 0.8})
            ok &= within(fmt::format("nu(s={}) over dy in [1e-8, 1e-6]", s), photon_flux_fit(model(s), {1e-8, 1e-6}).exponent,
                         2.0 - 1.0 / s, 0.02);
        for (double s : {0.3, 0.4}) {
            double lo = 1e300, hi = 0.0;
            for (double d : log_grid(1e-8, 1e-6, 12)) {
                const double n = photon_number(model(s, d));
                lo = std::min(lo, n);
                hi = std::max(hi, n);
            }
            const double var = (hi - lo) / lo;
            detail(fmt::format("n(s={}) relative variation over the window: {:.3g} (bound 0.05)", s, var));
            ok &= var < 0.05;
        }
        return ok;
    });

    criterion(2, "critical correlation exponent -(1 - 2s) over t in [1e2, 1e4]", [] {
        bool ok = true;
        for (double s : {0.2, 0.35, 0.45})
            ok &= within(fmt::format("slope of iG^K(t), s={}", s), slope(model(s), {1e2, 1e4}, false), -(1 - 2 * s), 0.05);
        return ok;
    });

    criterion(3, "off-critical correlation exponent -(1 + s) at dy = 1e-4", [] {
        bool ok = within("slope of iG^K(t), s=0.35, t in [1e14, 1e16]", slope(model(0.35, 1e-4), {1e14, 1e16}, false), -1.35,
                         0.05);
        ok &= within("slope of iG^K(t), s=0.7, t in [1e8, 1e10]", slope(model(0.7, 1e-4), {1e8, 1e10}, false), -1.7, 0.05);
        return ok;
    });

    criterion(4, "response exponents -(1 - s) critical, -(1 + s) at dy = 1e-4 (s = 0.5)", [] {
        bool ok = true;
        for (auto [c, name] : {std::pair{Correlator::photon, "photon"}, std::pair{Correlator::order_parameter, "x"}}) {
            ok &= within(fmt::format("{} response slope, critical, [1e2, 1e4]", name), slope(model(0.5), {1e2, 1e4}, true, c),
                         -0.5, 0.05);
            ok &= within(fmt::format("{} response slope, dy=1e-4, [1e10, 1e12]", name),
                         slope(model(0.5, 1e-4), {1e10, 1e12}, true, c), -1.5, 0.05);
        }
        return ok;
    });

    criterion(5, "crossover-time exponent at s = 0.35 in [2.6, 3.0]", [] {
        std::vector<double> dys = log_grid(1e-4, 1e-3, 4), tcs;
        for (double d : dys) {
            const auto r = crossover_time(model(0.35, d), {1e2, 1e4}, {1e14, 1e16});
            detail(fmt::format("dy={:.3e}: t_c={:.4e} (free slopes {:.3f}, {:.3f})", d, r.t_c, r.early.exponent,
                               r.late.exponent));
            tcs.push_back(r.t_c);
        }
        const double z = -fit_power_law(dys, tcs, {1e-4, 1e-3}, 2).exponent;
        detail(fmt::format("zeta_c = {:.4f} (analytic 1/s = {:.4f})", z, 1 / 0.35));
        return z >= 2.6 && z <= 3.0;
    });

    criterion(6, "finite-temperature window study (s = 0.7, T_b = 1)", [] {
        auto p = model(0.7);
        p.bath.T_b = 1.0;
        p.bath.mu_b = -0.001;
        const auto f = finite_temperature_window_study(p, {{1e-6, 1e-4}, {1e-10, 1e-8}});
        bool ok = within("nu, mu_b=-0.001, far window [1e-6, 1e-4]", f[0].exponent, 0.50, 0.03);
        ok &= within("nu, mu_b=-0.001, near window [1e-10, 1e-8]", f[1].exponent, 0.57, 0.02);
        p.bath.mu_b = 0.0;
        ok &= within("nu, mu_b=0, [1e-8, 1e-6]", photon_flux_fit(p, {1e-8, 1e-6}).exponent, 1.00, 0.02);
        return ok;
    });

    criterion(7, "FDT: MB-only effective temperature; NMB-only exact FDT", [] {
        bool ok = true;
        for (double dy : {1e-2, 1e-3}) {
            const auto p = apply_scenario(model(0.5, dy), Scenario::mb_only);
            const double Teff = *lowfreq_coefficients(p).T_eff;
            const auto t = log_grid(1.0, 100.0, 6);
            for (auto c : {Correlator::order_parameter_lowfreq, Correlator::order_parameter}) {
                double worst = 0.0;
                for (double ti : t) {
                    const double h = 1e-3 * ti;
                    const auto C = correlation_time({ti - 2 * h, ti - h, ti + h, ti + 2 * h}, p, {}, c);
                    const double dC = (C[0] - 8 * C[1] + 8 * C[2] - C[3]) / (12 * h);
                    const double R = response_time(ti, p, {}, c);
                    worst = std::max(worst, std::abs(R + dC / (2 * Teff)) / std::abs(R));
                }
                const bool gate = c == Correlator::order_parameter_lowfreq;
                detail(fmt::format("dy={:g} {} theory: max |R + dC/dt / 2T_eff| / |R| over [1, 100] = {:.3g}{}", dy,
                                   gate ? "low-frequency" : "exact", worst,
                                   gate ? " (bound 1e-2)" : " (info: finite-frequency corrections)"));
                if (gate) ok &= worst <= 1e-2;
            }
        }
        const auto nmb = apply_scenario(model(0.7, 1e-2), Scenario::nmb_only);
        double worst = 0.0;
        for (double w = -30.0; w <= 30.0; w += 0.173) {
            const auto m = photon_effective_inverse(w, nmb);
            worst = std::max(worst, (m.pK - (m.pR - m.pA) * (w > 0 ? 1.0 : -1.0)).norm() / m.pK.norm());
        }
        detail(fmt::format("NMB-only max relative |P^K - (P^R - P^A) sgn w| = {:.3g} (bound 1e-10)", worst));
        return ok && worst <= 1e-10;
    });

    criterion(8, "closed vs principal-value self-energy to 1e-3 for |w| <= 1 at omega_M = 1e4", [] {
        bool ok = true;
        for (double s : {0.3, 0.5, 0.7}) {
            BathParams b;
            b.s = s;
            double worst = 0.0;
            for (double w : {-1.0, -0.5, -0.1, -0.01, 0.01, 0.1, 0.5, 1.0}) {
                const cplx c = self_energy_closed(w, b);
                worst = std::max(worst, std::abs(self_energy_pv(w, b) - c) / std::abs(c));
            }
            const bool good = worst <= 1e-3;
            detail(fmt::format("s={}: max relative difference {:.3g}; cutoff scale (1/omega_M)^(1-s) = {:.3g}  {}", s, worst,
                               std::pow(1e-4, 1 - s), good ? "ok" : "MISS"));
            ok &= good;
        }
        return ok;
    });

    criterion(9, "Langevin linear oracle: simulated <x^2> within 5% of the quadrature", [] {
        SimConfig c = SimConfig::from_model(model(0.7));
        c.r = 0.03;
        c.g = 0.0;
        c.dt = 0.01;
        c.steps = 400000;
        c.burn_in = 200000;
        c.ensemble = 64;
        c.seed = 7;
        const auto m = stationary_second_moment(simulate_ensemble(c));
        const double cont = linear_variance(c), disc = linear_variance(c, true);
        detail(fmt::format("simulated {:.4f} +- {:.4f}; scheme's own transfer function {:.4f}", m.value, m.stderr_, disc));
        return within("<x^2> / continuum quadrature", m.value / cont, 1.0, 0.05);
    });

    criterion(10, "anomalous diffusion at s = 0.75: MSD exponent 0.5", [] {
        const auto p = model(0.75);
        const auto t = log_grid(1e10, 1e12, 12);
        const double q = fit_power_law(t, mean_square_displacement(t, p, {}, Correlator::order_parameter), {1e10, 1e12})
                             .exponent;
        bool ok = within("quadrature MSD slope, t in [1e10, 1e12]", q, 0.5, 0.02);
        SimConfig c = SimConfig::from_model(p);
        c.r = 0.0;
        c.g = 0.0;
        c.dt = 0.1;
        c.steps = 20000;
        c.burn_in = 0;
        c.ensemble = 1024;
        c.seed = 3;
        const auto msd = ensemble_msd_from_origin(simulate_ensemble(c));
        std::vector<double> tt, mm;
        for (std::size_t i = 1; i < msd.size(); ++i) tt.push_back(i * c.dt), mm.push_back(msd[i]);
        ok &= within("simulated MSD slope, t in [10, 2000]", fit_power_law(tt, mm, {10.0, 2000.0}).exponent, 0.5, 0.05);
        return ok;
    });

    criterion(11, "finite-size scaling of <x^2> at r = 0", [] {
        const std::vector<double> Ns{1e2, 1e3, 1e4, 1e5};
        SimConfig c = SimConfig::from_model(model(0.7));
        c.r = 0.0;
        c.dt = 0.01;
        c.steps = 2000000;
        c.burn_in = 500000;
        c.ensemble = 64;
        c.seed = 11;
        auto r = finite_size_scan(c, Ns);
        for (const auto& pt : r.points)
            detail(fmt::format("s=0.7 N={:.0e}: <x^2>={:.4f} +- {:.4f}, t_N={:.4g}", pt.N, pt.x2.value, pt.x2.stderr_, pt.t_N));
        bool ok = within("alpha(s=0.7)", r.alpha.exponent, 0.3636, 0.10);
        if (r.zeta)
            detail(fmt::format("zeta(s=0.7) from 1/e autocorrelation times: {:.3f} (predicted {:.3f}; reported only)",
                               r.zeta->exponent, 1 / 1.1));
        // s = 0.4: the cubic step with g_ph is unstable at dt = 0.01, and white-noise <x^2>
        // is UV dominated for s < 1/2, so dt acts as the UV cutoff; use g_at and a fine dt
        const auto p4 = model(0.4);
        SimConfig d = SimConfig::from_model(p4);
        d.r = 0.0;
        d.g = lowfreq_coefficients(p4).g_at;
        d.dt = 1e-6;
        d.steps = 1000000;
        d.burn_in = 250000;
        d.ensemble = 64;
        d.seed = 12;
        r = finite_size_scan(d, Ns);
        for (const auto& pt : r.points)
            detail(fmt::format("s=0.4 N={:.0e}: <x^2>={:.4f} +- {:.4f}", pt.N, pt.x2.value, pt.x2.stderr_));
        ok &= within("alpha(s=0.4)", r.alpha.exponent, 0.0, 0.05);
        return ok;
    });

    criterion(12, "interaction coefficients: g_at identity, g_ph pinned", [] {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> U(0.1, 4.0);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            ModelParams p;
            p.delta = U(rng);
            p.kappa = U(rng);
            p.omega_z = U(rng);
            p.bath.omega_z = p.omega_z;
            p.n_atoms = std::pow(10.0, 1 + 4 * U(rng) / 4.0);
            p.dy_rel = 0.0;
            const double g = lowfreq_coefficients(p).g_at;
            worst = std::max(worst, std::abs(mean_field_cubic_coefficient(p) - g) / g);
        }
        detail(fmt::format("max relative |g_at - mean-field cubic| over 10 random sets = {:.3g} (bound 1e-12)", worst));
        const ModelParams f = model(0.5);
        const double gph = lowfreq_coefficients(f).g_ph;
        const double formula = std::pow(f.delta * f.delta + f.kappa * f.kappa, 2) / (2 * f.delta * f.delta * f.omega_z);
        detail(fmt::format("g_ph = {:.10f}, formula {:.10f}, pinned 2.2578125", gph, formula));
        return worst <= 1e-12 && gph == 2.2578125 && std::abs(gph - formula) <= 1e-15;
    });

    std::printf("%d criteria failed\n", failures);
    return failures;
}
