#include "nmdicke/exponents.hpp"

#include <doctest.h>

#include <cmath>

using namespace nmdicke;
using doctest::Approx;

TEST_CASE("exact power law") {
    std::vector<double> x, y;
    for (double v : log_grid(1.0, 100.0, 10)) x.push_back(v), y.push_back(3.0 * v * v);
    const auto f = fit_power_law(x, y, {1.0, 100.0});
    CHECK(f.exponent == Approx(2.0).epsilon(1e-13));
    CHECK(f.amplitude == Approx(3.0).epsilon(1e-12));
    CHECK(f.r2 == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("log-periodic modulation does not move the exponent") {
    std::vector<double> x, y;
    for (double v : log_grid(1.0, 1e6, 12)) x.push_back(v), y.push_back(std::pow(v, -0.57) * (1.0 + 0.01 * std::sin(std::log(v))));
    CHECK(fit_power_law(x, y, {1.0, 1e6}).exponent == Approx(-0.57).epsilon(0.01 / 0.57));
}

TEST_CASE("a constant-dominated decade fits to ~0 and has poor r2") {
    std::vector<double> x, y;
    for (double v : log_grid(1.0, 10.0, 20)) x.push_back(v), y.push_back(std::pow(v, 0.3) + 100.0);
    const auto f = fit_power_law(x, y, {1.0, 10.0});
    CHECK(std::abs(f.exponent) < 0.01);
    // a pure power law fits with r2 = 1; here the residual structure is what is left
    std::vector<double> z;
    for (double v : x) z.push_back(100.0 + 1e-3 * std::sin(37.0 * v));
    CHECK(fit_power_law(x, z, {1.0, 10.0}).r2 < 0.9);
}

TEST_CASE("fit window validation") {
    std::vector<double> x{1, 2, 3, 4, 5, 6}, y{1, 2, 3, 4, 5, -6};
    CHECK_THROWS_AS(fit_power_law(x, y, {1.0, 6.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law(x, y, {1.0, 3.0}), std::invalid_argument); // 3 points < 6
    CHECK_NOTHROW(fit_power_law(x, y, {1.0, 3.0}, 2));
}

TEST_CASE("scale equivariance") {
    std::vector<double> x, y, xs;
    for (double v : log_grid(1.0, 1e3, 8)) x.push_back(v), y.push_back(std::pow(v, -1.3) * (1.0 + 0.1 / v));
    const double c = 7.5;
    for (double v : x) xs.push_back(c * v);
    const auto a = fit_power_law(x, y, {1.0, 1e3}), b = fit_power_law(xs, y, {c, c * 1e3});
    CHECK(b.exponent == Approx(a.exponent).epsilon(1e-13));
    CHECK(b.amplitude == Approx(a.amplitude * std::pow(c, -a.exponent)).epsilon(1e-12));
}

TEST_CASE("synthetic crossover is recovered") {
    const double A = 1e5;
    std::vector<double> t, C;
    for (double v : log_grid(1.0, 1e12, 12)) t.push_back(v), C.push_back(std::min(std::pow(v, -0.3), A * std::pow(v, -1.35)));
    const double exact = std::pow(A, 1.0 / 1.05);
    const auto free = crossover_time(t, C, {1.0, 1e3}, {1e8, 1e12});
    CHECK(free.t_c == Approx(exact).epsilon(1e-2));
    const auto fixed = crossover_time(t, C, {1.0, 1e3}, {1e8, 1e12}, std::make_pair(-0.3, -1.35));
    CHECK(fixed.t_c == Approx(exact).epsilon(1e-10));
    // same slopes on both sides: no crossover
    CHECK_THROWS_AS(crossover_time(t, C, {1.0, 1e2}, {1e2, 1e3}), std::runtime_error);
}

TEST_CASE("crossover time shrinks as dy^(-1/s) on synthetic scaling data") {
    const double s = 0.35;
    std::vector<double> dys{1e-4, 1e-3}, tcs;
    for (double dy : dys) {
        const double tstar = std::pow(dy, -1.0 / s);
        std::vector<double> t, C;
        for (double v : log_grid(1.0, 1e16, 12)) t.push_back(v), C.push_back(std::pow(v, -(1 - 2 * s)) / (1.0 + std::pow(v / tstar, 2 * s + s)));
        tcs.push_back(crossover_time(t, C, {1e1, 1e3}, {1e14, 1e16}, std::make_pair(-(1 - 2 * s), -(1 + s))).t_c);
    }
    CHECK(std::log10(tcs[0] / tcs[1]) == Approx(1.0 / s).epsilon(1e-3));
}

TEST_CASE("predicted exponent tables") {
    auto p = predicted_exponents(Scenario::both, 0.7);
    CHECK(p.photon_flux.v == Approx(2.0 - 1.0 / 0.7));
    CHECK(p.photon_flux.v == Approx(0.5714).epsilon(1e-4));
    CHECK(p.finite_size.v == Approx(0.4 / 1.1));
    CHECK(p.crossover.v == Approx(1.0 / 0.7));
    CHECK(p.finite_size_time.v == Approx(1.0 / 1.1));
    CHECK(p.corr_critical.kind == Exponent::ir_divergent);

    p = predicted_exponents(Scenario::both, 0.35);
    CHECK(p.photon_flux.v == 0.0);
    CHECK(p.corr_critical.v == Approx(0.3));
    CHECK(p.finite_size_time.v == Approx(1.0 / 0.05));
    CHECK(predicted_exponents(Scenario::both, 0.3).finite_size_time.v == 0.0);

    p = predicted_exponents(Scenario::mb_only, 0.5);
    CHECK(p.photon_flux.v == 1.0);
    CHECK(p.finite_size.v == 0.5);
    CHECK(p.corr_away.kind == Exponent::exp_decay);
    CHECK(p.corr_away.str() == "exp-decay");

    p = predicted_exponents(Scenario::nmb_only, 0.5);
    CHECK(p.photon_flux.v == 0.0);
    CHECK(p.corr_critical.v == Approx(0.5));
    CHECK(p.finite_size.v == 0.0);

    p = predicted_exponents(Scenario::thermal, 0.6);
    CHECK(p.photon_flux.v == 1.0);
    CHECK(p.corr_away.v == Approx(0.6));
    CHECK(p.finite_size_time.v == Approx(1.0 / 1.2));
    // thermal case: response exponent = correlation exponent - 1 away from criticality ... and
    // 1 - s at criticality, which the both-baths correlation exponent 1 - 2s does not satisfy
    CHECK(p.resp_away.v - 1.0 == Approx(p.corr_away.v));
    CHECK_THROWS_AS(predicted_exponents(Scenario::both, 1.0), std::invalid_argument);
}

TEST_CASE("photon-flux exponent from the quadrature") {
    ModelParams p;
    p.bath.s = 0.7;
    const auto f = photon_flux_fit(p, {1e-8, 1e-6});
    CHECK(f.exponent == Approx(2.0 - 1.0 / 0.7).epsilon(0.02 / 0.5714));
    CHECK(f.r2 > 0.999);
}

TEST_CASE("qualitative table entries") {
    ModelParams p;
    p.bath.s = 0.7;
    p.dy_rel = 0.0;
    CHECK(verify_ir_divergence(p, false).confirmed);
    auto mb = apply_scenario(p, Scenario::mb_only);
    CHECK(verify_ir_divergence(mb, false).confirmed);
    CHECK(verify_ir_divergence(mb, true).confirmed);
    CHECK(verify_exp_decay(mb.with_dy_rel(1e-2), false).confirmed);
    CHECK(verify_exp_decay(mb.with_dy_rel(1e-2), true).confirmed);
    // and the checks do reject power laws
    auto nmb = apply_scenario(p, Scenario::nmb_only);
    CHECK_FALSE(verify_ir_divergence(nmb, false).confirmed);
    CHECK_FALSE(verify_exp_decay(p.with_dy_rel(1e-2), false).confirmed);
}

TEST_CASE("finite-temperature study preconditions") {
    ModelParams p;
    p.bath.T_b = 1.0;
    p.bath.mu_b = 0.0;
    CHECK_THROWS_AS(finite_temperature_window_study(p, {{1e-8, 1e-6}}), std::invalid_argument);
    p.bath.mu_b = -0.001;
    p.bath.s = 0.7;
    const auto r = finite_temperature_window_study(p, {{1e-10, 1e-8}});
    CHECK(r.at(0).exponent == Approx(0.57).epsilon(0.02 / 0.57));
}
