#include "nmdicke/greens.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace nmdicke;
using doctest::Approx;

namespace {
ModelParams fig_params(double s = 0.5, double dy = 1.0) {
    ModelParams p;
    p.bath.s = s;
    p.dy_rel = dy;
    return p;
}
} // namespace

TEST_CASE("critical coupling") {
    ModelParams p;
    CHECK(p.y_c() == Approx(std::sqrt(2.125)).epsilon(1e-15));
    CHECK(p.y_c() == Approx(1.457738).epsilon(1e-6));
    p = apply_scenario(p, Scenario::nmb_only);
    CHECK(p.y_c() == Approx(std::sqrt(2.0)).epsilon(1e-15));
    p.delta = 1.0;
    CHECK(p.y_c() == Approx(1.0));
}

TEST_CASE("bare inverse propagators") {
    const auto p = fig_params(0.5);
    const auto ph = bare_inverse(Field::photon, 0.0, p);
    CHECK(ph.R == cplx{-2.0, 0.5});
    CHECK(ph.A == cplx{-2.0, -0.5});
    CHECK(ph.K == cplx{0.0, 1.0});
    CHECK(bare_inverse(Field::atom, -1.0, p).K == cplx{0.0, 0.0});
    const auto at = bare_inverse(Field::atom, 1.0, p);
    CHECK(at.R.real() == Approx(0.0).epsilon(1e-15));
    CHECK(at.R.imag() == Approx(0.1 * std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("effective inverse at y = 0 is the bare one") {
    const auto p = fig_params(0.5).with_y(0.0);
    for (double w : {-0.7, 0.1, 2.0}) {
        const auto m = photon_effective_inverse(w, p);
        const auto b = bare_inverse(Field::photon, w, p), bm = bare_inverse(Field::photon, -w, p);
        CHECK(std::abs(m.pR(0, 0) - b.R) < 1e-14);
        CHECK(std::abs(m.pR(1, 1) - bm.A) < 1e-14);
        CHECK(std::abs(m.pR(0, 1)) < 1e-14);
        CHECK(std::abs(m.pK(0, 1)) < 1e-14);
        const auto a = atom_effective_inverse(w, p);
        CHECK(std::abs(a.pR(0, 1)) < 1e-14);
        CHECK(std::abs(a.pR(0, 0) - bare_inverse(Field::atom, w, p).R) < 1e-14);
    }
}

TEST_CASE("photon effective inverse matches an independent composition") {
    const auto p = fig_params(0.5, 0.1); // y = 0.9 y_c
    const double w = 0.1, y = p.y();
    CHECK(y == Approx(0.9 * p.y_c()));
    // Sigma = -(y^2/4) (1/P^R_at(w) + 1/P^A_at(-w)), d from the Keldysh components
    const auto ap = bare_inverse(Field::atom, w, p), am = bare_inverse(Field::atom, -w, p);
    const cplx sigma = -(y * y / 4.0) * (1.0 / ap.R + 1.0 / am.A);
    const cplx d = (y * y / 4.0) * (ap.K / std::norm(ap.R) + am.K / std::norm(am.R));
    const auto bp = bare_inverse(Field::photon, w, p), bm = bare_inverse(Field::photon, -w, p);
    const auto m = photon_effective_inverse(w, p);
    CHECK(std::abs(m.pR(0, 0) - (bp.R + sigma)) < 1e-13);
    CHECK(std::abs(m.pR(1, 1) - (bm.A + sigma)) < 1e-13);
    CHECK(std::abs(m.pR(0, 1) - sigma) < 1e-13);
    CHECK(std::abs(m.pK(0, 0) - (bp.K + d)) < 1e-13);
    CHECK(std::abs(m.pK(1, 0) - d) < 1e-13);
    CHECK(std::abs(m.det_r - m.pR.determinant()) < 1e-12);
}

TEST_CASE("atom effective inverse matches an independent composition") {
    const auto p = fig_params(0.5, 0.1);
    const double w = 0.1, y = p.y();
    const auto pp = bare_inverse(Field::photon, w, p), pm = bare_inverse(Field::photon, -w, p);
    const cplx sigma = -(y * y / 4.0) * (1.0 / pp.R + 1.0 / pm.A);
    const cplx g = (y * y / 4.0) * (pp.K / std::norm(pp.R) + pm.K / std::norm(pm.R));
    const auto ap = bare_inverse(Field::atom, w, p), am = bare_inverse(Field::atom, -w, p);
    const auto m = atom_effective_inverse(w, p);
    CHECK(std::abs(m.pR(0, 0) - (ap.R + sigma)) < 1e-13);
    CHECK(std::abs(m.pR(1, 1) - (am.A + sigma)) < 1e-13);
    CHECK(std::abs(m.pR(0, 1) - sigma) < 1e-13);
    CHECK(std::abs(m.pK(0, 0) - (ap.K + g)) < 1e-13);
    CHECK(std::abs(m.pK(1, 1) - (am.K + g)) < 1e-13);
    CHECK(std::abs(m.det_r - m.pR.determinant()) < 1e-12);
}

TEST_CASE("soft mode: det P^R(0) vanishes at y_c and only there") {
    for (double s : {0.3, 0.7}) {
        const auto p = fig_params(s, 0.0);
        CHECK(std::abs(photon_effective_inverse(0.0, p).det_r) < 1e-13);
        CHECK(std::abs(atom_effective_inverse(0.0, p).det_r) < 1e-13);
        for (double dy : {1e-6, 1e-3, 0.1, 0.5, 1.0}) {
            CHECK(std::abs(photon_effective_inverse(0.0, p.with_dy_rel(dy)).det_r) > 0.0);
            CHECK(std::abs(atom_effective_inverse(0.0, p.with_dy_rel(dy)).det_r) > 0.0);
        }
    }
}

TEST_CASE("advanced block is the adjoint of the retarded one") {
    const auto p = fig_params(0.6, 0.2);
    for (double w : {-3.0, -0.2, 0.0, 1e-4, 0.5, 4.0}) {
        const auto m = photon_effective_inverse(w, p);
        CHECK((m.pA - m.pR.adjoint()).norm() < 1e-12 * m.pR.norm());
        const auto a = atom_effective_inverse(w, p);
        CHECK((a.pA - a.pR.adjoint()).norm() < 1e-12 * a.pR.norm());
    }
}

TEST_CASE("rotated photon basis is diagonal at w = 0, y = y_c") {
    for (double s : {0.3, 0.5, 0.8}) {
        const auto [R, K] = photon_rotated_inverse(0.0, fig_params(s, 0.0));
        const double scale = R.cwiseAbs().maxCoeff();
        CHECK(std::abs(R(0, 1)) < 1e-12 * scale);
        CHECK(std::abs(R(1, 0)) < 1e-12 * scale);
    }
}

TEST_CASE("order-parameter inverse at low frequency") {
    auto p = fig_params(0.5, 0.0);
    CHECK(std::abs(x_inverse_exact(0.0, p).R) < 1e-13);
    const auto c = lowfreq_coefficients(p);
    CHECK(x_inverse_exact(0.0, p).K.imag() == Approx(2.0 * c.kappa_eff).epsilon(1e-10));
    // -r with r = y_c dy / omega_z to leading order
    for (double dy : {1e-4, 1e-6}) {
        const auto q = p.with_dy_rel(dy);
        CHECK(x_inverse_exact(0.0, q).R.real() == Approx(-lowfreq_coefficients(q).r).epsilon(3 * dy));
    }
}

TEST_CASE("exact and low-frequency theories agree as w -> 0 at y_c") {
    const auto p = fig_params(0.5, 0.0);
    std::vector<double> err;
    for (double w : {1e-6, 1e-5}) {
        const cplx ex = x_inverse_exact(w, p).R, lf = x_inverse_lowfreq(w, 0.0, p, Scenario::both).R;
        err.push_back(std::abs(ex - lf) / std::abs(lf));
    }
    CHECK(err[0] < 1e-2);
    CHECK(err[0] < err[1]);
    // next-order correction: the relative error grows by a power of w over the decade
    const double slope = std::log10(err[1] / err[0]);
    CHECK(slope > 0.3);
}

TEST_CASE("low-frequency coefficients at the figure parameters") {
    const auto c = lowfreq_coefficients(fig_params(0.5, 0.0));
    CHECK(c.kappa_eff == Approx(0.265625).epsilon(1e-15));
    REQUIRE(c.T_eff.has_value());
    CHECK(*c.T_eff == Approx(0.53125).epsilon(1e-15));
    CHECK(c.g_ph == Approx(2.2578125).epsilon(1e-15));
    CHECK(c.g_at == Approx(0.5).epsilon(1e-15));
    CHECK(c.v_I == Approx(2.125 * std::numbers::pi * 0.1 / 4.0).epsilon(1e-14));
    CHECK(c.v_I == Approx(0.1669).epsilon(1e-3));
    CHECK(c.v_R == Approx(c.v_I).epsilon(1e-14));
    auto q = apply_scenario(fig_params(0.5, 0.0), Scenario::nmb_only);
    const auto cn = lowfreq_coefficients(q);
    CHECK(cn.kappa_eff == 0.0);
    CHECK_FALSE(cn.T_eff.has_value());
    CHECK(cn.g_ph == Approx(2.0));
}

TEST_CASE("distribution functions") {
    const auto p = fig_params(0.5, 0.0);
    const auto c = lowfreq_coefficients(p);
    CHECK(distribution_lowfreq(1.0, p, Scenario::both) == Approx(c.kappa_eff / c.v_I).epsilon(1e-14));
    CHECK(c.kappa_eff / c.v_I == Approx(1.5915).epsilon(1e-4));
    CHECK(distribution_lowfreq(-1e-3, p, Scenario::both) < 0.0);

    const auto mb = apply_scenario(fig_params(0.5, 0.0), Scenario::mb_only);
    for (double w : {1e-4, 1e-3})
        CHECK(distribution_function(ModeKind::photon_x, w, mb) * w == Approx(2.0 * 0.53125).epsilon(1e-2));

    auto th = apply_scenario(fig_params(0.5, 0.0), Scenario::thermal);
    th.bath.T_b = 0.5;
    for (double w : {1e-6, 1e-5}) CHECK(distribution_function(ModeKind::photon_x, w, th) * w == Approx(1.0).epsilon(1e-2));

    const auto nmb = apply_scenario(fig_params(0.5, 0.0), Scenario::nmb_only);
    for (double w : {-2.0, -0.3, -1e-4, 1e-5, 0.2, 1.5}) {
        CHECK(distribution_lowfreq(w, nmb, Scenario::nmb_only) == Approx(w > 0 ? 1.0 : -1.0).epsilon(1e-14));
        CHECK(distribution_function(ModeKind::photon_x, w, nmb) == Approx(w > 0 ? 1.0 : -1.0).epsilon(1e-10));
    }
}

TEST_CASE("NMB-only fluctuation-dissipation relation at all frequencies") {
    const auto p = apply_scenario(fig_params(0.7, 0.01), Scenario::nmb_only);
    for (double w = -20.0; w <= 20.0; w += 0.37) {
        const auto m = photon_effective_inverse(w, p);
        const Eigen::Matrix2cd rhs = (m.pR - m.pA) * (w > 0 ? 1.0 : -1.0);
        CHECK((m.pK - rhs).norm() <= 1e-10 * m.pK.norm());
        const auto x = x_inverse_exact(w, p);
        CHECK(std::abs(x.K - (x.R - x.A) * (w > 0 ? 1.0 : -1.0)) <= 1e-10 * std::abs(x.K));
    }
}

TEST_CASE("cubic coefficient: integrate-out route equals the mean-field equation") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.2, 5.0);
    for (int i = 0; i < 10; ++i) {
        ModelParams p;
        p.delta = U(rng);
        p.kappa = U(rng) / 2;
        p.omega_z = U(rng);
        p.bath.omega_z = p.omega_z;
        p.dy_rel = 0.0;
        p.n_atoms = 1e3;
        const double g = lowfreq_coefficients(p).g_at;
        CHECK(std::abs(mean_field_cubic_coefficient(p) - g) <= 1e-12 * g);
    }
}

TEST_CASE("scenario names and flags") {
    for (auto s : {Scenario::both, Scenario::thermal, Scenario::mb_only, Scenario::nmb_only}) {
        CHECK(scenario_from_name(scenario_name(s)) == s);
        CHECK(scenario_of(apply_scenario(ModelParams{}, s)) == s);
    }
    CHECK_THROWS_AS(scenario_from_name("cold"), std::invalid_argument);
}
