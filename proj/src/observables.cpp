#include "nmdicke/observables.hpp"
#include "nmdicke/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace nmdicke {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int NG = 32; // Gauss-Legendre nodes per panel
const cplx I{0.0, 1.0};

struct LegendreTable {
    std::array<double, NG> x{}, w{};
    std::array<std::array<double, NG>, NG> P{}; // P[k][j] = P_k(x_j)
    LegendreTable() {
        using G = boost::math::quadrature::gauss<double, NG>;
        const auto& ab = G::abscissa();
        const auto& wt = G::weights();
        for (int i = 0; i < NG / 2; ++i) {
            x[i] = -ab[NG / 2 - 1 - i];
            w[i] = wt[NG / 2 - 1 - i];
            x[NG - 1 - i] = ab[NG / 2 - 1 - i];
            w[NG - 1 - i] = wt[NG / 2 - 1 - i];
        }
        for (int j = 0; j < NG; ++j) {
            P[0][j] = 1.0;
            P[1][j] = x[j];
            for (int k = 2; k < NG; ++k)
                P[k][j] = ((2 * k - 1) * x[j] * P[k - 1][j] - (k - 1) * P[k - 2][j]) / k;
        }
    }
};

const LegendreTable& table() {
    static const LegendreTable t;
    return t;
}

// (sin, cos) of a large argument reduced in extended precision
std::pair<double, double> sincos_reduced(long double arg) {
    constexpr long double two_pi = 6.283185307179586476925286766559005768L;
    long double r = std::fmod(arg, two_pi);
    return {static_cast<double>(std::sin(r)), static_cast<double>(std::cos(r))};
}

// spherical Bessel j_0 .. j_{n-1}(th), th >= 0
void sph_bessel(double th, double s, double c, int n, double* j) {
    if (th == 0.0) {
        j[0] = 1.0;
        for (int k = 1; k < n; ++k) j[k] = 0.0;
        return;
    }
    if (th < 1e-3) {
        double t = 1.0;
        for (int k = 0; k < n; ++k) {
            if (k > 0) t *= th / (2 * k + 1);
            j[k] = t * (1.0 - th * th / (2.0 * (2 * k + 3)));
        }
        return;
    }
    const double j0 = s / th, j1 = s / (th * th) - c / th;
    if (th > n) {
        j[0] = j0;
        if (n > 1) j[1] = j1;
        for (int k = 2; k < n; ++k) j[k] = (2 * k - 1) / th * j[k - 1] - j[k - 2];
        return;
    }
    const int L = n + 20 + static_cast<int>(th);
    std::vector<double> b(L + 2, 0.0);
    b[L] = 1e-250;
    for (int k = L; k >= 1; --k) {
        b[k - 1] = (2 * k + 1) / th * b[k] - b[k + 1];
        if (std::abs(b[k - 1]) > 1e250) {
            for (int m = k - 1; m <= L; ++m) b[m] *= 1e-250;
        }
    }
    const double scale = std::abs(j0) > std::abs(j1) ? j0 / b[0] : j1 / b[1];
    for (int k = 0; k < n; ++k) j[k] = b[k] * scale;
}

// E_1(z) for Re z >= 0, z != 0
cplx expint_e1(cplx z) {
    if (std::abs(z) < 1.0) {
        const double euler = 0.57721566490153286061;
        cplx sum = 0.0, term = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= -z / double(k);
            cplx add = term / double(k);
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
        }
        return -euler - std::log(z) - sum;
    }
    // modified Lentz on e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...)))
    const double tiny = 1e-300;
    cplx b = z + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -double(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        cplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-z);
}

// int_W^inf e^{-i w t} / w^2 dw
cplx tail_inv_square(double W, double t) {
    if (t == 0.0) return 1.0 / W;
    cplx z{0.0, W * t};
    cplx e2 = std::exp(-z) - z * expint_e1(z);
    return e2 / W;
}

} // namespace

void QuadConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) throw std::invalid_argument("quad: rel_tol must lie in (0, 1e-3]");
    if (!(omega_min > 0.0 && omega_min < omega_max))
        throw std::invalid_argument("quad: need 0 < omega_min < omega_max");
    if (max_subdivisions < 1) throw std::invalid_argument("quad: max_subdivisions must be >= 1");
}

double photon_keldysh_spectrum(double omega, const ModelParams& p) {
    const auto m = photon_effective_inverse(omega, p);
    Eigen::RowVector2cd r;
    r << m.pR(1, 1), -m.pR(0, 1); // first row of adj(P^R)
    const cplx num = (r * m.pK * r.adjoint())(0, 0);
    return num.imag() / std::norm(m.det_r); // -i (i Im) / |det|^2
}

cplx photon_retarded(double omega, const ModelParams& p) {
    const auto m = photon_effective_inverse(omega, p);
    return m.pR(1, 1) / m.det_r;
}

double x_keldysh_spectrum(double omega, const ModelParams& p) {
    const Triple t = x_inverse_exact(omega, p);
    return t.K.imag() / std::norm(t.R);
}

cplx x_retarded(double omega, const ModelParams& p) { return 1.0 / x_inverse_exact(omega, p).R; }

double photon_number(const ModelParams& p, const QuadConfig& q) {
    q.validate();
    if (!(p.dy_rel > 0.0)) throw std::domain_error("photon_number: requires y < y_c");
    double total = 0.0, err = 0.0;
    for (int side : {+1, -1}) {
        auto f = [&](double w) { return photon_keldysh_spectrum(side * w, p); };
        const auto br = log_breaks(q.omega_min, q.omega_max, 4.0);
        for (std::size_t i = 0; i + 1 < br.size(); ++i) {
            auto r = integrate_adaptive(f, br[i], br[i + 1], q.rel_tol, 0.0, q.max_subdivisions);
            if (!r.converged)
                throw IntegrationError("photon_number: quadrature did not converge on [" +
                                           std::to_string(br[i]) + ", " + std::to_string(br[i + 1]) +
                                           "], error " + std::to_string(r.error),
                                       r.error);
            total += r.value;
            err += r.error;
        }
        // below the floor: leading power extrapolation
        const double f0 = f(q.omega_min), f1 = f(2.0 * q.omega_min);
        if (f0 > 0.0 && f1 > 0.0) {
            const double pw = std::log2(f1 / f0);
            if (pw <= -1.0) throw IntegrationError("photon_number: IR-divergent integrand", f0);
            total += f0 * q.omega_min / (pw + 1.0);
        }
        // above omega_max: local power law, close to w^-2
        const double fu = f(q.omega_max), fu2 = f(2.0 * q.omega_max);
        const double pu = (fu > 0.0 && fu2 > 0.0) ? std::log2(fu2 / fu) : -2.0;
        if (pu >= -1.0) throw IntegrationError("photon_number: UV tail does not decay", fu);
        total += fu * q.omega_max / (-pu - 1.0);
    }
    return 0.5 * total / (2.0 * pi) - 0.5;
}

SpectralTransform::SpectralTransform(Fn F, const QuadConfig& q, double t_max) : F_(std::move(F)), q_(q) {
    q_.validate();
    floor_ = q_.omega_min;
    if (t_max > 0.0) floor_ = std::min(floor_, 1e-3 / t_max);
    build_side(+1);
    build_side(-1);
}

void SpectralTransform::build_side(int side) {
    const auto& T = table();
    const int idx = side > 0 ? 0 : 1;
    const auto br = log_breaks(floor_, q_.omega_max, 3.0);
    struct Job {
        double a, b;
        int depth;
    };
    std::vector<Job> stack;
    for (std::size_t i = br.size() - 1; i > 0; --i) stack.push_back({br[i - 1], br[i], 0});
    int made = 0;
    while (!stack.empty()) {
        Job jb = stack.back();
        stack.pop_back();
        Panel pn;
        pn.side = side;
        pn.m = 0.5 * (jb.a + jb.b);
        pn.h = 0.5 * (jb.b - jb.a);
        pn.node_vals.resize(NG);
        for (int j = 0; j < NG; ++j) pn.node_vals[j] = F_(side * (pn.m + pn.h * T.x[j]));
        pn.coef.assign(NG, 0.0);
        double cmax = 0.0;
        for (int k = 0; k < NG; ++k) {
            cplx acc = 0.0;
            for (int j = 0; j < NG; ++j) acc += T.w[j] * pn.node_vals[j] * T.P[k][j];
            pn.coef[k] = acc * (0.5 * (2 * k + 1));
            cmax = std::max(cmax, std::abs(pn.coef[k]));
        }
        double tail = 0.0;
        for (int k = NG - 4; k < NG; ++k) tail = std::max(tail, std::abs(pn.coef[k]));
        const bool ok = tail <= q_.rel_tol * cmax || cmax == 0.0;
        if (!ok && jb.depth < 40 && made < q_.max_subdivisions) {
            const double mid = 0.5 * (jb.a + jb.b);
            stack.push_back({mid, jb.b, jb.depth + 1});
            stack.push_back({jb.a, mid, jb.depth + 1});
            ++made;
            continue;
        }
        if (!ok)
            throw IntegrationError("SpectralTransform: panel [" + std::to_string(jb.a) + ", " +
                                       std::to_string(jb.b) + "] not resolved",
                                   tail);
        panels_.push_back(std::move(pn));
    }
    const cplx f0 = F_(side * floor_), f1 = F_(side * 2.0 * floor_);
    ir_val_[idx] = f0;
    ir_pow_[idx] = (std::abs(f0) > 0.0 && std::abs(f1) > 0.0) ? std::log2(std::abs(f1) / std::abs(f0)) : 0.0;
    uv_coef_[idx] = F_(side * q_.omega_max) * q_.omega_max * q_.omega_max;
}

cplx SpectralTransform::operator()(double t) const {
    std::array<double, NG> jb{};
    cplx total = 0.0;
    for (const auto& pn : panels_) {
        const double th = pn.h * std::abs(t);
        const auto [s, c] = sincos_reduced(static_cast<long double>(pn.h) * std::abs(t));
        sph_bessel(th, s, c, NG, jb.data());
        // sign of the exponent on this side: e^{-i side w t}
        const double sg = pn.side * (t >= 0 ? 1.0 : -1.0);
        cplx sum = 0.0;
        cplx ik = 1.0; // (-i sg)^k
        const cplx step{0.0, -sg};
        for (int k = 0; k < NG; ++k) {
            sum += pn.coef[k] * ik * jb[k];
            ik *= step;
        }
        const auto [sm, cm] = sincos_reduced(static_cast<long double>(pn.m) * std::abs(t));
        const cplx ph{cm, -sg * sm};
        total += 2.0 * pn.h * ph * sum;
    }
    for (int idx = 0; idx < 2; ++idx) {
        const double sg = (idx == 0 ? 1.0 : -1.0) * (t >= 0 ? 1.0 : -1.0);
        const double pw = ir_pow_[idx];
        if (std::abs(ir_val_[idx]) > 0.0) {
            if (pw <= -1.0) throw IntegrationError("SpectralTransform: IR-divergent integrand", std::abs(ir_val_[idx]));
            total += ir_val_[idx] * floor_ *
                     (1.0 / (pw + 1.0) - I * sg * std::abs(t) * floor_ / (pw + 2.0));
        }
        cplx tail = tail_inv_square(q_.omega_max, std::abs(t));
        if (sg < 0) tail = std::conj(tail);
        total += uv_coef_[idx] * tail;
    }
    return total / (2.0 * pi);
}

double SpectralTransform::one_minus_cos(double t) const {
    const auto& T = table();
    t = std::abs(t);
    if (t == 0.0) return 0.0;
    std::array<double, NG> jb{};
    double total = 0.0;
    for (const auto& pn : panels_) {
        if ((pn.m + pn.h) * t <= 2.0) {
            double acc = 0.0;
            for (int j = 0; j < NG; ++j) {
                const double w = pn.m + pn.h * T.x[j];
                const double sh = std::sin(0.5 * w * t);
                acc += T.w[j] * pn.node_vals[j].real() * 2.0 * sh * sh;
            }
            total += pn.h * acc;
            continue;
        }
        const double th = pn.h * t;
        const auto [s, c] = sincos_reduced(static_cast<long double>(pn.h) * t);
        sph_bessel(th, s, c, NG, jb.data());
        // int F cos(wt) over the panel = 2h Re sum_k c_k (-i)^k j_k e^{-imt}; only even k
        // survive the real part for real F
        cplx sum = 0.0;
        cplx ik = 1.0;
        for (int k = 0; k < NG; ++k) {
            sum += pn.coef[k] * ik * jb[k];
            ik *= cplx{0.0, -1.0};
        }
        const auto [sm, cm] = sincos_reduced(static_cast<long double>(pn.m) * t);
        const double cosint = 2.0 * pn.h * (cplx{cm, -sm} * sum).real();
        total += 2.0 * pn.h * pn.coef[0].real() - cosint;
    }
    for (int idx = 0; idx < 2; ++idx) {
        if (std::abs(ir_val_[idx]) > 0.0)
            total += ir_val_[idx].real() * floor_ * floor_ * floor_ * t * t / (2.0 * (ir_pow_[idx] + 3.0));
        const cplx tail = tail_inv_square(q_.omega_max, t);
        total += uv_coef_[idx].real() * (1.0 / q_.omega_max - tail.real());
    }
    return total / (2.0 * pi);
}

cplx fourier_oscillatory(const std::function<cplx(double)>& F, double t, const QuadConfig& q) {
    SpectralTransform tr(F, q, std::abs(t));
    return tr(t);
}

namespace {

void require_lowfreq_ok(const ModelParams& p) {
    if (scenario_of(p) != Scenario::mb_only)
        throw std::invalid_argument("low-frequency time-domain functions need the MB-only scenario");
}

SpectralTransform::Fn keldysh_fn(const ModelParams& p, Correlator c) {
    if (c == Correlator::photon) return [p](double w) { return cplx{photon_keldysh_spectrum(w, p), 0.0}; };
    if (c == Correlator::order_parameter_lowfreq) {
        require_lowfreq_ok(p);
        const double dy = p.delta_y();
        return [p, dy](double w) {
            const Triple t = x_inverse_lowfreq(w, dy, p, Scenario::mb_only);
            return cplx{t.K.imag() / std::norm(t.R), 0.0};
        };
    }
    return [p](double w) { return cplx{x_keldysh_spectrum(w, p), 0.0}; };
}

double max_abs(const std::vector<double>& t) {
    double m = 0.0;
    for (double v : t) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

std::vector<double> correlation_time(const std::vector<double>& t, const ModelParams& p,
                                     const QuadConfig& q, Correlator c) {
    SpectralTransform tr(keldysh_fn(p, c), q, max_abs(t));
    std::vector<double> out;
    out.reserve(t.size());
    for (double ti : t) out.push_back(tr(ti).real());
    return out;
}

double correlation_time(double t, const ModelParams& p, const QuadConfig& q, Correlator c) {
    return correlation_time(std::vector<double>{t}, p, q, c)[0];
}

std::vector<double> response_time(const std::vector<double>& t, const ModelParams& p,
                                  const QuadConfig& q, Correlator c) {
    std::vector<double> out(t.size(), 0.0);
    if (c == Correlator::photon) {
        // subtract 1/(w - Delta + i), whose transform is -i Theta(t) e^{-i Delta t - t}
        const double D = p.delta;
        SpectralTransform tr([p, D](double w) { return photon_retarded(w, p) - 1.0 / cplx{w - D, 1.0}; },
                             q, max_abs(t));
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] < 0.0) continue;
            cplx g = tr(t[i]) - I * std::exp(cplx{-t[i], -D * t[i]});
            out[i] = std::abs(g);
        }
        return out;
    }
    SpectralTransform::Fn f = [p](double w) { return x_retarded(w, p); };
    if (c == Correlator::order_parameter_lowfreq) {
        require_lowfreq_ok(p);
        const double dy = p.delta_y();
        f = [p, dy](double w) { return 1.0 / x_inverse_lowfreq(w, dy, p, Scenario::mb_only).R; };
    }
    SpectralTransform tr(f, q, max_abs(t));
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= 0.0) out[i] = -tr(t[i]).real();
    return out;
}

double response_time(double t, const ModelParams& p, const QuadConfig& q, Correlator c) {
    return response_time(std::vector<double>{t}, p, q, c)[0];
}

std::vector<double> mean_square_displacement(const std::vector<double>& t, const ModelParams& p,
                                             const QuadConfig& q, Correlator c) {
    SpectralTransform tr(keldysh_fn(p, c), q, max_abs(t));
    std::vector<double> out;
    out.reserve(t.size());
    for (double ti : t) out.push_back(2.0 * tr.one_minus_cos(ti));
    return out;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi > lo) || per_decade < 1)
        throw std::invalid_argument("log_grid: need 0 < lo < hi and per_decade >= 1");
    std::vector<double> g;
    const int n = std::max(1, static_cast<int>(std::lround(per_decade * std::log10(hi / lo))));
    for (int i = 0; i <= n; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / n));
    return g;
}

} // namespace nmdicke
