// quadrature.hpp - globally adaptive Gauss-Kronrod on top of Boost's fixed G15/K31 rule

#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace nmdicke {

struct QuadResult {
    double value{0.0};
    double error{0.0};
    bool converged{true};
};

namespace detail {

// One K31 panel with its (properly scaled) Kronrod-Gauss difference.
template <class F>
inline QuadResult gk31(F& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double err = 0.0;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    auto g = [&](double x) { return f(mid + half * x); };
    double v = GK::integrate(g, -1.0, 1.0, 0, 0.0, &err);
    return {half * v, std::abs(half) * err, true};
}

} // namespace detail

// Bisects the panel with the largest error until the total error is below
// max(abs_tol, rel_tol * |value|) or max_subdiv panels are in use.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                              int max_subdiv = 200) {
    struct Panel {
        double a, b, v, e;
        bool operator<(const Panel& o) const { return e < o.e; }
    };
    std::priority_queue<Panel> heap;
    auto first = detail::gk31(f, a, b);
    heap.push({a, b, first.value, first.error});
    double total = first.value, err = first.error;
    int n = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) && n < max_subdiv) {
        Panel p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) { // interval exhausted
            heap.push(p);
            break;
        }
        auto l = detail::gk31(f, p.a, m);
        auto r = detail::gk31(f, m, p.b);
        total += l.value + r.value - p.v;
        err += l.error + r.error - p.e;
        heap.push({p.a, m, l.value, l.error});
        heap.push({m, p.b, r.value, r.error});
        ++n;
    }
    // recompute to drop accumulated rounding of the running sums
    total = 0.0;
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().v;
        err += heap.top().e;
        heap.pop();
    }
    return {total, err, err <= std::max(abs_tol, rel_tol * std::abs(total)) * 1.0000001};
}

// Logarithmically spaced break points between a > 0 and b, `per_decade` per decade.
inline std::vector<double> log_breaks(double a, double b, double per_decade) {
    std::vector<double> x;
    if (!(b > a) || !(a > 0.0)) return {a, b};
    int n = std::max(1, static_cast<int>(std::ceil(per_decade * std::log10(b / a))));
    double r = std::pow(b / a, 1.0 / n);
    x.reserve(n + 1);
    x.push_back(a);
    for (int i = 1; i < n; ++i) x.push_back(x.back() * r);
    x.push_back(b);
    return x;
}

} // namespace nmdicke
