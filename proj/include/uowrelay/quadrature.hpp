#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace uowrelay::quad {

namespace detail {

// Gauss-Kronrod 15(7) on [-1,1].
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
};

template <class F>
Segment gk15(F& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resk = kWgk[7] * fc, resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double fsum = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    double value = resk * h;
    double error = std::abs((resk - resg) * h);
    return {a, b, value, error};
}

} // namespace detail

// Adaptive bisection of the worst segment until the summed error estimate
// meets the tolerance.  Throws if the segment budget is exhausted.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 1e-300, int max_segments = 4000) {
    std::vector<detail::Segment> segs;
    segs.push_back(detail::gk15(f, a, b));
    while (true) {
        double total = 0.0, err = 0.0;
        for (auto& s : segs) {
            total += s.value;
            err += s.error;
        }
        if (err <= std::max(abs_tol, rel_tol * std::abs(total))) return total;
        if ((int)segs.size() >= max_segments)
            throw std::runtime_error("quad::integrate: segment budget exhausted");
        auto worst = std::max_element(
            segs.begin(), segs.end(),
            [](const detail::Segment& x, const detail::Segment& y) {
                return x.error < y.error;
            });
        double mid = 0.5 * (worst->a + worst->b);
        detail::Segment left = detail::gk15(f, worst->a, mid);
        detail::Segment right = detail::gk15(f, mid, worst->b);
        *worst = left;
        segs.push_back(right);
    }
}

// Maps [a, inf) onto (0,1] via x = a + t/(1-t).
template <class F>
double integrate_to_inf(F&& f, double a, double rel_tol = 1e-10,
                        double abs_tol = 1e-300, int max_segments = 4000) {
    auto g = [&](double t) {
        double om = 1.0 - t;
        double x = a + t / om;
        if (!std::isfinite(x)) return 0.0;
        double v = f(x) / (om * om);
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(g, 0.0, 1.0, rel_tol, abs_tol, max_segments);
}

} // namespace uowrelay::quad
