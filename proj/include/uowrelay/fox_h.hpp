#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "inc_gamma.hpp"
#include "log_gamma.hpp"

namespace uowrelay::specfun {

// Mellin-Barnes parameter block.  The integrand along the contour is
//   prod_{j<m} G(b_j+B_j s) prod_{j<n} G(1-a_j-A_j s)
//   / [prod_{j>=m} G(1-b_j-B_j s) prod_{j>=n} G(a_j+A_j s)] * z^{-s}
// with G = Gamma; the contour separates the pole family at s = -(b_j+k)/B_j
// from the family at s = (1-a_j+k)/A_j.  All-unit-scale specs reduce to the
// classical Meijer-G convention.
struct GHSpec {
    std::vector<std::pair<double, double>> upper; // (a_j, A_j)
    std::vector<std::pair<double, double>> lower; // (b_j, B_j)
    int m = 0, n = 0;

    double left_pole_edge() const {
        double L = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < m; ++j)
            L = std::max(L, -lower[size_t(j)].first / lower[size_t(j)].second);
        return L;
    }
    double right_pole_edge() const {
        double R = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j)
            R = std::min(R, (1.0 - upper[size_t(j)].first) / upper[size_t(j)].second);
        return R;
    }
    void validate() const {
        if (m < 0 || m > int(lower.size()) || n < 0 || n > int(upper.size()))
            throw std::invalid_argument("GHSpec: m/n out of range");
        for (auto& [a, A] : upper)
            if (!(A > 0.0)) throw std::invalid_argument("GHSpec: scale <= 0");
        for (auto& [b, B] : lower)
            if (!(B > 0.0)) throw std::invalid_argument("GHSpec: scale <= 0");
        if (!(left_pole_edge() < right_pole_edge()))
            throw std::invalid_argument("GHSpec: no separating contour");
    }
    // Folding the argument-power identity: evaluating this kernel at z^p
    // equals (1/p) times the same kernel with all scales divided by p,
    // evaluated at z.
    GHSpec scales_divided_by(double p) const {
        GHSpec r = *this;
        for (auto& [a, A] : r.upper) A /= p;
        for (auto& [b, B] : r.lower) B /= p;
        return r;
    }
};

// Argument passed as z = exp(power * ln_base); keeps z^c representable for
// the catalog's c up to ~217 where z^c spans thousands of decades.
struct PowArg {
    double ln_base = 0.0;
    double power = 1.0;
};
inline PowArg arg_of(double z) {
    if (!(z > 0.0)) throw std::domain_error("fox_h: argument must be positive");
    return {std::log(z), 1.0};
}

struct ContourConfig {
    double real_offset = std::numeric_limits<double>::quiet_NaN();       // NaN: auto
    double truncation_height = std::numeric_limits<double>::quiet_NaN(); // NaN: auto
    int node_count = 64;
    double rel_tol = 1e-10;
    int max_refinements = 12;
    bool use_fast_path = true;
};

struct EvalResult {
    double value = 0.0;
    int nodes = 0;
    int refinements = 0;
};

namespace detail {

inline cplx phi_log(const GHSpec& sp, cplx s) {
    cplx acc(0.0, 0.0);
    for (size_t j = 0; j < sp.lower.size(); ++j) {
        auto [b, B] = sp.lower[j];
        if (int(j) < sp.m) acc += log_gamma(cplx(b) + B * s);
        else acc -= log_gamma(cplx(1.0 - b) - B * s);
    }
    for (size_t j = 0; j < sp.upper.size(); ++j) {
        auto [a, A] = sp.upper[j];
        if (int(j) < sp.n) acc += log_gamma(cplx(1.0 - a) - A * s);
        else acc -= log_gamma(cplx(a) + A * s);
    }
    return acc;
}

inline double contour_mag(const GHSpec& sp, double sigma, double tau, double ln_z) {
    return phi_log(sp, cplx(sigma, tau)).real() - sigma * ln_z;
}

// Contour abscissa by magnitude minimization over the pole gap: the flattest
// integrand, not the midpoint, keeps extreme z well conditioned.  On a
// pole-free side the descent can run to a distant saddle (arguments z^c just
// above 1 put it at s ~ c^2 ln z), so the scan extends geometrically as long
// as the magnitude keeps falling, then tightens around the minimum.
inline double pick_sigma(const GHSpec& sp, double ln_z) {
    double L = sp.left_pole_edge(), R = sp.right_pole_edge();
    std::vector<double> cand;
    const int K = 41;
    if (std::isfinite(L) && std::isfinite(R)) {
        double pad = 0.02 * (R - L);
        for (int i = 0; i < K; ++i)
            cand.push_back(L + pad + (R - L - 2 * pad) * i / double(K - 1));
    } else if (std::isfinite(L)) {
        for (int i = 0; i < K; ++i) cand.push_back(L + 0.05 + 8.0 * i / double(K - 1));
    } else if (std::isfinite(R)) {
        for (int i = 0; i < K; ++i) cand.push_back(R - 0.05 - 8.0 * i / double(K - 1));
    } else {
        for (int i = 0; i < K; ++i) cand.push_back(-4.0 + 8.0 * i / double(K - 1));
    }
    double best = cand[0], best_mag = std::numeric_limits<double>::infinity();
    for (double s : cand) {
        double mg = contour_mag(sp, s, 0.0, ln_z);
        if (mg < best_mag) { best_mag = mg; best = s; }
    }
    auto extend = [&](double dir, double anchor) {
        double step = 8.0;
        for (int i = 0; i < 60; ++i) {
            double s = anchor + dir * step;
            double mg = contour_mag(sp, s, 0.0, ln_z);
            if (!std::isfinite(mg) || mg >= best_mag) break;
            best_mag = mg;
            best = s;
            step *= 2.0;
        }
    };
    if (!std::isfinite(R)) extend(+1.0, best);
    if (!std::isfinite(L)) extend(-1.0, best);
    for (int round = 0; round < 40; ++round) {
        double width = std::abs(best) * 0.25 + 0.5;
        double lo = best - width, hi = best + width;
        if (std::isfinite(L)) lo = std::max(lo, L + 0.02 * std::min(1.0, R - L));
        if (std::isfinite(R)) hi = std::min(hi, R - 0.02 * std::min(1.0, R - L));
        double improved = best;
        for (int i = 0; i <= 8; ++i) {
            double s = lo + (hi - lo) * i / 8.0;
            double mg = contour_mag(sp, s, 0.0, ln_z);
            if (mg < best_mag) { best_mag = mg; improved = s; }
        }
        if (improved == best) break;
        best = improved;
    }
    return best;
}

inline double pole_distance(const GHSpec& sp, double sigma) {
    double L = sp.left_pole_edge(), R = sp.right_pole_edge();
    double g = 4.0;
    if (std::isfinite(L)) g = std::min(g, sigma - L);
    if (std::isfinite(R)) g = std::min(g, R - sigma);
    return g;
}

struct AxisNodes {
    std::vector<double> tau, weight;
    double h = 0.0;
};

// Node layout per axis: sinh-stretched when the pole gap is the small scale,
// uniform when the z^{-i tau} oscillation (frequency |ln z|) dominates --
// sinh spacing grows with |tau| and cannot resolve a constant frequency.
inline double sinh_node_cost(double tau_need, double g, double omega) {
    double th_max = std::asinh(tau_need / g);
    return th_max * std::max(1.0 / 0.22,
                             2.6 * omega * tau_need / (0.5 * std::max(th_max, 1e-9)));
}
inline double uniform_step(double tau_need, double g, double omega) {
    return std::min({g / 2.5, kPi / (3.0 * std::max(omega, 1e-9)), tau_need / 12.0});
}
inline int min_axis_nodes(double tau_need, double g, double omega) {
    tau_need *= 1.12;
    double ns = sinh_node_cost(tau_need, g, omega);
    double nu = tau_need / uniform_step(tau_need, g, omega);
    return int(std::min(ns, nu)) + 8;
}
inline AxisNodes make_axis(double tau_need, double g, double omega, int n) {
    tau_need *= 1.12;
    AxisNodes ax;
    ax.tau.resize(size_t(2 * n + 1));
    ax.weight.resize(size_t(2 * n + 1));
    double ns = sinh_node_cost(tau_need, g, omega);
    double nu = tau_need / uniform_step(tau_need, g, omega);
    if (ns <= nu) {
        double th_max = std::asinh(tau_need / g);
        ax.h = th_max / n;
        for (int k = -n; k <= n; ++k) {
            double th = k * ax.h;
            ax.tau[size_t(k + n)] = g * std::sinh(th);
            ax.weight[size_t(k + n)] = g * std::cosh(th);
        }
    } else {
        ax.h = tau_need / n;
        for (int k = -n; k <= n; ++k) {
            ax.tau[size_t(k + n)] = k * ax.h;
            ax.weight[size_t(k + n)] = 1.0;
        }
    }
    return ax;
}

// |integrand| is even in tau for real parameter blocks; scan one side.
inline double truncation_extent(const GHSpec& sp, double sigma, double ln_z,
                                double g, double peak) {
    double tau = std::max(g, 0.25);
    for (int it = 0; it < 200; ++it) {
        if (contour_mag(sp, sigma, tau, ln_z) < peak - 48.0) return tau;
        tau *= 1.3;
    }
    return tau;
}

inline EvalResult contour_integrate(const GHSpec& sp, double ln_z,
                                    const ContourConfig& cfg) {
    double sigma = std::isfinite(cfg.real_offset) ? cfg.real_offset
                                                  : pick_sigma(sp, ln_z);
    double L = sp.left_pole_edge(), R = sp.right_pole_edge();
    if (!(sigma > L && sigma < R))
        throw std::invalid_argument("fox_h: real_offset does not separate poles");
    double g = pole_distance(sp, sigma);
    double peak = contour_mag(sp, sigma, 0.0, ln_z);
    // On an auto-picked line sigma minimizes the tau=0 magnitude, so peak
    // bounds the whole integrand; below -800 the value underflows double.
    if (!std::isfinite(cfg.real_offset) && peak < -800.0) return {0.0, 0, 0};
    double tau_need = std::isfinite(cfg.truncation_height)
                          ? cfg.truncation_height
                          : truncation_extent(sp, sigma, ln_z, g, peak);
    double omega = std::fabs(ln_z);
    int n = std::max(cfg.node_count, min_axis_nodes(tau_need, g, omega));
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int r = 0; r < cfg.max_refinements; ++r) {
        AxisNodes ax = make_axis(tau_need, g, omega, n);
        double acc_re = 0.0;
        for (size_t k = 0; k < ax.tau.size(); ++k) {
            cplx s(sigma, ax.tau[k]);
            cplx f = std::exp(phi_log(sp, s) - s * ln_z - peak);
            acc_re += f.real() * ax.weight[k];
        }
        double val = std::exp(peak) * ax.h * acc_re / (2.0 * kPi);
        if (r > 0 && std::fabs(val - prev) <=
                         cfg.rel_tol * std::max(std::fabs(val), 1e-300))
            return {val, 2 * n + 1, r};
        prev = val;
        n *= 2;
        if (n > (1 << 22)) break;
    }
    throw std::runtime_error("fox_h: contour did not converge");
}

// Closed-form dispatch for the three recurring shapes; t = ln of the
// effective argument after unwinding uniform scales and the power fold.
inline bool uniform_scale(const GHSpec& sp, double& r) {
    r = sp.lower.empty() ? sp.upper[0].second : sp.lower[0].second;
    for (auto& [a, A] : sp.upper)
        if (std::fabs(A - r) > 1e-13 * r) return false;
    for (auto& [b, B] : sp.lower)
        if (std::fabs(B - r) > 1e-13 * r) return false;
    return true;
}

inline bool fast_path(const GHSpec& sp, PowArg z, double& out) {
    double r;
    // lower-incomplete CDF shape: G^{1,1}_{1,2}[x | 1; nu, 0] = ig(nu, x)
    if (sp.m == 1 && sp.n == 1 && sp.upper.size() == 1 && sp.lower.size() == 2 &&
        std::fabs(sp.upper[0].first - 1.0) < 1e-13 &&
        std::fabs(sp.lower[1].first) < 1e-13 && sp.lower[0].first > 0.0 &&
        uniform_scale(sp, r)) {
        double nu = sp.lower[0].first;
        double t = z.power * z.ln_base / r;
        out = std::exp(std::lgamma(nu)) * reg_lower_gamma_ln(nu, t) / r;
        return true;
    }
    // pdf shape: H^{1,0}_{0,1}[x | -; (nu, r)] = (1/r) x^{nu/r} exp(-x^{1/r})
    if (sp.m == 1 && sp.n == 0 && sp.upper.empty() && sp.lower.size() == 1) {
        double nu = sp.lower[0].first;
        r = sp.lower[0].second;
        double t = z.power * z.ln_base / r;
        out = t > 700.0 ? 0.0 : std::exp(nu * t - std::exp(t)) / r;
        return true;
    }
    // upper-incomplete shape: G^{2,0}_{1,2}[x | 1; nu, 0] = IG(nu, x)
    if (sp.m == 2 && sp.n == 0 && sp.upper.size() == 1 && sp.lower.size() == 2 &&
        std::fabs(sp.upper[0].first - 1.0) < 1e-13 &&
        std::fabs(sp.lower[1].first) < 1e-13 && sp.lower[0].first > 0.0 &&
        uniform_scale(sp, r)) {
        double nu = sp.lower[0].first;
        double t = z.power * z.ln_base / r;
        double q = t > 709.0 ? 0.0 : reg_upper_gamma(nu, std::exp(t));
        out = std::exp(std::lgamma(nu)) * q / r;
        return true;
    }
    return false;
}

} // namespace detail

inline EvalResult fox_h_full(const GHSpec& sp, PowArg z,
                             const ContourConfig& cfg = {}) {
    sp.validate();
    if (!(z.power > 0.0)) throw std::domain_error("fox_h: power must be positive");
    if (cfg.node_count < 16) throw std::invalid_argument("fox_h: node_count < 16");
    if (cfg.use_fast_path) {
        double out;
        if (detail::fast_path(sp, z, out)) return {out, 0, 0};
    }
    if (z.power != 1.0) {
        GHSpec folded = sp.scales_divided_by(z.power);
        EvalResult r = detail::contour_integrate(folded, z.ln_base, cfg);
        r.value /= z.power;
        return r;
    }
    return detail::contour_integrate(sp, z.ln_base, cfg);
}

inline double fox_h(const GHSpec& sp, PowArg z, const ContourConfig& cfg = {}) {
    return fox_h_full(sp, z, cfg).value;
}
inline double fox_h(const GHSpec& sp, double z, const ContourConfig& cfg = {}) {
    return fox_h_full(sp, arg_of(z), cfg).value;
}

} // namespace uowrelay::specfun
