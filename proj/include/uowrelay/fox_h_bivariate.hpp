#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fox_h.hpp"

namespace uowrelay::specfun {

// One coupling factor Gamma(offset + cx*s + cy*t); sign -1 puts it in the
// denominator.  Numerator factors with positive coefficients constrain the
// contour pair to offset + cx*sigma_s + cy*sigma_t > 0.
struct OuterFactor {
    double offset = 0.0, cx = 0.0, cy = 0.0;
    int sign = +1;
};

struct BivariateGHSpec {
    std::vector<OuterFactor> outer;
    GHSpec inner_x, inner_y;
    void validate() const {
        inner_x.validate();
        inner_y.validate();
        for (auto& f : outer)
            if (f.sign != 1 && f.sign != -1)
                throw std::invalid_argument("BivariateGHSpec: sign must be +-1");
    }
};

struct BivContourConfig {
    double rel_tol = 1e-8;
    int node_count = 48;
    int max_refinements = 8;
    bool use_outer_shortcut = true; // allow the reciprocal-sine kernel form
};

struct BivEvalResult {
    double value = 0.0;
    int nodes_x = 0, nodes_y = 0;
};

namespace detail {

// Gamma(u)^2 Gamma(1-u)/Gamma(1+u) == pi / (u sin(pi u)); this exact form
// turns the inner tensor loop from four log-gammas into one complex sine.
struct OuterEval {
    std::vector<OuterFactor> factors;
    bool reciprocal_sine = false;
    double cx = 0.0, cy = 0.0;

    static bool match_kernel(const std::vector<OuterFactor>& fs, double& cx, double& cy) {
        if (fs.size() != 4) return false;
        int plain = 0, reflected = 0, denom = 0;
        cx = 0.0; cy = 0.0;
        for (auto& f : fs)
            if (f.sign == 1 && f.offset == 0.0) { cx = f.cx; cy = f.cy; }
        if (cx == 0.0 && cy == 0.0) return false;
        auto near = [](double a, double b) { return std::fabs(a - b) < 1e-12; };
        for (auto& f : fs) {
            if (f.sign == 1 && near(f.offset, 0.0) && near(f.cx, cx) && near(f.cy, cy)) ++plain;
            else if (f.sign == 1 && near(f.offset, 1.0) && near(f.cx, -cx) && near(f.cy, -cy)) ++reflected;
            else if (f.sign == -1 && near(f.offset, 1.0) && near(f.cx, cx) && near(f.cy, cy)) ++denom;
            else return false;
        }
        return plain == 2 && reflected == 1 && denom == 1;
    }

    explicit OuterEval(std::vector<OuterFactor> fs, bool allow_shortcut = true)
        : factors(std::move(fs)) {
        reciprocal_sine = allow_shortcut && match_kernel(factors, cx, cy);
    }

    cplx log_at(cplx s, cplx t) const {
        if (reciprocal_sine) {
            cplx u = cx * s + cy * t;
            return cplx(1.1447298858494002) - std::log(u) - log_sin_pi(u);
        }
        cplx acc(0.0, 0.0);
        for (auto& f : factors)
            acc += double(f.sign) * log_gamma(cplx(f.offset) + f.cx * s + f.cy * t);
        return acc;
    }
};

struct ContourPair {
    double sx = 0.0, sy = 0.0, margin = 0.0;
};

inline double biv_mag(const GHSpec& ix, const GHSpec& iy, const OuterEval& outer,
                      double ln_x, double ln_y, cplx s, cplx t) {
    return phi_log(ix, s).real() - s.real() * ln_x +
           phi_log(iy, t).real() - t.real() * ln_y +
           outer.log_at(s, t).real();
}

// Contour pair selection: intersect each numerator half-plane with the
// y-gap analytically per x-candidate (the feasible strip can be a sliver
// when a coupling coefficient is large), keep candidates with decent pole
// margin, then take the best-conditioned one by integrand magnitude.
inline ContourPair pick_contour_pair(const GHSpec& ix, const GHSpec& iy,
                                     const OuterEval& outer, double ln_x, double ln_y) {
    double Lx = ix.left_pole_edge(), Rx = ix.right_pole_edge();
    double Ly = iy.left_pole_edge(), Ry = iy.right_pole_edge();
    auto grid = [](double L, double R, int k) {
        std::vector<double> v;
        if (std::isfinite(L) && std::isfinite(R)) {
            double pad = 0.01 * std::min(1.0, R - L);
            for (int i = 0; i < k; ++i)
                v.push_back(L + pad + (R - L - 2 * pad) * i / double(k - 1));
        } else if (std::isfinite(L)) {
            for (int i = 0; i < k; ++i) v.push_back(L + 0.02 + 8.0 * i / double(k - 1));
        } else if (std::isfinite(R)) {
            for (int i = 0; i < k; ++i) v.push_back(R - 0.02 - 8.0 * i / double(k - 1));
        } else {
            for (int i = 0; i < k; ++i) v.push_back(-4.0 + 8.0 * i / double(k - 1));
        }
        return v;
    };
    std::vector<ContourPair> cands;
    for (double sx : grid(Lx, Rx, 25)) {
        double lo = Ly, hi = Ry;
        bool dead = false;
        for (auto& f : outer.factors) {
            if (f.sign <= 0) continue;
            double rhs = -(f.offset + f.cx * sx);
            if (f.cy > 0.0) lo = std::max(lo, rhs / f.cy);
            else if (f.cy < 0.0) hi = std::min(hi, rhs / f.cy);
            else if (f.offset + f.cx * sx <= 0.0) dead = true;
        }
        if (dead || !(lo < hi)) continue;
        for (double sy : grid(lo, hi, 9)) {
            double marg = 9.0;
            if (std::isfinite(Lx)) marg = std::min(marg, sx - Lx);
            if (std::isfinite(Rx)) marg = std::min(marg, Rx - sx);
            if (std::isfinite(Ly)) marg = std::min(marg, sy - Ly);
            if (std::isfinite(Ry)) marg = std::min(marg, Ry - sy);
            bool ok = true;
            for (auto& f : outer.factors) {
                if (f.sign <= 0) continue;
                double v = f.offset + f.cx * sx + f.cy * sy;
                if (v <= 1e-4) { ok = false; break; }
                marg = std::min(marg, v / std::max({std::fabs(f.cx), std::fabs(f.cy), 1.0}));
            }
            if (ok && marg > 0.0) cands.push_back({sx, sy, marg});
        }
    }
    if (cands.empty())
        throw std::invalid_argument("fox_h_bivariate: no separating contour pair");
    double best_marg = 0.0;
    for (auto& c : cands) best_marg = std::max(best_marg, c.margin);
    ContourPair best;
    double best_mag = std::numeric_limits<double>::infinity();
    for (auto& c : cands) {
        if (c.margin < 0.35 * best_marg) continue;
        double mg = biv_mag(ix, iy, outer, ln_x, ln_y, cplx(c.sx), cplx(c.sy));
        if (mg < best_mag) { best_mag = mg; best = c; }
    }
    return best;
}

// Line choice for a decoupled axis: start from the univariate magnitude
// minimum, then back away from the nearest pole edge while that stays cheap.
// The step size is min(g/2.5, pi/(3 omega)), so widening the pole gap g up to
// 2.5*pi/(3 omega) shrinks the node count one-for-one; past that the
// oscillation term owns the step and sliding further buys nothing.  The
// magnitude-minimizing sigma of a slowly decaying folded axis sits within
// ~0.1 of the edge and can cost several hundred thousand nodes that a +6
// rise of the line peak (harmless at rel_tol 1e-8) avoids.
inline double tuned_axis_sigma(const GHSpec& sp, double ln_z) {
    double s = pick_sigma(sp, ln_z);
    double L = sp.left_pole_edge(), R = sp.right_pole_edge();
    double om = std::fabs(ln_z);
    double goal = om > 0.0 ? std::min(2.5 * kPi / (3.0 * om), 4.0) : 4.0;
    double g0 = pole_distance(sp, s);
    if (g0 >= goal) return s;
    auto mag = [&](double sig) {
        return phi_log(sp, cplx(sig)).real() - sig * ln_z;
    };
    double base = mag(s);
    double dl = std::isfinite(L) ? s - L : std::numeric_limits<double>::infinity();
    double dr = std::isfinite(R) ? R - s : std::numeric_limits<double>::infinity();
    double dir = dl <= dr ? 1.0 : -1.0;
    double best = s, best_g = g0;
    for (int k = 1; k <= 8; ++k) {
        double cand = s + dir * (goal - g0) * k / 8.0;
        if (cand <= L || cand >= R) break;
        if (mag(cand) > base + 6.0) break;
        double g = pole_distance(sp, cand);
        if (g > best_g) { best = cand; best_g = g; }
    }
    return best;
}

inline BivEvalResult biv_contour_integrate(const GHSpec& ix, const GHSpec& iy,
                                           const OuterEval& outer, double ln_x,
                                           double ln_y, const BivContourConfig& cfg) {
    // Without coupling factors the integrand separates, so each axis can use
    // the univariate line picker; the joint grid cannot hug a pole edge the
    // way pick_sigma's refinement does, and a line parked decades above the
    // axis minimum turns the tensor sum into pure cancellation.
    const bool factorized = outer.factors.empty();
    ContourPair cp;
    if (factorized) {
        cp.sx = tuned_axis_sigma(ix, ln_x);
        cp.sy = tuned_axis_sigma(iy, ln_y);
    } else {
        cp = pick_contour_pair(ix, iy, outer, ln_x, ln_y);
    }
    double sx = cp.sx, sy = cp.sy;
    double gx = pole_distance(ix, sx), gy = pole_distance(iy, sy);
    for (auto& f : outer.factors) {
        if (f.sign <= 0) continue;
        double v = f.offset + f.cx * sx + f.cy * sy;
        if (f.cx != 0.0) gx = std::min(gx, v / std::fabs(f.cx));
        if (f.cy != 0.0) gy = std::min(gy, v / std::fabs(f.cy));
    }
    double peak = biv_mag(ix, iy, outer, ln_x, ln_y, cplx(sx), cplx(sy));
    // The picked pair sits at the grid magnitude minimum; below -800 the
    // result underflows double, so skip the node chase.
    if (peak < -800.0) return {0.0, 0, 0};
    // Truncation by ray scan: the axes plus, for each coupling factor, the
    // direction (cy, -cx) its own decay cannot see -- slow ridges live there.
    std::vector<std::pair<double, double>> rays = {{1.0, 0.0}, {0.0, 1.0}};
    for (auto& f : outer.factors) {
        double nrm = std::hypot(f.cx, f.cy);
        if (nrm > 0.0) rays.push_back({f.cy / nrm, -f.cx / nrm});
    }
    double taux_need = 1e-6, tauy_need = 1e-6;
    for (auto [dx, dy] : rays) {
        double r = 0.5;
        for (int it = 0; it < 80; ++it) {
            if (biv_mag(ix, iy, outer, ln_x, ln_y, cplx(sx, dx * r), cplx(sy, dy * r)) < peak - 52.0 &&
                biv_mag(ix, iy, outer, ln_x, ln_y, cplx(sx, -dx * r), cplx(sy, -dy * r)) < peak - 52.0)
                break;
            r *= 1.3;
        }
        taux_need = std::max(taux_need, std::fabs(dx) * r);
        tauy_need = std::max(tauy_need, std::fabs(dy) * r);
    }
    double omx = std::fabs(ln_x), omy = std::fabs(ln_y);
    int nx = std::max(cfg.node_count, min_axis_nodes(taux_need, gx, omx));
    int ny = std::max(cfg.node_count, min_axis_nodes(tauy_need, gy, omy));
    double px = phi_log(ix, cplx(sx)).real() - sx * ln_x;
    double py = phi_log(iy, cplx(sy)).real() - sy * ln_y;
    // Coupled kernels pay nx*ny per pass; the factorized case only nx+ny,
    // so its slowly-decaying c-folded axes get a much larger budget and
    // refine independently (a y axis converged at a few hundred nodes must
    // not double along with a hundred-thousand-node x axis).
    const int axis_cap = factorized ? 2000000 : 6000;
    if (factorized) {
        auto axis_integral = [&](const GHSpec& sp, double ln_z, double s0,
                                 double g, double tau_need, double om, int n,
                                 double pk) -> std::pair<cplx, int> {
            cplx prev(0.0, 0.0);
            for (int ref = 0; ref < cfg.max_refinements; ++ref) {
                if (n > axis_cap)
                    throw std::runtime_error("fox_h_bivariate: node cap exceeded");
                AxisNodes ax = make_axis(tau_need, g, om, n);
                cplx su(0.0, 0.0);
                for (size_t i = 0; i < ax.tau.size(); ++i) {
                    cplx s(s0, ax.tau[i]);
                    su += std::exp(phi_log(sp, s) - s * ln_z - pk) * ax.weight[i];
                }
                su *= ax.h;
                if (ref > 0 && std::abs(su - prev) <=
                                   0.5 * cfg.rel_tol * std::max(std::abs(su), 1e-300))
                    return {su, 2 * n + 1};
                prev = su;
                n *= 2;
            }
            throw std::runtime_error("fox_h_bivariate: no convergence");
        };
        auto [facx, nxo] = axis_integral(ix, ln_x, sx, gx, taux_need, omx, nx, px);
        auto [facy, nyo] = axis_integral(iy, ln_y, sy, gy, tauy_need, omy, ny, py);
        double val = std::exp(peak) * (facx * facy).real() / (4.0 * kPi * kPi);
        return {val, nxo, nyo};
    }
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int ref = 0; ref < cfg.max_refinements; ++ref) {
        if (nx > axis_cap || ny > axis_cap)
            throw std::runtime_error("fox_h_bivariate: node cap exceeded");
        AxisNodes axx = make_axis(taux_need, gx, omx, nx);
        AxisNodes axy = make_axis(tauy_need, gy, omy, ny);
        size_t NX = axx.tau.size(), NY = axy.tau.size();
        std::vector<cplx> fx(NX), fy(NY), tv(NY);
        for (size_t i = 0; i < NX; ++i) {
            cplx s(sx, axx.tau[i]);
            fx[i] = std::exp(phi_log(ix, s) - s * ln_x - px) * axx.weight[i];
        }
        for (size_t j = 0; j < NY; ++j) {
            cplx t(sy, axy.tau[j]);
            fy[j] = std::exp(phi_log(iy, t) - t * ln_y - py) * axy.weight[j];
            tv[j] = t;
        }
        cplx acc(0.0, 0.0);
        double shift = px + py - peak;
        for (size_t i = 0; i < NX; ++i) {
            cplx s(sx, axx.tau[i]);
            cplx row(0.0, 0.0);
            for (size_t j = 0; j < NY; ++j)
                row += std::exp(outer.log_at(s, tv[j]) + shift) * fy[j];
            acc += fx[i] * row;
        }
        double val = std::exp(peak) * axx.h * axy.h * acc.real() / (4.0 * kPi * kPi);
        if (ref > 0 && std::fabs(val - prev) <=
                           cfg.rel_tol * std::max(std::fabs(val), 1e-300))
            return {val, 2 * nx + 1, 2 * ny + 1};
        prev = val;
        nx *= 2;
        ny *= 2;
    }
    throw std::runtime_error("fox_h_bivariate: no convergence");
}

} // namespace detail

inline BivEvalResult fox_h_bivariate_full(const BivariateGHSpec& sp, PowArg x,
                                          PowArg y, const BivContourConfig& cfg = {}) {
    sp.validate();
    if (!(x.power > 0.0) || !(y.power > 0.0))
        throw std::domain_error("fox_h_bivariate: powers must be positive");
    GHSpec ix = x.power != 1.0 ? sp.inner_x.scales_divided_by(x.power) : sp.inner_x;
    GHSpec iy = y.power != 1.0 ? sp.inner_y.scales_divided_by(y.power) : sp.inner_y;
    std::vector<OuterFactor> fs = sp.outer;
    for (auto& f : fs) {
        f.cx /= x.power;
        f.cy /= y.power;
    }
    detail::OuterEval outer(std::move(fs), cfg.use_outer_shortcut);
    BivEvalResult r =
        detail::biv_contour_integrate(ix, iy, outer, x.ln_base, y.ln_base, cfg);
    r.value /= x.power * y.power;
    return r;
}

inline double fox_h_bivariate(const BivariateGHSpec& sp, PowArg x, PowArg y,
                              const BivContourConfig& cfg = {}) {
    return fox_h_bivariate_full(sp, x, y, cfg).value;
}
inline double fox_h_bivariate(const BivariateGHSpec& sp, double x, double y,
                              const BivContourConfig& cfg = {}) {
    return fox_h_bivariate_full(sp, arg_of(x), arg_of(y), cfg).value;
}

} // namespace uowrelay::specfun
