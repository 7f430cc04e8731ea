#pragma once

#include "metrics.hpp"
#include "montecarlo.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace uowrelay::validate {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

// quick trims grids and trial counts to finish in well under a minute;
// inject_wrong_psi2 flips a sign inside the asymptote's RF coefficient and
// must make check 4 fail, proving the ratio test can actually catch a wrong
// coefficient.
struct ValidationOptions {
    bool quick = false;
    bool inject_wrong_psi2 = false;
};

namespace detail {

inline std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

inline void note(std::ostream* os, const std::string& s) {
    if (os) *os << s << std::endl;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline std::vector<std::string> catalog_rows() {
    return {"salty-weak",  "salty-moderate", "salty-severe",
            "fresh-weak", "fresh-moderate", "fresh-severe"};
}

inline metrics::Scenario make_scenario(const std::string& row, double alpha,
                                       double mu, double snr1, double snr2,
                                       double threshold = 1.0) {
    metrics::Scenario s;
    s.uwo = channels::scenario_params(row, snr1);
    s.rf = channels::AlphaMuParams{alpha, mu, snr2};
    s.threshold_snr = threshold;
    return s;
}

inline double db(double d) { return std::pow(10.0, d / 10.0); }

template <class Sampler, class Cdf>
double ks_distance(Sampler&& draw, Cdf&& cdf, long long n, std::uint64_t seed) {
    std::vector<double> xs(static_cast<size_t>(n));
    auto g = rng::Xoshiro256pp::seeded(seed);
    for (auto& x : xs) x = draw(g);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double f = cdf(xs[i]);
        d = std::max(d, std::max(f - double(i) / double(n),
                                 double(i + 1) / double(n) - f));
    }
    return d;
}

} // namespace detail

// 1. The contour engine, forced off every closed-form shortcut, must
// reproduce the regularized lower incomplete gamma function.
inline CheckResult check_gamma_reduction(const ValidationOptions&,
                                         std::ostream* progress) {
    detail::note(progress, "check 1: incomplete-gamma reduction");
    detail::Stopwatch sw;
    auto cfg = metrics::detail::contour_only({});
    double worst = 0.0;
    for (double nu : {1.0, 0.7736, 2.0}) {
        auto block = metrics::detail::cdf_block(nu);
        for (int k = 0; k < 50; ++k) {
            double lz = std::log(1e-4) + k * (std::log(1e2) - std::log(1e-4)) / 49.0;
            double got = specfun::fox_h(block, specfun::PowArg{lz, 1.0}, cfg);
            double want = std::exp(std::lgamma(nu)) *
                          specfun::reg_lower_gamma(nu, std::exp(lz));
            worst = std::max(worst, detail::rel_err(got, want));
        }
    }
    double secs = sw.seconds();
    CheckResult r;
    r.id = 1;
    r.name = "contour engine reduces to the incomplete gamma function";
    r.passed = worst < 1e-8 && secs < 10.0;
    r.detail = detail::fmt("max rel err %.3g (tol 1e-8), %.2f s (limit 10 s)",
                           worst, secs);
    return r;
}

// 2. Every decoupled bivariate cross term must equal the product of its two
// univariate factors across a grid of per-hop mean SNRs.
inline CheckResult check_factorization(const ValidationOptions& opt,
                                       std::ostream* progress) {
    detail::note(progress, "check 2: bivariate factorization");
    detail::Stopwatch sw;
    auto rows = opt.quick
                    ? std::vector<std::string>{"salty-weak", "fresh-severe"}
                    : detail::catalog_rows();
    auto grid = opt.quick ? std::vector<double>{0.0, 12.0, 24.0}
                          : std::vector<double>{0.0, 6.0, 12.0, 18.0, 24.0};
    const double gth = 1.0;
    specfun::BivContourConfig biv;
    double worst = 0.0;
    for (const auto& row : rows) {
        for (double d1 : grid) {
            for (double d2 : grid) {
                auto e = channels::scenario_params(row, detail::db(d1));
                auto rf = channels::AlphaMuParams::rayleigh(detail::db(d2));
                auto ax_exp = metrics::detail::exp_arg(e, gth);
                auto ax_gg = metrics::detail::gg_arg(e, gth);
                auto ay = metrics::detail::rf_arg(rf, gth);
                specfun::BivariateGHSpec ac{{},
                                            metrics::detail::cdf_block(1.0),
                                            metrics::detail::cdf_block(rf.mu)};
                specfun::BivariateGHSpec bc{{},
                                            metrics::detail::cdf_block(e.a),
                                            metrics::detail::cdf_block(rf.mu)};
                double got_ac = specfun::fox_h_bivariate(ac, ax_exp, ay, biv);
                double got_bc = specfun::fox_h_bivariate(bc, ax_gg, ay, biv);
                double fy = specfun::fox_h(ac.inner_y, ay);
                worst = std::max(
                    worst, detail::rel_err(
                               got_ac, specfun::fox_h(ac.inner_x, ax_exp) * fy));
                worst = std::max(
                    worst, detail::rel_err(
                               got_bc, specfun::fox_h(bc.inner_x, ax_gg) * fy));
            }
        }
        detail::note(progress,
                     detail::fmt("  %s: worst so far %.3g", row.c_str(), worst));
    }
    double secs = sw.seconds();
    CheckResult r;
    r.id = 2;
    r.name = "bivariate cross terms factorize into univariate products";
    r.passed = worst < 1e-6 && secs < 60.0;
    r.detail = detail::fmt("max rel err %.3g (tol 1e-6), %.1f s (limit 60 s)",
                           worst, secs);
    return r;
}

// 3. The contour-assembled outage, the CDF-combination outage, and a
// large-sample simulation must agree on a broad parameter grid.
inline CheckResult check_outage_agreement(const ValidationOptions& opt,
                                          std::ostream* progress) {
    detail::note(progress, "check 3: outage agreement (slow: simulation grid)");
    detail::Stopwatch sw;
    struct Preset {
        double alpha, mu;
    };
    auto rows = opt.quick
                    ? std::vector<std::string>{"salty-weak", "fresh-severe"}
                    : detail::catalog_rows();
    auto presets = opt.quick ? std::vector<Preset>{{2, 1}, {3.5, 0.8}}
                             : std::vector<Preset>{{2, 1}, {2, 2}, {1, 1}, {3.5, 0.8}};
    auto snrs = opt.quick ? std::vector<double>{15.0, 35.0}
                          : std::vector<double>{5.0, 15.0, 25.0, 35.0};
    long long trials = opt.quick ? 1000000LL : 10000000LL;

    double worst_rel = 0.0, worst_z = 0.0;
    int idx = 0;
    for (const auto& row : rows) {
        for (const auto& p : presets) {
            for (double d : snrs) {
                double snr = detail::db(d);
                auto s = detail::make_scenario(row, p.alpha, p.mu, snr, snr);
                double exact = metrics::outage_exact(s);
                double comb = metrics::outage_combined(s);
                worst_rel = std::max(worst_rel, detail::rel_err(exact, comb));

                mc::SimConfig cfg;
                cfg.trials = trials;
                cfg.root_seed = 9000 + idx;
                auto est = mc::simulate_outage(s, cfg);
                double se = std::max(est.stderr_, 1e-300);
                worst_z = std::max(worst_z, std::abs(est.value - comb) / se);
                worst_z = std::max(worst_z, std::abs(est.value - exact) / se);
                ++idx;
            }
            detail::note(progress, detail::fmt("  %s (%.1f,%.1f): worst z %.2f",
                                               row.c_str(), p.alpha, p.mu,
                                               worst_z));
        }
    }
    double secs = sw.seconds();
    CheckResult r;
    r.id = 3;
    r.name = "outage: contour route, combination route, simulation agree";
    r.passed = worst_rel < 1e-6 && worst_z <= 3.0;
    r.detail = detail::fmt(
        "route max rel err %.3g (tol 1e-6); worst |sim-closed| %.2f stderr "
        "(limit 3); %d cells x %lld trials, %.0f s",
        worst_rel, worst_z, idx, trials, secs);
    return r;
}

// 4. The high-SNR expansion must predict both the outage slope and its
// coefficient in every reachable decay regime.
inline CheckResult check_asymptotic_behavior(const ValidationOptions& opt,
                                             std::ostream* progress) {
    detail::note(progress, "check 4: asymptotic slopes and coefficients");
    struct Pair {
        const char* row;
        double alpha, mu;
        const char* regime;
    };
    std::vector<Pair> pairs = {
        {"salty-weak", 1.0, 1.0, "rf-limited"},
        {"fresh-moderate", 1.0, 1.0, "rf-limited"},
        {"salty-weak", 2.0, 1.0, "tied-limbs"},
        {"salty-severe", 2.0, 2.0, "uwo-limited"},
        {"fresh-weak", 2.0, 2.0, "uwo-limited"},
    };
    if (opt.inject_wrong_psi2)
        pairs.push_back({"salty-weak", 2.0, 0.5, "sign-flip control"});

    const std::vector<double> window = {80.0, 82.5, 85.0, 87.5, 90.0};
    double worst_slope_dev = 0.0, worst_ratio_dev = 0.0;
    std::string failing;
    for (const auto& p : pairs) {
        auto e = channels::scenario_params(p.row);
        double gd = std::min({1.0, e.a * e.c, p.alpha * p.mu / 2.0});

        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double pair_ratio_dev = 0.0;
        for (double d : window) {
            double snr = detail::db(d);
            auto s = detail::make_scenario(p.row, p.alpha, p.mu, snr, snr);
            double comb = metrics::outage_combined(s);
            double asym =
                metrics::outage_asymptotic(s, opt.inject_wrong_psi2).value();
            double x = d / 10.0, y = std::log10(comb);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            pair_ratio_dev = std::max(pair_ratio_dev, std::abs(asym / comb - 1.0));
        }
        double n = double(window.size());
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        double slope_dev = std::abs(slope + gd) / gd;
        worst_slope_dev = std::max(worst_slope_dev, slope_dev);
        worst_ratio_dev = std::max(worst_ratio_dev, pair_ratio_dev);
        bool ok = slope_dev <= 0.05 && pair_ratio_dev <= 0.1;
        if (!ok && failing.empty()) failing = detail::fmt("%s (%s)", p.row, p.regime);
        detail::note(progress,
                     detail::fmt("  %s (%.1f,%.1f) %s: slope %.4f vs -%.2f, "
                                 "|ratio-1| %.3f",
                                 p.row, p.alpha, p.mu, p.regime, slope, gd,
                                 pair_ratio_dev));
    }
    CheckResult r;
    r.id = 4;
    r.name = "outage asymptote: diversity slope and coding coefficient";
    r.passed = worst_slope_dev <= 0.05 && worst_ratio_dev <= 0.1;
    r.detail = detail::fmt(
        "%zu pairs; worst slope dev %.3g (tol 0.05), worst |ratio-1| %.3g "
        "(band 0.1)%s",
        pairs.size(), worst_slope_dev, worst_ratio_dev,
        failing.empty() ? "" : (std::string("; failing: ") + failing).c_str());
    return r;
}

// 5. Per-hop symbol error closed forms must match direct quadrature over the
// channel densities, collapse to the textbook Rayleigh-BPSK formula, and the
// end-to-end form must agree with simulation.
inline CheckResult check_symbol_error(const ValidationOptions& opt,
                                      std::ostream* progress) {
    detail::note(progress, "check 5: average symbol error");
    auto mod = metrics::ModulationParams::bpsk();
    auto rows = opt.quick
                    ? std::vector<std::string>{"salty-weak", "fresh-severe"}
                    : detail::catalog_rows();
    double worst_quad = 0.0;
    for (const auto& row : rows)
        for (double d : {5.0, 20.0}) {
            auto p = channels::scenario_params(row, detail::db(d));
            worst_quad = std::max(
                worst_quad, detail::rel_err(metrics::asep_hop_uwo(p, mod),
                                            metrics::asep_hop_uwo_quadrature(p, mod)));
        }
    struct Preset {
        double alpha, mu;
    };
    for (const auto& pr : std::vector<Preset>{{2, 2}, {3.5, 0.8}, {1, 1}})
        for (double d : {5.0, 20.0}) {
            channels::AlphaMuParams p{pr.alpha, pr.mu, detail::db(d)};
            worst_quad = std::max(
                worst_quad, detail::rel_err(metrics::asep_hop_rf(p, mod),
                                            metrics::asep_hop_rf_quadrature(p, mod)));
        }

    double worst_ray = 0.0;
    for (double d : {0.0, 10.0, 20.0, 30.0}) {
        auto p = channels::AlphaMuParams::rayleigh(detail::db(d));
        worst_ray = std::max(worst_ray,
                             detail::rel_err(metrics::asep_hop_rf(p, mod),
                                             metrics::asep_rayleigh_bpsk(p.mean_snr)));
    }

    long long trials = opt.quick ? 200000LL : 1000000LL;
    double worst_z = 0.0;
    int i = 0;
    for (double d : {0.0, 10.0, 20.0, 30.0}) {
        double snr = detail::db(d);
        auto s = detail::make_scenario("salty-weak", 2.0, 1.0, snr, snr);
        double closed = metrics::asep_e2e(s);
        mc::SimConfig cfg;
        cfg.trials = trials;
        cfg.root_seed = 5000 + i++;
        auto est = mc::simulate_asep(s, cfg);
        worst_z = std::max(worst_z, std::abs(est.value - closed) /
                                        std::max(est.stderr_, 1e-300));
    }
    CheckResult r;
    r.id = 5;
    r.name = "symbol error: closed forms vs quadrature and simulation";
    r.passed = worst_quad < 1e-6 && worst_ray < 1e-8 && worst_z <= 3.0;
    r.detail = detail::fmt(
        "hop closed vs quadrature max rel err %.3g (tol 1e-6); Rayleigh "
        "identity %.3g (tol 1e-8); worst |sim-closed| %.2f stderr (limit 3)",
        worst_quad, worst_ray, worst_z);
    return r;
}

// 6. Ergodic capacity closed form must match quadrature and simulation, and
// heavier turbulence must always cost capacity.
inline CheckResult check_capacity(const ValidationOptions& opt,
                                  std::ostream* progress) {
    detail::note(progress, "check 6: ergodic capacity (slow: coupled contours)");
    auto rows = opt.quick
                    ? std::vector<std::string>{"salty-weak", "salty-severe"}
                    : std::vector<std::string>{"salty-weak", "salty-moderate",
                                               "salty-severe"};
    auto snrs = opt.quick ? std::vector<double>{10.0, 30.0}
                          : std::vector<double>{10.0, 20.0, 30.0};
    long long trials = opt.quick ? 200000LL : 1000000LL;

    double worst_abs = 0.0, worst_z = 0.0;
    std::vector<std::vector<double>> closed(rows.size(),
                                            std::vector<double>(snrs.size()));
    int i = 0;
    for (size_t ri = 0; ri < rows.size(); ++ri)
        for (size_t si = 0; si < snrs.size(); ++si) {
            double snr = detail::db(snrs[si]);
            auto s = detail::make_scenario(rows[ri], 2.0, 1.0, snr, snr);
            double cf = metrics::capacity_closed_form(s);
            closed[ri][si] = cf;
            worst_abs =
                std::max(worst_abs, std::abs(cf - metrics::capacity_quadrature(s)));
            mc::SimConfig cfg;
            cfg.trials = trials;
            cfg.root_seed = 6000 + i++;
            auto est = mc::simulate_capacity(s, cfg);
            worst_z = std::max(worst_z, std::abs(est.value - cf) /
                                            std::max(est.stderr_, 1e-300));
            detail::note(progress,
                         detail::fmt("  %s @ %.0f dB: %.4f bits", rows[ri].c_str(),
                                     snrs[si], cf));
        }
    bool ordered = true;
    for (size_t si = 0; si < snrs.size(); ++si)
        ordered = ordered && closed.back()[si] < closed.front()[si];

    CheckResult r;
    r.id = 6;
    r.name = "capacity: closed form vs quadrature and simulation";
    r.passed = worst_abs < 1e-4 && worst_z <= 3.0 && ordered;
    r.detail = detail::fmt(
        "max |closed-quadrature| %.3g bits (tol 1e-4); worst |sim-closed| "
        "%.2f stderr (limit 3); severe<weak ordering %s",
        worst_abs, worst_z, ordered ? "holds" : "violated");
    return r;
}

// 7. Both channel samplers must match their analytic distributions, and
// estimates must not depend on worker count or batch size.
inline CheckResult check_samplers(const ValidationOptions&,
                                  std::ostream* progress) {
    detail::note(progress, "check 7: sampler fidelity and determinism");
    const long long n = 1000000;
    double worst_ks = 0.0;
    int i = 0;
    for (const auto& row : detail::catalog_rows()) {
        auto p = channels::scenario_params(row, 10.0);
        double d = detail::ks_distance(
            [&](rng::Xoshiro256pp& g) { return channels::egg_sample(p, g); },
            [&](double x) { return channels::egg_cdf(p, x); }, n, 7000 + i++);
        worst_ks = std::max(worst_ks, d);
    }
    struct Preset {
        double alpha, mu;
    };
    for (const auto& pr :
         std::vector<Preset>{{2, 1}, {2, 2}, {1, 1}, {3.5, 0.8}, {2, 0.5}}) {
        channels::AlphaMuParams p{pr.alpha, pr.mu, 10.0};
        double d = detail::ks_distance(
            [&](rng::Xoshiro256pp& g) { return channels::alpha_mu_sample(p, g); },
            [&](double x) { return channels::alpha_mu_cdf(p, x); }, n, 7100 + i++);
        worst_ks = std::max(worst_ks, d);
    }

    auto s = detail::make_scenario("salty-weak", 2.0, 1.0, 10.0, 10.0);
    mc::SimConfig serial;
    serial.trials = 409600;
    serial.root_seed = 42;
    mc::SimConfig pooled = serial;
    pooled.workers = 5;
    pooled.batch_size = 10000;
    auto o1 = mc::simulate_outage(s, serial);
    auto o2 = mc::simulate_outage(s, pooled);
    auto a1 = mc::simulate_asep(s, serial);
    auto a2 = mc::simulate_asep(s, pooled);
    bool deterministic = o1.value == o2.value && o1.stderr_ == o2.stderr_ &&
                         a1.value == a2.value && a1.stderr_ == a2.stderr_;

    CheckResult r;
    r.id = 7;
    r.name = "samplers match their distributions; estimates are deterministic";
    r.passed = worst_ks < 0.002 && deterministic;
    r.detail = detail::fmt(
        "max KS distance %.5f over 11 configs at n=1e6 (tol 0.002); "
        "worker/batch invariance %s",
        worst_ks, deterministic ? "holds" : "violated");
    return r;
}

// 8. The contour-assembled end-to-end density must integrate to one and match
// the compositional density pointwise.
inline CheckResult check_density_assembly(const ValidationOptions& opt,
                                          std::ostream* progress) {
    detail::note(progress, "check 8: end-to-end density assembly");
    struct Cfg {
        const char* row;
        double alpha, mu;
    };
    std::vector<Cfg> cfgs = {{"salty-weak", 2.0, 1.0}};
    if (!opt.quick) cfgs.push_back({"fresh-severe", 3.5, 0.8});

    double worst_norm = 0.0, worst_point = 0.0;
    for (const auto& c : cfgs) {
        double snr = 10.0;
        auto s = detail::make_scenario(c.row, c.alpha, c.mu, snr, snr);
        double hi = snr;
        for (int k = 0; k < 200; ++k) {
            double surv = channels::egg_survival(s.uwo, hi) *
                          channels::alpha_mu_survival(s.rf, hi);
            if (surv < 1e-9) break;
            hi *= 2.0;
        }
        double integral = quad::integrate(
            [&](double g) { return metrics::e2e_pdf_h_assembly(s, g); }, 0.0, hi,
            1e-7, 1e-9, 800);
        worst_norm = std::max(worst_norm, std::abs(integral - 1.0));
        for (double g : {2.0, 5.0, 10.0, 20.0, 50.0})
            worst_point = std::max(
                worst_point, detail::rel_err(metrics::e2e_pdf_h_assembly(s, g),
                                             metrics::e2e_pdf(s, g)));
        detail::note(progress,
                     detail::fmt("  %s: integral %.9f over [0, %.3g]", c.row,
                                 integral, hi));
    }
    CheckResult r;
    r.id = 8;
    r.name = "end-to-end density: unit mass and compositional agreement";
    r.passed = worst_norm < 1e-6 && worst_point < 1e-6;
    r.detail = detail::fmt(
        "max |integral-1| %.3g (tol 1e-6); max pointwise rel err %.3g (tol 1e-6)",
        worst_norm, worst_point);
    return r;
}

inline std::vector<CheckResult> run_validation(const ValidationOptions& opt = {},
                                               std::ostream* progress = nullptr) {
    using Check = CheckResult (*)(const ValidationOptions&, std::ostream*);
    const Check checks[] = {check_gamma_reduction,    check_factorization,
                            check_outage_agreement,   check_asymptotic_behavior,
                            check_symbol_error,       check_capacity,
                            check_samplers,           check_density_assembly};
    std::vector<CheckResult> out;
    int id = 1;
    for (auto check : checks) {
        try {
            out.push_back(check(opt, progress));
        } catch (const std::exception& e) {
            CheckResult r;
            r.id = id;
            r.name = "check aborted";
            r.passed = false;
            r.detail = detail::fmt("exception: %s", e.what());
            out.push_back(r);
        }
        ++id;
    }
    return out;
}

} // namespace uowrelay::validate
