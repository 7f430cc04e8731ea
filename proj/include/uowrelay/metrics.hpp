#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "channels.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace uowrelay::metrics {

using channels::AlphaMuParams;
using channels::EggParams;

// Conditional symbol error rate eta/2 * erfc(sqrt(beta*snr)).
struct ModulationParams {
    double eta = 1.0, beta = 1.0;
    static ModulationParams bpsk() { return {1.0, 1.0}; }
    void validate() const {
        if (!(eta > 0.0) || !(beta > 0.0))
            throw std::invalid_argument(
                "ModulationParams: eta and beta must be positive");
    }
};

// Dual-hop decode-and-forward link: UWO first hop, RF second hop, plus the
// outage threshold (linear SNR) and modulation constants the metrics read.
struct Scenario {
    EggParams uwo;
    AlphaMuParams rf;
    double threshold_snr = 1.0;
    ModulationParams modulation{};

    void validate() const {
        uwo.validate();
        rf.validate();
        modulation.validate();
        if (!(threshold_snr >= 0.0))
            throw std::invalid_argument("Scenario: threshold_snr must be >= 0");
    }
    bool iid_mean_snr() const {
        return std::abs(uwo.mean_snr - rf.mean_snr) <=
               1e-12 * std::max(uwo.mean_snr, rf.mean_snr);
    }
};

enum class Provenance { closed_form, asymptotic, monte_carlo, quadrature };

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::closed_form: return "closed-form";
        case Provenance::asymptotic: return "asymptotic";
        case Provenance::monte_carlo: return "monte-carlo";
        case Provenance::quadrature: return "quadrature";
    }
    return "unknown";
}

// One sweep trace: metric values over mean SNR in dB, tagged with how they
// were computed.  Standard errors accompany Monte-Carlo traces only.
struct MetricCurve {
    std::vector<double> mean_snr_db;
    std::vector<double> values;
    Provenance provenance = Provenance::closed_form;
    std::vector<double> stderrs;

    void validate() const {
        if (values.size() != mean_snr_db.size())
            throw std::invalid_argument("MetricCurve: length mismatch");
        if (provenance == Provenance::monte_carlo) {
            if (stderrs.size() != values.size())
                throw std::invalid_argument(
                    "MetricCurve: monte-carlo traces need one stderr per value");
        } else if (!stderrs.empty()) {
            throw std::invalid_argument(
                "MetricCurve: stderr only accompanies monte-carlo traces");
        }
    }
};

namespace detail {

using specfun::GHSpec;
using specfun::PowArg;

inline GHSpec cdf_block(double nu) {
    return {{{1.0, 1.0}}, {{nu, 1.0}, {0.0, 1.0}}, 1, 1};
}
inline GHSpec pdf_block(double nu) { return {{}, {{nu, 1.0}}, 1, 0}; }
inline GHSpec survival_block(double nu) {
    return {{{1.0, 1.0}}, {{nu, 1.0}, {0.0, 1.0}}, 2, 0};
}
inline GHSpec asep_block(double nu, double scale) {
    return {{{0.5, scale}, {1.0, 1.0}}, {{nu, 1.0}, {0.0, 1.0}}, 1, 2};
}
inline GHSpec cap_block(double nu, double r) {
    return {{{0.0, 1.0}, {1.0, 1.0}}, {{nu, r}, {0.0, 1.0}, {0.0, 1.0}}, 3, 1};
}
inline std::vector<specfun::OuterFactor> m_kernel(double kx, double ky) {
    return {{0.0, kx, ky, +1}, {0.0, kx, ky, +1}, {1.0, -kx, -ky, +1},
            {1.0, kx, ky, -1}};
}

inline specfun::ContourConfig contour_only(specfun::ContourConfig cfg) {
    cfg.use_fast_path = false;
    return cfg;
}

// Arguments feeding the per-hop special-function blocks.
inline PowArg exp_arg(const EggParams& p, double g) {
    return {std::log(g / (p.lambda * p.mean_snr)), 1.0};
}
inline PowArg gg_arg(const EggParams& p, double g) {
    return {std::log(g / (p.b * p.mean_snr)), p.c};
}
inline PowArg rf_arg(const AlphaMuParams& p, double g) {
    return {(2.0 / p.alpha) * std::log(p.mu) + std::log(g / p.mean_snr),
            0.5 * p.alpha};
}

} // namespace detail

// ---------------------------------------------------------------------------
// Outage probability at threshold gamma_th.

// Hop-failure union of two CDF values: F1 + F2 - F1 F2.
inline double outage_combined(double f_uwo, double f_rf) {
    if (!(f_uwo >= 0.0 && f_uwo <= 1.0) || !(f_rf >= 0.0 && f_rf <= 1.0))
        throw std::domain_error("outage_combined: CDF values must lie in [0,1]");
    return f_uwo + f_rf - f_uwo * f_rf;
}

// Closed form through the per-hop regularized incomplete gammas.
inline double outage_combined(const Scenario& s) {
    s.validate();
    return outage_combined(channels::egg_cdf(s.uwo, s.threshold_snr),
                           channels::alpha_mu_cdf(s.rf, s.threshold_snr));
}

// Same quantity assembled from contour-integrated blocks: the mixture-term
// CDFs as univariate integrals and the cross products as degenerate (empty
// outer) bivariate integrals.  Cross-checks the engine against the closed
// form in every validation run.
inline double outage_exact(const Scenario& s, specfun::ContourConfig uni = {},
                           specfun::BivContourConfig biv = {}) {
    s.validate();
    double gamma_th = s.threshold_snr;
    if (gamma_th == 0.0) return 0.0;
    uni = detail::contour_only(uni);
    const auto& e = s.uwo;
    const auto& r = s.rf;
    double lg_a = std::lgamma(e.a), lg_mu = std::lgamma(r.mu);

    double A = specfun::fox_h(detail::cdf_block(1.0), detail::exp_arg(e, gamma_th), uni);
    double B = specfun::fox_h(detail::cdf_block(e.a), detail::gg_arg(e, gamma_th), uni) /
               std::exp(lg_a);
    double C = specfun::fox_h(detail::cdf_block(r.mu), detail::rf_arg(r, gamma_th), uni) /
               std::exp(lg_mu);

    specfun::BivariateGHSpec ac{{}, detail::cdf_block(1.0), detail::cdf_block(r.mu)};
    double AC = specfun::fox_h_bivariate(ac, detail::exp_arg(e, gamma_th),
                                         detail::rf_arg(r, gamma_th), biv) /
                std::exp(lg_mu);
    specfun::BivariateGHSpec bc{{}, detail::cdf_block(e.a), detail::cdf_block(r.mu)};
    double BC = specfun::fox_h_bivariate(bc, detail::gg_arg(e, gamma_th),
                                         detail::rf_arg(r, gamma_th), biv) /
                std::exp(lg_a + lg_mu);

    return e.w * A + (1.0 - e.w) * B + C - e.w * AC - (1.0 - e.w) * BC;
}

// High-SNR expansion P ~ sum_i K_i * mean_snr^{-e_i} and the derived
// diversity/coding gains.  Requires equal mean SNRs on both hops.
struct AsymptoticBreakdown {
    double term_exponential = 0.0; // exponent 1
    double term_gg = 0.0;          // exponent a*c
    double term_rf = 0.0;          // exponent alpha*mu/2
    double diversity_gain = 0.0;
    double coding_gain = 0.0;
    std::vector<std::string> dominating_terms;
    double value() const { return term_exponential + term_gg + term_rf; }
};

inline AsymptoticBreakdown outage_asymptotic(const Scenario& s,
                                             bool inject_wrong_psi2 = false) {
    s.validate();
    double gamma_th = s.threshold_snr;
    if (!(gamma_th > 0.0))
        throw std::domain_error("outage_asymptotic: threshold must be positive");
    if (!s.iid_mean_snr())
        throw std::invalid_argument(
            "outage_asymptotic: requires equal mean SNRs on both hops");
    const auto& e = s.uwo;
    const auto& r = s.rf;
    double gbar = e.mean_snr;

    double exp_e = 1.0;
    double exp_g = e.a * e.c;
    double exp_r = 0.5 * r.alpha * r.mu;

    double t_exp = e.w * gamma_th / (e.lambda * gbar);
    double t_gg = (1.0 - e.w) *
                  std::exp(exp_g * std::log(gamma_th / (e.b * gbar)) -
                           std::lgamma(e.a + 1.0));
    double ln_psi2 = (inject_wrong_psi2 ? 2.0 : -2.0) / (r.alpha * r.mu) *
                     (std::log(r.mu) + std::lgamma(r.mu));
    double t_rf = std::exp(exp_r * (std::log(gamma_th / gbar) - ln_psi2));

    AsymptoticBreakdown out;
    out.term_exponential = t_exp;
    out.term_gg = t_gg;
    out.term_rf = t_rf;

    double emin = std::min({exp_e, exp_g, exp_r});
    out.diversity_gain = emin;
    struct Term {
        const char* name;
        double exponent, coeff_log;
    };
    double k_exp = std::log(t_exp) + exp_e * std::log(gbar);
    double k_gg = std::log(t_gg) + exp_g * std::log(gbar);
    double k_rf = std::log(t_rf) + exp_r * std::log(gbar);
    const Term terms[] = {{"exponential", exp_e, k_exp},
                          {"gg", exp_g, k_gg},
                          {"rf", exp_r, k_rf}};
    double coeff_sum = 0.0;
    for (auto& t : terms) {
        if (t.exponent <= emin * 1.05) out.dominating_terms.push_back(t.name);
        if (t.exponent <= emin * (1.0 + 1e-9)) coeff_sum += std::exp(t.coeff_log);
    }
    out.coding_gain = std::pow(coeff_sum, -1.0 / emin);
    return out;
}

// ---------------------------------------------------------------------------
// Average symbol error probability.

inline double asep_hop_uwo(const EggParams& p, const ModulationParams& mod,
                           specfun::ContourConfig cfg = {}) {
    p.validate();
    mod.validate();
    double pre = mod.eta / (2.0 * std::sqrt(specfun::kPi));
    double h1 = specfun::fox_h(
        detail::asep_block(1.0, 1.0),
        specfun::PowArg{-std::log(mod.beta * p.lambda * p.mean_snr), 1.0}, cfg);
    double h2 = specfun::fox_h(
        detail::asep_block(p.a, p.c),
        specfun::PowArg{-std::log(mod.beta * p.b * p.mean_snr), p.c}, cfg);
    return pre * (p.w * h1 + (1.0 - p.w) * h2 / std::exp(std::lgamma(p.a)));
}

inline double asep_hop_rf(const AlphaMuParams& p, const ModulationParams& mod,
                          specfun::ContourConfig cfg = {}) {
    p.validate();
    mod.validate();
    double pre = mod.eta / (2.0 * std::sqrt(specfun::kPi) * std::exp(std::lgamma(p.mu)));
    double h = specfun::fox_h(
        detail::asep_block(p.mu, 0.5 * p.alpha),
        specfun::PowArg{(2.0 / p.alpha) * std::log(p.mu) -
                            std::log(mod.beta * p.mean_snr),
                        0.5 * p.alpha},
        cfg);
    return pre * h;
}

// Direct averaging of the conditional error rate over the fading pdf,
// integrated in amplitude (snr = u^2) to tame the erfc kink at the origin.
template <class Pdf>
inline double asep_quadrature(Pdf&& pdf, const ModulationParams& mod,
                              std::vector<double> splits) {
    auto f = [&](double u) {
        return mod.eta * u * std::erfc(std::sqrt(mod.beta) * u) * pdf(u * u);
    };
    std::sort(splits.begin(), splits.end());
    double lo = 0.0, total = 0.0;
    for (double sp : splits) {
        if (sp > lo + 1e-12) {
            total += quad::integrate(f, lo, sp, 1e-11);
            lo = sp;
        }
    }
    total += quad::integrate_to_inf(f, lo, 1e-11);
    return total;
}

inline double asep_hop_uwo_quadrature(const EggParams& p, const ModulationParams& mod) {
    p.validate();
    mod.validate();
    return asep_quadrature([&](double g) { return channels::egg_pdf(p, g); }, mod,
                           {std::sqrt(p.lambda * p.mean_snr),
                            std::sqrt(p.b * p.mean_snr)});
}

inline double asep_hop_rf_quadrature(const AlphaMuParams& p,
                                     const ModulationParams& mod) {
    p.validate();
    mod.validate();
    return asep_quadrature([&](double g) { return channels::alpha_mu_pdf(p, g); },
                           mod, {std::sqrt(p.mean_snr)});
}

inline double asep_rayleigh_bpsk(double mean_snr) {
    return 0.5 * (1.0 - std::sqrt(mean_snr / (1.0 + mean_snr)));
}

// Decode-and-forward composition: an end-to-end symbol error needs exactly
// one of the two hops to fail.
inline double asep_e2e(const Scenario& s, specfun::ContourConfig cfg = {}) {
    s.validate();
    double p1 = asep_hop_uwo(s.uwo, s.modulation, cfg);
    double p2 = asep_hop_rf(s.rf, s.modulation, cfg);
    return p1 + p2 - 2.0 * p1 * p2;
}

// Same composition with the hop product expanded into degenerate bivariate
// integrals, so the distributed form is evaluated on genuinely independent
// contours.
inline double asep_e2e_assembled(const Scenario& s,
                                 specfun::ContourConfig uni = {},
                                 specfun::BivContourConfig biv = {}) {
    s.validate();
    const ModulationParams& mod = s.modulation;
    const auto& e = s.uwo;
    const auto& r = s.rf;
    double pre = mod.eta / (2.0 * std::sqrt(specfun::kPi));
    double lg_a = std::lgamma(e.a), lg_mu = std::lgamma(r.mu);

    specfun::PowArg a1{-std::log(mod.beta * e.lambda * e.mean_snr), 1.0};
    specfun::PowArg a2{-std::log(mod.beta * e.b * e.mean_snr), e.c};
    specfun::PowArg a3{(2.0 / r.alpha) * std::log(r.mu) -
                           std::log(mod.beta * r.mean_snr),
                       0.5 * r.alpha};

    double h1 = specfun::fox_h(detail::asep_block(1.0, 1.0), a1, uni);
    double h2 = specfun::fox_h(detail::asep_block(e.a, e.c), a2, uni);
    double h3 = specfun::fox_h(detail::asep_block(r.mu, 0.5 * r.alpha), a3, uni);

    specfun::BivariateGHSpec x13{{}, detail::asep_block(1.0, 1.0),
                                 detail::asep_block(r.mu, 0.5 * r.alpha)};
    specfun::BivariateGHSpec x23{{}, detail::asep_block(e.a, e.c),
                                 detail::asep_block(r.mu, 0.5 * r.alpha)};
    double h13 = specfun::fox_h_bivariate(x13, a1, a3, biv);
    double h23 = specfun::fox_h_bivariate(x23, a2, a3, biv);

    double p1 = pre * (e.w * h1 + (1.0 - e.w) * h2 / std::exp(lg_a));
    double p2 = pre * h3 / std::exp(lg_mu);
    double cross = pre * pre *
                   (e.w * h13 + (1.0 - e.w) * h23 / std::exp(lg_a)) /
                   std::exp(lg_mu);
    return p1 + p2 - 2.0 * cross;
}

// ---------------------------------------------------------------------------
// End-to-end SNR density min(g1, g2).

inline double e2e_pdf(const Scenario& s, double g) {
    s.validate();
    if (!(g > 0.0)) throw std::domain_error("e2e_pdf: snr must be positive");
    double f1 = channels::egg_pdf(s.uwo, g);
    double f2 = channels::alpha_mu_pdf(s.rf, g);
    double s1 = channels::egg_survival(s.uwo, g);
    double s2 = channels::alpha_mu_survival(s.rf, g);
    return f1 * s2 + f2 * s1;
}

// Every density and survival factor replaced by its contour-integrated
// block (pdf kernels and upper-incomplete complements).
inline double e2e_pdf_h_assembly(const Scenario& s, double g,
                                 specfun::ContourConfig cfg = {}) {
    s.validate();
    if (!(g > 0.0)) throw std::domain_error("e2e_pdf_h_assembly: snr must be positive");
    cfg = detail::contour_only(cfg);
    const auto& e = s.uwo;
    const auto& r = s.rf;
    double lg_a = std::lgamma(e.a), lg_mu = std::lgamma(r.mu);

    specfun::PowArg xe = detail::exp_arg(e, g);
    specfun::PowArg xg = detail::gg_arg(e, g);
    specfun::PowArg xr = detail::rf_arg(r, g);

    double f_exp = specfun::fox_h(detail::pdf_block(0.0), xe, cfg) /
                   (e.lambda * e.mean_snr);
    double f_gg = e.c * specfun::fox_h(detail::pdf_block(e.a), xg, cfg) /
                  (g * std::exp(lg_a));
    double f_rf = 0.5 * r.alpha * specfun::fox_h(detail::pdf_block(r.mu), xr, cfg) /
                  (g * std::exp(lg_mu));

    double s_exp = specfun::fox_h(detail::survival_block(1.0), xe, cfg);
    double s_gg = specfun::fox_h(detail::survival_block(e.a), xg, cfg) /
                  std::exp(lg_a);
    double s_rf = specfun::fox_h(detail::survival_block(r.mu), xr, cfg) /
                  std::exp(lg_mu);

    double f1 = e.w * f_exp + (1.0 - e.w) * f_gg;
    double s1 = e.w * s_exp + (1.0 - e.w) * s_gg;
    return f1 * s_rf + f_rf * s1;
}

// ---------------------------------------------------------------------------
// Ergodic capacity of the weaker hop, bits/s/Hz.

// Closed form; the alpha = 2 restriction is inherited from the analytic
// derivation.  The coupling corrections are bivariate integrals whose outer
// kernel Gamma(u)^2 Gamma(1-u)/Gamma(1+u) the engine collapses to
// pi/(u sin pi u).
inline double capacity_closed_form(const Scenario& s, bool half_duplex_prelog = false,
                                   specfun::ContourConfig uni = {},
                                   specfun::BivContourConfig biv = {}) {
    s.validate();
    const auto& e = s.uwo;
    const auto& r = s.rf;
    if (r.alpha != 2.0)
        throw std::invalid_argument("capacity_closed_form: requires alpha = 2");
    double lg_a = std::lgamma(e.a), lg_mu = std::lgamma(r.mu);

    double x_hat = 1.0 / (e.lambda * e.mean_snr);
    double u_hat = r.mu / r.mean_snr;
    specfun::PowArg v_hat{-std::log(e.b * e.mean_snr), e.c};

    double j2 = specfun::fox_h(detail::cap_block(r.mu, 1.0), u_hat, uni) /
                std::exp(lg_mu);
    double e_exp = specfun::fox_h(detail::cap_block(1.0, 1.0), x_hat, uni);
    double e_gg = specfun::fox_h(detail::cap_block(e.a, 1.0 / e.c),
                                 1.0 / (e.b * e.mean_snr), uni) /
                  std::exp(lg_a);

    auto biv_block = [&](double kx, double ky, const specfun::GHSpec& bx,
                         specfun::PowArg ax, const specfun::GHSpec& by,
                         specfun::PowArg ay) {
        specfun::BivariateGHSpec sp{detail::m_kernel(kx, ky), bx, by};
        return specfun::fox_h_bivariate(sp, ax, ay, biv);
    };
    specfun::PowArg xa{std::log(x_hat), 1.0};
    specfun::PowArg ua{std::log(u_hat), 1.0};
    double b1 = biv_block(1.0, 1.0, detail::cdf_block(1.0), xa,
                          detail::pdf_block(r.mu), ua);
    double b2 = biv_block(1.0, 1.0, detail::cdf_block(r.mu), ua,
                          detail::pdf_block(1.0), xa);
    double b3 = biv_block(e.c, 1.0, detail::cdf_block(e.a), v_hat,
                          detail::pdf_block(r.mu), ua);
    double b4 = biv_block(1.0, e.c, detail::cdf_block(r.mu), ua,
                          detail::pdf_block(e.a), v_hat);

    double nats = j2 + e.w * e_exp + (1.0 - e.w) * e_gg -
                  e.w * (b1 + b2) / std::exp(lg_mu) -
                  (1.0 - e.w) / std::exp(lg_a + lg_mu) * (b3 + e.c * b4);
    double bits = nats / std::log(2.0);
    return half_duplex_prelog ? 0.5 * bits : bits;
}

inline double capacity_quadrature(const Scenario& s, bool half_duplex_prelog = false) {
    s.validate();
    auto f = [&](double g) { return std::log1p(g) * e2e_pdf(s, g); };
    std::vector<double> splits = {s.uwo.lambda * s.uwo.mean_snr,
                                  s.uwo.b * s.uwo.mean_snr, s.rf.mean_snr};
    std::sort(splits.begin(), splits.end());
    double lo = 0.0, nats = 0.0;
    for (double sp : splits) {
        if (sp > lo + 1e-12) {
            nats += quad::integrate(f, lo, sp, 1e-11);
            lo = sp;
        }
    }
    nats += quad::integrate_to_inf(f, lo, 1e-11);
    double bits = nats / std::log(2.0);
    return half_duplex_prelog ? 0.5 * bits : bits;
}

} // namespace uowrelay::metrics
