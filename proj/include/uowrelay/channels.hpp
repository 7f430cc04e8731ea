#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include "random.hpp"
#include "specfun.hpp"

namespace uowrelay::channels {

// RF hop: alpha-mu power fading.  mean_snr is linear; dB conversion belongs
// to the CLI boundary.
struct AlphaMuParams {
    double alpha = 2.0, mu = 1.0, mean_snr = 1.0;

    void validate() const {
        if (!(alpha > 0.0) || !(mu > 0.0) || !(mean_snr > 0.0))
            throw std::invalid_argument("AlphaMuParams: all fields must be positive");
    }
    AlphaMuParams with_mean_snr(double snr) const { return {alpha, mu, snr}; }

    static AlphaMuParams rayleigh(double mean_snr) { return {2.0, 1.0, mean_snr}; }
    static AlphaMuParams nakagami(double m, double mean_snr) { return {2.0, m, mean_snr}; }
    static AlphaMuParams weibull(double alpha, double mean_snr) { return {alpha, 1.0, mean_snr}; }
    static AlphaMuParams one_sided_gaussian(double mean_snr) { return {2.0, 0.5, mean_snr}; }
    static AlphaMuParams exponential(double mean_snr) { return {1.0, 1.0, mean_snr}; }
};

// UWO hop: exponential + generalized-gamma mixture (heterodyne detection).
struct EggParams {
    double a = 1.0, b = 1.0, c = 1.0, lambda = 1.0, w = 0.5, mean_snr = 1.0;

    void validate() const {
        if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) || !(lambda > 0.0) || !(mean_snr > 0.0))
            throw std::invalid_argument("EggParams: shape/scale fields must be positive");
        if (!(w > 0.0) || !(w < 1.0))
            throw std::invalid_argument("EggParams: w must lie in (0,1)");
    }
    EggParams with_mean_snr(double snr) const { return {a, b, c, lambda, w, snr}; }
};

enum class Water { salty, fresh };
enum class Turbulence { weak, moderate, severe };

struct WaterScenario {
    Water water = Water::salty;
    Turbulence turbulence = Turbulence::weak;
    double bubble_level = 0.0; // liters/min, descriptive metadata only
};

struct CatalogRow {
    const char* name;
    Water water;
    Turbulence turbulence;
    double bubble_level;
    EggParams egg; // mean_snr left at 1; callers rescale
};

inline const std::array<CatalogRow, 6>& scenario_catalog() {
    static const std::array<CatalogRow, 6> rows{{
        {"salty-weak", Water::salty, Turbulence::weak, 2.4,
         {0.7736, 1.1372, 49.1773, 0.4687, 0.1770, 1.0}},
        {"salty-moderate", Water::salty, Turbulence::moderate, 4.7,
         {0.5307, 1.2154, 35.7368, 0.3953, 0.2064, 1.0}},
        {"salty-severe", Water::salty, Turbulence::severe, 16.5,
         {0.0161, 3.2033, 82.1030, 0.1368, 0.4951, 1.0}},
        {"fresh-weak", Water::fresh, Turbulence::weak, 2.4,
         {3.7291, 1.0721, 30.3214, 0.5273, 0.1953, 1.0}},
        {"fresh-moderate", Water::fresh, Turbulence::moderate, 4.7,
         {1.2526, 1.1501, 41.3258, 0.4603, 0.2109, 1.0}},
        {"fresh-severe", Water::fresh, Turbulence::severe, 16.5,
         {0.0075, 2.9963, 216.8356, 0.1602, 0.5117, 1.0}},
    }};
    return rows;
}

inline EggParams scenario_params(const WaterScenario& s, double mean_snr = 1.0) {
    for (auto& row : scenario_catalog())
        if (row.water == s.water && row.turbulence == s.turbulence)
            return row.egg.with_mean_snr(mean_snr);
    throw std::invalid_argument("scenario_params: unknown scenario");
}

inline EggParams scenario_params(std::string_view name, double mean_snr = 1.0) {
    for (auto& row : scenario_catalog())
        if (name == row.name) return row.egg.with_mean_snr(mean_snr);
    throw std::invalid_argument("scenario_params: unknown scenario name: " +
                                std::string(name));
}

inline double alpha_mu_pdf(const AlphaMuParams& p, double snr) {
    p.validate();
    if (snr < 0.0) throw std::domain_error("alpha_mu_pdf: negative snr");
    double h = p.alpha * p.mu / 2.0;
    if (snr == 0.0) {
        if (h > 1.0) return 0.0;
        if (h == 1.0)
            return std::exp(std::log(p.alpha / 2.0) + p.mu * std::log(p.mu) -
                            std::lgamma(p.mu)) /
                   p.mean_snr;
        return std::numeric_limits<double>::infinity();
    }
    double lr = std::log(snr / p.mean_snr);
    double u = p.mu * std::exp(0.5 * p.alpha * lr);
    if (u > 700.0) return 0.0;
    return std::exp(std::log(p.alpha / 2.0) + p.mu * std::log(p.mu) + (h - 1.0) * lr -
                    std::lgamma(p.mu) - u) /
           p.mean_snr;
}

inline double alpha_mu_cdf(const AlphaMuParams& p, double snr) {
    p.validate();
    if (snr < 0.0) throw std::domain_error("alpha_mu_cdf: negative snr");
    if (snr == 0.0) return 0.0;
    double ln_u = std::log(p.mu) + 0.5 * p.alpha * std::log(snr / p.mean_snr);
    return specfun::reg_lower_gamma_ln(p.mu, ln_u);
}

// Same CDF through the Meijer-G block on the generic contour; the pair of
// routes cross-checks the special-function engine in every sweep.
inline double alpha_mu_cdf_meijer(const AlphaMuParams& p, double snr) {
    p.validate();
    if (snr < 0.0) throw std::domain_error("alpha_mu_cdf_meijer: negative snr");
    if (snr == 0.0) return 0.0;
    specfun::GHSpec sp{{{1.0, 1.0}}, {{p.mu, 1.0}, {0.0, 1.0}}, 1, 1};
    specfun::ContourConfig cfg;
    cfg.use_fast_path = false;
    double ln_base = (std::log(p.mu) / (0.5 * p.alpha)) + std::log(snr / p.mean_snr);
    double v = specfun::fox_h(sp, specfun::PowArg{ln_base, 0.5 * p.alpha}, cfg);
    return v / std::exp(std::lgamma(p.mu));
}

inline double egg_pdf(const EggParams& p, double snr) {
    p.validate();
    if (!(snr > 0.0)) throw std::domain_error("egg_pdf: snr must be positive");
    double exp_rate = 1.0 / (p.lambda * p.mean_snr);
    double t1 = p.w * exp_rate * std::exp(-snr * exp_rate);
    double lr = std::log(snr / (p.b * p.mean_snr));
    double ln_v = p.c * lr;
    double t2 = 0.0;
    if (ln_v < 700.0)
        t2 = std::exp(std::log(p.c * (1.0 - p.w)) + p.a * ln_v - std::exp(ln_v) -
                      std::lgamma(p.a)) /
             snr;
    return t1 + t2;
}

inline double egg_cdf(const EggParams& p, double snr) {
    p.validate();
    if (snr < 0.0) throw std::domain_error("egg_cdf: negative snr");
    if (snr == 0.0) return 0.0;
    double ln_v = p.c * std::log(snr / (p.b * p.mean_snr));
    return p.w * (-std::expm1(-snr / (p.lambda * p.mean_snr))) +
           (1.0 - p.w) * specfun::reg_lower_gamma_ln(p.a, ln_v);
}

inline double alpha_mu_survival(const AlphaMuParams& p, double snr) {
    p.validate();
    if (snr < 0.0) throw std::domain_error("alpha_mu_survival: negative snr");
    if (snr == 0.0) return 1.0;
    double ln_u = std::log(p.mu) + 0.5 * p.alpha * std::log(snr / p.mean_snr);
    return specfun::reg_upper_gamma_ln(p.mu, ln_u);
}

inline double egg_survival(const EggParams& p, double snr) {
    p.validate();
    if (snr < 0.0) throw std::domain_error("egg_survival: negative snr");
    if (snr == 0.0) return 1.0;
    double ln_v = p.c * std::log(snr / (p.b * p.mean_snr));
    return p.w * std::exp(-snr / (p.lambda * p.mean_snr)) +
           (1.0 - p.w) * specfun::reg_upper_gamma_ln(p.a, ln_v);
}

inline double egg_cdf_meijer(const EggParams& p, double snr) {
    p.validate();
    if (snr < 0.0) throw std::domain_error("egg_cdf_meijer: negative snr");
    if (snr == 0.0) return 0.0;
    specfun::ContourConfig cfg;
    cfg.use_fast_path = false;
    specfun::GHSpec exp_sp{{{1.0, 1.0}}, {{1.0, 1.0}, {0.0, 1.0}}, 1, 1};
    specfun::GHSpec gg_sp{{{1.0, 1.0}}, {{p.a, 1.0}, {0.0, 1.0}}, 1, 1};
    double t1 = specfun::fox_h(
        exp_sp, specfun::PowArg{std::log(snr / (p.lambda * p.mean_snr)), 1.0}, cfg);
    double t2 = specfun::fox_h(
        gg_sp, specfun::PowArg{std::log(snr / (p.b * p.mean_snr)), p.c}, cfg);
    return p.w * t1 + (1.0 - p.w) * t2 / std::exp(std::lgamma(p.a));
}

inline double alpha_mu_sample(const AlphaMuParams& p, rng::Xoshiro256pp& g) {
    double ln_g = g.gamma_log(p.mu);
    return p.mean_snr * std::exp((2.0 / p.alpha) * (ln_g - std::log(p.mu)));
}

inline double egg_sample(const EggParams& p, rng::Xoshiro256pp& g) {
    if (g.uniform() < p.w) return p.lambda * p.mean_snr * g.exponential();
    double ln_gg = g.gamma_log(p.a);
    return p.b * p.mean_snr * std::exp(ln_gg / p.c);
}

} // namespace uowrelay::channels
