#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "metrics.hpp"
#include "montecarlo.hpp"
#include "report.hpp"

namespace uowrelay::sweep {

// One metric traced over a mean-SNR grid for a resolved scenario.  Hop
// parameters arrive with placeholder mean SNRs; the grid overwrites them
// point by point (both hops get the grid value; rf_snr_offset_db shifts the
// RF hop for non-identical links).
struct SweepRequest {
    std::string metric = "outage"; // outage | asep | capacity
    std::string scenario_name = "salty-weak";
    channels::EggParams uwo = channels::scenario_params("salty-weak");
    channels::AlphaMuParams rf = channels::AlphaMuParams::rayleigh(1.0);
    double rf_snr_offset_db = 0.0;
    double threshold_snr_db = 0.0;
    metrics::ModulationParams modulation = metrics::ModulationParams::bpsk();
    double snr_start_db = 0.0;
    double snr_stop_db = 40.0;
    double snr_step_db = 5.0;
    std::vector<std::string> methods = {"closed-form"};
    mc::SimConfig sim;
    bool half_duplex_prelog = false;

    void validate() const {
        if (metric != "outage" && metric != "asep" && metric != "capacity")
            throw std::invalid_argument("sweep: unknown metric " + metric);
        uwo.validate();
        rf.validate();
        modulation.validate();
        if (!(snr_step_db > 0.0) || snr_stop_db < snr_start_db - 1e-12)
            throw std::invalid_argument("sweep: empty or inverted SNR grid");
        if (methods.empty())
            throw std::invalid_argument("sweep: no methods requested");
        for (const auto& m : methods) {
            if (m != "closed-form" && m != "asymptotic" && m != "monte-carlo" &&
                m != "quadrature")
                throw std::invalid_argument("sweep: unknown method " + m);
            if (std::count(methods.begin(), methods.end(), m) != 1)
                throw std::invalid_argument("sweep: duplicate method " + m);
            if (m == "asymptotic" && metric != "outage")
                throw std::invalid_argument(
                    "sweep: asymptotic traces exist only for outage");
            if (m == "asymptotic" && rf_snr_offset_db != 0.0)
                throw std::invalid_argument(
                    "sweep: asymptotic requires identical hop mean SNRs");
            if (m == "closed-form" && metric == "capacity" && rf.alpha != 2.0)
                throw std::invalid_argument(
                    "sweep: capacity closed form requires alpha = 2");
            if (m == "monte-carlo") sim.validate();
        }
    }

    std::vector<double> grid() const {
        std::vector<double> g;
        int n = int((snr_stop_db - snr_start_db) / snr_step_db + 1e-9) + 1;
        for (int i = 0; i < n; ++i) g.push_back(snr_start_db + i * snr_step_db);
        return g;
    }

    metrics::Scenario at(double snr_db) const {
        return {uwo.with_mean_snr(report::db_to_linear(snr_db)),
                rf.with_mean_snr(report::db_to_linear(snr_db + rf_snr_offset_db)),
                report::db_to_linear(threshold_snr_db), modulation};
    }
};

namespace detail {

inline metrics::Provenance provenance_of(const std::string& m) {
    if (m == "closed-form") return metrics::Provenance::closed_form;
    if (m == "asymptotic") return metrics::Provenance::asymptotic;
    if (m == "monte-carlo") return metrics::Provenance::monte_carlo;
    return metrics::Provenance::quadrature;
}

// Deterministic numerical traces must come out monotone in mean SNR; a
// violation beyond rounding noise means a broken evaluation, not a plot to
// ship.  Monte-Carlo traces are exempt (sampling noise).
inline void check_monotone(const std::string& metric,
                           const metrics::MetricCurve& c) {
    if (c.provenance == metrics::Provenance::monte_carlo) return;
    bool increasing = metric == "capacity";
    for (size_t i = 1; i < c.values.size(); ++i) {
        double prev = c.values[i - 1], cur = c.values[i];
        double slack = 1e-9 * std::max(std::fabs(prev), std::fabs(cur));
        bool ok = increasing ? cur >= prev - slack : cur <= prev + slack;
        if (!ok)
            throw std::runtime_error("sweep: non-monotone " + metric +
                                     " trace; evaluation is suspect");
    }
}

} // namespace detail

inline report::CurveSet run_sweep(const SweepRequest& req) {
    req.validate();
    std::vector<double> grid = req.grid();

    report::CurveSet set;
    set.metric = req.metric;
    set.scenario = req.scenario_name;

    for (const auto& method : req.methods) {
        metrics::MetricCurve curve;
        curve.provenance = detail::provenance_of(method);
        curve.mean_snr_db = grid;
        for (size_t i = 0; i < grid.size(); ++i) {
            metrics::Scenario s = req.at(grid[i]);
            if (curve.provenance == metrics::Provenance::monte_carlo) {
                mc::SimConfig cfg = req.sim;
                cfg.root_seed += i;
                cfg.half_duplex_prelog = req.half_duplex_prelog;
                mc::SimEstimate est;
                if (req.metric == "outage") est = mc::simulate_outage(s, cfg);
                else if (req.metric == "asep") est = mc::simulate_asep(s, cfg);
                else est = mc::simulate_capacity(s, cfg);
                curve.values.push_back(est.value);
                curve.stderrs.push_back(est.stderr_);
                continue;
            }
            double v = 0.0;
            if (req.metric == "outage") {
                if (method == "closed-form") v = metrics::outage_combined(s);
                else if (method == "asymptotic") v = metrics::outage_asymptotic(s).value();
                else v = metrics::outage_exact(s);
            } else if (req.metric == "asep") {
                if (method == "closed-form") {
                    v = metrics::asep_e2e(s);
                } else {
                    double p1 = metrics::asep_hop_uwo_quadrature(s.uwo, s.modulation);
                    double p2 = metrics::asep_hop_rf_quadrature(s.rf, s.modulation);
                    v = p1 + p2 - 2.0 * p1 * p2;
                }
            } else {
                if (method == "closed-form")
                    v = metrics::capacity_closed_form(s, req.half_duplex_prelog);
                else
                    v = metrics::capacity_quadrature(s, req.half_duplex_prelog);
            }
            curve.values.push_back(v);
        }
        detail::check_monotone(req.metric, curve);
        set.curves.push_back(std::move(curve));
    }
    return set;
}

} // namespace uowrelay::sweep
