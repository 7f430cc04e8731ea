#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "uowrelay/metrics.hpp"
#include "uowrelay/montecarlo.hpp"

using namespace uowrelay;

namespace {

metrics::Scenario make(std::string_view row, double alpha, double mu, double snr,
                       double threshold = 1.0) {
    return {channels::scenario_params(row, snr),
            channels::AlphaMuParams{alpha, mu, snr}, threshold};
}

} // namespace

TEST_CASE("trial counts round up to whole blocks", "[montecarlo]") {
    auto s = make("salty-weak", 2.0, 1.0, 10.0);
    mc::SimConfig cfg;
    cfg.trials = 1000;
    cfg.batch_size = 1000;
    cfg.root_seed = 5;
    CHECK(mc::simulate_outage(s, cfg).trials == 4096);
    cfg.trials = 4096;
    CHECK(mc::simulate_outage(s, cfg).trials == 4096);
    cfg.trials = 4097;
    CHECK(mc::simulate_outage(s, cfg).trials == 8192);
}

TEST_CASE("estimates are byte-identical across worker counts and batch sizes",
          "[montecarlo]") {
    auto s = make("salty-moderate", 2.0, 2.0, 8.0);
    mc::SimConfig serial;
    serial.trials = 40960;
    serial.root_seed = 99;
    mc::SimConfig pooled = serial;
    pooled.workers = 4;
    pooled.batch_size = 9000;

    auto o1 = mc::simulate_outage(s, serial);
    auto o2 = mc::simulate_outage(s, pooled);
    CHECK(o1.value == o2.value);
    CHECK(o1.stderr_ == o2.stderr_);

    auto a1 = mc::simulate_asep(s, serial);
    auto a2 = mc::simulate_asep(s, pooled);
    CHECK(a1.value == a2.value);
    CHECK(a1.stderr_ == a2.stderr_);

    mc::SimConfig serial_bits = serial, pooled_bits = pooled;
    serial_bits.bit_level = pooled_bits.bit_level = true;
    auto b1 = mc::simulate_asep(s, serial_bits);
    auto b2 = mc::simulate_asep(s, pooled_bits);
    CHECK(b1.value == b2.value);
    CHECK(b1.stderr_ == b2.stderr_);

    auto c1 = mc::simulate_capacity(s, serial);
    auto c2 = mc::simulate_capacity(s, pooled);
    CHECK(c1.value == c2.value);
    CHECK(c1.stderr_ == c2.stderr_);

    auto again = mc::simulate_outage(s, serial);
    CHECK(again.value == o1.value);

    mc::SimConfig reseeded = serial;
    reseeded.root_seed = 100;
    CHECK(mc::simulate_outage(s, reseeded).value != o1.value);
}

TEST_CASE("outage estimates agree with the closed form", "[montecarlo]") {
    mc::SimConfig cfg;
    cfg.trials = 1000000;
    cfg.root_seed = 31;

    auto s1 = make("salty-weak", 2.0, 1.0, 10.0);
    auto e1 = mc::simulate_outage(s1, cfg);
    double p1 = metrics::outage_combined(s1);
    CHECK(std::fabs(e1.value - p1) <= 3.0 * e1.stderr_);
    CHECK(e1.stderr_ ==
          Catch::Approx(std::sqrt(e1.value * (1.0 - e1.value) / double(e1.trials)))
              .epsilon(1e-12));

    cfg.root_seed = 32;
    auto s2 = make("fresh-moderate", 1.0, 1.0, 10.0);
    auto e2 = mc::simulate_outage(s2, cfg);
    double p2 = metrics::outage_combined(s2);
    CHECK(std::fabs(e2.value - p2) <= 3.0 * e2.stderr_);

    auto sat = mc::simulate_outage(make("salty-weak", 2.0, 1.0, 10.0, 1e9), cfg);
    CHECK(sat.value == 1.0);
    CHECK(sat.stderr_ == 0.0);

    auto never = mc::simulate_outage(make("salty-weak", 2.0, 1.0, 10.0, 0.0), cfg);
    CHECK(never.value == 0.0);
}

TEST_CASE("doubling the trial count shrinks stderr like sqrt", "[montecarlo]") {
    auto s = make("salty-weak", 2.0, 1.0, 10.0);
    mc::SimConfig cfg;
    cfg.trials = 262144;
    cfg.root_seed = 77;
    auto half = mc::simulate_outage(s, cfg);
    cfg.trials = 524288;
    auto full = mc::simulate_outage(s, cfg);
    CHECK(std::fabs(full.stderr_ * std::sqrt(2.0) / half.stderr_ - 1.0) < 0.2);
}

TEST_CASE("symbol error estimates agree with the closed form", "[montecarlo]") {
    auto s = make("salty-weak", 2.0, 1.0, 10.0);
    double closed = metrics::asep_e2e(s);

    mc::SimConfig cfg;
    cfg.trials = 1000000;
    cfg.root_seed = 41;
    auto cond = mc::simulate_asep(s, cfg);
    CHECK(std::fabs(cond.value - closed) <= 3.0 * cond.stderr_);

    cfg.bit_level = true;
    auto bits = mc::simulate_asep(s, cfg);
    CHECK(std::fabs(bits.value - closed) <= 3.0 * bits.stderr_);
    CHECK(cond.stderr_ < bits.stderr_);

    mc::SimConfig tiny;
    tiny.trials = 4096;
    tiny.root_seed = 42;
    auto coin = mc::simulate_asep(make("salty-weak", 2.0, 1.0, 1e-9), tiny);
    CHECK(std::fabs(coin.value - 0.5) < 1e-4);
}

TEST_CASE("capacity estimates agree with the closed form", "[montecarlo]") {
    auto s = make("salty-weak", 2.0, 1.0, 10.0);
    double closed = metrics::capacity_closed_form(s);

    mc::SimConfig cfg;
    cfg.trials = 1000000;
    cfg.root_seed = 51;
    auto full = mc::simulate_capacity(s, cfg);
    CHECK(std::fabs(full.value - closed) <= 3.0 * full.stderr_);

    cfg.half_duplex_prelog = true;
    auto half = mc::simulate_capacity(s, cfg);
    CHECK(half.value == 0.5 * full.value);
    CHECK(half.stderr_ == 0.5 * full.stderr_);

    mc::SimConfig quick;
    quick.trials = 100000;
    quick.root_seed = 52;
    auto weak = mc::simulate_capacity(make("salty-weak", 2.0, 1.0, 100.0), quick);
    auto severe = mc::simulate_capacity(make("salty-severe", 2.0, 1.0, 100.0), quick);
    CHECK(severe.value < weak.value);
}

TEST_CASE("invalid simulation configurations are rejected", "[montecarlo]") {
    auto s = make("salty-weak", 2.0, 1.0, 10.0);
    mc::SimConfig cfg;
    cfg.trials = 999;
    cfg.batch_size = 999;
    CHECK_THROWS_AS(mc::simulate_outage(s, cfg), std::invalid_argument);
    cfg.trials = 4096;
    cfg.batch_size = 8192;
    CHECK_THROWS_AS(mc::simulate_capacity(s, cfg), std::invalid_argument);
    cfg.batch_size = 0;
    CHECK_THROWS_AS(mc::simulate_capacity(s, cfg), std::invalid_argument);
    cfg.batch_size = 4096;
    cfg.workers = 0;
    CHECK_THROWS_AS(mc::simulate_capacity(s, cfg), std::invalid_argument);
    cfg.workers = 1;
    auto bad = s;
    bad.threshold_snr = -1.0;
    CHECK_THROWS_AS(mc::simulate_outage(bad, cfg), std::invalid_argument);
}
