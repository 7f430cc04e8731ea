#include <uowrelay/channels.hpp>
#include <uowrelay/metrics.hpp>
#include <uowrelay/montecarlo.hpp>
#include <uowrelay/report.hpp>
#include <uowrelay/sweep.hpp>
#include <uowrelay/validate.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace uowrelay;

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct RfChoice {
    std::string label;
    channels::AlphaMuParams params{2.0, 1.0, 1.0};
};

RfChoice parse_rf(const std::string& spec) {
    auto parts = split_list(spec, ':');
    if (parts.empty()) throw std::invalid_argument("empty RF preset");
    auto num = [&](size_t i) { return std::stod(parts.at(i)); };
    RfChoice r;
    const std::string& name = parts[0];
    if (name == "rayleigh" && parts.size() == 1)
        r.params = channels::AlphaMuParams::rayleigh(1.0);
    else if (name == "nakagami" && parts.size() == 2)
        r.params = channels::AlphaMuParams::nakagami(num(1), 1.0);
    else if (name == "weibull" && parts.size() == 2)
        r.params = channels::AlphaMuParams::weibull(num(1), 1.0);
    else if (name == "one-sided-gaussian" && parts.size() == 1)
        r.params = channels::AlphaMuParams::one_sided_gaussian(1.0);
    else if (name == "exponential" && parts.size() == 1)
        r.params = channels::AlphaMuParams::exponential(1.0);
    else if (name == "alpha-mu" && parts.size() == 3)
        r.params = channels::AlphaMuParams{num(1), num(2), 1.0};
    else
        throw std::invalid_argument(
            "unknown RF preset '" + spec +
            "' (expected rayleigh, nakagami:m, weibull:alpha, "
            "one-sided-gaussian, exponential, or alpha-mu:alpha:mu)");
    r.label = spec;
    for (auto& ch : r.label)
        if (ch == ':') ch = '-';
    return r;
}

const std::vector<std::string>& catalog_rows() {
    static const std::vector<std::string> rows = {
        "salty-weak",  "salty-moderate", "salty-severe",
        "fresh-weak", "fresh-moderate", "fresh-severe"};
    return rows;
}

double bubble_rate(const std::string& name) {
    if (name.find("weak") != std::string::npos) return 2.4;
    if (name.find("moderate") != std::string::npos) return 4.7;
    return 16.5;
}

struct PresetDef {
    std::string metric = "outage";
    std::vector<std::string> scenarios = {"salty-weak"};
    std::vector<std::string> rf = {"rayleigh"};
    double start = 0.0, stop = 40.0, step = 5.0;
    std::vector<std::string> methods = {"closed-form"};
    long long trials = 1000000;
    std::uint64_t seed = 1;
};

std::map<std::string, PresetDef> builtin_presets() {
    std::map<std::string, PresetDef> p;
    p["fig2-style"] = {"outage",
                       {"salty-weak"},
                       {"rayleigh", "nakagami:2", "weibull:3.5", "one-sided-gaussian"},
                       0, 40, 5,
                       {"closed-form", "asymptotic"},
                       1000000, 1};
    p["fig3-style"] = {"outage",
                       {"salty-severe", "fresh-severe"},
                       {"rayleigh", "nakagami:2"},
                       0, 40, 5,
                       {"closed-form", "asymptotic"},
                       1000000, 1};
    p["fig4-style"] = {"outage",
                       catalog_rows(),
                       {"rayleigh"},
                       0, 40, 5,
                       {"closed-form", "monte-carlo"},
                       1000000, 1};
    p["fig5-style"] = {"asep",
                       {"salty-weak", "salty-moderate", "salty-severe"},
                       {"rayleigh"},
                       0, 30, 5,
                       {"closed-form", "monte-carlo"},
                       1000000, 1};
    p["fig6-style"] = {"capacity",
                       {"salty-weak", "salty-moderate", "salty-severe"},
                       {"rayleigh"},
                       0, 30, 5,
                       {"closed-form", "quadrature"},
                       1000000, 1};
    return p;
}

struct CliConfig {
    std::map<std::string, channels::EggParams> scenarios;
    std::map<std::string, PresetDef> presets;
    std::string out_dir;
};

PresetDef preset_from_json(const nlohmann::json& j) {
    PresetDef p;
    if (j.contains("metric")) p.metric = j.at("metric").get<std::string>();
    if (j.contains("scenarios"))
        p.scenarios = j.at("scenarios").get<std::vector<std::string>>();
    if (j.contains("rf")) p.rf = j.at("rf").get<std::vector<std::string>>();
    if (j.contains("snr_start_db")) p.start = j.at("snr_start_db").get<double>();
    if (j.contains("snr_stop_db")) p.stop = j.at("snr_stop_db").get<double>();
    if (j.contains("snr_step_db")) p.step = j.at("snr_step_db").get<double>();
    if (j.contains("methods"))
        p.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("trials")) p.trials = j.at("trials").get<long long>();
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

CliConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    CliConfig c;
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("scenarios"))
        for (auto& [name, sj] : j.at("scenarios").items()) {
            channels::EggParams p;
            p.a = sj.at("a").get<double>();
            p.b = sj.at("b").get<double>();
            p.c = sj.at("c").get<double>();
            p.lambda = sj.at("lambda").get<double>();
            p.w = sj.at("w").get<double>();
            p.validate();
            c.scenarios[name] = p;
        }
    if (j.contains("presets"))
        for (auto& [name, pj] : j.at("presets").items())
            c.presets[name] = preset_from_json(pj);
    return c;
}

int cmd_scenarios(const std::string& water) {
    std::printf("%-16s %-6s %12s %9s %9s %10s %8s %8s\n", "name", "water",
                "bubbles_lpm", "a", "b", "c", "lambda", "w");
    for (const auto& name : catalog_rows()) {
        std::string w = name.substr(0, name.find('-'));
        if (!water.empty() && w != water) continue;
        auto p = channels::scenario_params(name);
        std::printf("%-16s %-6s %12.1f %9.4f %9.4f %10.4f %8.4f %8.4f\n",
                    name.c_str(), w.c_str(), bubble_rate(name), p.a, p.b, p.c,
                    p.lambda, p.w);
    }
    return 0;
}

struct SweepArgs {
    std::string config_path, preset;
    std::string metric = "outage";
    std::string scenario = "salty-weak";
    std::string rf = "rayleigh";
    double start = 0.0, stop = 40.0, step = 5.0;
    double rf_offset_db = 0.0, threshold_db = 0.0;
    std::string methods = "closed-form";
    long long trials = 1000000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string formats = "csv";
    std::string out_dir, base_name;
    bool half_prelog = false;
    // which of the overridable flags the user actually passed
    bool got_metric = false, got_scenario = false, got_rf = false;
    bool got_start = false, got_stop = false, got_step = false;
    bool got_methods = false, got_trials = false, got_seed = false;
};

int cmd_sweep(const SweepArgs& a) {
    CliConfig cfg;
    if (!a.config_path.empty()) cfg = load_config(a.config_path);

    PresetDef eff;
    if (!a.preset.empty()) {
        auto builtins = builtin_presets();
        auto it = cfg.presets.find(a.preset);
        if (it != cfg.presets.end()) {
            eff = it->second;
        } else {
            auto bit = builtins.find(a.preset);
            if (bit == builtins.end())
                throw std::invalid_argument("unknown preset: " + a.preset);
            eff = bit->second;
        }
    } else {
        eff.metric = a.metric;
        eff.scenarios = {a.scenario};
        eff.rf = {a.rf};
        eff.start = a.start;
        eff.stop = a.stop;
        eff.step = a.step;
        eff.methods = split_list(a.methods, ',');
        eff.trials = a.trials;
        eff.seed = a.seed;
    }
    if (a.got_metric) eff.metric = a.metric;
    if (a.got_scenario) eff.scenarios = {a.scenario};
    if (a.got_rf) eff.rf = {a.rf};
    if (a.got_start) eff.start = a.start;
    if (a.got_stop) eff.stop = a.stop;
    if (a.got_step) eff.step = a.step;
    if (a.got_methods) eff.methods = split_list(a.methods, ',');
    if (a.got_trials) eff.trials = a.trials;
    if (a.got_seed) eff.seed = a.seed;

    auto formats = split_list(a.formats, ',');
    if (formats.empty()) throw std::invalid_argument("no output formats requested");
    for (const auto& f : formats)
        if (f != "csv" && f != "json" && f != "svg")
            throw std::invalid_argument("unknown output format: " + f);

    std::string out_dir = !a.out_dir.empty() ? a.out_dir : cfg.out_dir;
    if (out_dir.empty())
        if (const char* env = std::getenv("UOWRELAY_OUT_DIR")) out_dir = env;
    if (out_dir.empty()) out_dir = ".";

    auto resolve_scenario = [&](const std::string& name) {
        auto it = cfg.scenarios.find(name);
        if (it != cfg.scenarios.end()) return it->second;
        return channels::scenario_params(name);
    };

    // Validate and compute every requested curve set before touching the
    // filesystem, so a bad request can never leave partial output behind.
    struct Job {
        sweep::SweepRequest req;
        std::string file_base;
    };
    std::vector<Job> jobs;
    bool multi = eff.scenarios.size() * eff.rf.size() > 1;
    for (const auto& scen : eff.scenarios)
        for (const auto& rf_spec : eff.rf) {
            auto rf = parse_rf(rf_spec);
            Job job;
            job.req.metric = eff.metric;
            job.req.scenario_name = scen + " / " + rf.label;
            job.req.uwo = resolve_scenario(scen);
            job.req.rf = rf.params;
            job.req.rf_snr_offset_db = a.rf_offset_db;
            job.req.threshold_snr_db = a.threshold_db;
            job.req.snr_start_db = eff.start;
            job.req.snr_stop_db = eff.stop;
            job.req.snr_step_db = eff.step;
            job.req.methods = eff.methods;
            job.req.sim.trials = eff.trials;
            job.req.sim.root_seed = eff.seed;
            job.req.sim.workers = a.workers;
            job.req.half_duplex_prelog = a.half_prelog;
            job.req.validate();

            std::string base = a.base_name;
            if (base.empty())
                base = !a.preset.empty() ? a.preset : eff.metric;
            if (multi || a.base_name.empty())
                base += "-" + scen + "-" + rf.label;
            job.file_base = base;
            jobs.push_back(std::move(job));
        }

    std::vector<report::CurveSet> sets;
    sets.reserve(jobs.size());
    for (const auto& job : jobs) sets.push_back(sweep::run_sweep(job.req));

    std::filesystem::create_directories(out_dir);
    for (size_t i = 0; i < jobs.size(); ++i)
        for (const auto& f : formats) {
            std::string content;
            if (f == "csv")
                content = report::to_csv(sets[i]);
            else if (f == "json")
                content = report::to_json(sets[i]);
            else
                content = report::to_svg(sets[i]);
            auto path =
                (std::filesystem::path(out_dir) / (jobs[i].file_base + "." + f))
                    .string();
            report::write_text_file(path, content);
            std::printf("wrote %s\n", path.c_str());
        }
    return 0;
}

int cmd_validate(bool quick, bool inject) {
    validate::ValidationOptions opt;
    opt.quick = quick;
    opt.inject_wrong_psi2 = inject;
    auto results = validate::run_validation(opt, &std::cerr);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] %d %s: %s\n", r.passed ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str());
        all = all && r.passed;
    }
    std::fflush(stdout);
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"performance toolkit for a dual-hop underwater-optical to RF "
                 "decode-and-forward relay link"};
    app.require_subcommand(1);

    auto* sc_scen = app.add_subcommand("scenarios", "list the water/turbulence catalog");
    std::string water;
    sc_scen->add_option("--water", water, "filter rows by water type (salty|fresh)");

    SweepArgs sa;
    auto* sc_sweep = app.add_subcommand(
        "sweep", "evaluate a metric over a mean-SNR grid and write curve files");
    sc_sweep->add_option("--config", sa.config_path,
                         "JSON config with named scenarios and presets");
    sc_sweep->add_option("--preset", sa.preset,
                         "named sweep preset (built in: fig2-style .. fig6-style)");
    auto* o_metric = sc_sweep->add_option("--metric", sa.metric,
                                          "outage | asep | capacity");
    auto* o_scen = sc_sweep->add_option("--scenario", sa.scenario,
                                        "catalog row or config scenario name");
    auto* o_rf = sc_sweep->add_option(
        "--rf", sa.rf,
        "RF fading preset (rayleigh, nakagami:m, weibull:alpha, "
        "one-sided-gaussian, exponential, alpha-mu:alpha:mu)");
    auto* o_start = sc_sweep->add_option("--start", sa.start, "grid start, dB");
    auto* o_stop = sc_sweep->add_option("--stop", sa.stop, "grid stop, dB");
    auto* o_step = sc_sweep->add_option("--step", sa.step, "grid step, dB");
    sc_sweep->add_option("--rf-offset", sa.rf_offset_db,
                         "RF-hop mean SNR offset relative to the optical hop, dB");
    sc_sweep->add_option("--threshold", sa.threshold_db, "outage threshold, dB");
    auto* o_methods = sc_sweep->add_option(
        "--methods", sa.methods,
        "comma list of closed-form,asymptotic,monte-carlo,quadrature");
    auto* o_trials = sc_sweep->add_option("--trials", sa.trials,
                                          "Monte-Carlo trials per grid point");
    auto* o_seed = sc_sweep->add_option("--seed", sa.seed, "Monte-Carlo root seed");
    sc_sweep->add_option("--workers", sa.workers, "simulation worker threads");
    sc_sweep->add_option("--formats", sa.formats, "comma list of csv,json,svg");
    sc_sweep->add_option("--out", sa.out_dir,
                         "output directory (default: $UOWRELAY_OUT_DIR or .)");
    sc_sweep->add_option("--name", sa.base_name, "output file base name");
    sc_sweep->add_flag("--half-duplex-prelog", sa.half_prelog,
                       "apply the 1/2 relaying prelog to capacity");

    auto* sc_val = app.add_subcommand("validate", "run the oracle cross-check suite");
    bool quick = false, inject = false;
    sc_val->add_flag("--quick", quick, "reduced grids and trial counts, < 60 s");
    sc_val->add_flag("--inject-wrong-psi2", inject)->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sc_scen) return cmd_scenarios(water);
        if (*sc_sweep) {
            sa.got_metric = o_metric->count() > 0;
            sa.got_scenario = o_scen->count() > 0;
            sa.got_rf = o_rf->count() > 0;
            sa.got_start = o_start->count() > 0;
            sa.got_stop = o_stop->count() > 0;
            sa.got_step = o_step->count() > 0;
            sa.got_methods = o_methods->count() > 0;
            sa.got_trials = o_trials->count() > 0;
            sa.got_seed = o_seed->count() > 0;
            return cmd_sweep(sa);
        }
        if (*sc_val) return cmd_validate(quick, inject);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
