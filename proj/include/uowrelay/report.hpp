#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "metrics.hpp"

namespace uowrelay::report {

// dB <-> linear conversion lives at the reporting/CLI boundary only; every
// computational API below it speaks linear SNR.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

// A named bundle of traces for one metric/scenario combination, as produced
// by one sweep run.
struct CurveSet {
    std::string metric;   // "outage" | "asep" | "capacity"
    std::string scenario; // catalog row or config-defined name
    std::vector<metrics::MetricCurve> curves;

    void validate() const {
        for (const auto& c : curves) c.validate();
    }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

} // namespace detail

// One row per (snr, curve) pair; stderr column empty for non-Monte-Carlo
// traces.  Column order and header are part of the output contract.
inline std::string to_csv(const CurveSet& set) {
    set.validate();
    std::string out = "snr_db,method,value,stderr\n";
    for (const auto& c : set.curves) {
        for (size_t i = 0; i < c.values.size(); ++i) {
            out += detail::format_double(c.mean_snr_db[i]);
            out += ',';
            out += detail::csv_quote(metrics::provenance_name(c.provenance));
            out += ',';
            out += detail::format_double(c.values[i]);
            out += ',';
            if (!c.stderrs.empty()) out += detail::format_double(c.stderrs[i]);
            out += '\n';
        }
    }
    return out;
}

// Same records as the CSV, one object per trace; stderr appears only on
// Monte-Carlo points.
inline std::string to_json(const CurveSet& set) {
    set.validate();
    nlohmann::ordered_json doc;
    doc["metric"] = set.metric;
    doc["scenario"] = set.scenario;
    doc["curves"] = nlohmann::ordered_json::array();
    for (const auto& c : set.curves) {
        nlohmann::ordered_json jc;
        jc["method"] = metrics::provenance_name(c.provenance);
        jc["points"] = nlohmann::ordered_json::array();
        for (size_t i = 0; i < c.values.size(); ++i) {
            nlohmann::ordered_json pt;
            pt["snr_db"] = c.mean_snr_db[i];
            pt["value"] = c.values[i];
            if (!c.stderrs.empty()) pt["stderr"] = c.stderrs[i];
            jc["points"].push_back(std::move(pt));
        }
        doc["curves"].push_back(std::move(jc));
    }
    return doc.dump(2) + "\n";
}

namespace detail {

struct PlotRange {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    bool ok() const { return lo <= hi; }
};

inline const char* curve_color(size_t i) {
    static const char* palette[] = {"#1f6fb0", "#d1495b", "#2e8b57",
                                    "#c58a00", "#6a4fa3", "#50707c"};
    return palette[i % 6];
}

} // namespace detail

// Minimal static plot: axes, ticks, one polyline per trace, legend.  Outage
// and ASEP get a log ordinate; capacity a linear one.  Points that cannot
// render on the chosen axis (non-finite, or <= 0 on a log axis) are skipped.
inline std::string to_svg(const CurveSet& set) {
    set.validate();
    bool log_y = set.metric != "capacity";
    const double width = 720, height = 480;
    const double ml = 78, mr = 24, mt = 40, mb = 56;

    detail::PlotRange xr, yr;
    for (const auto& c : set.curves) {
        for (size_t i = 0; i < c.values.size(); ++i) {
            double y = c.values[i];
            if (!std::isfinite(y) || (log_y && y <= 0.0)) continue;
            xr.add(c.mean_snr_db[i]);
            yr.add(log_y ? std::log10(y) : y);
        }
    }
    if (!xr.ok()) xr = {0.0, 1.0};
    if (!yr.ok()) yr = {0.0, 1.0};
    if (xr.hi - xr.lo < 1e-9) xr.hi = xr.lo + 1.0;
    if (log_y) {
        yr.lo = std::floor(yr.lo);
        yr.hi = std::ceil(yr.hi);
        if (yr.hi - yr.lo < 1.0) yr.hi = yr.lo + 1.0;
    } else {
        double pad = 0.05 * (yr.hi - yr.lo + 1e-9);
        yr.lo -= pad;
        yr.hi += pad;
    }

    auto sx = [&](double x) {
        return ml + (x - xr.lo) / (xr.hi - xr.lo) * (width - ml - mr);
    };
    auto sy = [&](double y) {
        return height - mb - (y - yr.lo) / (yr.hi - yr.lo) * (height - mt - mb);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width
        << " " << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-size=\"15\">" << detail::xml_escape(set.metric) << " vs mean SNR ("
        << detail::xml_escape(set.scenario) << ")</text>\n";

    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
        << "\" height=\"" << height - mt - mb
        << "\" fill=\"none\" stroke=\"#333\"/>\n";

    int xticks = 5;
    for (int t = 0; t <= xticks; ++t) {
        double x = xr.lo + (xr.hi - xr.lo) * t / xticks;
        double px = sx(x);
        svg << "<line x1=\"" << px << "\" y1=\"" << height - mb << "\" x2=\"" << px
            << "\" y2=\"" << height - mb + 5 << "\" stroke=\"#333\"/>\n";
        char lbl[32];
        std::snprintf(lbl, sizeof(lbl), "%g", x);
        svg << "<text x=\"" << px << "\" y=\"" << height - mb + 20
            << "\" text-anchor=\"middle\">" << lbl << "</text>\n";
    }
    svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 14
        << "\" text-anchor=\"middle\">mean SNR (dB)</text>\n";

    int yticks = log_y ? int(yr.hi - yr.lo) : 5;
    if (yticks < 1 || yticks > 12) yticks = 5;
    for (int t = 0; t <= yticks; ++t) {
        double y = yr.lo + (yr.hi - yr.lo) * t / yticks;
        double py = sy(y);
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << py << "\" x2=\"" << ml
            << "\" y2=\"" << py << "\" stroke=\"#333\"/>\n";
        char lbl[32];
        if (log_y)
            std::snprintf(lbl, sizeof(lbl), "1e%d", int(std::lround(y)));
        else
            std::snprintf(lbl, sizeof(lbl), "%.3g", y);
        svg << "<text x=\"" << ml - 9 << "\" y=\"" << py + 4
            << "\" text-anchor=\"end\">" << lbl << "</text>\n";
    }

    for (size_t k = 0; k < set.curves.size(); ++k) {
        const auto& c = set.curves[k];
        std::ostringstream pts;
        for (size_t i = 0; i < c.values.size(); ++i) {
            double y = c.values[i];
            if (!std::isfinite(y) || (log_y && y <= 0.0)) continue;
            pts << sx(c.mean_snr_db[i]) << ","
                << sy(log_y ? std::log10(y) : y) << " ";
        }
        svg << "<polyline fill=\"none\" stroke=\"" << detail::curve_color(k)
            << "\" stroke-width=\"1.8\" points=\"" << pts.str() << "\"/>\n";
        double ly = mt + 18 + 18.0 * double(k);
        svg << "<line x1=\"" << ml + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + 40
            << "\" y2=\"" << ly << "\" stroke=\"" << detail::curve_color(k)
            << "\" stroke-width=\"1.8\"/>\n";
        svg << "<text x=\"" << ml + 46 << "\" y=\"" << ly + 4 << "\">"
            << metrics::provenance_name(c.provenance) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

// Writes through a temporary name and renames into place, so a failed write
// never leaves a partial file at the destination.
inline void write_text_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::remove(tmp.c_str());
            throw std::runtime_error("write failed: " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move output into place: " + path);
    }
}

} // namespace uowrelay::report
