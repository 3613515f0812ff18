#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dscdma/harness.hpp"

namespace dscdma {

namespace {

double metric_value(const ResultRow& r, const std::string& metric) {
    if (metric == "ber") return r.ber;
    if (metric == "ber_ci95_low") return r.ber_ci95_low;
    if (metric == "ber_ci95_high") return r.ber_ci95_high;
    if (metric == "pee") return r.pee;
    if (metric == "amp_mae") return r.amp_mae;
    if (metric == "delay_error_rate") return r.delay_error_rate;
    std::ostringstream msg;
    msg << "unknown plot metric '" << metric << "'; valid:";
    for (const auto& m : plot_metrics()) {
        msg << ' ' << m;
    }
    throw std::invalid_argument(msg.str());
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

const char* kPalette[] = {"#1f6fb4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::vector<std::string> plot_metrics() {
    return {"ber", "ber_ci95_low", "ber_ci95_high", "pee", "amp_mae", "delay_error_rate"};
}

std::string svg_string(const std::vector<ResultRow>& rows, const std::string& metric) {
    // Validate the metric even for empty input.
    if (!rows.empty()) {
        metric_value(rows.front(), metric);
    } else {
        ResultRow probe;
        metric_value(probe, metric);
    }

    // One curve per (detector, channel mode), points sorted by SNR; values
    // that cannot sit on a log axis are dropped.
    std::map<std::pair<int, int>, std::vector<std::pair<double, double>>> groups;
    for (const auto& r : rows) {
        const double y = metric_value(r, metric);
        if (y > 0.0 && std::isfinite(y)) {
            groups[{static_cast<int>(r.detector), static_cast<int>(r.channel_mode)}]
                .emplace_back(r.snr_db, y);
        }
    }
    for (auto& [key, pts] : groups) {
        std::sort(pts.begin(), pts.end());
    }

    double x_lo = 0.0, x_hi = 1.0, ly_lo = -1.0, ly_hi = 0.0;
    bool have = false;
    for (const auto& [key, pts] : groups) {
        for (const auto& [x, y] : pts) {
            const double ly = std::log10(y);
            if (!have) {
                x_lo = x_hi = x;
                ly_lo = ly_hi = ly;
                have = true;
            } else {
                x_lo = std::min(x_lo, x);
                x_hi = std::max(x_hi, x);
                ly_lo = std::min(ly_lo, ly);
                ly_hi = std::max(ly_hi, ly);
            }
        }
    }
    if (have) {
        if (x_hi == x_lo) {
            x_lo -= 1.0;
            x_hi += 1.0;
        }
        ly_lo = std::floor(ly_lo);
        ly_hi = std::ceil(ly_hi);
        if (ly_hi == ly_lo) {
            ly_hi += 1.0;
        }
    }

    const double width = 640.0, height = 440.0;
    const double ml = 70.0, mr = 160.0, mt = 30.0, mb = 50.0;
    const double pw = width - ml - mr, ph = height - mt - mb;
    const auto map_x = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    const auto map_y = [&](double y) {
        return mt + (ly_hi - std::log10(y)) / (ly_hi - ly_lo) * ph;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#333\"/>\n";

    if (have) {
        for (double d = ly_lo; d <= ly_hi + 0.5; d += 1.0) {
            const double y = mt + (ly_hi - d) / (ly_hi - ly_lo) * ph;
            svg << "<line x1=\"" << ml << "\" y1=\"" << fmt(y) << "\" x2=\"" << ml + pw
                << "\" y2=\"" << fmt(y) << "\" stroke=\"#ddd\"/>\n";
            svg << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(y + 4)
                << "\" text-anchor=\"end\" font-size=\"12\">1e" << static_cast<int>(d)
                << "</text>\n";
        }
        const int n_ticks = 5;
        for (int t = 0; t <= n_ticks; ++t) {
            const double x = x_lo + (x_hi - x_lo) * t / n_ticks;
            const double px = map_x(x);
            svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << mt + ph << "\" x2=\"" << fmt(px)
                << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#333\"/>\n";
            char lbl[32];
            std::snprintf(lbl, sizeof lbl, "%g", x);
            svg << "<text x=\"" << fmt(px) << "\" y=\"" << mt + ph + 20
                << "\" text-anchor=\"middle\" font-size=\"12\">" << lbl << "</text>\n";
        }
    }

    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">SNR (dB)</text>\n";
    svg << "<text x=\"18\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" font-size=\"14\""
        << " transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << metric << "</text>\n";

    int color = 0;
    double legend_y = mt + 14.0;
    for (const auto& [key, pts] : groups) {
        const char* stroke = kPalette[color % 6];
        svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : pts) {
            svg << fmt(map_x(x)) << ',' << fmt(map_y(y)) << ' ';
        }
        svg << "\"/>\n";
        const std::string label = std::string(to_string(static_cast<Detector>(key.first))) +
                                  " (" + to_string(static_cast<ChannelMode>(key.second)) + ")";
        svg << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << fmt(legend_y - 4) << "\" x2=\""
            << ml + pw + 36 << "\" y2=\"" << fmt(legend_y - 4) << "\" stroke=\"" << stroke
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << ml + pw + 42 << "\" y=\"" << fmt(legend_y)
            << "\" font-size=\"12\" class=\"legend\">" << label << "</text>\n";
        legend_y += 18.0;
        ++color;
    }

    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(const std::vector<ResultRow>& rows, const std::string& metric,
               const std::string& path) {
    const std::string svg = svg_string(rows, metric);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << svg;
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace dscdma
