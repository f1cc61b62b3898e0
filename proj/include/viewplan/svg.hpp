#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace viewplan {

/// Minimal SVG line chart: one polyline per named series over a shared x axis.
class LineChart {
public:
    LineChart(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(const std::string& name, const std::vector<double>& values) {
        series_.push_back({name, values});
    }

    std::string render() const {
        constexpr double W = 760, H = 480, ML = 70, MR = 140, MT = 44, MB = 52;
        const double pw = W - ML - MR, ph = H - MT - MB;

        double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
        std::size_t xmax = 1;
        for (const auto& s : series_) {
            xmax = std::max(xmax, s.values.empty() ? std::size_t{1} : s.values.size() - 1);
            for (double v : s.values) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
        if (!std::isfinite(ymin)) { ymin = 0.0; ymax = 1.0; }
        if (ymax - ymin < 1e-12) { ymax = ymin + 1.0; }
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;

        auto xpix = [&](double x) { return ML + pw * (x / static_cast<double>(xmax)); };
        auto ypix = [&](double y) { return MT + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

        std::string out;
        char buf[256];
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"480\" "
               "viewBox=\"0 0 760 480\">\n";
        out += "<rect width=\"760\" height=\"480\" fill=\"white\"/>\n";
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.0f\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
                      "text-anchor=\"middle\">%s</text>\n",
                      ML + pw / 2, title_.c_str());
        out += buf;

        // axes
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                      ML, MT, ML, MT + ph);
        out += buf;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                      ML, MT + ph, ML + pw, MT + ph);
        out += buf;

        for (int t = 0; t <= 4; ++t) {
            const double fy = ymin + (ymax - ymin) * t / 4.0;
            const double fx = xmax * t / 4.0;
            std::snprintf(buf, sizeof(buf),
                          "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" "
                          "text-anchor=\"end\">%.3g</text>\n",
                          ML - 6, ypix(fy) + 4, fy);
            out += buf;
            std::snprintf(buf, sizeof(buf),
                          "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" "
                          "text-anchor=\"middle\">%.3g</text>\n",
                          xpix(fx), MT + ph + 16, fx);
            out += buf;
        }
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                      "text-anchor=\"middle\">%s</text>\n",
                      ML + pw / 2, H - 12, x_label_.c_str());
        out += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"16\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                      "text-anchor=\"middle\" transform=\"rotate(-90 16 %.1f)\">%s</text>\n",
                      MT + ph / 2, MT + ph / 2, y_label_.c_str());
        out += buf;

        static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
        for (std::size_t si = 0; si < series_.size(); ++si) {
            const auto& s = series_[si];
            const char* color = colors[si % 5];
            std::string pts;
            for (std::size_t i = 0; i < s.values.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", xpix(static_cast<double>(i)),
                              ypix(s.values[i]));
                pts += buf;
            }
            out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                   "\" stroke-width=\"1.8\" points=\"" + pts + "\"/>\n";
            std::snprintf(buf, sizeof(buf),
                          "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                          "stroke-width=\"3\"/>\n",
                          W - MR + 12, MT + 14 + 20.0 * si, W - MR + 36, MT + 14 + 20.0 * si, color);
            out += buf;
            std::snprintf(buf, sizeof(buf),
                          "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                          "font-size=\"12\">%s</text>\n",
                          W - MR + 42, MT + 18 + 20.0 * si, s.name.c_str());
            out += buf;
        }
        out += "</svg>\n";
        return out;
    }

private:
    struct Series {
        std::string name;
        std::vector<double> values;
    };
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

}  // namespace viewplan
