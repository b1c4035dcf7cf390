#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqabench {

/// One plotted series: a median line with an optional p25..p75 band.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> y_low;   // empty when there is no band
    std::vector<double> y_high;
};

struct PlotOptions {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "value";
    int width = 760;
    int height = 520;
    std::optional<bool> log_x;  // unset: log when positive and spanning >= 2 decades
    std::optional<bool> log_y;
};

namespace detail {

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                           "#9467bd", "#ff7f0e", "#8c564b",
                                           "#17becf", "#7f7f7f"};

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;
    double pix_lo = 0.0;
    double pix_hi = 1.0;

    double to_pixel(double v) const {
        const double a = log ? std::log10(v) : v;
        const double lo_t = log ? std::log10(lo) : lo;
        const double hi_t = log ? std::log10(hi) : hi;
        const double t = (a - lo_t) / (hi_t - lo_t);
        return pix_lo + t * (pix_hi - pix_lo);
    }

    bool contains(double v) const {
        if (!std::isfinite(v)) return false;
        return !log || v > 0.0;
    }
};

inline std::vector<double> linear_ticks(double lo, double hi) {
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    return ticks;
}

inline std::vector<double> log_ticks(double lo, double hi) {
    std::vector<double> ticks;
    const int klo = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
    const int khi = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
    const int stride = (khi - klo) > 8 ? 2 : 1;
    for (int k = klo; k <= khi; k += stride) ticks.push_back(std::pow(10.0, k));
    if (ticks.empty()) ticks.push_back(lo);
    return ticks;
}

}  // namespace detail

/// Renders series as an SVG line chart: median polylines with quartile bands,
/// legend, and linear or log axes. Output is a pure function of the inputs.
inline std::string render_line_chart(std::span<const PlotSeries> series,
                                     const PlotOptions& options) {
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("render_line_chart: x/y length mismatch");
        if (!s.y_low.empty() &&
            (s.y_low.size() != s.x.size() || s.y_high.size() != s.x.size()))
            throw std::invalid_argument("render_line_chart: band length mismatch");
    }

    // Gather finite values to pick ranges and the log/linear choice.
    std::vector<double> xs, ys;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xs.push_back(s.x[i]);
            ys.push_back(s.y[i]);
            if (!s.y_low.empty() && std::isfinite(s.y_low[i]) &&
                std::isfinite(s.y_high[i])) {
                ys.push_back(s.y_low[i]);
                ys.push_back(s.y_high[i]);
            }
        }
    }
    if (xs.empty())
        throw std::invalid_argument("render_line_chart: no finite data points");

    const auto decide_log = [](const std::vector<double>& v,
                               std::optional<bool> forced) {
        if (forced) return *forced;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (const double x : v) {
            if (x <= 0.0) return false;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return hi / lo >= 100.0;
    };
    const bool log_x = decide_log(xs, options.log_x);
    const bool log_y = decide_log(ys, options.log_y);

    const auto range_of = [](const std::vector<double>& v, bool log) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const double x : v) {
            if (log && x <= 0.0) continue;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        if (!(lo <= hi))
            throw std::invalid_argument("render_line_chart: no plottable points");
        if (lo == hi) {
            if (log) {
                lo /= 2.0;
                hi *= 2.0;
            } else {
                lo -= 0.5;
                hi += 0.5;
            }
        } else if (log) {
            const double pad = std::pow(hi / lo, 0.04);
            lo /= pad;
            hi *= pad;
        } else {
            const double pad = 0.04 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
        return std::pair{lo, hi};
    };

    const double margin_l = 72, margin_r = 18, margin_t = 42, margin_b = 54;
    detail::Axis ax, ay;
    ax.log = log_x;
    std::tie(ax.lo, ax.hi) = range_of(xs, log_x);
    ax.pix_lo = margin_l;
    ax.pix_hi = options.width - margin_r;
    ay.log = log_y;
    std::tie(ay.lo, ay.hi) = range_of(ys, log_y);
    ay.pix_lo = options.height - margin_b;  // y grows downward in SVG
    ay.pix_hi = margin_t;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(options.width) + "\" height=\"" +
           std::to_string(options.height) + "\" viewBox=\"0 0 " +
           std::to_string(options.width) + " " + std::to_string(options.height) +
           "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const auto px = [](double v) { return detail::fmt("%.2f", v); };

    // Grid and tick labels.
    const auto x_ticks = log_x ? detail::log_ticks(ax.lo, ax.hi)
                               : detail::linear_ticks(ax.lo, ax.hi);
    const auto y_ticks = log_y ? detail::log_ticks(ay.lo, ay.hi)
                               : detail::linear_ticks(ay.lo, ay.hi);
    for (const double t : x_ticks) {
        const double x = ax.to_pixel(t);
        svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(margin_t) + "\" x2=\"" +
               px(x) + "\" y2=\"" + px(options.height - margin_b) +
               "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + px(x) + "\" y=\"" +
               px(options.height - margin_b + 18) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               detail::fmt("%.4g", t) + "</text>\n";
    }
    for (const double t : y_ticks) {
        const double y = ay.to_pixel(t);
        svg += "<line x1=\"" + px(margin_l) + "\" y1=\"" + px(y) + "\" x2=\"" +
               px(options.width - margin_r) + "\" y2=\"" + px(y) +
               "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + px(margin_l - 6) + "\" y=\"" + px(y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
               detail::fmt("%.4g", t) + "</text>\n";
    }

    // Axes frame.
    svg += "<rect x=\"" + px(margin_l) + "\" y=\"" + px(margin_t) + "\" width=\"" +
           px(options.width - margin_l - margin_r) + "\" height=\"" +
           px(options.height - margin_t - margin_b) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // Series bands first, lines on top.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color =
            detail::kPalette[si % (sizeof detail::kPalette / sizeof *detail::kPalette)];
        if (s.y_low.empty()) continue;
        std::string upper, lower;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!ax.contains(s.x[i]) || !ay.contains(s.y_low[i]) ||
                !ay.contains(s.y_high[i]))
                continue;
            upper += px(ax.to_pixel(s.x[i])) + "," + px(ay.to_pixel(s.y_high[i])) + " ";
            lower = px(ax.to_pixel(s.x[i])) + "," + px(ay.to_pixel(s.y_low[i])) + " " + lower;
        }
        if (upper.empty()) continue;
        svg += "<polygon points=\"" + upper + lower + "\" fill=\"" + color +
               "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
    }
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color =
            detail::kPalette[si % (sizeof detail::kPalette / sizeof *detail::kPalette)];
        std::string points;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!ax.contains(s.x[i]) || !ay.contains(s.y[i])) continue;
            points += px(ax.to_pixel(s.x[i])) + "," + px(ay.to_pixel(s.y[i])) + " ";
        }
        if (points.empty()) continue;
        svg += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.6\"/>\n";
    }

    // Legend, title, axis labels.
    double legend_y = margin_t + 14;
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color =
            detail::kPalette[si % (sizeof detail::kPalette / sizeof *detail::kPalette)];
        const double lx = options.width - margin_r - 210;
        svg += "<line x1=\"" + px(lx) + "\" y1=\"" + px(legend_y - 4) + "\" x2=\"" +
               px(lx + 22) + "\" y2=\"" + px(legend_y - 4) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + px(lx + 28) + "\" y=\"" + px(legend_y) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::xml_escape(series[si].label) + "</text>\n";
        legend_y += 15;
    }
    svg += "<text x=\"" + px(options.width / 2.0) + "\" y=\"" + px(24.0) +
           "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
           detail::xml_escape(options.title) + "</text>\n";
    svg += "<text x=\"" + px((margin_l + options.width - margin_r) / 2.0) + "\" y=\"" +
           px(options.height - 14.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
           detail::xml_escape(options.x_label) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + px((margin_t + options.height - margin_b) / 2.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 16 " +
           px((margin_t + options.height - margin_b) / 2.0) + ")\">" +
           detail::xml_escape(options.y_label) + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace vqabench
