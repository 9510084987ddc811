#include "armsim/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace armsim {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

std::string num(double v, int digits = 3) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool valid() const { return lo <= hi; }
    void pad() {
        if (hi == lo) {
            const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.05;
            lo -= d;
            hi += d;
        }
    }
    double map(double v, double pixels) const { return (v - lo) / (hi - lo) * pixels; }
};

std::string header(const std::string& title) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth, 0) + "\" height=\"" + num(kHeight, 0) +
         "\" viewBox=\"0 0 " + num(kWidth, 0) + " " + num(kHeight, 0) + "\">\n";
    s += "<style>text{font-family:sans-serif;font-size:12px}.axis{stroke:#000;fill:none}"
         "polyline{fill:none;stroke-width:1.5}.series-0{stroke:#1f4e9c}.series-1{stroke:#b22222}"
         ".branch-g{stroke:#b22222}.branch-e{stroke:#1f4e9c}.jc{stroke:#444;stroke-dasharray:6 4}"
         ".ajc{stroke:#1f4e9c}</style>\n";
    if (!title.empty()) {
        s += "<text x=\"" + num(kWidth / 2, 1) + "\" y=\"18\" text-anchor=\"middle\">" + escape(title) + "</text>\n";
    }
    return s;
}

std::string axes(const Range& xr, const Range& yr, const std::string& xlabel, const std::string& ylabel) {
    std::string s;
    // Frame as a path so that <rect> elements are exactly the heatmap cells.
    s += "<path class=\"axis\" d=\"M" + num(kLeft, 1) + " " + num(kTop, 1) + " h" + num(kPlotW, 1) + " v" +
         num(kPlotH, 1) + " h-" + num(kPlotW, 1) + " Z\"/>\n";
    const double ybase = kTop + kPlotH;
    s += "<text x=\"" + num(kLeft, 1) + "\" y=\"" + num(ybase + 16, 1) + "\" text-anchor=\"start\">" +
         num(xr.lo, 4) + "</text>\n";
    s += "<text x=\"" + num(kLeft + kPlotW, 1) + "\" y=\"" + num(ybase + 16, 1) + "\" text-anchor=\"end\">" +
         num(xr.hi, 4) + "</text>\n";
    s += "<text x=\"" + num(kLeft + kPlotW / 2, 1) + "\" y=\"" + num(ybase + 36, 1) + "\" text-anchor=\"middle\">" +
         escape(xlabel) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 6, 1) + "\" y=\"" + num(ybase, 1) + "\" text-anchor=\"end\">" + num(yr.lo, 4) +
         "</text>\n";
    s += "<text x=\"" + num(kLeft - 6, 1) + "\" y=\"" + num(kTop + 10, 1) + "\" text-anchor=\"end\">" +
         num(yr.hi, 4) + "</text>\n";
    s += "<text transform=\"translate(16," + num(kTop + kPlotH / 2, 1) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(ylabel) + "</text>\n";
    return s;
}

std::string axis_name(SecondAxis axis) {
    switch (axis) {
        case SecondAxis::qubit_freq: return "qubit frequency (GHz)";
        case SecondAxis::theta: return "mixing angle (rad)";
        case SecondAxis::none: break;
    }
    return "";
}

// Polyline segments; NaN values split the curve.
std::string polylines(const std::string& cls, std::span<const double> x, std::span<const double> y, const Range& xr,
                      const Range& yr) {
    std::string out;
    std::string points;
    auto flush = [&] {
        if (!points.empty()) out += "<polyline class=\"" + cls + "\" points=\"" + points + "\"/>\n";
        points.clear();
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            flush();
            continue;
        }
        if (!points.empty()) points += ' ';
        points += num(kLeft + xr.map(x[i], kPlotW), 2) + "," + num(kTop + kPlotH - yr.map(y[i], kPlotH), 2);
    }
    flush();
    return out;
}

}  // namespace

std::string emit_svg(const SpectrumResult& result, SvgStyle style, bool normalized) {
    if (result.points.empty() || result.probe_grid.empty()) throw std::invalid_argument("emit_svg: empty result");
    const std::size_t probes = result.probe_grid.size();
    const std::size_t slices = result.slice_count();

    std::vector<double> value(result.points.size());
    double global = 0.0;
    for (const auto& p : result.points) global = std::max(global, std::abs(p.amplitude));
    for (std::size_t k = 0; k < value.size(); ++k) {
        value[k] = normalized ? result.points[k].transmission
                              : (global > 0.0 ? std::abs(result.points[k].amplitude) / global : 0.0);
    }

    Range xr;
    for (const double x : result.probe_grid) xr.include(x);
    xr.pad();

    if (style == SvgStyle::heatmap) {
        if (result.axis == SecondAxis::none) {
            throw std::invalid_argument("emit_svg: heatmap needs a second sweep axis");
        }
        Range yr;
        for (const double y : result.axis_values) yr.include(y);
        yr.pad();
        std::string s = header("resonator transmission");
        const double cw = kPlotW / static_cast<double>(probes);
        const double ch = kPlotH / static_cast<double>(slices);
        for (std::size_t i = 0; i < slices; ++i) {
            for (std::size_t j = 0; j < probes; ++j) {
                const double t = std::clamp(value[i * probes + j], 0.0, 1.0);
                const int level = static_cast<int>(std::lround(255.0 * (1.0 - t)));
                const std::string gray = std::to_string(level);
                s += "<rect x=\"" + num(kLeft + cw * j, 2) + "\" y=\"" + num(kTop + kPlotH - ch * (i + 1), 2) +
                     "\" width=\"" + num(cw, 2) + "\" height=\"" + num(ch, 2) + "\" fill=\"rgb(" + gray + "," +
                     gray + "," + gray + ")\"/>\n";
            }
        }
        s += axes(xr, yr, "probe frequency (GHz)", axis_name(result.axis));
        return s + "</svg>\n";
    }

    Range yr{0.0, 1.0};
    std::string s = header("resonator transmission");
    for (std::size_t i = 0; i < slices; ++i) {
        const std::span<const double> y(value.data() + i * probes, probes);
        s += polylines("series-" + std::to_string(i % 2), result.probe_grid, y, xr, yr);
    }
    s += axes(xr, yr, "probe frequency (GHz)", normalized ? "normalized transmission" : "|A| / max |A|");
    return s + "</svg>\n";
}

std::string emit_line_plot(std::span<const Series> series, const PlotLabels& labels) {
    Range xr, yr;
    for (const auto& ser : series) {
        if (ser.x.size() != ser.y.size()) throw std::invalid_argument("emit_line_plot: x and y differ in length");
        for (std::size_t i = 0; i < ser.x.size(); ++i) {
            if (std::isfinite(ser.x[i]) && std::isfinite(ser.y[i])) {
                xr.include(ser.x[i]);
                yr.include(ser.y[i]);
            }
        }
    }
    if (!xr.valid()) throw std::invalid_argument("emit_line_plot: no finite data");
    xr.pad();
    yr.pad();
    std::string s = header(labels.title);
    for (const auto& ser : series) s += polylines(ser.css_class, ser.x, ser.y, xr, yr);
    s += axes(xr, yr, labels.x, labels.y);
    return s + "</svg>\n";
}

}  // namespace armsim
