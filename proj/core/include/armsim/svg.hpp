#pragma once

// Minimal self-contained SVG output for spectra and derived curves.

#include <span>
#include <string>
#include <vector>

#include "armsim/spectra.hpp"

namespace armsim {

enum class SvgStyle { heatmap, line };

/// Heatmap: one <rect> per grid cell, linear grayscale (white = 0, black = 1)
/// by transmission. Line: one polyline per slice. `normalized` = false plots
/// |A| scaled by its global maximum instead of the per-slice transmission.
/// Throws std::invalid_argument on an empty result.
std::string emit_svg(const SpectrumResult& result, SvgStyle style, bool normalized = true);

struct Series {
    std::string css_class;  // stroke class, e.g. "branch-g"
    std::vector<double> x;
    std::vector<double> y;  // NaN entries break the line
};

struct PlotLabels {
    std::string x;
    std::string y;
    std::string title;
};

/// Overlaid polylines on shared axes; throws std::invalid_argument when no
/// series has a finite point.
std::string emit_line_plot(std::span<const Series> series, const PlotLabels& labels);

}  // namespace armsim
