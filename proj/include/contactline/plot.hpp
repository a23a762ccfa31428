#pragma once

// Minimal static SVG line plots for flow traces and scattering sweeps.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "contactline/flow.hpp"
#include "contactline/scattering.hpp"

namespace contactline {

struct PlotSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;  // NaN breaks the polyline
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  int width = 720;
  int height = 480;
};

/// Throws EmptyData when there is no finite point to draw.
std::string render_svg(std::span<const PlotSeries> series, const PlotOptions& opts);

/// Renders fully before touching the file system, so a failed render
/// leaves no file behind. Throws Io on write failure.
void write_svg(std::span<const PlotSeries> series, const PlotOptions& opts,
               const std::filesystem::path& path);

/// k against loop parameter, one polyline per tracked level.
std::vector<PlotSeries> flow_series(const FlowTrace& trace);
/// T and R against k.
std::vector<PlotSeries> scattering_series(std::span<const ScatteringResult> sweep);

void emit_plot(const FlowTrace& trace, const std::filesystem::path& path);
void emit_plot(std::span<const ScatteringResult> sweep, const std::filesystem::path& path);

}  // namespace contactline
