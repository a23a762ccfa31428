#include "contactline/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "contactline/error.hpp"
#include "contactline/serialize.hpp"

namespace contactline {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Range {
  double lo = 1e300;
  double hi = -1e300;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
  void pad() {
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(std::span<const PlotSeries> series, const PlotOptions& opts) {
  Range xr;
  Range yr;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (opts.log_x && !(s.x[i] > 0.0)) continue;
      xr.add(opts.log_x ? std::log10(s.x[i]) : s.x[i]);
      yr.add(s.y[i]);
    }
  }
  if (!xr.valid()) throw Error(ErrorKind::EmptyData, "nothing to plot");
  xr.pad();
  yr.pad();

  const double left = 70, right = 150, top = 40, bottom = 55;
  const double pw = opts.width - left - right;
  const double ph = opts.height - top - bottom;
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
     << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks: five linear ticks, or one per decade on a log axis.
  for (int i = 0; i <= 4; ++i) {
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    os << "<text x=\"" << left - 6 << "\" y=\"" << fmt2(py(yv) + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
       << format_number(std::round(yv * 1e4) / 1e4) << "</text>\n";
  }
  if (opts.log_x) {
    for (double d = std::ceil(xr.lo); d <= xr.hi + 1e-9; d += 1.0) {
      os << "<text x=\"" << fmt2(px(d)) << "\" y=\"" << top + ph + 16
         << "\" font-size=\"11\" text-anchor=\"middle\">1e" << format_number(d) << "</text>\n";
    }
  } else {
    for (int i = 0; i <= 4; ++i) {
      const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
      os << "<text x=\"" << fmt2(px(xv)) << "\" y=\"" << top + ph + 16
         << "\" font-size=\"11\" text-anchor=\"middle\">" << format_number(std::round(xv * 1e4) / 1e4)
         << "</text>\n";
    }
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << opts.height - 12 << "\" font-size=\"13\" text-anchor=\"middle\">"
     << escape(opts.x_label) << "</text>\n"
     << "<text x=\"16\" y=\"" << top + ph / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << top + ph / 2 << ")\">" << escape(opts.y_label) << "</text>\n"
     << "<text x=\"" << left + pw / 2 << "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" << escape(opts.title)
     << "</text>\n";

  int legend_row = 0;
  for (const auto& s : series) {
    std::vector<std::string> runs;
    std::string current;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      const bool ok = std::isfinite(s.x[i]) && std::isfinite(s.y[i]) && (!opts.log_x || s.x[i] > 0.0);
      if (!ok) {
        if (!current.empty()) runs.push_back(std::move(current));
        current.clear();
        continue;
      }
      const double xv = opts.log_x ? std::log10(s.x[i]) : s.x[i];
      current += fmt2(px(xv)) + "," + fmt2(py(s.y[i])) + " ";
    }
    if (!current.empty()) runs.push_back(std::move(current));
    for (const auto& pts : runs) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
    }
    if (!s.label.empty() && legend_row < 16) {
      const double ly = top + 14 + 16 * legend_row++;
      os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30 << "\" y2=\"" << ly
         << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
         << "<text x=\"" << left + pw + 36 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << escape(s.label)
         << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(std::span<const PlotSeries> series, const PlotOptions& opts, const std::filesystem::path& path) {
  const std::string doc = render_svg(series, opts);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string());
  out << doc;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<PlotSeries> flow_series(const FlowTrace& trace) {
  std::vector<PlotSeries> out;
  for (std::size_t i = 0; i < trace.tracked.size(); ++i) {
    const Trajectory& tr = trace.tracked[i];
    PlotSeries s;
    s.color = tr.channel == Channel::plus ? kPalette[0] : kPalette[1];
    s.label = std::string(channel_name(tr.channel)) + " " +
              (tr.start_level >= 0 ? "n=" + std::to_string(tr.start_level) : std::string("entered"));
    for (std::size_t j = 0; j < tr.k.size(); ++j) {
      s.x.push_back(trace.t[tr.first_sample + j]);
      s.y.push_back(tr.k[j]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<PlotSeries> scattering_series(std::span<const ScatteringResult> sweep) {
  PlotSeries t{"T", kPalette[0], {}, {}};
  PlotSeries r{"R", kPalette[1], {}, {}};
  for (const auto& s : sweep) {
    t.x.push_back(s.k);
    t.y.push_back(s.T);
    r.x.push_back(s.k);
    r.y.push_back(s.R);
  }
  return {t, r};
}

void emit_plot(const FlowTrace& trace, const std::filesystem::path& path) {
  const auto series = flow_series(trace);
  write_svg(series, {"Spectral flow along the loop", "loop parameter t", "k", false}, path);
}

void emit_plot(std::span<const ScatteringResult> sweep, const std::filesystem::path& path) {
  const auto series = scattering_series(sweep);
  write_svg(series, {"Transmission and reflection", "k", "probability", true}, path);
}

}  // namespace contactline
