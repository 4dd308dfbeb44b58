#pragma once

// CSV tables and minimal self-contained SVG renderings (histogram bars +
// reference-density overlay, empirical vs reference CDF). No plotting
// dependency: the SVG is assembled directly, which is plenty for the
// diagnostic figures the CLI emits.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "measures.hpp"
#include "spectral.hpp"

namespace regspec {

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  require(f.good(), "cannot open output file: " + path);
  f << std::setprecision(12);
  return f;
}

inline std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

// Fixed-size canvas with margins; maps data coordinates to pixels.
struct svg_canvas {
  std::ostringstream body;
  double x0, x1, y0, y1;  // data ranges
  static constexpr int w = 640, h = 400, ml = 55, mr = 15, mt = 15, mb = 35;

  svg_canvas(double xa, double xb, double ya, double yb)
      : x0(xa), x1(xb), y0(ya), y1(yb) {}
  double px(double x) const { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); }
  double py(double y) const {
    return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);
  }
  void rect(double xa, double xb, double ytop, const std::string& fill) {
    body << "<rect x='" << fmt(px(xa)) << "' y='" << fmt(py(ytop)) << "' width='"
         << fmt(px(xb) - px(xa)) << "' height='" << fmt(py(0) - py(ytop))
         << "' fill='" << fill << "' stroke='none'/>\n";
  }
  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color) {
    body << "<polyline fill='none' stroke='" << color
         << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < xs.size(); ++i)
      body << fmt(px(xs[i])) << "," << fmt(py(ys[i])) << " ";
    body << "'/>\n";
  }
  void axes() {
    body << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr
         << "' y2='" << h - mb << "' stroke='black'/>\n"
         << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
         << h - mb << "' stroke='black'/>\n";
    for (int i = 0; i <= 4; ++i) {
      double x = x0 + (x1 - x0) * i / 4, y = y0 + (y1 - y0) * i / 4;
      body << "<text x='" << fmt(px(x)) << "' y='" << h - mb + 16
           << "' font-size='11' text-anchor='middle'>" << fmt(x) << "</text>\n"
           << "<text x='" << ml - 6 << "' y='" << fmt(py(y) + 4)
           << "' font-size='11' text-anchor='end'>" << fmt(y) << "</text>\n";
    }
  }
  void save(const std::string& path) {
    std::ofstream f = open_out(path);
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='"
      << h << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
      << body.str() << "</svg>\n";
  }
};

}  // namespace detail

// lambda, density, cdf rows for an analytic reference measure.
inline void write_density_csv(const std::string& path, const analytic_measure& m,
                              int npts = 512) {
  require(npts >= 2, "write_density_csv: need at least two points");
  std::vector<double> xs(npts);
  for (int i = 0; i < npts; ++i)
    xs[i] = m.lo + (m.hi - m.lo) * i / (npts - 1);
  std::vector<double> cdf = analytic_cdf_many(m, xs);
  std::ofstream f = detail::open_out(path);
  f << "lambda,density,cdf\n";
  for (int i = 0; i < npts; ++i)
    f << xs[i] << "," << m.density(xs[i]) << "," << cdf[i] << "\n";
}

// atom, weight, cdf rows for a discrete measure (e.g. a spectrum).
inline void write_measure_csv(const std::string& path,
                              const discrete_measure& m) {
  std::ofstream f = detail::open_out(path);
  f << "atom,weight,cdf\n";
  double cum = 0;
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    cum += m.weights[i];
    f << m.atoms[i] << "," << m.weights[i] << "," << cum << "\n";
  }
}

// Histogram of `values` normalized to a density, with an optional analytic
// overlay curve.
inline void write_histogram_svg(const std::string& path,
                                const std::vector<double>& values, int bins,
                                const analytic_measure* overlay = nullptr) {
  require(!values.empty() && bins >= 1, "write_histogram_svg: empty input");
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = *mn, hi = *mx;
  if (overlay) {
    lo = std::min(lo, overlay->lo);
    hi = std::max(hi, overlay->hi);
  }
  double pad = 0.02 * (hi - lo + 1e-12);
  lo -= pad;
  hi += pad;
  double bw = (hi - lo) / bins;
  std::vector<double> dens(bins, 0.0);
  for (double v : values) {
    int b = std::min(bins - 1, (int)((v - lo) / bw));
    dens[b] += 1.0 / (values.size() * bw);
  }
  double ymax = *std::max_element(dens.begin(), dens.end());
  if (overlay) ymax = std::max(ymax, overlay->sup_density);
  detail::svg_canvas c(lo, hi, 0, 1.1 * ymax + 1e-12);
  for (int b = 0; b < bins; ++b)
    if (dens[b] > 0) c.rect(lo + b * bw, lo + (b + 1) * bw, dens[b], "#9ecae1");
  if (overlay) {
    int npts = 400;
    std::vector<double> xs(npts), ys(npts);
    for (int i = 0; i < npts; ++i) {
      xs[i] = overlay->lo + (overlay->hi - overlay->lo) * i / (npts - 1);
      ys[i] = overlay->density(xs[i]);
    }
    c.polyline(xs, ys, "#d62728");
  }
  c.axes();
  c.save(path);
}

// Empirical CDF staircase against an optional analytic reference CDF.
inline void write_cdf_svg(const std::string& path, const discrete_measure& emp,
                          const analytic_measure* ref = nullptr) {
  require(!emp.atoms.empty(), "write_cdf_svg: empty measure");
  double lo = emp.atoms.front(), hi = emp.atoms.back();
  if (ref) {
    lo = std::min(lo, ref->lo);
    hi = std::max(hi, ref->hi);
  }
  double pad = 0.05 * (hi - lo + 1e-12);
  detail::svg_canvas c(lo - pad, hi + pad, 0, 1.05);
  std::vector<double> xs, ys;
  double cum = 0;
  xs.push_back(lo - pad);
  ys.push_back(0);
  for (std::size_t i = 0; i < emp.atoms.size(); ++i) {
    xs.push_back(emp.atoms[i]);
    ys.push_back(cum);
    cum += emp.weights[i];
    xs.push_back(emp.atoms[i]);
    ys.push_back(cum);
  }
  xs.push_back(hi + pad);
  ys.push_back(cum);
  c.polyline(xs, ys, "#1f77b4");
  if (ref) {
    int npts = 400;
    std::vector<double> rx(npts);
    for (int i = 0; i < npts; ++i)
      rx[i] = ref->lo + (ref->hi - ref->lo) * i / (npts - 1);
    std::vector<double> ry = analytic_cdf_many(*ref, rx);
    c.polyline(rx, ry, "#d62728");
  }
  c.axes();
  c.save(path);
}

}  // namespace regspec
