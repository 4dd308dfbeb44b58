#pragma once

// Reference spectral densities (Kesten-McKay, semicircle, and the rescaled
// Kesten-McKay family), their CDFs and Stieltjes transforms, and the moments
// and Green function of the infinite d-regular tree.
//
// All integrals substitute lambda = c + w*sin(theta) first: the edge factors
// sqrt(w^2 - (lambda-c)^2) become w*cos(theta) times a smooth function, so
// adaptive Simpson converges at machine precision instead of crawling into
// square-root singularities.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "common.hpp"
#include "spectral.hpp"

namespace regspec {

inline constexpr double pi = 3.14159265358979323846;

struct analytic_measure {
  std::string name;
  double lo = 0, hi = 0;                    // open support interval
  std::function<double(double)> density;    // 0 outside [lo, hi]
  double sup_density = 0;                   // exact sup, used as a norm

  double center() const { return 0.5 * (lo + hi); }
  double half_width() const { return 0.5 * (hi - lo); }
};

// sqrt(d/2pi) * sqrt(4(d-1) - x^2) / (d^2 - x^2) on (-2 sqrt(d-1), 2 sqrt(d-1)).
// The sup sits at x^2 = 8(d-1) - d^2 when that is nonnegative (d <= 6) and at
// x = 0 otherwise.
inline analytic_measure kesten_mckay(int d) {
  require(d >= 3, "kesten_mckay: d must be >= 3");
  double dd = d, edge = 2.0 * std::sqrt(dd - 1.0);
  analytic_measure m;
  m.name = "kesten_mckay_" + std::to_string(d);
  m.lo = -edge;
  m.hi = edge;
  m.density = [dd, edge](double x) {
    if (std::abs(x) >= edge) return 0.0;
    double rad = std::max(0.0, 4.0 * (dd - 1.0) - x * x);
    return dd / (2.0 * pi) * std::sqrt(rad) / (dd * dd - x * x);
  };
  m.sup_density = (d <= 6) ? dd / (4.0 * pi * (dd - 2.0))
                           : std::sqrt(dd - 1.0) / (pi * dd);
  return m;
}

// (2/pi) sqrt(1 - x^2) on (-1, 1); even moments Catalan(j)/4^j.
inline analytic_measure semicircle() {
  analytic_measure m;
  m.name = "semicircle";
  m.lo = -1.0;
  m.hi = 1.0;
  m.density = [](double x) {
    double rad = std::max(0.0, 1.0 - x * x);
    return 2.0 / pi * std::sqrt(rad);
  };
  m.sup_density = 2.0 / pi;
  return m;
}

// Pushforward of Kesten-McKay under x -> x / (2 sqrt(d-1)): support (-1, 1),
// density (2/pi) d(d-1) sqrt(1-x^2) / (d^2 - 4(d-1) x^2). As d grows this
// converges to the semicircle; its sup is interior for every d.
inline analytic_measure rescaled_km(int d) {
  require(d >= 3, "rescaled_km: d must be >= 3");
  double dd = d;
  analytic_measure m;
  m.name = "rescaled_km_" + std::to_string(d);
  m.lo = -1.0;
  m.hi = 1.0;
  m.density = [dd](double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    double rad = std::max(0.0, 1.0 - x * x);
    return 2.0 / pi * dd * (dd - 1.0) * std::sqrt(rad) /
           (dd * dd - 4.0 * (dd - 1.0) * x * x);
  };
  m.sup_density = (d <= 6)
                      ? dd * std::sqrt(dd - 1.0) /
                            (2.0 * pi * std::sqrt(dd * dd - 4.0 * (dd - 1.0)))
                      : 2.0 / pi * (dd - 1.0) / dd;
  return m;
}

namespace detail {

template <class F, class V>
void adaptive_simpson_rec(const F& f, double a, double b, V fa, V fm, V fb,
                          V whole, double tol, int depth, V& acc) {
  double m = 0.5 * (a + b);
  V fl = f(0.5 * (a + m)), fr = f(0.5 * (m + b));
  V left = (b - a) / 12.0 * (fa + 4.0 * fl + fm);
  V right = (b - a) / 12.0 * (fm + 4.0 * fr + fb);
  V delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    acc += left + right + delta / 15.0;
    return;
  }
  adaptive_simpson_rec(f, a, m, fa, fl, fm, left, 0.5 * tol, depth - 1, acc);
  adaptive_simpson_rec(f, m, b, fm, fr, fb, right, 0.5 * tol, depth - 1, acc);
}

template <class V = double, class F>
V adaptive_simpson(const F& f, double a, double b, double tol, int depth = 40) {
  if (a == b) return V(0);
  V fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  V whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  V acc(0);
  adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth, acc);
  return acc;
}

inline double clamp01(double x) { return x < 0 ? 0 : (x > 1 ? 1 : x); }

}  // namespace detail

// Cumulative mass of m on (-inf, t] at each requested point. Points are
// processed as one left-to-right sweep in the theta variable, so the cost is
// one pass over the support regardless of how many points are asked for.
inline std::vector<double> analytic_cdf_many(const analytic_measure& m,
                                             std::vector<double> points) {
  double c = m.center(), w = m.half_width();
  auto g = [&](double th) { return m.density(c + w * std::sin(th)) * w * std::cos(th); };
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<double> out(points.size());
  double seg_tol = std::max(1e-15, 5e-11 / (double)std::max<std::size_t>(1, points.size()));
  double theta_prev = -0.5 * pi, acc = 0;
  for (std::size_t i : order) {
    double t = points[i];
    double s = (t - c) / w;
    double theta = s <= -1 ? -0.5 * pi : (s >= 1 ? 0.5 * pi : std::asin(s));
    acc += detail::adaptive_simpson(g, theta_prev, theta, seg_tol);
    theta_prev = theta;
    out[i] = detail::clamp01(acc);
  }
  return out;
}

inline double analytic_cdf(const analytic_measure& m, double t) {
  return analytic_cdf_many(m, {t})[0];
}

inline void validate_measure(const analytic_measure& m) {
  require(m.lo < m.hi, "analytic_measure: empty support");
  double total = analytic_cdf(m, m.hi);
  require(std::abs(total - 1.0) < 1e-9, m.name + ": density does not integrate to 1");
  const int grid = 10000;
  double seen = 0;
  for (int i = 0; i <= grid; ++i) {
    double x = m.lo + (m.hi - m.lo) * i / grid;
    double f = m.density(x);
    require(f >= 0, m.name + ": negative density");
    require(f <= m.sup_density * (1 + 1e-9) + 1e-12, m.name + ": sup bound violated");
    seen = std::max(seen, f);
  }
  require(seen >= 0.99 * m.sup_density, m.name + ": declared sup not approached");
}

inline double kolmogorov_distance(const discrete_measure& m,
                                  const analytic_measure& ref,
                                  int grid_points = 2001) {
  std::vector<double> pts;
  pts.reserve(2 * m.atoms.size() + grid_points);
  // Left limits at atoms: the CDF of m one ulp below the atom equals its
  // value at the previous atom, so probing the atom against both one-sided
  // values of m covers the whole line; the uniform grid is belt and braces
  // for reporting.
  for (double a : m.atoms) pts.push_back(a);
  double pad = 0.05 * (ref.hi - ref.lo);
  for (int i = 0; i < grid_points; ++i)
    pts.push_back(ref.lo - pad + (ref.hi - ref.lo + 2 * pad) * i / (grid_points - 1));
  std::vector<double> F = analytic_cdf_many(ref, pts);
  measure_cdf M(m);
  double sup = 0;
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    sup = std::max(sup, std::abs(M.cdf(pts[i]) - F[i]));
    sup = std::max(sup, std::abs(M.cdf_left(pts[i]) - F[i]));
  }
  for (std::size_t i = m.atoms.size(); i < pts.size(); ++i)
    sup = std::max(sup, std::abs(M.cdf(pts[i]) - F[i]));
  return sup;
}

// Number of closed k-step walks from the root of the infinite d-regular tree
// (= k-th moment of the Kesten-McKay measure). Distance-from-root DP; the
// root offers d upward edges, every other vertex d-1.
inline std::int64_t tree_moment(int d, int k) {
  require(d >= 3, "tree_moment: d must be >= 3");
  require(k >= 0 && k <= 30, "tree_moment: order must be in [0, 30]");
  using big = __int128;
  std::vector<big> cur(k + 2, 0), nxt(k + 2, 0);
  cur[0] = 1;
  for (int step = 0; step < k; ++step) {
    std::fill(nxt.begin(), nxt.end(), (big)0);
    for (int dist = 0; dist <= step && dist <= k; ++dist) {
      if (cur[dist] == 0) continue;
      big up = cur[dist] * (dist == 0 ? d : d - 1);
      nxt[dist + 1] += up;
      if (dist > 0) nxt[dist - 1] += cur[dist];
    }
    std::swap(cur, nxt);
  }
  big res = cur[0];
  require(res <= (big)INT64_MAX, "tree_moment: value exceeds 64-bit range");
  return (std::int64_t)res;
}

// Square root with nonnegative imaginary part (the branch under which
// Stieltjes transforms of measures on the real line stay Herglotz).
inline std::complex<double> sqrt_upper(std::complex<double> z) {
  std::complex<double> w = std::sqrt(z);
  if (w.imag() < 0) w = -w;
  return w;
}

// Green function of the infinite d-regular tree at the root,
// int dKM(x)/(x - z). Closed form from the branch self-consistency below;
// asymptotics -1/z - d/z^3 + O(z^-5) as |z| -> infinity.
inline std::complex<double> gamma_tree(std::complex<double> z, int d) {
  require(d >= 3, "gamma_tree: d must be >= 3");
  require(z.imag() > 0, "gamma_tree: need Im z > 0");
  double dd = d;
  std::complex<double> root = sqrt_upper(z * z - 4.0 * (dd - 1.0));
  return (z * (dd - 2.0) - dd * root) / (2.0 * (z * z - dd * dd));
}

// Green function of a rooted branch (root of degree d-1 glued below a removed
// parent): the Herglotz solution of (d-1) G^2 + z G + 1 = 0. Feeding d
// branches into the root recursion 1/(-z - d*branch) reproduces gamma_tree.
inline std::complex<double> gamma_branch(std::complex<double> z, int d) {
  require(d >= 3, "gamma_branch: d must be >= 3");
  require(z.imag() > 0, "gamma_branch: need Im z > 0");
  double dd = d;
  std::complex<double> root = sqrt_upper(z * z - 4.0 * (dd - 1.0));
  return (-z + root) / (2.0 * (dd - 1.0));
}

// Stieltjes transform of the semicircle on (-2, 2), -(z - sqrt(z^2 - 4))/2.
// Kept as a named reference point: it is the d -> infinity limit of
// gamma_branch, not of the rescaled tree Green function on (-1, 1).
inline std::complex<double> gamma_sc_paper(std::complex<double> z) {
  require(z.imag() > 0, "gamma_sc_paper: need Im z > 0");
  return -(z - sqrt_upper(z * z - 4.0)) / 2.0;
}

inline std::complex<double> stieltjes_numeric(const analytic_measure& m,
                                              std::complex<double> z) {
  require(std::abs(z.imag()) > 0, "stieltjes_numeric: need Im z != 0");
  double c = m.center(), w = m.half_width();
  auto g = [&](double th) -> std::complex<double> {
    double x = c + w * std::sin(th);
    return m.density(x) * w * std::cos(th) / (x - z);
  };
  return detail::adaptive_simpson<std::complex<double>>(g, -0.5 * pi, 0.5 * pi,
                                                        1e-12, 48);
}

inline std::complex<double> stieltjes_transform(const discrete_measure& m,
                                                std::complex<double> z) {
  std::complex<double> s = 0;
  for (std::size_t i = 0; i < m.atoms.size(); ++i)
    s += m.weights[i] / (m.atoms[i] - z);
  return s;
}

}  // namespace regspec
