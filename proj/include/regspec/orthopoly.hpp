#pragma once

// Orthonormal polynomials for a given measure, shifted Gaussian quadrature,
// Christoffel numbers, the Fejer-type majorant, and the resulting
// Chebyshev-Markov-Stieltjes bound: if two measures share moments up to
// degree 2N, their CDFs differ by at most 2*pi*||w||_inf*w0/N* uniformly.
//
// Coefficients come from the discretized Stieltjes procedure (Gram-Schmidt in
// a fixed quadrature inner product, long double accumulators), not from
// Hankel moment determinants — the latter lose all digits past N ~ 10.

#include <cmath>
#include <string>
#include <vector>

#include "common.hpp"
#include "linalg.hpp"
#include "measures.hpp"

namespace regspec {

struct recurrence_coeffs {
  int n_max = 0;          // highest polynomial degree available
  std::vector<double> a;  // a[k] = a_k, k = 0..n_max
  std::vector<double> b;  // b[k] = b_k, k = 1..n_max (b[0] unused, = 0)
  double mass = 1;        // total mass of the source measure
  std::string source;
};

struct quadrature_rule {
  int m = 0;  // exactness degree 2m; m+1 nodes
  double shift = 0;
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // positive, summing to the mass
};

namespace detail {

// Gauss-Legendre rule on [-1, 1] by Golub-Welsch.
inline void gauss_legendre(int k, std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> diag(k, 0.0), off(k - 1);
  for (int j = 1; j < k; ++j)
    off[j - 1] = j / std::sqrt(4.0 * j * j - 1.0);
  spectral_decomposition dec = eig_tridiag(diag, off);
  x = dec.values;
  w.resize(k);
  for (int j = 0; j < k; ++j) w[j] = 2.0 * sq(dec.vec(0, j));
}

struct weighted_grid {
  std::vector<double> x, w;
};

// Discretization of an analytic measure that is quadrature-exact to machine
// precision for our smooth-after-substitution densities.
inline weighted_grid discretize(const analytic_measure& m, int n_max) {
  int k = std::max(256, 8 * (n_max + 2));
  std::vector<double> gx, gw;
  gauss_legendre(k, gx, gw);
  double c = m.center(), hw = m.half_width();
  weighted_grid g;
  g.x.resize(k);
  g.w.resize(k);
  for (int i = 0; i < k; ++i) {
    double th = gx[i] * 0.5 * pi;
    g.x[i] = c + hw * std::sin(th);
    g.w[i] = gw[i] * 0.5 * pi * hw * std::cos(th) * m.density(g.x[i]);
  }
  return g;
}

inline recurrence_coeffs stieltjes_procedure(const weighted_grid& g, int n_max,
                                             std::string source) {
  const std::size_t k = g.x.size();
  recurrence_coeffs rc;
  rc.n_max = n_max;
  rc.source = std::move(source);
  rc.a.assign(n_max + 1, 0.0);
  rc.b.assign(n_max + 1, 0.0);
  long double mass = 0;
  for (double w : g.w) mass += w;
  require(mass > 0, "recurrence_coefficients: measure has no mass");
  rc.mass = (double)mass;

  std::vector<long double> prev(k, 0.0L), cur(k);
  long double p0 = 1.0L / std::sqrt(mass);
  for (std::size_t i = 0; i < k; ++i) cur[i] = p0;
  for (int deg = 0; deg <= n_max; ++deg) {
    long double ak = 0;
    for (std::size_t i = 0; i < k; ++i)
      ak += (long double)g.w[i] * g.x[i] * cur[i] * cur[i];
    rc.a[deg] = (double)ak;
    if (deg == n_max) break;
    long double norm2 = 0;
    for (std::size_t i = 0; i < k; ++i) {
      long double q = (g.x[i] - ak) * cur[i] - (long double)rc.b[deg] * prev[i];
      prev[i] = cur[i];
      cur[i] = q;
      norm2 += (long double)g.w[i] * q * q;
    }
    long double bk = std::sqrt(std::max(norm2, (long double)0));
    if (bk <= 1e-13)
      throw convergence_error(
          "recurrence_coefficients: measure-degenerate (fewer than " +
          std::to_string(deg + 2) + " support points)");
    rc.b[deg + 1] = (double)bk;
    for (std::size_t i = 0; i < k; ++i) cur[i] /= bk;
  }
  return rc;
}

}  // namespace detail

inline recurrence_coeffs recurrence_coefficients(const analytic_measure& m,
                                                 int n_max) {
  require(n_max >= 1, "recurrence_coefficients: need N >= 1");
  return detail::stieltjes_procedure(detail::discretize(m, n_max), n_max, m.name);
}

inline recurrence_coeffs recurrence_coefficients(const discrete_measure& m,
                                                 int n_max) {
  require(n_max >= 1, "recurrence_coefficients: need N >= 1");
  detail::weighted_grid g{m.atoms, m.weights};
  return detail::stieltjes_procedure(g, n_max, "discrete");
}

// P_0(t)..P_N(t) by the forward recurrence
// b_{k+1} P_{k+1} = (t - a_k) P_k - b_k P_{k-1}, P_0 = mass^{-1/2}.
inline std::vector<double> eval_orthopolys(const recurrence_coeffs& rc, double t) {
  std::vector<double> p(rc.n_max + 1);
  p[0] = 1.0 / std::sqrt(rc.mass);
  if (rc.n_max >= 1) p[1] = (t - rc.a[0]) * p[0] / rc.b[1];
  for (int knext = 2; knext <= rc.n_max; ++knext)
    p[knext] = ((t - rc.a[knext - 1]) * p[knext - 1] -
                rc.b[knext - 1] * p[knext - 2]) /
               rc.b[knext];
  return p;
}

// Nodes are the zeros of P_{M+1} + s P_M, obtained as eigenvalues of the
// (M+1)x(M+1) Jacobi matrix whose last diagonal entry is a_M - s b_{M+1};
// weights are mass times the squared first eigenvector components. The rule
// integrates polynomials of degree <= 2M exactly against the source measure
// for every shift s.
inline quadrature_rule gauss_rule(const recurrence_coeffs& rc, int m, double s) {
  require(m >= 0 && m + 1 <= rc.n_max, "gauss_rule: need M+1 <= N of rc");
  std::vector<double> diag(rc.a.begin(), rc.a.begin() + m + 1);
  std::vector<double> off(rc.b.begin() + 1, rc.b.begin() + m + 1);
  diag[m] -= s * rc.b[m + 1];
  spectral_decomposition dec = eig_tridiag(diag, off);
  quadrature_rule q;
  q.m = m;
  q.shift = s;
  q.nodes = dec.values;
  q.weights.resize(m + 1);
  for (int j = 0; j <= m; ++j) q.weights[j] = rc.mass * sq(dec.vec(0, j));
  for (int j = 0; j <= m; ++j) {
    require(q.weights[j] > 0, "gauss_rule: nonpositive weight");
    require(j == 0 || q.nodes[j - 1] < q.nodes[j], "gauss_rule: nodes not simple");
  }
  return q;
}

// 1 / sum_{n=0}^{N} P_n(t)^2 — the sharp upper bound on the mass any measure
// with the same first 2N moments can put on the single point t.
inline double christoffel_number(const recurrence_coeffs& rc, int n, double t) {
  require(n >= 0 && n <= rc.n_max, "christoffel_number: N out of range");
  std::vector<double> p = eval_orthopolys(rc, t);
  double s = 0;
  for (int j = 0; j <= n; ++j) s += sq(p[j]);
  return 1.0 / s;
}

inline int nstar(int n) {
  require(n >= 1, "nstar: need N >= 1");
  return (n % 2 == 1) ? n : n - 1;
}

// F_{2N-2}((lambda - t)/(2 w0)) where F is the nonnegative even polynomial
// with F(0) = 1 built from the Fejer kernel: with n = floor((2N-2)/4),
// F(x) = 1/(2n+1) + 2/(2n+1)^2 sum_{m=1}^{2n} (2n-m+1)(-1)^m T_{2m}(x).
// It majorizes the indicator of {t} among polynomials of its degree in the
// sense that its integral over (-w0, w0) is at most 2 pi w0 / N*.
inline double fejer_polynomial(int n_param, double w0, double t, double lambda) {
  require(n_param >= 2, "fejer_polynomial: need N >= 2");
  require(std::abs(t) < w0, "fejer_polynomial: need |t| < w0");
  int n = (2 * n_param - 2) / 4;
  double x = (lambda - t) / (2.0 * w0);
  if (n == 0) return 1.0;
  // Chebyshev T_0..T_{4n} at x by the three-term recurrence.
  double tprev = 1.0, tcur = x, sum = 0.0;
  int sign = -1;
  for (int j = 2; j <= 4 * n; ++j) {
    double tnext = 2.0 * x * tcur - tprev;
    tprev = tcur;
    tcur = tnext;
    if (j % 2 == 0) {
      int m = j / 2;
      sum += (2.0 * n - m + 1.0) * sign * tcur;
      sign = -sign;
    }
  }
  double k = 2.0 * n + 1.0;
  return 1.0 / k + 2.0 / (k * k) * sum;
}

// Certified Kolmogorov bound for any measure matching the first 2N moments
// of m_ref: 2 pi ||density||_inf w0 / N*.
inline double cms_bound(const analytic_measure& m_ref, int n) {
  require(n >= 2, "cms_bound: need N >= 2");
  return 2.0 * pi * m_ref.sup_density * m_ref.half_width() / nstar(n);
}

}  // namespace regspec
