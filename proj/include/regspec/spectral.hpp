#pragma once

// Discrete spectral measures extracted from eigendecompositions: the local
// measure mu_x = sum_j |psi_j(x)|^2 delta_{lambda_j} and the global ESD, plus
// Kolmogorov distances, interval counts, and moments via sparse matvecs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "linalg.hpp"

namespace regspec {

struct discrete_measure {
  std::vector<double> atoms;    // ascending (duplicates allowed)
  std::vector<double> weights;  // same length, nonnegative

  double mass() const {
    double m = 0;
    for (double w : weights) m += w;
    return m;
  }

  // Right-continuous CDF and its left limit.
  double cdf(double t) const {
    std::size_t idx =
        std::upper_bound(atoms.begin(), atoms.end(), t) - atoms.begin();
    return prefix(idx);
  }
  double cdf_left(double t) const {
    std::size_t idx =
        std::lower_bound(atoms.begin(), atoms.end(), t) - atoms.begin();
    return prefix(idx);
  }

  double prefix(std::size_t idx) const {
    double m = 0;
    for (std::size_t i = 0; i < idx; ++i) m += weights[i];
    return m;
  }

  void validate() const {
    require(atoms.size() == weights.size(), "discrete_measure: length mismatch");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      require(std::isfinite(atoms[i]), "discrete_measure: non-finite atom");
      require(weights[i] >= 0, "discrete_measure: negative weight");
      require(i == 0 || atoms[i - 1] <= atoms[i],
              "discrete_measure: atoms not sorted");
    }
  }
};

// Prefix sums are O(n) above; measures used in hot loops go through this
// cached form.
struct measure_cdf {
  std::vector<double> atoms;
  std::vector<double> cum;  // cum[i] = weight of atoms[0..i]

  explicit measure_cdf(const discrete_measure& m) : atoms(m.atoms) {
    cum.resize(atoms.size());
    double s = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) cum[i] = (s += m.weights[i]);
  }
  double cdf(double t) const {
    std::size_t idx =
        std::upper_bound(atoms.begin(), atoms.end(), t) - atoms.begin();
    return idx == 0 ? 0.0 : cum[idx - 1];
  }
  double cdf_left(double t) const {
    std::size_t idx =
        std::lower_bound(atoms.begin(), atoms.end(), t) - atoms.begin();
    return idx == 0 ? 0.0 : cum[idx - 1];
  }
};

inline discrete_measure local_spectral_measure(const spectral_decomposition& dec,
                                               int x) {
  require(x >= 0 && x < dec.n, "local_spectral_measure: vertex out of range");
  discrete_measure m;
  m.atoms = dec.values;
  m.weights.resize(dec.n);
  double mass = 0;
  for (int j = 0; j < dec.n; ++j) {
    double w = sq(dec.vec(x, j));
    m.weights[j] = w;
    mass += w;
  }
  require(std::abs(mass - 1.0) < 1e-8,
          "local_spectral_measure: row of eigenvector matrix not unit norm");
  return m;
}

inline discrete_measure esd_measure(const spectral_decomposition& dec) {
  discrete_measure m;
  m.atoms = dec.values;
  m.weights.assign(dec.n, 1.0 / dec.n);
  return m;
}

// Number of eigenvalues in the half-open interval (a, b].
inline std::int64_t eigenvalue_count(const spectral_decomposition& dec, double a,
                                     double b) {
  require(a <= b, "eigenvalue_count: interval reversed");
  auto lo = std::upper_bound(dec.values.begin(), dec.values.end(), a);
  auto hi = std::upper_bound(dec.values.begin(), dec.values.end(), b);
  return hi - lo;
}

// sup_t |M(t) - F(t)| for a discrete measure against a continuous CDF F. The
// sup over the whole line is attained arbitrarily close to an atom, from one
// side or the other, so both one-sided values are checked at every atom; the
// caller may add extra probe points (they can only tighten the estimate for
// plotting-grade reporting, never change the result for continuous F).
inline double kolmogorov_distance(const discrete_measure& m,
                                  const std::function<double(double)>& cdf,
                                  const std::vector<double>& extra_points = {}) {
  measure_cdf M(m);
  double sup = 0;
  for (std::size_t i = 0; i < M.atoms.size(); ++i) {
    if (i > 0 && M.atoms[i] == M.atoms[i - 1]) continue;
    double t = M.atoms[i];
    double f = cdf(t);
    sup = std::max(sup, std::abs(M.cdf(t) - f));
    sup = std::max(sup, std::abs(M.cdf_left(t) - f));
  }
  for (double t : extra_points)
    sup = std::max(sup, std::abs(M.cdf(t) - cdf(t)));
  return sup;
}

// Two discrete measures: both CDFs are right-continuous steps, so the sup is
// attained at an atom of either measure (checking left limits there covers
// the flats in between).
inline double kolmogorov_distance(const discrete_measure& a,
                                  const discrete_measure& b) {
  measure_cdf A(a), B(b);
  std::vector<double> pts;
  pts.reserve(a.atoms.size() + b.atoms.size());
  pts.insert(pts.end(), a.atoms.begin(), a.atoms.end());
  pts.insert(pts.end(), b.atoms.begin(), b.atoms.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double sup = 0;
  for (double t : pts) {
    sup = std::max(sup, std::abs(A.cdf(t) - B.cdf(t)));
    sup = std::max(sup, std::abs(A.cdf_left(t) - B.cdf_left(t)));
  }
  return sup;
}

namespace detail {

// One adjacency matvec plus the diagonal term, out = (A + diag(v)) in.
inline void apply_hamiltonian(const regular_graph& g, const double* v,
                              const std::vector<double>& in,
                              std::vector<double>& out) {
  for (int u = 0; u < g.n; ++u) {
    double s = v ? v[u] * in[u] : 0.0;
    for (int k = 0; k < g.d; ++k) s += in[g.nb(u, k)];
    out[u] = s;
  }
}

inline void apply_hamiltonian(const truncated_tree& t, const double* v,
                              const std::vector<double>& in,
                              std::vector<double>& out) {
  for (int u = 0; u < t.n; ++u) out[u] = v ? v[u] * in[u] : 0.0;
  for (int u = 1; u < t.n; ++u) {
    int p = t.parent[u];
    out[u] += in[p];
    out[p] += in[u];
  }
}

template <class Structure>
double local_moment_impl(const Structure& s, int n, const double* v, int x,
                         int k) {
  require(x >= 0 && x < n, "local_moment: vertex out of range");
  require(k >= 0 && k <= 64, "local_moment: order out of range");
  std::vector<double> a(n, 0.0), b(n, 0.0);
  a[x] = 1.0;
  for (int step = 0; step < k; ++step) {
    apply_hamiltonian(s, v, a, b);
    std::swap(a, b);
  }
  return a[x];
}

}  // namespace detail

// <e_x, (A + diag(v))^k e_x>: closed k-step walks weighted by the potential.
inline double local_moment(const regular_graph& g, const std::vector<double>* v,
                           int x, int k) {
  if (v) require((int)v->size() == g.n, "local_moment: potential size mismatch");
  return detail::local_moment_impl(g, g.n, v ? v->data() : nullptr, x, k);
}

// On a truncated tree the walk must not feel the truncation: a closed k-walk
// from the root reaches depth at most floor(k/2), so demand one level of
// slack beyond that.
inline double local_moment(const truncated_tree& t, const std::vector<double>* v,
                           int x, int k) {
  if (v) require((int)v->size() == t.n, "local_moment: potential size mismatch");
  require(t.depth >= (k + 1) / 2 + 1,
          "local_moment: tree too shallow for this walk length");
  return detail::local_moment_impl(t, t.n, v ? v->data() : nullptr, x, k);
}

inline json measure_to_json(const discrete_measure& m) {
  json j;
  j["atoms"] = m.atoms;
  j["weights"] = m.weights;
  return j;
}

inline discrete_measure measure_from_json(const json& j) {
  discrete_measure m;
  m.atoms = j.at("atoms").get<std::vector<double>>();
  m.weights = j.at("weights").get<std::vector<double>>();
  m.validate();
  return m;
}

}  // namespace regspec
