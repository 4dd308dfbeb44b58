#pragma once

// Random Schrodinger operators H = A + V on regular graphs and truncated
// trees: potential sampling, transport of a potential through the covering
// map so graph and tree agree on the acyclic ball, the tree Green-function
// recursion, the Monte Carlo density of states, the rank-one perturbation
// identity, and eigenvector delocalization coefficients.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "measures.hpp"
#include "rng.hpp"
#include "spectral.hpp"

namespace regspec {

struct potential_spec {
  enum class kind_t { none, uniform };
  kind_t kind = kind_t::none;
  double rho0 = 0;  // support radius; density lives on (-rho0, rho0)

  static potential_spec none() { return {}; }
  static potential_spec uniform(double rho0) {
    require(rho0 > 0, "potential_spec: rho0 must be > 0");
    return {kind_t::uniform, rho0};
  }

  // ||rho||_inf; the degenerate kind has no density and no callers for this.
  double sup_density() const {
    require(kind == kind_t::uniform, "potential_spec: no density for this kind");
    return 1.0 / (2.0 * rho0);
  }

  json to_json() const {
    json j;
    j["kind"] = (kind == kind_t::none) ? "none" : "uniform";
    if (kind == kind_t::uniform) j["rho0"] = rho0;
    return j;
  }
  static potential_spec from_json(const json& j) {
    std::string k = j.at("kind");
    if (k == "none") return none();
    require(k == "uniform", "potential_spec: unknown kind " + k);
    return uniform(j.at("rho0").get<double>());
  }
};

struct potential {
  potential_spec spec;
  std::uint64_t seed = 0;
  std::vector<double> values;
};

namespace detail {

inline double draw_omega(const potential_spec& spec, rng& gen) {
  if (spec.kind == potential_spec::kind_t::none) return 0.0;
  double u;
  do {
    u = gen.uniform();
  } while (u == 0.0);  // keep the value strictly inside (-rho0, rho0)
  return spec.rho0 * (2.0 * u - 1.0);
}

}  // namespace detail

inline potential sample_potential(const potential_spec& spec, int n,
                                  std::uint64_t seed) {
  require(n >= 1, "sample_potential: n must be >= 1");
  potential v;
  v.spec = spec;
  v.seed = seed;
  v.values.resize(n);
  rng gen(derive_seed(seed, 0x706f74, (std::uint64_t)n));
  for (int i = 0; i < n; ++i) v.values[i] = detail::draw_omega(spec, gen);
  return v;
}

// Transport a graph potential to the tree: on levels <= R(x) copy through
// the covering isomorphism (children matched in sorted-neighbor order, the
// same order covering_map uses), beyond the ball draw fresh independent
// values. Both marginals are i.i.d. rho; on B_R the two operators are
// literally conjugate.
inline potential transport_potential(const regular_graph& g, int x,
                                     const truncated_tree& tree,
                                     const potential& vg,
                                     std::uint64_t fresh_seed) {
  require(tree.d == g.d && !tree.rooted,
          "transport_potential: tree must be the full d-regular truncation");
  require((int)vg.values.size() == g.n, "transport_potential: potential size mismatch");
  int r = acyclic_radius(g, x).r;
  require(tree.depth >= r, "transport_potential: tree depth below acyclic radius");

  covering_map_result cm = covering_map(g, x, r);
  std::vector<char> seen(g.n, 0);
  for (int v : cm.image) {
    require(!seen[v], "transport_potential: covering map not injective on the ball");
    seen[v] = 1;
  }

  potential vt;
  vt.spec = vg.spec;
  vt.seed = fresh_seed;
  vt.values.resize(tree.n);
  rng fresh(derive_seed(fresh_seed, 0x74, (std::uint64_t)x));
  for (int u = 0; u < tree.n; ++u)
    vt.values[u] = (u < cm.tree.n) ? vg.values[cm.image[u]]
                                   : detail::draw_omega(vg.spec, fresh);
  return vt;
}

inline std::pair<potential, potential> couple_potentials(
    const regular_graph& g, int x, const truncated_tree& tree,
    const potential_spec& spec, std::uint64_t seed) {
  potential vg = sample_potential(spec, g.n, derive_seed(seed, 0x67));
  potential vt = transport_potential(g, x, tree, vg, derive_seed(seed, 0x74));
  return {std::move(vg), std::move(vt)};
}

inline sym_matrix hamiltonian(const regular_graph& g,
                              const std::vector<double>* v = nullptr) {
  if (v) require((int)v->size() == g.n, "hamiltonian: potential length mismatch");
  sym_matrix h(g.n);
  for (int u = 0; u < g.n; ++u)
    for (int k = 0; k < g.d; ++k) h.set(u, g.nb(u, k), 1.0);
  if (v)
    for (int u = 0; u < g.n; ++u) h.add_diag(u, (*v)[u]);
  return h;
}

inline sym_matrix hamiltonian(const truncated_tree& t,
                              const std::vector<double>* v = nullptr) {
  if (v) require((int)v->size() == t.n, "hamiltonian: potential length mismatch");
  sym_matrix h(t.n);
  for (int u = 1; u < t.n; ++u) h.set(u, t.parent[u], 1.0);
  if (v)
    for (int u = 0; u < t.n; ++u) h.add_diag(u, (*v)[u]);
  return h;
}

struct green_sample {
  std::complex<double> z;
  std::complex<double> value;
  int site = 0;
};

// Green function at the root of a truncated tree by the upward recursion
// Gamma_u = 1/(omega_u - z - sum_children Gamma_child). Missing subtrees at
// the truncation boundary contribute the zero-potential branch value
// gamma_branch (the Herglotz root of (d-1)G^2 + zG + 1 = 0), which kills the
// leading-order boundary bias for weak disorder. Im Gamma_u > 0 holds at
// every vertex by induction.
inline std::vector<std::complex<double>> tree_green_all(
    const truncated_tree& t, const std::vector<double>* v,
    std::complex<double> z) {
  require(z.imag() > 0, "tree_green_recursive: need Im z > 0");
  if (v) require((int)v->size() == t.n, "tree_green_recursive: potential length mismatch");
  std::complex<double> gb = gamma_branch(z, t.d);
  std::vector<std::complex<double>> gam(t.n);
  for (int u = t.n - 1; u >= 0; --u) {
    int want = (u == 0 && !t.rooted) ? t.d : t.d - 1;
    std::complex<double> s = 0;
    for (int c = 0; c < t.child_count[u]; ++c)
      s += gam[t.first_child[u] + c];
    s += (double)(want - t.child_count[u]) * gb;
    double omega = v ? (*v)[u] : 0.0;
    gam[u] = 1.0 / (omega - z - s);
  }
  require(gam[0].imag() > 0, "tree_green_recursive: lost the Herglotz property");
  return gam;
}

inline green_sample tree_green_recursive(const truncated_tree& t,
                                         const std::vector<double>* v,
                                         std::complex<double> z) {
  return {z, tree_green_all(t, v, z)[0], 0};
}

inline green_sample tree_green_recursive(int d, int depth,
                                         const potential* v,
                                         std::complex<double> z) {
  require(depth >= 1, "tree_green_recursive: depth must be >= 1");
  truncated_tree t = build_truncated_tree(d, depth, /*rooted=*/false);
  if (v) require((int)v->values.size() == t.n,
                 "tree_green_recursive: potential sized for a different tree");
  return tree_green_recursive(t, v ? &v->values : nullptr, z);
}

struct dos_estimate {
  double value = 0;   // (1/pi) E Im Gamma_root(lambda + i eta)
  double stderr_ = 0;
};

// Monte Carlo density of states of the disordered tree, smoothed at scale
// eta. Each trial draws a fresh potential on the depth-`depth` truncation.
inline std::vector<dos_estimate> dos_mc_grid(int d, const potential_spec& spec,
                                             const std::vector<double>& lambdas,
                                             double eta, int depth, int trials,
                                             std::uint64_t seed) {
  require(eta > 0, "dos_mc: eta must be > 0");
  require(trials >= 1, "dos_mc: trials must be >= 1");
  truncated_tree t = build_truncated_tree(d, depth, /*rooted=*/false);
  std::vector<double> sum(lambdas.size(), 0.0), sumsq(lambdas.size(), 0.0);
  for (int trial = 0; trial < trials; ++trial) {
    potential v = sample_potential(spec, t.n, derive_seed(seed, 0x646f73, trial));
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      green_sample gs =
          tree_green_recursive(t, &v.values, {lambdas[i], eta});
      double val = gs.value.imag() / pi;
      sum[i] += val;
      sumsq[i] += val * val;
    }
  }
  std::vector<dos_estimate> out(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    double mean = sum[i] / trials;
    double var = std::max(0.0, sumsq[i] / trials - mean * mean);
    out[i] = {mean, trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0};
  }
  return out;
}

inline dos_estimate dos_mc(int d, const potential_spec& spec, double lambda,
                           double eta, int depth, int trials,
                           std::uint64_t seed) {
  return dos_mc_grid(d, spec, {lambda}, eta, depth, trials, seed)[0];
}

struct rank_one_result {
  std::complex<double> gamma;  // Gamma(x0, z; V)
  std::complex<double> xi;     // self-energy at x0, independent of omega_x0
  double residual = 0;         // max of the two identity residuals, relative
};

// Rank-one perturbation identity: with Xi = -1/Gamma(x0, z; V with
// omega_x0 = 0), the full Green function is 1/(omega_x0 - Xi), and its
// imaginary part is Im Xi / ((omega_x0 - Re Xi)^2 + (Im Xi)^2). Both are
// checked against two independent dense solves.
inline rank_one_result rank_one_check(const regular_graph& g,
                                      const potential& v, int x0,
                                      std::complex<double> z) {
  require(x0 >= 0 && x0 < g.n, "rank_one_check: vertex out of range");
  require((int)v.values.size() == g.n, "rank_one_check: potential length mismatch");
  sym_matrix h = hamiltonian(g, &v.values);
  std::complex<double> gamma = green_solve(h, x0, z);
  std::vector<double> vhat = v.values;
  vhat[x0] = 0.0;
  sym_matrix hhat = hamiltonian(g, &vhat);
  std::complex<double> xi = -1.0 / green_solve(hhat, x0, z);
  double omega = v.values[x0];
  double r1 = std::abs(gamma - 1.0 / (omega - xi));
  double r2 = std::abs(gamma.imag() -
                       xi.imag() / (sq(omega - xi.real()) + sq(xi.imag())));
  return {gamma, xi, std::max(r1, r2) / std::abs(gamma)};
}

// c_j = |phi_j(x0)|^2 for eigenvalues in (a, b], else 0; sums to at most 1.
inline std::vector<double> deloc_coefficients(const spectral_decomposition& dec,
                                              int x0, double a, double b) {
  require(x0 >= 0 && x0 < dec.n, "deloc_coefficients: vertex out of range");
  std::vector<double> c(dec.n, 0.0);
  for (int j = 0; j < dec.n; ++j)
    if (dec.values[j] > a && dec.values[j] <= b) c[j] = sq(dec.vec(x0, j));
  return c;
}

// sum_{x in B_r(x0)} sum_j c_j |phi_j(x)|^2 — the eigenfunction mass the
// coefficients place on the ball. Always <= sum_j c_j <= 1.
inline double ball_mass(const spectral_decomposition& dec,
                        const std::vector<double>& c, const regular_graph& g,
                        int x0, int r) {
  require((int)c.size() == dec.n && g.n == dec.n, "ball_mass: size mismatch");
  std::vector<int> ball = ball_vertices(g, x0, r);
  double total = 0;
  for (int x : ball) {
    double s = 0;
    for (int j = 0; j < dec.n; ++j)
      if (c[j] != 0) s += c[j] * sq(dec.vec(x, j));
    total += s;
  }
  return total;
}

inline json potential_to_json(const potential& v) {
  json j;
  j["spec"] = v.spec.to_json();
  j["seed"] = v.seed;
  j["values"] = v.values;
  return j;
}

inline potential potential_from_json(const json& j) {
  potential v;
  v.spec = potential_spec::from_json(j.at("spec"));
  v.seed = j.at("seed").get<std::uint64_t>();
  v.values = j.at("values").get<std::vector<double>>();
  for (double w : v.values)
    require(v.spec.kind == potential_spec::kind_t::none
                ? w == 0.0
                : std::abs(w) < v.spec.rho0,
            "potential_from_json: value outside the support");
  return v;
}

}  // namespace regspec
