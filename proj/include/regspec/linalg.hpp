#pragma once

// Dense symmetric eigensolves and resolvent solves.
//
// Backend: LAPACK (dsyevd / dstev / zgesv) through LAPACKE with OpenBLAS
// pinned to one thread — parallelism lives at the trial level, and a
// single-threaded BLAS keeps results bit-stable. The backend is allowed
// because every decomposition is re-certified here against the residual and
// orthonormality contracts: all columns for n <= 256, a 16-column sample plus
// the two trace identities (sum of eigenvalues = trace, sum of squares =
// Frobenius norm squared) for larger n.

#ifndef LAPACK_COMPLEX_CPP
#define LAPACK_COMPLEX_CPP
#endif
#include <lapacke.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "rng.hpp"

extern "C" void openblas_set_num_threads(int);

namespace regspec {

inline void pin_blas_single_thread() {
  static const bool done = [] {
    openblas_set_num_threads(1);
    return true;
  }();
  (void)done;
}

class sym_matrix {
 public:
  explicit sym_matrix(int n) : n_(n), a_((std::size_t)n * n, 0.0) {
    require(n >= 1, "sym_matrix: n must be >= 1");
  }

  int size() const { return n_; }
  double operator()(int i, int j) const { return a_[(std::size_t)i * n_ + j]; }

  // Writes both triangles so symmetry holds exactly, entry by entry.
  void set(int i, int j, double v) {
    a_[(std::size_t)i * n_ + j] = v;
    a_[(std::size_t)j * n_ + i] = v;
  }

  void add_diag(int i, double v) { a_[(std::size_t)i * n_ + i] += v; }

  double trace() const {
    double t = 0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_sq() const {
    double t = 0;
    for (double v : a_) t += v * v;
    return t;
  }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

 private:
  int n_;
  std::vector<double> a_;
};

struct spectral_decomposition {
  int n = 0;
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row-major, column j = eigenvector j

  // Component i of eigenvector j.
  double vec(int i, int j) const { return vectors[(std::size_t)i * n + j]; }
};

namespace detail {

inline void check_decomposition(const sym_matrix& A,
                                const spectral_decomposition& dec) {
  const int n = dec.n;
  const double frob = std::sqrt(A.frobenius_sq());
  const double resid_tol = 1e-10 * std::max(1.0, frob);
  const double orth_tol = 1e-10;

  // Which eigenvector columns to certify in full.
  std::vector<int> cols;
  if (n <= 256) {
    cols.resize(n);
    for (int j = 0; j < n; ++j) cols[j] = j;
  } else {
    rng pick(derive_seed(0xc0de, (std::uint64_t)n, (std::uint64_t)frob));
    for (int k = 0; k < 16; ++k) cols.push_back((int)pick.below(n));
  }

  for (int j : cols) {
    double r2 = 0;
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += A(i, k) * dec.vec(k, j);
      s -= dec.values[j] * dec.vec(i, j);
      r2 += s * s;
    }
    if (std::sqrt(r2) > resid_tol)
      throw invariant_violation("eig_sym: residual " +
                                std::to_string(std::sqrt(r2)) +
                                " exceeds tolerance on column " +
                                std::to_string(j));
  }
  for (std::size_t a = 0; a < cols.size(); ++a) {
    for (std::size_t b = a; b < cols.size(); ++b) {
      double dot = 0;
      for (int i = 0; i < n; ++i) dot += dec.vec(i, cols[a]) * dec.vec(i, cols[b]);
      double target = (cols[a] == cols[b]) ? 1.0 : 0.0;
      if (std::abs(dot - target) > orth_tol)
        throw invariant_violation("eig_sym: orthonormality violated");
    }
  }

  // Trace identities hold for every symmetric matrix and certify the
  // unsampled part of the spectrum.
  double sum = 0, sum2 = 0;
  for (double v : dec.values) {
    sum += v;
    sum2 += v * v;
  }
  double scale2 = std::max(1.0, A.frobenius_sq());
  if (std::abs(sum - A.trace()) > 1e-9 * std::max(1.0, frob) * n ||
      std::abs(sum2 - A.frobenius_sq()) > 1e-9 * scale2)
    throw invariant_violation("eig_sym: trace identities violated");
  for (int j = 1; j < n; ++j)
    require(dec.values[j - 1] <= dec.values[j], "eig_sym: values not sorted");
}

}  // namespace detail

inline spectral_decomposition eig_sym(const sym_matrix& A) {
  pin_blas_single_thread();
  const int n = A.size();
  spectral_decomposition dec;
  dec.n = n;
  dec.values.assign(n, 0.0);
  dec.vectors = A.data();
  int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'L', n, dec.vectors.data(),
                            n, dec.values.data());
  if (info != 0)
    throw convergence_error("eig_sym: dsyevd failed to converge (info=" +
                            std::to_string(info) + ")");
  detail::check_decomposition(A, dec);
  return dec;
}

// Symmetric tridiagonal eigensolve (Golub–Welsch lives on top of this).
// Returns values ascending and the orthonormal eigenvector matrix.
inline spectral_decomposition eig_tridiag(std::vector<double> diag,
                                          std::vector<double> off) {
  pin_blas_single_thread();
  const int m = (int)diag.size();
  require(m >= 1 && (int)off.size() == m - 1, "eig_tridiag: bad sizes");
  spectral_decomposition dec;
  dec.n = m;
  dec.vectors.assign((std::size_t)m * m, 0.0);
  int info = LAPACKE_dstev(LAPACK_ROW_MAJOR, 'V', m, diag.data(), off.data(),
                           dec.vectors.data(), m);
  if (info != 0)
    throw convergence_error("eig_tridiag: dstev failed (info=" +
                            std::to_string(info) + ")");
  dec.values = std::move(diag);
  return dec;
}

// Diagonal resolvent entry ((H - z)^{-1})(x, x) by a dense complex solve.
// Independent of the eigensolver path on purpose: the rank-one identity
// tests compare the two.
inline std::complex<double> green_solve(const sym_matrix& H, int x,
                                        std::complex<double> z) {
  pin_blas_single_thread();
  const int n = H.size();
  require(x >= 0 && x < n, "green_solve: vertex out of range");
  require(z.imag() > 0, "green_solve: Im z must be positive");
  std::vector<std::complex<double>> M((std::size_t)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M[(std::size_t)i * n + j] =
          std::complex<double>(H(i, j), 0.0) - (i == j ? z : 0.0);
  std::vector<std::complex<double>> rhs(n, 0.0);
  rhs[x] = 1.0;
  std::vector<lapack_int> ipiv(n);
  int info = LAPACKE_zgesv(LAPACK_ROW_MAJOR, n, 1,
                           reinterpret_cast<lapack_complex_double*>(M.data()),
                           n, ipiv.data(),
                           reinterpret_cast<lapack_complex_double*>(rhs.data()),
                           1);
  if (info != 0)
    throw convergence_error("green_solve: zgesv failed (info=" +
                            std::to_string(info) + ")");
  return rhs[x];
}

// Same resolvent entry from an existing decomposition:
// sum_j |phi_j(x)|^2 / (lambda_j - z).
inline std::complex<double> green_from_eig(const spectral_decomposition& dec,
                                           int x, std::complex<double> z) {
  std::complex<double> g = 0;
  for (int j = 0; j < dec.n; ++j) {
    double w = dec.vec(x, j) * dec.vec(x, j);
    g += w / (dec.values[j] - z);
  }
  return g;
}

}  // namespace regspec
