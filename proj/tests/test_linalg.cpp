#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <regspec/linalg.hpp>
#include <regspec/measures.hpp>
#include <regspec/rng.hpp>

using namespace regspec;

TEST_CASE("identity matrix decomposes trivially", "[linalg]") {
  sym_matrix a(3);
  for (int i = 0; i < 3; ++i) a.set(i, i, 1.0);
  spectral_decomposition dec = eig_sym(a);
  for (double v : dec.values) CHECK(v == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("2x2 closed form", "[linalg]") {
  // [[1, 2], [2, -1]]: eigenvalues +-sqrt(5).
  sym_matrix a(2);
  a.set(0, 0, 1.0);
  a.set(0, 1, 2.0);
  a.set(1, 1, -1.0);
  spectral_decomposition dec = eig_sym(a);
  CHECK(dec.values[0] == Catch::Approx(-std::sqrt(5.0)).epsilon(1e-13));
  CHECK(dec.values[1] == Catch::Approx(std::sqrt(5.0)).epsilon(1e-13));
}

TEST_CASE("cycle graph C8 has cosine spectrum", "[linalg]") {
  const int n = 8;
  sym_matrix a(n);
  for (int i = 0; i < n; ++i) a.set(i, (i + 1) % n, 1.0);
  spectral_decomposition dec = eig_sym(a);
  std::vector<double> expect;
  for (int k = 0; k < n; ++k) expect.push_back(2.0 * std::cos(2.0 * pi * k / n));
  std::sort(expect.begin(), expect.end());
  for (int i = 0; i < n; ++i)
    CHECK(dec.values[i] == Catch::Approx(expect[i]).margin(1e-12));
}

TEST_CASE("complete graph K4: degenerate eigenvalue handled", "[linalg]") {
  sym_matrix a(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) a.set(i, j, 1.0);
  spectral_decomposition dec = eig_sym(a);
  for (int i = 0; i < 3; ++i)
    CHECK(dec.values[i] == Catch::Approx(-1.0).margin(1e-13));
  CHECK(dec.values[3] == Catch::Approx(3.0).margin(1e-13));
  // Eigenvectors of the degenerate subspace must still be orthonormal rows.
  for (int x = 0; x < 4; ++x) {
    double s = 0;
    for (int j = 0; j < 4; ++j) s += sq(dec.vec(x, j));
    CHECK(s == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("tridiagonal solver matches the dense one", "[linalg]") {
  std::vector<double> diag = {0.3, -0.1, 0.7, 0.0};
  std::vector<double> off = {0.5, 0.25, 0.9};
  spectral_decomposition t = eig_tridiag(diag, off);
  sym_matrix a(4);
  for (int i = 0; i < 4; ++i) a.set(i, i, diag[i]);
  for (int i = 0; i < 3; ++i) a.set(i, i + 1, off[i]);
  spectral_decomposition d = eig_sym(a);
  for (int i = 0; i < 4; ++i)
    CHECK(t.values[i] == Catch::Approx(d.values[i]).margin(1e-12));
}

TEST_CASE("resolvent via LU agrees with the eigendecomposition", "[linalg]") {
  rng gen(5);
  const int n = 30;
  sym_matrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, gen.uniform(-1.0, 1.0));
  spectral_decomposition dec = eig_sym(a);
  std::complex<double> z(0.3, 0.2);
  for (int x : {0, 7, n - 1}) {
    std::complex<double> lu = green_solve(a, x, z);
    std::complex<double> ev = green_from_eig(dec, x, z);
    CHECK(std::abs(lu - ev) < 1e-11);
    CHECK(lu.imag() > 0.0);  // Herglotz
  }
}

TEST_CASE("trace and frobenius helpers", "[linalg]") {
  sym_matrix a(3);
  a.set(0, 0, 2.0);
  a.set(0, 1, -1.0);
  a.set(2, 2, 5.0);
  CHECK(a.trace() == Catch::Approx(7.0));
  CHECK(a.frobenius_sq() == Catch::Approx(4.0 + 2.0 * 1.0 + 25.0));
}
