#include <cmath>
#include <random>

#include "doctest.h"
#include "qoct/linalg.hpp"

using namespace qoct;

namespace {

ComplexMatrix random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = Complex(u(rng), u(rng));
  return ComplexMatrix(0.5 * (a + a.adjoint()));
}

}  // namespace

TEST_CASE("expm of a diagonal Hamiltonian gives exact phases") {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 0) = -1.5;
  h(1, 1) = 0.25;
  h(2, 2) = 3.0;
  const double tau = 0.7;
  const ComplexMatrix u = expm_hermitian(h, tau);
  for (int k = 0; k < 3; ++k) {
    const Complex expected = std::exp(Complex(0.0, -tau * h(k, k).real()));
    CHECK(std::abs(u(k, k) - expected) < 1e-14);
  }
  CHECK(u(0, 1) == Complex(0.0, 0.0));
}

TEST_CASE("expm of the qubit flip generator matches the closed form") {
  // exp(-i tau X) = cos(tau) I - i sin(tau) X for X = [[0,1],[1,0]].
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  const double tau = 3.141592653589793 / 2.0;
  const ComplexMatrix u = expm_hermitian(x, tau);
  CHECK(std::abs(u(0, 0) - Complex(std::cos(tau), 0.0)) < 1e-14);
  CHECK(std::abs(u(0, 1) - Complex(0.0, -std::sin(tau))) < 1e-14);
  CHECK(std::abs(u(1, 0) - Complex(0.0, -std::sin(tau))) < 1e-14);
  CHECK(std::abs(u(1, 1) - Complex(std::cos(tau), 0.0)) < 1e-14);
}

TEST_CASE("expm rejects non-Hermitian and non-finite input") {
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;  // missing the conjugate partner
  CHECK_THROWS_AS(expm_hermitian(bad, 1.0), NonHermitianInput);

  const ComplexMatrix ok = random_hermitian(3, 7);
  CHECK_THROWS_AS(expm_hermitian(ok, std::nan("")), std::invalid_argument);
}

TEST_CASE("expm of random Hermitian matrices is unitary") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const ComplexMatrix h = random_hermitian(3, seed);
    const ComplexMatrix u = expm_hermitian(h, 0.3 + 0.1 * static_cast<double>(seed));
    CHECK(unitarity_defect(u) < 1e-13);
  }
}

TEST_CASE("expm composes over time for a fixed generator") {
  const ComplexMatrix h = random_hermitian(3, 42);
  const ComplexMatrix u1 = expm_hermitian(h, 0.4);
  const ComplexMatrix u2 = expm_hermitian(h, 1.1);
  const ComplexMatrix u3 = expm_hermitian(h, 1.5);
  CHECK((ComplexMatrix(u2 * u1) - u3).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("matmul_chain multiplies in application order") {
  ComplexMatrix a = random_hermitian(3, 11);
  ComplexMatrix b = random_hermitian(3, 12);
  const ComplexMatrix chained = matmul_chain({a, b});
  CHECK((chained - ComplexMatrix(b * a)).cwiseAbs().maxCoeff() < 1e-14);
  // Order matters for these two.
  CHECK((ComplexMatrix(b * a) - ComplexMatrix(a * b)).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("matmul_chain rejects empty and ragged sequences") {
  CHECK_THROWS_AS(matmul_chain({}), DimensionMismatch);
  ComplexMatrix a = ComplexMatrix::Identity(3, 3);
  ComplexMatrix b = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(matmul_chain({a, b}), DimensionMismatch);
}

TEST_CASE("defect helpers report zero on exact inputs") {
  const ComplexMatrix h = random_hermitian(3, 5);
  CHECK(hermiticity_defect(h) == 0.0);
  CHECK(unitarity_defect(ComplexMatrix::Identity(3, 3)) == 0.0);

  ComplexMatrix skew = h;
  skew(0, 1) += Complex(0.0, 1e-3);
  CHECK(hermiticity_defect(skew) > 1e-4);
}
