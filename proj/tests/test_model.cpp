#include <cmath>

#include "doctest.h"
#include "qoct/model.hpp"

using namespace qoct;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_CASE("rotating-frame Hamiltonian has the documented matrix elements") {
  ModelParams p;
  p.delta_omega = 1.0;
  p.coupling_scale = 1.0;
  const double lambda = 0.37;
  const ComplexMatrix h = rwa_hamiltonian(p, lambda);

  CHECK(hermiticity_defect(h) == 0.0);
  CHECK(h(0, 0) == Complex(0.0, 0.0));
  CHECK(h(1, 1) == Complex(0.0, 0.0));
  CHECK(h(2, 2).real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(h(0, 1).real() == doctest::Approx(lambda).epsilon(1e-15));
  CHECK(h(1, 2).real() == doctest::Approx(std::sqrt(2.0) * lambda).epsilon(1e-15));
  CHECK(h(0, 2) == Complex(0.0, 0.0));
}

TEST_CASE("coupling_scale = 0 removes the leakage coupling") {
  ModelParams p;
  p.coupling_scale = 0.0;
  const ComplexMatrix h = rwa_hamiltonian(p, 0.9);
  CHECK(h(1, 2) == Complex(0.0, 0.0));
  CHECK(h(2, 1) == Complex(0.0, 0.0));
}

TEST_CASE("drive generator has eigenvalues 0 and +-sqrt(3)") {
  // With the full sqrt(2) leakage element the control generator's spectrum is
  // {-sqrt(3), 0, sqrt(3)}: the characteristic polynomial is l^3 - 3l.
  ModelParams p;
  const ComplexMatrix x = drive_generator(p);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(x);
  const RealVector ev = es.eigenvalues();
  CHECK(ev(0) == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-12));
  CHECK(ev(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev(2) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  // And it is exactly dH/dlambda.
  const ComplexMatrix diff = rwa_hamiltonian(p, 1.0) - rwa_hamiltonian(p, 0.0);
  CHECK((diff - x).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("target gate is the unitary qubit flip that fixes the leakage level") {
  const ComplexMatrix u = target_not_gate();
  CHECK(unitarity_defect(u) == 0.0);
  CHECK(u(0, 1) == Complex(1.0, 0.0));
  CHECK(u(1, 0) == Complex(1.0, 0.0));
  CHECK(u(2, 2) == Complex(1.0, 0.0));
  CHECK(u(0, 0) == Complex(0.0, 0.0));
  // Involution: applying the flip twice is the identity.
  CHECK((ComplexMatrix(u * u) - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parameter validation rejects unphysical settings") {
  ModelParams p;
  p.delta_omega = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.delta_omega = 1.0;
  p.coupling_scale = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.coupling_scale = 1.0;
  CHECK_NOTHROW(p.validate());
  p.epsilon = -3.0;
  CHECK_THROWS_AS(p.validate_lab(), std::invalid_argument);
}

TEST_CASE("lab-frame Hamiltonian carries the carrier and the shifted leakage level") {
  ModelParams p;
  p.delta_omega = 1.0;
  p.epsilon = 30.0;
  const double lambda = 0.4;

  const ComplexMatrix h0 = lab_hamiltonian(p, lambda, 0.0);
  CHECK(h0(0, 0).real() == doctest::Approx(-30.0).epsilon(1e-15));
  CHECK(h0(1, 1).real() == doctest::Approx(30.0).epsilon(1e-15));
  CHECK(h0(2, 2).real() == doctest::Approx(3.0 * 30.0 - 1.0).epsilon(1e-15));
  // cos(0) = 1, so the drive entry at t = 0 is the full carrier amplitude.
  CHECK(h0(0, 1).real() == doctest::Approx(2.0 * lambda).epsilon(1e-15));

  // A quarter carrier period later the drive passes through zero.
  const double t_zero = kPi / (4.0 * p.epsilon);
  const ComplexMatrix hq = lab_hamiltonian(p, lambda, t_zero);
  CHECK(std::abs(hq(0, 1)) < 1e-14);
}

TEST_CASE("rotating-frame transform is a diagonal unitary with the expected phases") {
  ModelParams p;
  p.epsilon = 20.0;
  const ComplexMatrix v0 = rotating_frame_transform(p, 0.0);
  CHECK((v0 - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);

  const double t = 0.123;
  const ComplexMatrix v = rotating_frame_transform(p, t);
  CHECK(unitarity_defect(v) < 1e-15);
  CHECK(std::abs(v(0, 0) - std::exp(Complex(0.0, p.epsilon * t))) < 1e-15);
  CHECK(std::abs(v(1, 1) - std::exp(Complex(0.0, -p.epsilon * t))) < 1e-15);
  CHECK(std::abs(v(2, 2) - std::exp(Complex(0.0, -3.0 * p.epsilon * t))) < 1e-15);
}

TEST_CASE("carrier-period average of the frame-transformed lab Hamiltonian is the rotating-frame one") {
  // H_R(t) = V^dag H_lab V - D splits into the static rotating-frame part and
  // terms oscillating at 4 eps. Averaging over one full period of the
  // oscillation (pi / (2 eps)) with the trapezoid rule kills the oscillating
  // part to machine precision, leaving exactly rwa_hamiltonian(lambda).
  ModelParams p;
  p.delta_omega = 1.0;
  p.epsilon = 25.0;
  const double lambda = 0.6;

  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = -p.epsilon;
  d(1, 1) = p.epsilon;
  d(2, 2) = 3.0 * p.epsilon;

  const double period = kPi / (2.0 * p.epsilon);
  const int n = 256;
  ComplexMatrix avg = ComplexMatrix::Zero(3, 3);
  for (int k = 0; k < n; ++k) {  // trapezoid on a periodic integrand = uniform sum
    const double t = period * static_cast<double>(k) / n;
    const ComplexMatrix v = rotating_frame_transform(p, t);
    avg += v.adjoint() * lab_hamiltonian(p, lambda, t) * v - d;
  }
  avg /= static_cast<double>(n);

  const ComplexMatrix expected = rwa_hamiltonian(p, lambda);
  CHECK((avg - expected).cwiseAbs().maxCoeff() < 1e-12);
}
