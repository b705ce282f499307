#ifndef QOCT_LINALG_HPP
#define QOCT_LINALG_HPP

// ---------------------------------------------------------------------------
// Dense complex matrix/vector substrate: Hermitian matrix exponentials,
// unitarity checks, and ordered propagator products.
//
// Everything is dimensionless: hbar = 1, and the leakage detuning sets the
// unit system (times in 1/detuning, amplitudes in units of the detuning).
// ---------------------------------------------------------------------------

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qoct {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct NonHermitianInput : std::invalid_argument {
  explicit NonHermitianInput(double defect)
      : std::invalid_argument("expm_hermitian: input is not Hermitian, max |H - H^dag| entry = " +
                              std::to_string(defect)) {}
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Max entry magnitude of A - A^dagger; 0 for exactly Hermitian inputs.
inline double hermiticity_defect(const ComplexMatrix& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

// Max entry magnitude of U^dagger U - I; 0 for exact unitaries.
inline double unitarity_defect(const ComplexMatrix& u) {
  ComplexMatrix d = u.adjoint() * u;
  d -= ComplexMatrix::Identity(u.cols(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

// exp(-i tau H) for Hermitian H via spectral decomposition. Valid for any tau;
// the only error source is the eigensolver itself.
inline ComplexMatrix expm_hermitian(const ComplexMatrix& h, double tau) {
  constexpr double kHermTol = 1e-12;
  const double defect = hermiticity_defect(h);
  if (defect > kHermTol) throw NonHermitianInput(defect);
  if (!std::isfinite(tau)) throw std::invalid_argument("expm_hermitian: non-finite time");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const RealVector& evals = es.eigenvalues();
  const ComplexMatrix& vecs = es.eigenvectors();
  StateVector phases(evals.size());
  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    phases(k) = std::exp(Complex(0.0, -tau * evals(k)));
  }
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

// Product of an application-ordered sequence: the first element acts first on
// states, i.e. result = ms[n-1] * ... * ms[1] * ms[0].
inline ComplexMatrix matmul_chain(const std::vector<ComplexMatrix>& ms) {
  if (ms.empty()) throw DimensionMismatch("matmul_chain: empty sequence");
  ComplexMatrix acc = ms.front();
  for (std::size_t j = 1; j < ms.size(); ++j) {
    if (ms[j].cols() != acc.rows()) {
      throw DimensionMismatch("matmul_chain: factor " + std::to_string(j) +
                              " has incompatible dimensions");
    }
    acc = ms[j] * acc;
  }
  return acc;
}

}  // namespace qoct

#endif  // QOCT_LINALG_HPP
