#ifndef QOCT_DETAIL_EIG3_HPP
#define QOCT_DETAIL_EIG3_HPP

// Internal fast path for the 3x3 real-symmetric Hamiltonians of this model:
// spectral decomposition plus exp(-i tau H) reconstruction without dynamic
// allocation. The generic expm_hermitian in linalg.hpp is the reference
// implementation; these two must agree (covered by the propagation tests).

#include <Eigen/Dense>
#include <complex>

namespace qoct::detail {

struct Eig3 {
  Eigen::Vector3d evals;
  Eigen::Matrix3d evecs;
};

inline Eig3 eig_real_sym(const Eigen::Matrix3d& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

inline Eigen::Matrix3cd expm_from_eig(const Eig3& eig, double tau) {
  Eigen::Vector3cd phases;
  for (int k = 0; k < 3; ++k) {
    phases(k) = std::exp(std::complex<double>(0.0, -tau * eig.evals(k)));
  }
  return eig.evecs.cast<std::complex<double>>() * phases.asDiagonal() *
         eig.evecs.transpose().cast<std::complex<double>>();
}

// Drift + lambda * drive as a dense real symmetric matrix.
inline Eigen::Matrix3d rwa_hamiltonian_real(double delta_omega, double coupling_scale,
                                            double lambda) {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  h(2, 2) = -delta_omega;
  h(0, 1) = h(1, 0) = lambda;
  const double leak = coupling_scale * 1.4142135623730951 * lambda;
  h(1, 2) = h(2, 1) = leak;
  return h;
}

}  // namespace qoct::detail

#endif  // QOCT_DETAIL_EIG3_HPP
