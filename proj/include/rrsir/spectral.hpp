// SPDX-License-Identifier: Apache-2.0

#ifndef RRSIR_SPECTRAL_HPP_
#define RRSIR_SPECTRAL_HPP_

#include <Eigen/Dense>

#include "rrsir/model.hpp"

namespace rrsir {

/// Ascending eigenvalues of A_N = c_N S S^* (unit powers assumed).
Eigen::VectorXd eigenvalues(const Ensemble& e);

/// Eigenvalue linear spectral statistic sum_i lambda_i^r - N M_r(c_N).
/// Degrees 1 and 2 are computed from traces (Frobenius norms) without an
/// eigendecomposition so exact-moment oracles apply; higher degrees use the
/// spectrum.
double lss_eigenvalue(const Ensemble& e, int r);

/// Eigenvector-weighted statistic sqrt(N) (x^* A_N^r x - M_r(c_N)) by
/// repeated matrix-vector products.  Requires ||x|| = 1 and the spread
/// condition max_i |x_i| <= 5/sqrt(N); throws XNotSpread otherwise.
double lss_eigenvector(const Ensemble& e, const Eigen::VectorXcd& x, int r);

/// Centered, sqrt(N)-scaled quadratic forms of s_k against powers of R_k:
/// entries d = 0..max_degree of sqrt(N) (s_k^* R_k^d s_k - N^{-1} Tr R_k^d).
/// Traces of R_k powers come from the Gram spectrum of the interferers.
Eigen::VectorXd quadratic_form_moments(const Ensemble& e, int k, int max_degree,
                                       double sigma2);

}  // namespace rrsir

#endif  // RRSIR_SPECTRAL_HPP_
