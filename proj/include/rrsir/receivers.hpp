// SPDX-License-Identifier: Apache-2.0

#ifndef RRSIR_RECEIVERS_HPP_
#define RRSIR_RECEIVERS_HPP_

#include <Eigen/Dense>

#include "rrsir/model.hpp"

namespace rrsir {

enum class ReceiverKind { Mf, Mmse, Msw };

struct SirResult {
    int user = 0;  // zero-based index
    ReceiverKind receiver = ReceiverKind::Mf;
    int m = 1;  // stage count (MSW only)
    double value = 0.0;
};

/// R_k = sum_{j != k} p_j s_j s_j^* + sigma2 I as an explicit Hermitian matrix.
/// Intended for small-N validation; the SIR routines below use operator form.
Eigen::MatrixXcd interference_matrix(const Ensemble& e, int k, double sigma2);

/// Matched-filter SIR  beta_k = p_k (s_k^* s_k)^2 / (s_k^* R_k s_k).
SirResult mf_sir(const Ensemble& e, int k, double sigma2);

/// MMSE SIR  p_k s_k^* R_k^{-1} s_k via a Hermitian positive-definite solve.
SirResult mmse_sir(const Ensemble& e, int k, double sigma2);

/// Orthonormal basis of the Krylov span {s, Rs, ..., R^{m-1} s} by modified
/// Gram-Schmidt with one re-orthogonalization pass.  Throws DegenerateKrylov
/// (carrying the effective rank) when the sequence degenerates at relative
/// tolerance 1e-12.
Eigen::MatrixXcd krylov_basis(const Eigen::MatrixXcd& R, const Eigen::VectorXcd& s, int m);

/// Multistage Wiener SIR at stage m, computed with the orthonormalized Krylov
/// basis (the value is invariant to any invertible change of basis).  On
/// Krylov degeneracy the saturated value at the effective rank is returned.
SirResult msw_sir(const Ensemble& e, int k, int m, double sigma2);

/// SIR of an arbitrary linear receiver c:  p_k |c^* s_k|^2 / (c^* R_k c).
double generic_sir(const Ensemble& e, int k, const Eigen::VectorXcd& cvec, double sigma2);

/// sqrt(N) (beta_{km} - sir_limit(m, c_N, sigma2)), centered at the finite
/// ratio c_N = N/K.  Requires equal unit powers.
double msw_fluctuation(const Ensemble& e, int k, int m, double sigma2);

/// Matched-filter SIRs for every user at once (Gram-matrix route).
Eigen::VectorXd all_mf_sirs(const Ensemble& e, double sigma2);

/// sum_k (beta_k - 1/a_1)  with a_1 = sigma2 + 1/c_N; equal unit powers.
double mf_sum_statistic(const Ensemble& e, double sigma2);

/// sum_k (log(1+beta_k) - log(1 + 1/a_1)); equal unit powers.
double mf_mi_statistic(const Ensemble& e, double sigma2);

}  // namespace rrsir

#endif  // RRSIR_RECEIVERS_HPP_
