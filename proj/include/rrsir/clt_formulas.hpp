// SPDX-License-Identifier: Apache-2.0
//
// Every asymptotic prediction used by the simulation harness: the
// deterministic multistage-Wiener SIR limit (Hankel system in the shifted
// moments), the large-system MMSE fixed point, the Gaussian fluctuation law of
// the MSW SIR, the mean/variance of the matched-filter SIR sum and of the sum
// mutual information, and the mean/covariance of eigenvalue and
// eigenvector-weighted linear spectral statistics (closed combinatorial forms
// plus contour-integral evaluations).

#ifndef RRSIR_CLT_FORMULAS_HPP_
#define RRSIR_CLT_FORMULAS_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rrsir/stieltjes.hpp"

namespace rrsir {

enum class StatisticKind { MswSir, MfSum, MfMi, LssEig, LssVec };

const char* statistic_name(StatisticKind kind);
StatisticKind statistic_from_name(const std::string& name);

enum class Realness { RealEntries, ComplexEntries };

/// Moment matrix system behind the deterministic MSW SIR limit:
/// b = (1, a_1, ..., a_{m-1}), B_{ij} = a_{i+j-1}, d = B^{-1} b,
/// sir_limit = b . d.
struct HankelSystem {
    int m = 1;
    Eigen::VectorXd b;
    Eigen::MatrixXd B;
    Eigen::VectorXd d;
    double sir_limit = 0.0;
};

/// Throws IllConditioned when B's relative smallest eigenvalue is below 1e-12
/// (the system saturates as m grows and becomes genuinely near-singular).
HankelSystem hankel_system(int m, double c, double sigma2);

/// Unique positive root of beta = 1 / (sigma2 + (1/c)/(1+beta)), the
/// large-system MMSE SIR for equal unit powers; upper bound for sir_limit.
/// Requires sigma2 > 0 or c < 1.
double mmse_limit(double c, double sigma2);

/// Covariance of the limiting Gaussian vector (zeta_0, ..., zeta_{2m-1}) of
/// centered quadratic forms s* R^i s.  Building blocks:
///   zeta_i = sum_u C(i,u) sigma2^(i-u) xi_u,      zeta_0 = xi_0 = X,
///   Cov(xi_u, xi_v) = (E|v|^4 - 1) h_u h_v + (h_{u+v} - h_u h_v),
/// where X ~ N(0, E|v|^4 - 1) is the squared-norm fluctuation and the second
/// term is the norm-conditioned quadratic-form covariance for complex entries
/// with E v^2 = 0 (equal to (E|v|^4 - 2) h_u h_v + h_{u+v}).
struct ZetaCovariance {
    int m = 1;
    double var_x = 0.0;   // E|v|^4 - 1
    Eigen::MatrixXd cov;  // (2m) x (2m)
};

ZetaCovariance zeta_covariance(int m, double c, double sigma2, double fourth_moment);

struct CltPrediction {
    StatisticKind statistic = StatisticKind::MswSir;
    double mean = 0.0;
    double variance = 0.0;
    std::string provenance;
};

/// Limit law of sqrt(N) (beta_{1m} - sir_limit): centered Gaussian
///   y = 2 sum_i d_i zeta_{i-1} - sum_{i,j} d_i d_j zeta_{i+j-1},
/// variance assembled from zeta_covariance.  Complex entry kinds only.
CltPrediction msw_fluct_prediction(int m, double c, double sigma2, double fourth_moment);

/// Mean of sum_k (beta_k - 1/a_1) under the matched filter, as displayed in
/// the source result:
///   mu = (2 E|v|^4 - 3) / (c a_1^2) + 1 / (c^2 a_1^3),  a_1 = sigma2 + 1/c.
double mf_sum_mean(double c, double sigma2, double fourth_moment);

/// The same mean obtained from the exact finite-N expectations
/// (E Tr C = K and E Tr C^2 - (1+1/c)K -> (E|v|^4-2)/c):
///   mu = 1/(c a_1^2) + 1/(c^2 a_1^3),
/// which is fourth-moment free and agrees with mf_sum_mean only when
/// E|v|^4 = 2.  Desk-scale simulation follows this value; both are reported.
double mf_sum_mean_direct(double c, double sigma2);

/// Limiting variance tau^2 of the matched-filter SIR sum (three-term form).
/// Throws NegativeVariance if the expression evaluates below zero.
double mf_sum_variance(double c, double sigma2, double fourth_moment);

/// Mean/variance of sum_k (log(1+beta_k) - log(1+1/a_1)) as displayed:
///   mu_1 = mu / (1 + 1/a_1) - (2(E|v|^4-2) a_1^2 + 2(1+1/c)/c + sigma2^2
///          + 2 sigma2/c) / (c a_1^4 (1 + 1/a_1)^2),
///   tau_1^2 = tau^2 / (1 + 1/a_1)^2.
CltPrediction mf_mi_params(double c, double sigma2, double fourth_moment);

/// Second-order-expansion value of the mutual-information mean:
///   mu_1 = mu_direct/(1+1/a_1) - (a_2 + (E|v|^4-2) a_1^2)
///          / (2 c a_1^4 (1+1/a_1)^2),
/// using sum_k E(beta_k - 1/a_1)^2 -> (a_2 + (E|v|^4-2) a_1^2)/(c a_1^4).
/// This is what desk-scale simulation reproduces.
double mf_mi_mean_direct(double c, double sigma2, double fourth_moment);

// --- eigenvalue linear spectral statistics (sum g(lambda_i), centered) ---

/// Closed combinatorial value of the fourth-moment mean integral for
/// g(x) = x^r:
///   c^{1+r} sum_j C(r,j) ((1-c)/c)^j [ C(2r-j, r-1) - C(2r+1-j, r-1) ].
/// The complex-case LSS mean is -(E|v|^4 - 2) times this value.
double lss_mean_correction_closed(int r, double c);

/// Closed value of the fourth-moment covariance term for monomials:
///   c^{r1+r2+1} T(r1) T(r2),  T(r) = sum_j C(r,j) ((1-c)/c)^j C(2r-j, r-1).
/// Enters the covariance with weight (E v^4 - 3) (real) or (E|v|^4 - 2)
/// (complex).
double lss_cov_correction_closed(int r1, int r2, double c);

/// Contour evaluation of the real-case base mean term (sign included):
///   -(1/2 pi i) \oint z^r c m^3(z) (1+m)^{-3} / (1 - c m^2/(1+m)^2) dz.
double lss_mean_base_numeric(int r, double c, const ContourSpec* contour = nullptr);

/// Contour evaluation of the fourth-moment mean integral (the quantity whose
/// closed form is lss_mean_correction_closed); for the identity weight matrix
/// it equals -lss_mean_base_numeric.
double lss_mean_correction_numeric(int r, double c, const ContourSpec* contour = nullptr);

/// Base covariance by double contour quadrature:
///   coeff * \oint\oint z1^{r1} z2^{r2} m'(z1) m'(z2) / (m(z1)-m(z2))^2,
/// coeff = -1/(2 pi^2) for real entries and -1/(4 pi^2) for complex ones.
double lss_cov_base_numeric(int r1, int r2, double c, Realness realness,
                            const ContourPair* contours = nullptr);

/// Contour evaluation of the fourth-moment covariance term (factorizes into
/// two single contour integrals of z^r d/dz [m/(1+m)]).
double lss_cov_correction_numeric(int r1, int r2, double c,
                                  const ContourSpec* contour = nullptr);

/// Prediction for sum_r (sum_i lambda_i^r - N M_r), summed over the listed
/// monomial degrees (polynomial g by linearity).  Mean: real case
/// base + (Ev^4-3) * (-correction); complex case (E|v|^4-2) * (-correction).
/// Covariance: base + fourth-moment term, summed bilinearly over degrees.
CltPrediction lss_prediction(const std::vector<int>& degrees, double c,
                             double fourth_moment, Realness realness);

// --- eigenvector-weighted linear spectral statistics ---

/// Covariance of the limiting Gaussian vector of sqrt(N)-scaled
/// eigenvector-weighted monomial statistics, by double contour quadrature of
///   (z2 m(z2) - z1 m(z1))^2 / (c z1 z2 (z2 - z1)(m(z2) - m(z1)))
/// times z1^{r1} z2^{r2} and -1/(2 pi^2); halved for complex entries.
/// For r1 = r2 = 1 this equals c (real: 2c).
double eigvec_lss_covariance(int r1, int r2, double c, Realness realness,
                             const ContourPair* contours = nullptr);

}  // namespace rrsir

#endif  // RRSIR_CLT_FORMULAS_HPP_
