// SPDX-License-Identifier: Apache-2.0

#ifndef RRSIR_MP_MOMENTS_HPP_
#define RRSIR_MP_MOMENTS_HPP_

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rrsir {

using Rational = boost::multiprecision::cpp_rational;

/// Exact rational from a double (every finite double is a dyadic rational).
Rational rational_from_double(double x);

/// r-th moment of the Marchenko-Pastur law F^c (the limiting ESD of
/// c_N * S S^*), via the Narayana sum
///   M_r = sum_{k=0}^{r-1} c^k/(k+1) * C(r,k) * C(r-1,k),   M_0 = 1.
Rational mp_moment_exact(int r, const Rational& c);
double mp_moment(int r, double c);

/// Scaled moment h_u = c^(-u) * M_u, the u-th moment of the law of x/c
/// for x ~ F^c.
Rational scaled_h_exact(int u, const Rational& c);
double scaled_h(int u, double c);

/// Shifted moment a_m = sum_u C(m,u) * sigma2^(m-u) * h_u, i.e. the m-th
/// moment of (x + sigma2) under the h-scaled law.
Rational shifted_a_exact(int m, const Rational& c, const Rational& sigma2);
double shifted_a(int m, double c, double sigma2);

/// Raw, scaled and shifted moments for one (c, sigma2), built in exact
/// rational arithmetic and converted to double at the boundary.
struct MomentTable {
    double c = 1.0;
    double sigma2 = 0.0;
    int max_degree = 0;
    std::vector<double> M;  // M[r], r = 0..max_degree
    std::vector<double> h;  // h[u]
    std::vector<double> a;  // a[m]

    static MomentTable build(double c, double sigma2, int max_degree);
};

struct SupportInfo {
    double lower = 0.0;         // (1 - sqrt(c))^2
    double upper = 0.0;         // (1 + sqrt(c))^2
    double atom_at_zero = 0.0;  // max(0, 1 - 1/c)
};

SupportInfo mp_support(double c);

}  // namespace rrsir

#endif  // RRSIR_MP_MOMENTS_HPP_
