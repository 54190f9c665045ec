// SPDX-License-Identifier: Apache-2.0

#ifndef RRSIR_STIELTJES_HPP_
#define RRSIR_STIELTJES_HPP_

#include <complex>
#include <functional>

namespace rrsir {

using cd = std::complex<double>;

/// Stieltjes transform m(z) of the companion Marchenko-Pastur law: the root of
///   z m^2 + (z + 1 - c) m + 1 = 0
/// that is analytic off the support band with m(z) ~ -1/z at infinity and
/// Im m * Im z > 0 off the real axis.  Evaluated in the closed form
///   m(z) = -2 / (z + 1 - c + sqrt(z - b_minus) * sqrt(z - b_plus)),
/// principal square roots, which realizes that branch everywhere off the cut.
/// Throws BranchFailure for z on the cut (including z = 0 when c < 1, where
/// the companion law has an atom).
cd mp_stieltjes(cd z, double c);

/// dm/dz = m^2 / (1 - c m^2/(1+m)^2).  Throws SingularDerivative when the
/// denominator magnitude falls below 1e-12.
cd mp_stieltjes_derivative(cd z, double c);

/// A positively oriented (counterclockwise) circle.
struct ContourSpec {
    cd center{0.0, 0.0};
    double radius = 1.0;
    int nodes = 512;
};

struct ContourPair {
    ContourSpec inner;
    ContourSpec outer;
};

/// Circles around the support of F^c: center and half-width from the interval
/// [0, b_plus] when c > 1 (the atom at zero is part of the support) and
/// [b_minus, b_plus] otherwise; inner radius 1.25x and outer 1.6x half-width.
ContourPair default_contours(double c, int nodes = 512);

struct QuadratureResult {
    cd value{0.0, 0.0};
    double err_estimate = 0.0;  // |change| under node doubling
};

/// Trapezoid rule on the circle; spectrally accurate for integrands analytic
/// in an annulus around it.  Nodes sit at half-step angular offsets so none
/// coincides with the real axis crossings.  The returned error estimate is
/// the magnitude of the change when doubling the node count.
QuadratureResult contour_integrate(const std::function<cd(cd)>& f, const ContourSpec& spec);

/// As above but throws NonConvergent when the doubling estimate exceeds tol.
cd contour_integrate_checked(const std::function<cd(cd)>& f, const ContourSpec& spec,
                             double tol);

/// Iterated trapezoid approximation of the double contour integral with z1 on
/// the inner circle and z2 on the outer one (both counterclockwise).
QuadratureResult double_contour_integrate(const std::function<cd(cd, cd)>& f,
                                          const ContourSpec& inner, const ContourSpec& outer);

}  // namespace rrsir

#endif  // RRSIR_STIELTJES_HPP_
