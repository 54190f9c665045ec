// SPDX-License-Identifier: Apache-2.0

#include "rrsir/stieltjes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rrsir/errors.hpp"
#include "rrsir/mp_moments.hpp"

namespace rrsir {

namespace {

constexpr double kPi = std::numbers::pi;

cd trapezoid_circle(const std::function<cd(cd)>& f, const ContourSpec& spec, int n) {
    // Half-step angular offset keeps nodes off the real-axis crossings.
    cd sum{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        const double theta = 2.0 * kPi * (j + 0.5) / n;
        const cd e{std::cos(theta), std::sin(theta)};
        const cd z = spec.center + spec.radius * e;
        sum += f(z) * e;
    }
    return sum * cd{0.0, 1.0} * (spec.radius * 2.0 * kPi / static_cast<double>(n));
}

}  // namespace

cd mp_stieltjes(cd z, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("mp_stieltjes: c must be positive");
    const SupportInfo sup = mp_support(c);
    if (z.imag() == 0.0) {
        const double x = z.real();
        const bool on_cut = x >= sup.lower - 1e-300 && x <= sup.upper;
        const bool on_atom = c < 1.0 && x == 0.0;
        if (on_cut || on_atom)
            throw BranchFailure("mp_stieltjes: z lies on the spectrum");
    }
    // sqrt(z - b_minus) * sqrt(z - b_plus) with principal branches is analytic
    // off [b_minus, b_plus] and ~ z at infinity, so
    //   m(z) = -2 / (z + 1 - c + sqrt(z - b-) sqrt(z - b+))
    // is the branch with m ~ -1/z and Im m * Im z > 0.  The companion atom at
    // z = 0 (c < 1) appears as a genuine pole of this expression.
    const cd f = std::sqrt(z - sup.lower) * std::sqrt(z - sup.upper);
    const cd denom = z + (1.0 - c) + f;
    const cd m = -2.0 / denom;
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
        throw BranchFailure("mp_stieltjes: branch evaluation failed");
    return m;
}

cd mp_stieltjes_derivative(cd z, double c) {
    const cd m = mp_stieltjes(z, c);
    const cd om = 1.0 + m;
    const cd denom = 1.0 - c * m * m / (om * om);
    if (std::abs(denom) < 1e-12)
        throw SingularDerivative("mp_stieltjes_derivative: denominator near zero");
    return m * m / denom;
}

ContourPair default_contours(double c, int nodes) {
    const SupportInfo sup = mp_support(c);
    // The support of the spectral law includes the atom at 0 when c > 1.
    const double lo = c > 1.0 ? 0.0 : sup.lower;
    const double hi = sup.upper;
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    ContourPair pair;
    pair.inner = ContourSpec{cd{center, 0.0}, 1.25 * half, nodes};
    pair.outer = ContourSpec{cd{center, 0.0}, 1.60 * half, nodes};
    return pair;
}

QuadratureResult contour_integrate(const std::function<cd(cd)>& f, const ContourSpec& spec) {
    if (spec.nodes < 16) throw std::invalid_argument("contour_integrate: nodes must be >= 16");
    const cd coarse = trapezoid_circle(f, spec, spec.nodes);
    const cd fine = trapezoid_circle(f, spec, 2 * spec.nodes);
    return {fine, std::abs(fine - coarse)};
}

cd contour_integrate_checked(const std::function<cd(cd)>& f, const ContourSpec& spec,
                             double tol) {
    const QuadratureResult r = contour_integrate(f, spec);
    if (r.err_estimate > tol)
        throw NonConvergent("contour_integrate: node doubling changed the result by " +
                            std::to_string(r.err_estimate));
    return r.value;
}

QuadratureResult double_contour_integrate(const std::function<cd(cd, cd)>& f,
                                          const ContourSpec& inner, const ContourSpec& outer) {
    if (!(inner.radius < outer.radius))
        throw std::invalid_argument("double_contour_integrate: inner radius must be smaller");
    const auto eval = [&](int n_in, int n_out) {
        std::vector<cd> zi(n_in), ei(n_in);
        for (int j = 0; j < n_in; ++j) {
            const double t = 2.0 * kPi * (j + 0.5) / n_in;
            ei[j] = cd{std::cos(t), std::sin(t)};
            zi[j] = inner.center + inner.radius * ei[j];
        }
        cd total{0.0, 0.0};
        for (int l = 0; l < n_out; ++l) {
            const double t = 2.0 * kPi * (l + 0.5) / n_out;
            const cd eo{std::cos(t), std::sin(t)};
            const cd z2 = outer.center + outer.radius * eo;
            cd row{0.0, 0.0};
            for (int j = 0; j < n_in; ++j) row += f(zi[j], z2) * ei[j];
            total += row * eo;
        }
        const cd jac = cd{0.0, 1.0} * (inner.radius * 2.0 * kPi / n_in) * cd{0.0, 1.0} *
                       (outer.radius * 2.0 * kPi / n_out);
        return total * jac;
    };
    const cd coarse = eval(inner.nodes, outer.nodes);
    const cd fine = eval(2 * inner.nodes, 2 * outer.nodes);
    return {fine, std::abs(fine - coarse)};
}

}  // namespace rrsir
