// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "rrsir/errors.hpp"
#include "rrsir/model.hpp"
#include "rrsir/stieltjes.hpp"

using namespace rrsir;

namespace {
const cd kTwoPiI{0.0, 2.0 * std::numbers::pi};
}

TEST_CASE("defining identity z = -1/m + c/(1+m)") {
    for (const double c : {0.5, 1.0, 2.0}) {
        const cd z{5.0, 1.0};
        const cd m = mp_stieltjes(z, c);
        CHECK(std::abs(z * m * m + (z + 1.0 - c) * m + 1.0) < 1e-12);
        CHECK(std::abs(z + 1.0 / m - c / (1.0 + m)) < 1e-12);
    }
}

TEST_CASE("asymptote m ~ -1/z for large real z") {
    const cd m = mp_stieltjes(cd{1e6, 0.0}, 1.0);
    CHECK(std::abs(m + 1e-6) < 1e-11);
}

TEST_CASE("fixed-point oracle at z = 2i, c = 1") {
    const cd z{0.0, 2.0};
    cd m{0.0, 0.5};
    for (int it = 0; it < 200; ++it) m = 1.0 / (-z + 1.0 / (1.0 + m));
    CHECK(std::abs(mp_stieltjes(z, 1.0) - m) < 1e-13);
}

TEST_CASE("branch: Im m > 0 in the upper half-plane, conjugate symmetry") {
    const RngStream stream(4, 0);
    for (const double c : {0.5, 1.0, 2.0}) {
        for (int j = 0; j < 1000; ++j) {
            const auto u = stream.uniform_pair(j, 0);
            const cd z{-6.0 + 14.0 * u[0], 1e-3 + 6.0 * u[1]};
            const cd m = mp_stieltjes(z, c);
            CHECK(m.imag() > 0.0);
            const cd mc = mp_stieltjes(std::conj(z), c);
            CHECK(std::abs(mc - std::conj(m)) < 1e-14 * (1.0 + std::abs(m)));
        }
    }
}

TEST_CASE("points on the spectrum raise BranchFailure") {
    CHECK_THROWS_AS(mp_stieltjes(cd{2.0, 0.0}, 1.0), BranchFailure);
    CHECK_THROWS_AS(mp_stieltjes(cd{0.0, 0.0}, 0.5), BranchFailure);  // companion atom
    CHECK_NOTHROW(mp_stieltjes(cd{0.05, 0.0}, 0.5));  // off the bulk, c < 1
    CHECK_NOTHROW(mp_stieltjes(cd{-0.1, 0.0}, 2.0));
}

TEST_CASE("derivative matches a central finite difference") {
    const cd z{3.0, 2.0};
    const double c = 0.5, h = 1e-5;
    const cd fd = (mp_stieltjes(z + h, c) - mp_stieltjes(z - h, c)) / (2.0 * h);
    const cd d = mp_stieltjes_derivative(z, c);
    CHECK(std::abs(d - fd) / std::abs(d) < 1e-6);
}

TEST_CASE("derivative asymptote ~ 1/z^2 far out") {
    const cd d = mp_stieltjes_derivative(cd{1e4, 0.0}, 1.0);
    CHECK(std::abs(d - 1e-8) / 1e-8 < 1e-3);
}

TEST_CASE("derivative agrees with implicit differentiation of the quadratic") {
    const cd z{5.0, 0.0};
    const double c = 2.0;
    const cd m = mp_stieltjes(z, c);
    // z m^2 + (z+1-c) m + 1 = 0  =>  m' = -(m^2 + m) / (2 z m + z + 1 - c).
    const cd implicit = -(m * m + m) / (2.0 * z * m + z + 1.0 - c);
    CHECK(std::abs(mp_stieltjes_derivative(z, c) - implicit) < 1e-10);
}

TEST_CASE("contour quadrature: residues and analytic integrands") {
    const ContourSpec unit{cd{0.0, 0.0}, 1.0, 64};
    auto r = contour_integrate([](cd z) { return 1.0 / z; }, unit);
    CHECK(std::abs(r.value - kTwoPiI) < 1e-12);
    r = contour_integrate([](cd z) { return z; }, unit);
    CHECK(std::abs(r.value) < 1e-12);
    r = contour_integrate([](cd z) { return 1.0 / (z - 0.5); }, unit);
    CHECK(std::abs(r.value - kTwoPiI) < 1e-12);
    CHECK(r.err_estimate < 1e-12);
    CHECK_THROWS_AS(
        contour_integrate_checked([](cd z) { return std::abs(z.real()); }, unit, 1e-10),
        NonConvergent);
}

TEST_CASE("double contour: nesting and orientation") {
    const ContourSpec inner{cd{0.0, 0.0}, 1.0, 128};
    const ContourSpec outer{cd{0.0, 0.0}, 2.0, 128};
    auto r = double_contour_integrate([](cd z1, cd z2) { return 1.0 / (z1 * z2); }, inner, outer);
    CHECK(std::abs(r.value - kTwoPiI * kTwoPiI) < 1e-10);

    // 1/(z2 - z1): the inner z2-residue is the constant 2*pi*i, whose z1
    // integral vanishes.  The z1-pole variant is the orientation-sensitive one.
    r = double_contour_integrate([](cd z1, cd z2) { return 1.0 / (z2 - z1); }, inner, outer);
    CHECK(std::abs(r.value) < 1e-10);
    r = double_contour_integrate([](cd z1, cd z2) { return 1.0 / (z1 * (z2 - z1)); }, inner,
                                 outer);
    CHECK(std::abs(r.value - kTwoPiI * kTwoPiI) < 1e-10);
}

TEST_CASE("default contours enclose the support with margin") {
    for (const double c : {0.25, 0.5, 1.0, 2.0, 4.0, 9.0}) {
        const ContourPair pair = default_contours(c);
        const SupportInfo s = mp_support(c);
        const double lo = c > 1.0 ? 0.0 : s.lower;
        CHECK(pair.inner.center.real() - pair.inner.radius < lo);
        CHECK(pair.inner.center.real() + pair.inner.radius > s.upper);
        CHECK(pair.inner.radius < pair.outer.radius);
    }
}
