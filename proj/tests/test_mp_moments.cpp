// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>

#include "rrsir/clt_formulas.hpp"
#include "rrsir/model.hpp"
#include "rrsir/mp_moments.hpp"
#include "rrsir/spectral.hpp"
#include "rrsir/stieltjes.hpp"

using namespace rrsir;

TEST_CASE("M_1 = 1 for any c; Catalan numbers at c = 1") {
    for (const double c : {0.25, 0.5, 1.0, 2.0, 7.3}) CHECK(mp_moment(1, c) == 1.0);
    const long long catalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};
    for (int r = 0; r <= 8; ++r)
        CHECK(mp_moment_exact(r, Rational(1)) == Rational(catalan[r]));
}

TEST_CASE("M_2(c) = 1 + c exactly") {
    for (const auto& c : {Rational(1, 4), Rational(1), Rational(3)})
        CHECK(mp_moment_exact(2, c) == 1 + c);
}

TEST_CASE("scaled moments: h_0 = 1, h_1 = 1/c, h_2(1) = 2") {
    CHECK(scaled_h(0, 0.7) == 1.0);
    CHECK(scaled_h_exact(1, Rational(1, 3)) == Rational(3));
    CHECK(scaled_h(2, 1.0) == 2.0);
}

TEST_CASE("shifted moments: a_1 and a_2 identities, a_3(1,1) = 15") {
    for (const auto& c : {Rational(1, 4), Rational(1, 2), Rational(1), Rational(2), Rational(4)})
        for (const auto& s2 : {Rational(1, 2), Rational(1), Rational(2)}) {
            CHECK(shifted_a_exact(1, c, s2) == s2 + 1 / c);
            CHECK(shifted_a_exact(2, c, s2) == (1 + 1 / c) / c + s2 * s2 + 2 * s2 / c);
        }
    CHECK(shifted_a_exact(2, Rational(1), Rational(1)) == Rational(5));
    CHECK(shifted_a_exact(3, Rational(1), Rational(1)) == Rational(15));
}

TEST_CASE("support edges and atom") {
    SupportInfo s = mp_support(1.0);
    CHECK(s.lower == 0.0);
    CHECK(s.upper == 4.0);
    CHECK(s.atom_at_zero == 0.0);
    s = mp_support(4.0);
    CHECK(s.lower == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.upper == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(s.atom_at_zero == doctest::Approx(0.75).epsilon(1e-14));
    s = mp_support(0.25);
    CHECK(s.lower == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(s.upper == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(s.atom_at_zero == 0.0);
}

TEST_CASE("Hankel moment matrices are positive definite") {
    for (const double c : {0.5, 1.0, 2.0})
        for (const double s2 : {0.5, 1.0})
            for (int m = 1; m <= 5; ++m) {
                const HankelSystem sys = hankel_system(m, c, s2);
                const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sys.B);
                CHECK(eig.eigenvalues().minCoeff() > 0.0);
            }
}

TEST_CASE("companion-measure series of the Stieltjes transform reproduces the moments") {
    // m(z) = -sum_r Mc_r / z^{r+1} with Mc_0 = 1 and Mc_r = c M_r for r >= 1;
    // coefficients extracted by contour quadrature on a large circle.
    for (const double c : {0.5, 1.0, 2.0}) {
        const double radius = 40.0 * mp_support(c).upper;
        const ContourSpec big{cd{0.0, 0.0}, radius, 1024};
        for (int r = 0; r <= 8; ++r) {
            const auto f = [&](cd z) {
                cd zr{1.0, 0.0};
                for (int j = 0; j < r; ++j) zr *= z;
                return mp_stieltjes(z, c) * zr;
            };
            const cd coeff = contour_integrate(f, big).value / cd{0.0, 2.0 * std::numbers::pi};
            const double expected = r == 0 ? 1.0 : c * mp_moment(r, c);
            CHECK(std::abs(-coeff.real() - expected) < 1e-8 * std::max(1.0, expected));
            CHECK(std::abs(coeff.imag()) < 1e-8);
        }
    }
}

TEST_CASE("simulation consistency: N^{-1} Tr A^r matches M_r(c_N)") {
    // Concentration is strong at N = K = 1024; a few trials give tiny SE.
    const int n = 1024, trials = 6;
    std::vector<std::vector<double>> traces(5);  // r = 1..4
    for (int t = 0; t < trials; ++t) {
        const Ensemble e = sample_ensemble(n, n, EntryDist{EntryKind::ComplexGaussian}, 77, t);
        const Eigen::VectorXd lam = eigenvalues(e);
        for (int r = 1; r <= 4; ++r) {
            double s = 0.0;
            for (int i = 0; i < lam.size(); ++i) s += std::pow(lam(i), r);
            traces[r].push_back(s / n);
        }
    }
    for (int r = 1; r <= 4; ++r) {
        double mean = 0.0;
        for (const double v : traces[r]) mean += v;
        mean /= trials;
        double var = 0.0;
        for (const double v : traces[r]) var += (v - mean) * (v - mean);
        var /= trials - 1;
        const double se = std::sqrt(var / trials) + 1e-9;
        const double target = mp_moment(r, 1.0);
        // 3 SE plus a small 1/N bias allowance.
        CHECK(std::abs(mean - target) < 3.0 * se + 30.0 / n);
    }
}

TEST_CASE("exact finite-N oracle for M_2: E Tr A^2 at Gaussian entries") {
    // E Tr A^2 = (N/K) E|v|^4 + N(N-1)/K + N(K-1)/K; with N = K -> N + 2N - 2 + E|v|^4...
    const int n = 512, trials = 40;
    double mean = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Ensemble e = sample_ensemble(n, n, EntryDist{EntryKind::ComplexGaussian}, 78, t);
        mean += lss_eigenvalue(e, 2);  // Tr A^2 - N M_2(1)
    }
    mean /= trials;
    // E lss_2 = c_N (E|v|^4 - 2) = 0 for complex-gaussian entries.
    CHECK(std::abs(mean) < 4.0 * std::sqrt(18.0 / trials));
}

TEST_CASE("MomentTable matches the scalar entry points") {
    const MomentTable t = MomentTable::build(0.5, 1.5, 7);
    for (int r = 0; r <= 7; ++r) {
        CHECK(t.M[r] == mp_moment(r, 0.5));
        CHECK(t.h[r] == scaled_h(r, 0.5));
        CHECK(t.a[r] == shifted_a(r, 0.5, 1.5));
    }
}
