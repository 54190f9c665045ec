// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rrsir/clt_formulas.hpp"
#include "rrsir/errors.hpp"
#include "rrsir/receivers.hpp"

using namespace rrsir;

namespace {

Ensemble orthogonal_ensemble(int n, int k, double /*unused*/ = 0.0) {
    Ensemble e;
    e.N = n;
    e.K = k;
    e.S = Eigen::MatrixXcd::Zero(n, k);
    for (int j = 0; j < k; ++j) e.S(j, j) = 1.0;
    e.powers = Eigen::VectorXd::Ones(k);
    return e;
}

}  // namespace

TEST_CASE("interference matrix basics") {
    const Ensemble e1 = sample_ensemble(8, 1, EntryDist{EntryKind::ComplexGaussian}, 1, 0);
    const Eigen::MatrixXcd r1 = interference_matrix(e1, 0, 0.7);
    CHECK((r1 - 0.7 * Eigen::MatrixXcd::Identity(8, 8)).norm() == 0.0);  // empty sum

    const Ensemble e = sample_ensemble(16, 12, EntryDist{EntryKind::Qpsk}, 2, 0);
    const Eigen::MatrixXcd r = interference_matrix(e, 3, 1.0);
    CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    double tr = 16.0;
    for (int j = 0; j < 12; ++j)
        if (j != 3) tr += e.S.col(j).squaredNorm();
    CHECK(std::abs(r.trace().real() - tr) < 1e-12);
}

TEST_CASE("matched filter: orthogonal users give 1/sigma2") {
    const Ensemble e = orthogonal_ensemble(8, 4);
    for (const double s2 : {0.5, 1.0, 2.0})
        CHECK(mf_sir(e, 1, s2).value == doctest::Approx(1.0 / s2).epsilon(1e-14));
}

TEST_CASE("mf equals msw at m = 1") {
    for (int t = 0; t < 5; ++t) {
        const Ensemble e = sample_ensemble(24, 20, EntryDist{EntryKind::ComplexGaussian}, 3, t);
        const double mf = mf_sir(e, 2, 1.0).value;
        const double msw1 = msw_sir(e, 2, 1, 1.0).value;
        CHECK(std::abs(mf - msw1) / mf < 1e-12);
    }
}

TEST_CASE("mmse dominates msw at every stage") {
    for (int t = 0; t < 5; ++t) {
        const Ensemble e = sample_ensemble(20, 16, EntryDist{EntryKind::ComplexGaussian}, 4, t);
        const double mmse = mmse_sir(e, 0, 1.0).value;
        for (int m = 1; m <= 4; ++m) CHECK(msw_sir(e, 0, m, 1.0).value <= mmse + 1e-10);
    }
}

TEST_CASE("msw saturates to mmse at m = N (Cayley-Hamilton)") {
    for (int t = 0; t < 3; ++t) {
        const Ensemble e = sample_ensemble(12, 10, EntryDist{EntryKind::ComplexGaussian}, 5, t);
        const double mmse = mmse_sir(e, 1, 1.0).value;
        const double full = msw_sir(e, 1, 12, 1.0).value;
        CHECK(std::abs(full - mmse) / mmse < 1e-8);
    }
}

TEST_CASE("SIR chain is monotone per instance") {
    for (int t = 0; t < 100; ++t) {
        const Ensemble e = sample_ensemble(16 + (t % 4) * 8, 16, EntryDist{EntryKind::Qpsk}, 6, t);
        double prev = 0.0;
        for (int m = 1; m <= 5; ++m) {
            const double sir = msw_sir(e, 0, m, 1.0).value;
            CHECK(sir >= prev - 1e-8 * std::max(1.0, sir));
            prev = sir;
        }
        CHECK(prev <= mmse_sir(e, 0, 1.0).value + 1e-8);
    }
}

TEST_CASE("krylov basis: orthonormal columns spanning the moment sequence") {
    const Ensemble e = sample_ensemble(24, 18, EntryDist{EntryKind::ComplexGaussian}, 7, 0);
    const Eigen::MatrixXcd r = interference_matrix(e, 0, 1.0);
    const Eigen::VectorXcd s = e.S.col(0);
    const Eigen::MatrixXcd q1 = krylov_basis(r, s, 1);
    CHECK((q1.col(0) - s / s.norm()).norm() < 1e-13);

    const int m = 4;
    const Eigen::MatrixXcd q = krylov_basis(r, s, m);
    CHECK((q.adjoint() * q - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::VectorXcd v = s;
    for (int j = 0; j < m; ++j) {
        const double resid = (v - q * (q.adjoint() * v)).norm();
        CHECK(resid < 1e-8 * v.norm());
        v = r * v;
    }
}

TEST_CASE("degenerate Krylov sequences saturate cleanly") {
    // Orthogonal users: R_0 s_0 = sigma2 s_0, so the span never grows.
    const Ensemble e = orthogonal_ensemble(8, 4);
    const Eigen::MatrixXcd r = interference_matrix(e, 0, 1.0);
    CHECK_THROWS_AS(krylov_basis(r, e.S.col(0), 2), DegenerateKrylov);
    const SirResult sat = msw_sir(e, 0, 3, 1.0);
    CHECK(sat.value == doctest::Approx(1.0).epsilon(1e-12));  // = mf at sigma2 = 1
}

TEST_CASE("basis invariance: raw Krylov columns vs orthonormalized basis") {
    for (int t = 0; t < 5; ++t) {
        const Ensemble e = sample_ensemble(32, 24, EntryDist{EntryKind::ComplexGaussian}, 8, t);
        const Eigen::MatrixXcd r = interference_matrix(e, 0, 1.0);
        const Eigen::VectorXcd s = e.S.col(0);
        for (int m = 1; m <= 4; ++m) {
            Eigen::MatrixXcd a(e.N, m);
            Eigen::VectorXcd v = s;
            for (int j = 0; j < m; ++j) {
                a.col(j) = v;
                v = r * v;
            }
            const Eigen::MatrixXcd t_raw = a.adjoint() * r * a;
            const Eigen::VectorXcd f = a.adjoint() * s;
            const double raw = f.dot(t_raw.ldlt().solve(f)).real();
            const double msw = msw_sir(e, 0, m, 1.0).value;
            CHECK(std::abs(raw - msw) / msw < 1e-8);
        }
    }
}

TEST_CASE("scaling covariance: powers and noise scale out of the SIR") {
    const Ensemble base = sample_ensemble(20, 16, EntryDist{EntryKind::ComplexGaussian}, 9, 1);
    for (const double t : {0.5, 2.0}) {
        Ensemble scaled = base;
        scaled.powers *= t;
        for (int m = 1; m <= 3; ++m) {
            const double a = msw_sir(base, 0, m, 1.0).value;
            const double b = msw_sir(scaled, 0, m, t).value;
            CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, a));
        }
        CHECK(std::abs(mmse_sir(base, 0, 1.0).value - mmse_sir(scaled, 0, t).value) < 1e-12);
    }
}

TEST_CASE("generic SIR agrees with the closed receivers") {
    const Ensemble e = sample_ensemble(20, 16, EntryDist{EntryKind::ComplexGaussian}, 10, 0);
    const Eigen::MatrixXcd r = interference_matrix(e, 0, 1.0);
    const Eigen::VectorXcd s = e.S.col(0);

    const Eigen::VectorXcd c_mmse = r.llt().solve(s);
    CHECK(std::abs(generic_sir(e, 0, c_mmse, 1.0) - mmse_sir(e, 0, 1.0).value) < 1e-10);

    const int m = 3;
    const Eigen::MatrixXcd q = krylov_basis(r, s, m);
    const Eigen::MatrixXcd t_m = q.adjoint() * r * q;
    const Eigen::VectorXcd c_msw = q * t_m.llt().solve(q.adjoint() * s);
    CHECK(std::abs(generic_sir(e, 0, c_msw, 1.0) - msw_sir(e, 0, m, 1.0).value) < 1e-10);

    // MSW maximizes the SIR over the Krylov span; lambda-scaling is free.
    const RngStream stream(11, 0);
    for (int j = 0; j < 10; ++j) {
        Eigen::VectorXcd w(m);
        for (int i = 0; i < m; ++i) {
            const auto u = stream.uniform_pair(j, i);
            w(i) = std::complex<double>(u[0] - 0.5, u[1] - 0.5);
        }
        const Eigen::VectorXcd cv = q * w;
        CHECK(generic_sir(e, 0, cv, 1.0) <= msw_sir(e, 0, m, 1.0).value + 1e-10);
        CHECK(std::abs(generic_sir(e, 0, cv, 1.0) - generic_sir(e, 0, 3.7 * cv, 1.0)) < 1e-12);
    }
    CHECK_THROWS_AS(generic_sir(e, 0, Eigen::VectorXcd::Zero(20), 1.0), ZeroReceiver);
}

TEST_CASE("all_mf_sirs matches per-user mf_sir") {
    const Ensemble e = sample_ensemble(32, 40, EntryDist{EntryKind::ComplexGaussian}, 12, 0);
    const Eigen::VectorXd beta = all_mf_sirs(e, 0.8);
    for (int k = 0; k < e.K; ++k)
        CHECK(beta(k) == doctest::Approx(mf_sir(e, k, 0.8).value).epsilon(1e-12));
}

TEST_CASE("mf sample mean approaches 1/a_1") {
    // N = K = 256, 3000 trials: mean over users/trials within 3 SE + small bias.
    const int n = 256, trials = 3000;
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Ensemble e = sample_ensemble(n, n, EntryDist{EntryKind::ComplexGaussian}, 13, t);
        const double b = mf_sir(e, 0, 1.0).value;
        sum += b;
        sumsq += b * b;
    }
    const double mean = sum / trials;
    const double var = (sumsq - trials * mean * mean) / (trials - 1);
    const double se = std::sqrt(var / trials);
    CHECK(std::abs(mean - 0.5) < 3.0 * se + 0.01);
}

TEST_CASE("mmse sample mean approaches the fixed point") {
    const int n = 256, trials = 200;
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Ensemble e = sample_ensemble(n, n, EntryDist{EntryKind::ComplexGaussian}, 14, t);
        const double b = mmse_sir(e, 0, 1.0).value;
        sum += b;
        sumsq += b * b;
    }
    const double mean = sum / trials;
    const double var = (sumsq - trials * mean * mean) / (trials - 1);
    CHECK(std::abs(mean - mmse_limit(1.0, 1.0)) < 3.0 * std::sqrt(var / trials) + 0.01);
}

TEST_CASE("sum statistics: empty system and centering") {
    Ensemble empty;
    empty.N = 4;
    empty.K = 0;
    empty.S = Eigen::MatrixXcd::Zero(4, 0);
    empty.powers = Eigen::VectorXd::Zero(0);
    CHECK(mf_sum_statistic(empty, 1.0) == 0.0);
    CHECK(mf_mi_statistic(empty, 1.0) == 0.0);

    const Ensemble e = sample_ensemble(64, 64, EntryDist{EntryKind::Qpsk}, 15, 0);
    const Eigen::VectorXd beta = all_mf_sirs(e, 1.0);
    const double a1 = 1.0 + 1.0;  // sigma2 + K/N
    CHECK(mf_sum_statistic(e, 1.0) ==
          doctest::Approx((beta.array() - 1.0 / a1).sum()).epsilon(1e-12));
}

TEST_CASE("msw fluctuation centers at the finite-ratio limit") {
    const Ensemble e = sample_ensemble(64, 48, EntryDist{EntryKind::ComplexGaussian}, 16, 0);
    const double limit = hankel_system(2, e.ratio(), 1.0).sir_limit;
    const double expect = std::sqrt(64.0) * (msw_sir(e, 0, 2, 1.0).value - limit);
    CHECK(msw_fluctuation(e, 0, 2, 1.0) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("zero signature rejected") {
    Ensemble e = sample_ensemble(8, 3, EntryDist{EntryKind::ComplexGaussian}, 17, 0);
    e.S.col(1).setZero();
    CHECK_THROWS_AS(mf_sir(e, 1, 1.0), ZeroSignature);
}
