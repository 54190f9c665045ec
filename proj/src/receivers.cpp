// SPDX-License-Identifier: Apache-2.0

#include "rrsir/receivers.hpp"

#include <cmath>
#include <stdexcept>

#include "rrsir/clt_formulas.hpp"
#include "rrsir/errors.hpp"

namespace rrsir {

namespace {

// y = R_k x without forming R_k: S P S^H x - p_k s_k s_k^H x + sigma2 x.
Eigen::VectorXcd apply_interference(const Ensemble& e, int k, double sigma2,
                                    const Eigen::VectorXcd& x) {
    Eigen::VectorXcd w = e.S.adjoint() * x;
    w.array() *= e.powers.array();
    Eigen::VectorXcd y = e.S * w;
    y -= e.powers(k) * (e.S.col(k).dot(x)) * e.S.col(k);
    y += sigma2 * x;
    return y;
}

double quad_form_k(const Ensemble& e, int k, double sigma2) {
    // s_k^* R_k s_k = sum_j p_j |s_j^* s_k|^2 - p_k (s_k^* s_k)^2 + sigma2 ||s_k||^2
    const Eigen::VectorXcd w = e.S.adjoint() * e.S.col(k);
    const double nk = w(k).real();
    return e.powers.dot(w.cwiseAbs2()) - e.powers(k) * nk * nk + sigma2 * nk;
}

void check_user(const Ensemble& e, int k) {
    if (k < 0 || k >= e.K) throw std::out_of_range("user index out of range");
}

// Orthonormal Krylov basis driven by an operator application.
template <typename Apply>
Eigen::MatrixXcd krylov_basis_op(Apply apply, const Eigen::VectorXcd& s, int m) {
    const auto n = s.size();
    if (m < 1 || m > n) throw std::invalid_argument("krylov_basis: need 1 <= m <= N");
    Eigen::MatrixXcd Q(n, m);
    Eigen::VectorXcd v = s;
    for (int j = 0; j < m; ++j) {
        if (j > 0) v = apply(Q.col(j - 1));
        const double before = v.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < j; ++i) v -= Q.col(i).dot(v) * Q.col(i);
        const double after = v.norm();
        if (!(after > 1e-12 * before) || before == 0.0)
            throw DegenerateKrylov("krylov_basis: sequence degenerated at stage " +
                                       std::to_string(j + 1),
                                   j);
        Q.col(j) = v / after;
    }
    return Q;
}

double msw_value(const Ensemble& e, int k, int m, double sigma2) {
    const auto apply = [&](const Eigen::VectorXcd& x) {
        return apply_interference(e, k, sigma2, x);
    };
    const Eigen::MatrixXcd Q = krylov_basis_op(apply, e.S.col(k), m);
    Eigen::MatrixXcd RQ(e.N, m);
    for (int j = 0; j < m; ++j) RQ.col(j) = apply(Q.col(j));
    const Eigen::MatrixXcd T = Q.adjoint() * RQ;
    const Eigen::VectorXcd f = Q.adjoint() * e.S.col(k);
    const Eigen::LLT<Eigen::MatrixXcd> llt(T);
    if (llt.info() != Eigen::Success)
        throw SolveFailure("msw_sir: projected system not positive definite");
    return e.powers(k) * f.dot(llt.solve(f)).real();
}

}  // namespace

Eigen::MatrixXcd interference_matrix(const Ensemble& e, int k, double sigma2) {
    check_user(e, k);
    Eigen::MatrixXcd r = sigma2 * Eigen::MatrixXcd::Identity(e.N, e.N);
    for (int j = 0; j < e.K; ++j) {
        if (j == k) continue;
        r.selfadjointView<Eigen::Lower>().rankUpdate(e.S.col(j), e.powers(j));
    }
    return r.selfadjointView<Eigen::Lower>();
}

SirResult mf_sir(const Ensemble& e, int k, double sigma2) {
    check_user(e, k);
    const double nk = e.S.col(k).squaredNorm();
    if (nk == 0.0) throw ZeroSignature("mf_sir: zero signature");
    const double num = e.powers(k) * nk * nk;
    return {k, ReceiverKind::Mf, 1, num / quad_form_k(e, k, sigma2)};
}

SirResult mmse_sir(const Ensemble& e, int k, double sigma2) {
    check_user(e, k);
    if (!(sigma2 > 0.0)) throw std::invalid_argument("mmse_sir: needs sigma2 > 0");
    const Eigen::MatrixXcd r = interference_matrix(e, k, sigma2);
    const Eigen::LLT<Eigen::MatrixXcd> llt(r);
    if (llt.info() != Eigen::Success) throw SolveFailure("mmse_sir: factorization failed");
    const double value = e.powers(k) * e.S.col(k).dot(llt.solve(e.S.col(k))).real();
    return {k, ReceiverKind::Mmse, 0, value};
}

Eigen::MatrixXcd krylov_basis(const Eigen::MatrixXcd& R, const Eigen::VectorXcd& s, int m) {
    return krylov_basis_op([&](const Eigen::VectorXcd& x) { return (R * x).eval(); }, s, m);
}

SirResult msw_sir(const Ensemble& e, int k, int m, double sigma2) {
    check_user(e, k);
    if (m < 1) throw std::invalid_argument("msw_sir: m must be >= 1");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("msw_sir: needs sigma2 > 0");
    try {
        return {k, ReceiverKind::Msw, m, msw_value(e, k, m, sigma2)};
    } catch (const DegenerateKrylov& deg) {
        // Saturated subspace: the reduced-rank value equals the requested one.
        if (deg.effective_rank < 1) throw;
        return {k, ReceiverKind::Msw, m, msw_value(e, k, deg.effective_rank, sigma2)};
    }
}

double generic_sir(const Ensemble& e, int k, const Eigen::VectorXcd& cvec, double sigma2) {
    check_user(e, k);
    const double cc = cvec.squaredNorm();
    if (cc == 0.0) throw ZeroReceiver("generic_sir: zero receiver vector");
    const Eigen::VectorXcd w = e.S.adjoint() * cvec;
    double denom = sigma2 * cc;
    for (int j = 0; j < e.K; ++j)
        if (j != k) denom += e.powers(j) * std::norm(w(j));
    return e.powers(k) * std::norm(w(k)) / denom;
}

double msw_fluctuation(const Ensemble& e, int k, int m, double sigma2) {
    if (!e.unit_powers())
        throw std::invalid_argument("msw_fluctuation: requires equal unit powers");
    const HankelSystem sys = hankel_system(m, e.ratio(), sigma2);
    return std::sqrt(static_cast<double>(e.N)) * (msw_sir(e, k, m, sigma2).value - sys.sir_limit);
}

Eigen::VectorXd all_mf_sirs(const Ensemble& e, double sigma2) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(e.K, e.K);
    g.selfadjointView<Eigen::Lower>().rankUpdate(e.S.adjoint());
    g = g.selfadjointView<Eigen::Lower>();
    Eigen::VectorXd beta(e.K);
    for (int k = 0; k < e.K; ++k) {
        const double nk = g(k, k).real();
        const double inter =
            e.powers.dot(g.col(k).cwiseAbs2()) - e.powers(k) * nk * nk + sigma2 * nk;
        beta(k) = e.powers(k) * nk * nk / inter;
    }
    return beta;
}

double mf_sum_statistic(const Ensemble& e, double sigma2) {
    if (e.K == 0) return 0.0;
    if (!e.unit_powers())
        throw std::invalid_argument("mf_sum_statistic: requires equal unit powers");
    const double a1 = sigma2 + 1.0 / e.ratio();
    return (all_mf_sirs(e, sigma2).array() - 1.0 / a1).sum();
}

double mf_mi_statistic(const Ensemble& e, double sigma2) {
    if (e.K == 0) return 0.0;
    if (!e.unit_powers())
        throw std::invalid_argument("mf_mi_statistic: requires equal unit powers");
    const double a1 = sigma2 + 1.0 / e.ratio();
    const double center = std::log1p(1.0 / a1);
    const Eigen::VectorXd beta = all_mf_sirs(e, sigma2);
    double sum = 0.0;
    for (int k = 0; k < e.K; ++k) sum += std::log1p(beta(k)) - center;
    return sum;
}

}  // namespace rrsir
