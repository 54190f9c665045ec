// SPDX-License-Identifier: Apache-2.0

#include "rrsir/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rrsir/errors.hpp"
#include "rrsir/mp_moments.hpp"

namespace rrsir {

namespace {

Eigen::MatrixXcd gram(const Eigen::MatrixXcd& s) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(s.cols(), s.cols());
    g.selfadjointView<Eigen::Lower>().rankUpdate(s.adjoint());
    return g.selfadjointView<Eigen::Lower>();
}

}  // namespace

Eigen::VectorXd eigenvalues(const Ensemble& e) {
    if (!e.unit_powers())
        throw std::invalid_argument("eigenvalues: spectral statistics assume unit powers");
    const double cn = e.ratio();
    // Spectrum via the K x K Gram matrix: same nonzero eigenvalues as S S^*,
    // padded with N - K zeros when N > K.
    const Eigen::MatrixXcd g = gram(e.S);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw EigFailure("eigenvalues: solver failed");
    std::vector<double> vals(eig.eigenvalues().data(), eig.eigenvalues().data() + e.K);
    for (double& v : vals) v *= cn;
    if (e.N > e.K) {
        vals.insert(vals.begin(), static_cast<std::size_t>(e.N - e.K), 0.0);
    } else if (e.K > e.N) {
        // Gram carries K - N extra zeros that are not eigenvalues of S S^*.
        std::sort(vals.begin(), vals.end());
        vals.erase(vals.begin(), vals.begin() + (e.K - e.N));
    }
    std::sort(vals.begin(), vals.end());
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

double lss_eigenvalue(const Ensemble& e, int r) {
    if (r < 1) throw std::invalid_argument("lss_eigenvalue: r must be >= 1");
    if (!e.unit_powers())
        throw std::invalid_argument("lss_eigenvalue: assumes unit powers");
    const double cn = e.ratio();
    const double center = e.N * mp_moment(r, cn);
    if (r == 1) return cn * e.S.squaredNorm() - center;
    if (r == 2) {
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(e.K, e.K);
        g.selfadjointView<Eigen::Lower>().rankUpdate(e.S.adjoint());
        // ||G||_F^2 from the lower triangle; off-diagonal entries count twice.
        double frob2 = 0.0;
        for (int j = 0; j < e.K; ++j) {
            frob2 += std::norm(g(j, j));
            for (int i = j + 1; i < e.K; ++i) frob2 += 2.0 * std::norm(g(i, j));
        }
        return cn * cn * frob2 - center;
    }
    const Eigen::VectorXd lam = eigenvalues(e);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) sum += std::pow(lam(i), r);
    return sum - center;
}

double lss_eigenvector(const Ensemble& e, const Eigen::VectorXcd& x, int r) {
    if (r < 1) throw std::invalid_argument("lss_eigenvector: r must be >= 1");
    if (x.size() != e.N) throw std::invalid_argument("lss_eigenvector: x has wrong length");
    if (std::abs(x.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("lss_eigenvector: x must be a unit vector");
    const double spread = x.cwiseAbs().maxCoeff();
    const double sqrt_n = std::sqrt(static_cast<double>(e.N));
    if (spread > 5.0 / sqrt_n)
        throw XNotSpread("lss_eigenvector: max|x_i| = " + std::to_string(spread) +
                         " violates the spread condition (limit " +
                         std::to_string(5.0 / sqrt_n) + ")");
    const double cn = e.ratio();
    Eigen::VectorXcd v = x;
    for (int j = 0; j < r; ++j) v = cn * (e.S * (e.S.adjoint() * v));
    return sqrt_n * (x.dot(v).real() - mp_moment(r, cn));
}

Eigen::VectorXd quadratic_form_moments(const Ensemble& e, int k, int max_degree,
                                       double sigma2) {
    if (k < 0 || k >= e.K) throw std::out_of_range("quadratic_form_moments: bad user");
    if (max_degree < 0) throw std::invalid_argument("quadratic_form_moments: bad degree");
    const double sqrt_n = std::sqrt(static_cast<double>(e.N));

    // Interferer Gram spectrum gives Tr R_k^d exactly for every degree.
    Eigen::MatrixXcd sk(e.N, e.K - 1);
    for (int j = 0, col = 0; j < e.K; ++j)
        if (j != k) sk.col(col++) = std::sqrt(e.powers(j)) * e.S.col(j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram(sk), Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw EigFailure("quadratic_form_moments: eig failed");
    std::vector<double> lam(eig.eigenvalues().data(), eig.eigenvalues().data() + e.K - 1);
    std::sort(lam.begin(), lam.end(), std::greater<>());
    const int live = std::min<int>(e.N, e.K - 1);
    lam.resize(live);

    // Krylov chain for the quadratic forms.
    Eigen::VectorXcd v = e.S.col(k);
    Eigen::VectorXd out(max_degree + 1);
    for (int d = 0; d <= max_degree; ++d) {
        if (d > 0) {
            Eigen::VectorXcd w = sk.adjoint() * v;
            v = sk * w + sigma2 * v;
        }
        double tr = (e.N - live) * std::pow(sigma2, d);
        for (const double l : lam) tr += std::pow(l + sigma2, d);
        out(d) = sqrt_n * (e.S.col(k).dot(v).real() - tr / e.N);
    }
    return out;
}

}  // namespace rrsir
