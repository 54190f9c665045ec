// SPDX-License-Identifier: Apache-2.0

#include "rrsir/clt_formulas.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rrsir/errors.hpp"
#include "rrsir/mp_moments.hpp"

namespace rrsir {

namespace {

constexpr double kPi = std::numbers::pi;

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int j = 0; j < k; ++j) r = r * (n - j) / (j + 1);
    return r;
}

// sum_j C(r,j) ((1-c)/c)^j C(2r-j, r-1); building block of the closed forms.
double corr_sum(int r, double c) {
    const double q = (1.0 - c) / c;
    double s = 0.0;
    double qj = 1.0;
    for (int j = 0; j <= r; ++j) {
        s += binom(r, j) * qj * binom(2 * r - j, r - 1);
        qj *= q;
    }
    return s;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int j = 0; j < n; ++j) r *= x;
    return r;
}

cd cpow(cd z, int n) {
    cd r{1.0, 0.0};
    for (int j = 0; j < n; ++j) r *= z;
    return r;
}

// d/dz [ m/(1+m) ] = m' / (1+m)^2, the factor of the covariance correction.
cd phi_prime(cd z, double c) {
    const cd m = mp_stieltjes(z, c);
    const cd om = 1.0 + m;
    return mp_stieltjes_derivative(z, c) / (om * om);
}

double real_part_checked(cd v, const char* what) {
    if (std::abs(v.imag()) > 1e-7 * (1.0 + std::abs(v.real())))
        throw NonConvergent(std::string(what) + ": imaginary residue " +
                            std::to_string(v.imag()));
    return v.real();
}

}  // namespace

const char* statistic_name(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::MswSir: return "msw-sir";
        case StatisticKind::MfSum: return "mf-sum";
        case StatisticKind::MfMi: return "mf-mi";
        case StatisticKind::LssEig: return "lss-eig";
        case StatisticKind::LssVec: return "lss-vec";
    }
    return "?";
}

StatisticKind statistic_from_name(const std::string& name) {
    if (name == "msw-sir") return StatisticKind::MswSir;
    if (name == "mf-sum") return StatisticKind::MfSum;
    if (name == "mf-mi") return StatisticKind::MfMi;
    if (name == "lss-eig") return StatisticKind::LssEig;
    if (name == "lss-vec") return StatisticKind::LssVec;
    throw std::invalid_argument("unknown statistic: " + name);
}

HankelSystem hankel_system(int m, double c, double sigma2) {
    if (m < 1) throw std::invalid_argument("hankel_system: m must be >= 1");
    const MomentTable t = MomentTable::build(c, sigma2, 2 * m - 1);
    HankelSystem sys;
    sys.m = m;
    sys.b.resize(m);
    sys.B.resize(m, m);
    for (int i = 0; i < m; ++i) {
        sys.b(i) = t.a[i];
        for (int j = 0; j < m; ++j) sys.B(i, j) = t.a[i + j + 1];
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sys.B);
    const double lambda_min = eig.eigenvalues().minCoeff();
    const double lambda_max = eig.eigenvalues().maxCoeff();
    if (!(lambda_min > 1e-12 * lambda_max))
        throw IllConditioned("hankel_system: B nearly singular at m=" + std::to_string(m));
    sys.d = eig.eigenvectors() *
            (eig.eigenvectors().transpose() * sys.b).cwiseQuotient(eig.eigenvalues());
    sys.sir_limit = sys.b.dot(sys.d);
    return sys;
}

double mmse_limit(double c, double sigma2) {
    if (!(c > 0.0) || sigma2 < 0.0)
        throw std::invalid_argument("mmse_limit: need c > 0 and sigma2 >= 0");
    if (sigma2 == 0.0 && c >= 1.0)
        throw NoConvergence("mmse_limit: no finite fixed point for sigma2 = 0, c >= 1");
    // g(beta) = beta (sigma2 + (1/c)/(1+beta)) - 1 is strictly increasing.
    const auto g = [&](double b) { return b * (sigma2 + (1.0 / c) / (1.0 + b)) - 1.0; };
    double lo = 0.0;
    double hi = sigma2 > 0.0 ? 1.0 / sigma2 : 2.0 * c / (1.0 - c) + 1.0;
    if (!(g(hi) >= 0.0)) throw NoConvergence("mmse_limit: bracket failure");
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ZetaCovariance zeta_covariance(int m, double c, double sigma2, double fourth_moment) {
    if (m < 1) throw std::invalid_argument("zeta_covariance: m must be >= 1");
    if (fourth_moment < 1.0)
        throw std::invalid_argument("zeta_covariance: fourth moment must be >= 1");
    const int deg = 2 * m - 1;
    const MomentTable t = MomentTable::build(c, sigma2, 2 * deg);
    const double v4 = fourth_moment - 1.0;

    // Cov(xi_u, xi_v) = v4 h_u h_v + (h_{u+v} - h_u h_v): the first term is the
    // squared-norm fluctuation, the second the norm-conditioned quadratic-form
    // covariance for complex entries with E v^2 = 0.
    Eigen::MatrixXd xi(deg + 1, deg + 1);
    for (int u = 0; u <= deg; ++u)
        for (int v = 0; v <= deg; ++v)
            xi(u, v) = v4 * t.h[u] * t.h[v] + (t.h[u + v] - t.h[u] * t.h[v]);

    ZetaCovariance zc;
    zc.m = m;
    zc.var_x = v4;
    zc.cov.setZero(deg + 1, deg + 1);
    for (int i = 0; i <= deg; ++i) {
        for (int j = i; j <= deg; ++j) {
            double s = 0.0;
            for (int u = 0; u <= i; ++u) {
                const double wi = binom(i, u) * ipow(sigma2, i - u);
                for (int v = 0; v <= j; ++v)
                    s += wi * binom(j, v) * ipow(sigma2, j - v) * xi(u, v);
            }
            zc.cov(i, j) = zc.cov(j, i) = s;
        }
    }
    return zc;
}

CltPrediction msw_fluct_prediction(int m, double c, double sigma2, double fourth_moment) {
    const HankelSystem sys = hankel_system(m, c, sigma2);
    const ZetaCovariance zc = zeta_covariance(m, c, sigma2, fourth_moment);
    // y = 2 sum_i d_i zeta_{i-1} - sum_{i,j} d_i d_j zeta_{i+j-1}
    Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * m);
    for (int i = 1; i <= m; ++i) {
        w(i - 1) += 2.0 * sys.d(i - 1);
        for (int j = 1; j <= m; ++j) w(i + j - 1) -= sys.d(i - 1) * sys.d(j - 1);
    }
    CltPrediction p;
    p.statistic = StatisticKind::MswSir;
    p.mean = 0.0;
    p.variance = w.dot(zc.cov * w);
    p.provenance = "msw fluctuation law, m=" + std::to_string(m);
    return p;
}

double mf_sum_mean(double c, double sigma2, double fourth_moment) {
    const double a1 = sigma2 + 1.0 / c;
    return (2.0 * fourth_moment - 3.0) / (c * a1 * a1) + 1.0 / (c * c * a1 * a1 * a1);
}

double mf_sum_mean_direct(double c, double sigma2) {
    const double a1 = sigma2 + 1.0 / c;
    return 1.0 / (c * a1 * a1) + 1.0 / (c * c * a1 * a1 * a1);
}

double mf_sum_variance(double c, double sigma2, double fourth_moment) {
    const double a1 = sigma2 + 1.0 / c;
    const double a14 = ipow(a1, 4);
    const double v4 = fourth_moment - 1.0;
    const double w = fourth_moment - 2.0;
    const double p = 2.0 + 2.0 / c + sigma2;
    const double t1 = p * p * v4 / (c * a14);
    const double t2 = -2.0 * p * (2.0 * c + 2.0) * v4 / (c * c * a14);
    const double t3 =
        (4.0 * c * c * c + 10.0 * c * c + 4.0 * c + (4.0 * c * c * c + 8.0 * c * c + 4.0 * c) * w) /
        (ipow(c, 4) * a14);
    const double tau2 = t1 + t2 + t3;
    if (tau2 < 0.0)
        throw NegativeVariance("mf_sum_variance: negative at c=" + std::to_string(c));
    return tau2;
}

CltPrediction mf_mi_params(double c, double sigma2, double fourth_moment) {
    const double a1 = sigma2 + 1.0 / c;
    const double d = 1.0 + 1.0 / a1;
    const double mu = mf_sum_mean(c, sigma2, fourth_moment);
    const double num = 2.0 * (fourth_moment - 2.0) * a1 * a1 + 2.0 / c * (1.0 + 1.0 / c) +
                       sigma2 * sigma2 + 2.0 * sigma2 / c;
    CltPrediction p;
    p.statistic = StatisticKind::MfMi;
    p.mean = mu / d - num / (c * ipow(a1, 4) * d * d);
    p.variance = mf_sum_variance(c, sigma2, fourth_moment) / (d * d);
    p.provenance = "mf mutual information limit";
    return p;
}

double mf_mi_mean_direct(double c, double sigma2, double fourth_moment) {
    const double a1 = sigma2 + 1.0 / c;
    const double a2 = shifted_a(2, c, sigma2);
    const double d = 1.0 + 1.0 / a1;
    const double sum_sq = (a2 + (fourth_moment - 2.0) * a1 * a1) / (c * ipow(a1, 4));
    return mf_sum_mean_direct(c, sigma2) / d - sum_sq / (2.0 * d * d);
}

double lss_mean_correction_closed(int r, double c) {
    if (r < 1) throw std::invalid_argument("lss_mean_correction_closed: r must be >= 1");
    const double q = (1.0 - c) / c;
    double s = 0.0;
    double qj = 1.0;
    for (int j = 0; j <= r; ++j) {
        s += binom(r, j) * qj * (binom(2 * r - j, r - 1) - binom(2 * r + 1 - j, r - 1));
        qj *= q;
    }
    return ipow(c, r + 1) * s;
}

double lss_cov_correction_closed(int r1, int r2, double c) {
    if (r1 < 1 || r2 < 1)
        throw std::invalid_argument("lss_cov_correction_closed: degrees must be >= 1");
    return ipow(c, r1 + r2 + 1) * corr_sum(r1, c) * corr_sum(r2, c);
}

namespace {

// (1/2 pi i) \oint z^r c m^3 (1+m)^{-3} / (1 - c m^2/(1+m)^2) dz over a
// counterclockwise circle enclosing the support.
cd mean_kernel_integral(int r, double c, const ContourSpec* contour) {
    const ContourSpec spec = contour ? *contour : default_contours(c).outer;
    const auto f = [&](cd z) {
        const cd m = mp_stieltjes(z, c);
        const cd om = 1.0 + m;
        const cd denom = 1.0 - c * m * m / (om * om);
        return cpow(z, r) * c * m * m * m / (om * om * om * denom);
    };
    const QuadratureResult q = contour_integrate(f, spec);
    return q.value / cd{0.0, 2.0 * kPi};
}

}  // namespace

double lss_mean_base_numeric(int r, double c, const ContourSpec* contour) {
    return real_part_checked(-mean_kernel_integral(r, c, contour), "lss_mean_base_numeric");
}

double lss_mean_correction_numeric(int r, double c, const ContourSpec* contour) {
    return real_part_checked(mean_kernel_integral(r, c, contour),
                             "lss_mean_correction_numeric");
}

double lss_cov_base_numeric(int r1, int r2, double c, Realness realness,
                            const ContourPair* contours) {
    const ContourPair pair = contours ? *contours : default_contours(c);
    const auto f = [&](cd z1, cd z2) {
        const cd m1 = mp_stieltjes(z1, c);
        const cd m2 = mp_stieltjes(z2, c);
        const cd dm = m1 - m2;
        return cpow(z1, r1) * cpow(z2, r2) * mp_stieltjes_derivative(z1, c) *
               mp_stieltjes_derivative(z2, c) / (dm * dm);
    };
    const QuadratureResult q = double_contour_integrate(f, pair.inner, pair.outer);
    const double coeff = realness == Realness::RealEntries ? -1.0 / (2.0 * kPi * kPi)
                                                           : -1.0 / (4.0 * kPi * kPi);
    return real_part_checked(coeff * q.value, "lss_cov_base_numeric");
}

double lss_cov_correction_numeric(int r1, int r2, double c, const ContourSpec* contour) {
    const ContourSpec spec = contour ? *contour : default_contours(c).outer;
    // -(c/4 pi^2) \oint\oint z1^r1 z2^r2 phi'(z1) phi'(z2) factorizes.
    const auto single = [&](int r) {
        const auto f = [&](cd z) { return cpow(z, r) * phi_prime(z, c); };
        return contour_integrate(f, spec).value;
    };
    const cd value = -(c / (4.0 * kPi * kPi)) * single(r1) * single(r2);
    return real_part_checked(value, "lss_cov_correction_numeric");
}

CltPrediction lss_prediction(const std::vector<int>& degrees, double c, double fourth_moment,
                             Realness realness) {
    CltPrediction p;
    p.statistic = StatisticKind::LssEig;
    p.provenance = "eigenvalue lss limit";
    const bool complex_case = realness == Realness::ComplexEntries;
    const double corr_weight = complex_case ? fourth_moment - 2.0 : fourth_moment - 3.0;
    for (int r : degrees) {
        // Complex case: the base mean vanishes; both cases subtract the
        // fourth-moment weight times the correction integral.
        const double base = complex_case ? 0.0 : lss_mean_base_numeric(r, c);
        p.mean += base - corr_weight * lss_mean_correction_closed(r, c);
    }
    for (int r1 : degrees)
        for (int r2 : degrees)
            p.variance += lss_cov_base_numeric(r1, r2, c, realness) +
                          corr_weight * lss_cov_correction_closed(r1, r2, c);
    if (p.variance < -1e-10)
        throw NegativeVariance("lss_prediction: variance " + std::to_string(p.variance));
    return p;
}

double eigvec_lss_covariance(int r1, int r2, double c, Realness realness,
                             const ContourPair* contours) {
    const ContourPair pair = contours ? *contours : default_contours(c);
    const auto f = [&](cd z1, cd z2) {
        const cd m1 = mp_stieltjes(z1, c);
        const cd m2 = mp_stieltjes(z2, c);
        const cd num = z2 * m2 - z1 * m1;
        return cpow(z1, r1) * cpow(z2, r2) * num * num /
               (c * z1 * z2 * (z2 - z1) * (m2 - m1));
    };
    const QuadratureResult q = double_contour_integrate(f, pair.inner, pair.outer);
    double value = real_part_checked(-q.value / (2.0 * kPi * kPi), "eigvec_lss_covariance");
    if (realness == Realness::ComplexEntries) value *= 0.5;
    return value;
}

}  // namespace rrsir
