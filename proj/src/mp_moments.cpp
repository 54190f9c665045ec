// SPDX-License-Identifier: Apache-2.0

#include "rrsir/mp_moments.hpp"

#include <cmath>
#include <stdexcept>

namespace rrsir {

namespace {

using Int = boost::multiprecision::cpp_int;

Int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int r = 1;
    for (int j = 0; j < k; ++j) {
        r *= n - j;
        r /= j + 1;
    }
    return r;
}

}  // namespace

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite");
    if (x == 0.0) return 0;
    int exp = 0;
    const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
    const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r(scaled);
    if (exp >= 0) {
        r *= Rational(Int(1) << exp);
    } else {
        r /= Rational(Int(1) << -exp);
    }
    return r;
}

Rational mp_moment_exact(int r, const Rational& c) {
    if (r < 0) throw std::invalid_argument("mp_moment: r must be >= 0");
    if (c <= 0) throw std::invalid_argument("mp_moment: c must be positive");
    if (r == 0) return 1;
    Rational sum = 0;
    Rational ck = 1;
    for (int k = 0; k < r; ++k) {
        // Narayana weight C(r,k) C(r-1,k) / (k+1) is an integer.
        sum += ck * Rational(binom(r, k) * binom(r - 1, k), k + 1);
        ck *= c;
    }
    return sum;
}

Rational scaled_h_exact(int u, const Rational& c) {
    Rational cu = 1;
    for (int j = 0; j < u; ++j) cu *= c;
    return mp_moment_exact(u, c) / cu;
}

Rational shifted_a_exact(int m, const Rational& c, const Rational& sigma2) {
    if (m < 0) throw std::invalid_argument("shifted_a: m must be >= 0");
    Rational sum = 0;
    Rational s_pow = 1;  // sigma2^(m-u), built from u = m downward
    for (int u = m; u >= 0; --u) {
        sum += Rational(binom(m, u)) * s_pow * scaled_h_exact(u, c);
        s_pow *= sigma2;
    }
    return sum;
}

double mp_moment(int r, double c) {
    return static_cast<double>(mp_moment_exact(r, rational_from_double(c)));
}

double scaled_h(int u, double c) {
    return static_cast<double>(scaled_h_exact(u, rational_from_double(c)));
}

double shifted_a(int m, double c, double sigma2) {
    return static_cast<double>(
        shifted_a_exact(m, rational_from_double(c), rational_from_double(sigma2)));
}

MomentTable MomentTable::build(double c, double sigma2, int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("MomentTable: max_degree must be >= 0");
    MomentTable t;
    t.c = c;
    t.sigma2 = sigma2;
    t.max_degree = max_degree;
    const Rational cr = rational_from_double(c);
    const Rational sr = rational_from_double(sigma2);
    t.M.resize(max_degree + 1);
    t.h.resize(max_degree + 1);
    t.a.resize(max_degree + 1);
    for (int r = 0; r <= max_degree; ++r) {
        t.M[r] = static_cast<double>(mp_moment_exact(r, cr));
        t.h[r] = static_cast<double>(scaled_h_exact(r, cr));
        t.a[r] = static_cast<double>(shifted_a_exact(r, cr, sr));
    }
    return t;
}

SupportInfo mp_support(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("mp_support: c must be positive");
    const double s = std::sqrt(c);
    SupportInfo info;
    info.lower = (1.0 - s) * (1.0 - s);
    info.upper = (1.0 + s) * (1.0 + s);
    info.atom_at_zero = c > 1.0 ? 1.0 - 1.0 / c : 0.0;
    return info;
}

}  // namespace rrsir
