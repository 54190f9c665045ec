// SPDX-License-Identifier: Apache-2.0

#ifndef RRSIR_MODEL_HPP_
#define RRSIR_MODEL_HPP_

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "rrsir/rng.hpp"

namespace rrsir {

enum class EntryKind { ComplexGaussian, Qpsk, RealGaussian, Rademacher };

/// Entry distribution for signature matrix elements.  All kinds have
/// E v = 0 and E|v|^2 = 1; the fourth moment and E v^2 vary by kind.
struct EntryDist {
    EntryKind kind = EntryKind::ComplexGaussian;

    double fourth_moment() const;   // E|v|^4
    double second_moment_sq() const;  // E v^2 (0 for complex kinds, 1 for real)
    bool is_complex() const;
    const char* name() const;

    static EntryDist from_name(const std::string& name);
};

/// Asymptotic model parameters: limiting ratio c = N/K, noise variance,
/// entry distribution and (for multistage receivers) the stage count.
struct ModelParams {
    double c = 1.0;
    double sigma2 = 1.0;
    EntryDist dist;
    int m_stages = 1;

    void validate() const;  // c > 0, sigma2 >= 0, m_stages >= 1
};

/// A finite-N realization: N x K signature matrix S (column k is user k's
/// signature, entries v_ik / sqrt(N)) and the per-user power vector.
struct Ensemble {
    int N = 0;
    int K = 0;
    Eigen::MatrixXcd S;
    Eigen::VectorXd powers;

    double ratio() const { return static_cast<double>(N) / K; }
    bool unit_powers() const;
};

/// One draw with the moment profile of `dist`, addressed by matrix position.
std::complex<double> sample_entry(EntryDist dist, const RngStream& stream,
                                  std::uint32_t i, std::uint32_t k);

/// Deterministic function of (seed, trial): entry (i, k) comes from a
/// counter-based stream keyed by (seed, trial, i, k), so the result is
/// identical for any thread count or generation order.
Ensemble sample_ensemble(int N, int K, const Eigen::VectorXd& powers, EntryDist dist,
                         std::uint64_t seed, std::uint64_t trial);

/// Unit-power convenience overload.
Ensemble sample_ensemble(int N, int K, EntryDist dist, std::uint64_t seed,
                         std::uint64_t trial);

}  // namespace rrsir

#endif  // RRSIR_MODEL_HPP_
