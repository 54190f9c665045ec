// SPDX-License-Identifier: Apache-2.0

#include "rrsir/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rrsir/rng.hpp"

namespace rrsir {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& x, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * x[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
}

// Uniform in (0, 1) with 53-bit resolution; never returns an endpoint.
inline double u64_to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53;
}

inline std::uint64_t join64(std::uint32_t hi, std::uint32_t lo) {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    std::uint32_t k0 = key[0];
    std::uint32_t k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, k0, k1);
        if (round < 9) {
            k0 += kPhiloxW0;
            k1 += kPhiloxW1;
        }
    }
    return ctr;
}

std::array<std::uint32_t, 4> RngStream::block(std::uint32_t i, std::uint32_t k,
                                              std::uint32_t tag) const {
    // Counter carries (trial, tag, i, k); key carries the seed.
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(trial_),
        static_cast<std::uint32_t>(trial_ >> 32) ^ (tag << 24),
        i, k};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                              static_cast<std::uint32_t>(seed_ >> 32)};
    return philox4x32(ctr, key);
}

std::array<double, 2> RngStream::uniform_pair(std::uint32_t i, std::uint32_t k,
                                              std::uint32_t tag) const {
    const auto b = block(i, k, tag);
    return {u64_to_unit(join64(b[0], b[1])), u64_to_unit(join64(b[2], b[3]))};
}

double EntryDist::fourth_moment() const {
    switch (kind) {
        case EntryKind::ComplexGaussian: return 2.0;
        case EntryKind::Qpsk: return 1.0;
        case EntryKind::RealGaussian: return 3.0;
        case EntryKind::Rademacher: return 1.0;
    }
    return 0.0;
}

double EntryDist::second_moment_sq() const {
    return is_complex() ? 0.0 : 1.0;
}

bool EntryDist::is_complex() const {
    return kind == EntryKind::ComplexGaussian || kind == EntryKind::Qpsk;
}

const char* EntryDist::name() const {
    switch (kind) {
        case EntryKind::ComplexGaussian: return "complex-gaussian";
        case EntryKind::Qpsk: return "qpsk";
        case EntryKind::RealGaussian: return "real-gaussian";
        case EntryKind::Rademacher: return "rademacher";
    }
    return "?";
}

EntryDist EntryDist::from_name(const std::string& name) {
    if (name == "complex-gaussian") return {EntryKind::ComplexGaussian};
    if (name == "qpsk") return {EntryKind::Qpsk};
    if (name == "real-gaussian") return {EntryKind::RealGaussian};
    if (name == "rademacher") return {EntryKind::Rademacher};
    throw std::invalid_argument("unknown entry distribution: " + name);
}

void ModelParams::validate() const {
    if (!(c > 0.0)) throw std::invalid_argument("model: c must be positive");
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("model: sigma2 must be nonnegative");
    if (m_stages < 1) throw std::invalid_argument("model: m_stages must be >= 1");
}

bool Ensemble::unit_powers() const {
    return (powers.array() == 1.0).all();
}

std::complex<double> sample_entry(EntryDist dist, const RngStream& stream,
                                  std::uint32_t i, std::uint32_t k) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (dist.kind) {
        case EntryKind::ComplexGaussian: {
            // |v|^2 ~ Exp(1), phase uniform: E v = 0, E v^2 = 0, E|v|^2 = 1.
            const auto u = stream.uniform_pair(i, k);
            const double r = std::sqrt(-std::log(u[0]));
            return {r * std::cos(two_pi * u[1]), r * std::sin(two_pi * u[1])};
        }
        case EntryKind::Qpsk: {
            const auto b = stream.block(i, k);
            const double re = (b[0] & 1u) ? 1.0 : -1.0;
            const double im = (b[0] & 2u) ? 1.0 : -1.0;
            return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
        }
        case EntryKind::RealGaussian: {
            const auto u = stream.uniform_pair(i, k);
            return {std::sqrt(-2.0 * std::log(u[0])) * std::cos(two_pi * u[1]), 0.0};
        }
        case EntryKind::Rademacher: {
            const auto b = stream.block(i, k);
            return {(b[0] & 1u) ? 1.0 : -1.0, 0.0};
        }
    }
    return {};
}

Ensemble sample_ensemble(int N, int K, const Eigen::VectorXd& powers, EntryDist dist,
                         std::uint64_t seed, std::uint64_t trial) {
    if (N < 1 || K < 1) throw std::invalid_argument("sample_ensemble: N, K must be >= 1");
    if (powers.size() != K) throw std::invalid_argument("sample_ensemble: powers length != K");
    if ((powers.array() <= 0.0).any())
        throw std::invalid_argument("sample_ensemble: powers must be positive");

    Ensemble e;
    e.N = N;
    e.K = K;
    e.powers = powers;
    e.S.resize(N, K);
    const RngStream stream(seed, trial);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < N; ++i) {
            e.S(i, k) = scale * sample_entry(dist, stream, static_cast<std::uint32_t>(i),
                                             static_cast<std::uint32_t>(k));
        }
    }
    return e;
}

Ensemble sample_ensemble(int N, int K, EntryDist dist, std::uint64_t seed,
                         std::uint64_t trial) {
    return sample_ensemble(N, K, Eigen::VectorXd::Ones(K), dist, seed, trial);
}

}  // namespace rrsir
