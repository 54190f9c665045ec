// SPDX-License-Identifier: Apache-2.0

#ifndef RRSIR_RNG_HPP_
#define RRSIR_RNG_HPP_

#include <array>
#include <cstdint>

namespace rrsir {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
///
/// Every random draw in the project is a pure function of (key, counter), so
/// simulations are reproducible bit-for-bit regardless of thread count or the
/// order in which entries are generated.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// A positioned random stream: one (seed, trial) pair.  Draws are addressed by
/// (i, k, tag); matrix entry (i, k) uses tag 0, auxiliary draws use tags >= 1.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t trial) : seed_(seed), trial_(trial) {}

    /// Two uniforms in the open interval (0, 1), 53-bit resolution each.
    std::array<double, 2> uniform_pair(std::uint32_t i, std::uint32_t k,
                                       std::uint32_t tag = 0) const;

    /// Raw 128-bit block for integer-valued draws (sign bits etc.).
    std::array<std::uint32_t, 4> block(std::uint32_t i, std::uint32_t k,
                                       std::uint32_t tag = 0) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t trial() const { return trial_; }

  private:
    std::uint64_t seed_;
    std::uint64_t trial_;
};

}  // namespace rrsir

#endif  // RRSIR_RNG_HPP_
