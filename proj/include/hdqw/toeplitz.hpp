// Toeplitz-matrix hashing over GF(2), the two-universal family used for
// privacy amplification.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hdqw/bitstring.hpp"

namespace hdqw {

/// Carry-less product of GF(2) polynomials stored as packed words
/// (bit k of word k / 64 is the coefficient of z^k).
std::vector<std::uint64_t> gf2_multiply(std::span<const std::uint64_t> a,
                                        std::span<const std::uint64_t> b);

/// An output_bits x input_bits Toeplitz matrix T[i][j] = s[i - j + input_bits - 1]
/// defined by output_bits + input_bits - 1 seed bits s drawn from SplitMix64(seed).
class ToeplitzHash {
public:
    ToeplitzHash(std::size_t output_bits, std::size_t input_bits, std::uint64_t seed);

    std::size_t output_bits() const { return output_bits_; }
    std::size_t input_bits() const { return input_bits_; }
    const BitString& seed_bits() const { return seed_bits_; }

    bool entry(std::size_t row, std::size_t col) const {
        return seed_bits_.get(row + input_bits_ - 1 - col);
    }

    /// T * input over GF(2), computed as a polynomial product of the seed
    /// and the input. Throws ParameterError when input.size() != input_bits().
    BitString apply(const BitString& input) const;

private:
    std::size_t output_bits_;
    std::size_t input_bits_;
    BitString seed_bits_;
};

}  // namespace hdqw
