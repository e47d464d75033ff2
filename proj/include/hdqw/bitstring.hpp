#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hdqw {

/// Packed bit string. Bit i lives in word i / 64 at bit position i % 64.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t size) : words_((size + 63) / 64, 0), size_(size) {}

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool value) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value) words_[i >> 6] |= mask;
        else words_[i >> 6] &= ~mask;
    }
    void push_back(bool value);

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    std::size_t count_ones() const;

    /// Bits in order, packed MSB-first into bytes; the last byte is zero padded.
    std::vector<std::uint8_t> to_bytes() const;
    /// Lowercase hex of to_bytes().
    std::string to_hex() const;

    bool operator==(const BitString& other) const = default;

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

}  // namespace hdqw
