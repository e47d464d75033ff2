#include "hdqw/bitstring.hpp"

#include <bit>

namespace hdqw {

void BitString::push_back(bool value) {
    if ((size_ & 63) == 0) words_.push_back(0);
    ++size_;
    set(size_ - 1, value);
}

std::size_t BitString::count_ones() const {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

std::vector<std::uint8_t> BitString::to_bytes() const {
    std::vector<std::uint8_t> bytes((size_ + 7) / 8, 0);
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return bytes;
}

std::string BitString::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (auto b : to_bytes()) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 15]);
    }
    return out;
}

}  // namespace hdqw
