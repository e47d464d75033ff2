#include "hdqw/toeplitz.hpp"

#include <algorithm>
#include <utility>

#include "hdqw/entropy.hpp"
#include "hdqw/rng.hpp"

#if defined(__x86_64__)
#include <immintrin.h>
#endif

namespace hdqw {

namespace {

using Word = std::uint64_t;
using WordPair = std::pair<Word, Word>;

WordPair clmul_portable(Word a, Word b) {
    // 4-bit window over b; a * k for k < 16 spills at most 3 bits into the high word.
    Word lo_table[16];
    Word hi_table[16];
    lo_table[0] = 0;
    hi_table[0] = 0;
    for (int k = 1; k < 16; ++k) {
        Word lo = 0, hi = 0;
        for (int bit = 0; bit < 4; ++bit) {
            if (k & (1 << bit)) {
                lo ^= a << bit;
                if (bit) hi ^= a >> (64 - bit);
            }
        }
        lo_table[k] = lo;
        hi_table[k] = hi;
    }
    Word lo = 0, hi = 0;
    for (int shift = 60; shift >= 0; shift -= 4) {
        hi = (hi << 4) | (lo >> 60);
        lo <<= 4;
        const int k = static_cast<int>((b >> shift) & 15u);
        lo ^= lo_table[k];
        hi ^= hi_table[k];
    }
    return {lo, hi};
}

#if defined(__x86_64__)
__attribute__((target("pclmul,sse2"))) WordPair clmul_hardware(Word a, Word b) {
    const __m128i va = _mm_set_epi64x(0, static_cast<long long>(a));
    const __m128i vb = _mm_set_epi64x(0, static_cast<long long>(b));
    const __m128i r = _mm_clmulepi64_si128(va, vb, 0x00);
    return {static_cast<Word>(_mm_cvtsi128_si64(r)),
            static_cast<Word>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)))};
}

bool has_pclmul() {
    static const bool supported = __builtin_cpu_supports("pclmul");
    return supported;
}
#endif

WordPair clmul(Word a, Word b) {
#if defined(__x86_64__)
    if (has_pclmul()) return clmul_hardware(a, b);
#endif
    return clmul_portable(a, b);
}

constexpr std::size_t kSchoolbookWords = 16;

// out[0, 2n) = a[0, n) * b[0, n).
void multiply_equal(const Word* a, const Word* b, std::size_t n, Word* out) {
    std::fill(out, out + 2 * n, Word{0});
    if (n <= kSchoolbookWords) {
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                const auto [lo, hi] = clmul(a[i], b[j]);
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
        return;
    }
    // Karatsuba: a = a0 + a1 z^h, b likewise, with the high halves at least as long.
    const std::size_t h = n / 2;
    const std::size_t k = n - h;
    std::vector<Word> sum_a(k, 0), sum_b(k, 0), low(2 * k), high(2 * k), mid(2 * k);
    std::copy(a, a + h, sum_a.begin());
    std::copy(b, b + h, sum_b.begin());
    for (std::size_t i = 0; i < k; ++i) {
        sum_a[i] ^= a[h + i];
        sum_b[i] ^= b[h + i];
    }
    std::vector<Word> a0(a, a + h), b0(b, b + h);
    a0.resize(k, 0);
    b0.resize(k, 0);
    multiply_equal(a0.data(), b0.data(), k, low.data());
    multiply_equal(a + h, b + h, k, high.data());
    multiply_equal(sum_a.data(), sum_b.data(), k, mid.data());
    for (std::size_t i = 0; i < 2 * k; ++i) mid[i] ^= low[i] ^ high[i];
    // low has at most 2h significant words.
    for (std::size_t i = 0; i < 2 * h; ++i) out[i] ^= low[i];
    for (std::size_t i = 0; i < 2 * k && h + i < 2 * n; ++i) out[h + i] ^= mid[i];
    for (std::size_t i = 0; i < 2 * k && 2 * h + i < 2 * n; ++i) out[2 * h + i] ^= high[i];
}

}  // namespace

std::vector<std::uint64_t> gf2_multiply(std::span<const std::uint64_t> a,
                                        std::span<const std::uint64_t> b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<Word> pa(a.begin(), a.end()), pb(b.begin(), b.end());
    pa.resize(n, 0);
    pb.resize(n, 0);
    std::vector<Word> out(2 * n);
    multiply_equal(pa.data(), pb.data(), n, out.data());
    out.resize(a.size() + b.size());
    return out;
}

ToeplitzHash::ToeplitzHash(std::size_t output_bits, std::size_t input_bits, std::uint64_t seed)
    : output_bits_(output_bits), input_bits_(input_bits) {
    if (output_bits_ > input_bits_)
        throw ParameterError("toeplitz hash: output length exceeds input length");
    if (output_bits_ == 0) return;
    seed_bits_ = BitString(output_bits_ + input_bits_ - 1);
    SplitMix64 gen(seed);
    for (auto& w : seed_bits_.words()) w = gen.next();
    const std::size_t tail = seed_bits_.size() % 64;
    if (tail) seed_bits_.words().back() &= (Word{1} << tail) - 1;
}

BitString ToeplitzHash::apply(const BitString& input) const {
    if (input.size() != input_bits_) throw ParameterError("toeplitz hash: input length mismatch");
    BitString out(output_bits_);
    if (output_bits_ == 0) return out;
    // y_i = sum_j s[i + L - 1 - j] x_j is the coefficient of z^(i + L - 1) in S(z) X(z).
    const auto product = gf2_multiply(seed_bits_.words(), input.words());
    const std::size_t offset = input_bits_ - 1;
    const auto words = out.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        const std::size_t start = offset + 64 * w;
        const std::size_t shift = start & 63;
        const std::size_t word = start >> 6;
        Word value = product[word] >> shift;
        if (shift && word + 1 < product.size()) value |= product[word + 1] << (64 - shift);
        words[w] = value;
    }
    const std::size_t tail = output_bits_ % 64;
    if (tail) words.back() &= (Word{1} << tail) - 1;
    return out;
}

}  // namespace hdqw
