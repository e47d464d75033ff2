#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hdqw/bitstring.hpp"
#include "hdqw/maxprob.hpp"
#include "hdqw/pipeline.hpp"
#include "hdqw/rng.hpp"
#include "hdqw/toeplitz.hpp"

using namespace hdqw;

namespace {

BitString random_bits(std::size_t n, std::mt19937_64& gen) {
    BitString b(n);
    for (std::size_t i = 0; i < n; ++i) b.set(i, gen() & 1u);
    return b;
}

// Naive matrix-vector product over GF(2), using the documented matrix layout
// T[i][j] = s[i - j + n - 1] with s the raw seed bits.
BitString naive_hash(const ToeplitzHash& h, const BitString& x) {
    const auto& s = h.seed_bits();
    const std::size_t n = h.input_bits();
    BitString y(h.output_bits());
    for (std::size_t i = 0; i < h.output_bits(); ++i) {
        bool acc = false;
        for (std::size_t j = 0; j < n; ++j) acc ^= s.get(i + n - 1 - j) && x.get(j);
        y.set(i, acc);
    }
    return y;
}

SourceModel source(int P, int kappa, int T, double Q, std::uint64_t seed) {
    SourceModel s;
    s.config.P = P;
    s.config.kappa = kappa;
    s.config.T = T;
    s.Q = Q;
    s.rng_seed = seed;
    return s;
}

}  // namespace

TEST_CASE("bit strings") {
    BitString b;
    for (int i = 0; i < 70; ++i) b.push_back(i % 3 == 0);
    CHECK(b.size() == 70);
    CHECK(b.count_ones() == 24);
    BitString h(12);
    h.set(0, true);
    h.set(11, true);
    CHECK(h.to_hex() == "8010");
    CHECK(h.to_bytes() == std::vector<std::uint8_t>{0x80, 0x10});
}

TEST_CASE("carry-less multiply matches schoolbook") {
    std::mt19937_64 gen(8);
    for (std::size_t na : {1u, 3u, 17u, 40u, 129u})
        for (std::size_t nb : {1u, 2u, 33u, 100u}) {
            std::vector<std::uint64_t> a(na), b(nb);
            for (auto& w : a) w = gen();
            for (auto& w : b) w = gen();
            std::vector<std::uint64_t> ref(na + nb, 0);
            for (std::size_t i = 0; i < na * 64; ++i)
                if ((a[i / 64] >> (i % 64)) & 1u)
                    for (std::size_t j = 0; j < nb * 64; ++j)
                        if ((b[j / 64] >> (j % 64)) & 1u) ref[(i + j) / 64] ^= std::uint64_t{1} << ((i + j) % 64);
            auto got = gf2_multiply(a, b);
            got.resize(na + nb, 0);
            CHECK(got == ref);
        }
}

TEST_CASE("toeplitz hash matches the naive GF(2) product") {
    std::mt19937_64 gen(1234);
    std::uniform_int_distribution<std::size_t> len(1, 300);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = len(gen);
        const std::size_t l = std::uniform_int_distribution<std::size_t>(1, n)(gen);
        const ToeplitzHash h(l, n, gen());
        CHECK(h.seed_bits().size() == l + n - 1);
        const auto x = random_bits(n, gen);
        if (!(h.apply(x) == naive_hash(h, x))) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("toeplitz structure and linearity") {
    const ToeplitzHash h(20, 50, 77);
    for (std::size_t i = 1; i < 20; ++i)
        for (std::size_t j = 1; j < 50; ++j) CHECK(h.entry(i, j) == h.entry(i - 1, j - 1));
    std::mt19937_64 gen(4);
    const auto a = random_bits(50, gen), b = random_bits(50, gen);
    BitString sum(50);
    for (std::size_t i = 0; i < 50; ++i) sum.set(i, a.get(i) != b.get(i));
    const auto ha = h.apply(a), hb = h.apply(b), hs = h.apply(sum);
    for (std::size_t i = 0; i < 20; ++i) CHECK(hs.get(i) == (ha.get(i) != hb.get(i)));
    CHECK(h.apply(BitString(50)).count_ones() == 0);
    CHECK_THROWS_AS(ToeplitzHash(51, 50, 1), ParameterError);
    CHECK_THROWS_AS(h.apply(BitString(49)), ParameterError);
}

TEST_CASE("privacy amplification") {
    const std::vector<std::uint32_t> zeros(64, 0);
    CHECK(privacy_amplify(zeros, 10, 0, 5).empty());
    CHECK(privacy_amplify(zeros, 10, 200, 5).count_ones() == 0);
    CHECK_THROWS_AS(privacy_amplify(zeros, 10, 257, 5), ParameterError);

    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint32_t> raw(64);
        for (auto& d : raw) d = static_cast<std::uint32_t>(gen() % 20);
        const std::size_t ell = 1 + gen() % 300;
        const auto out = privacy_amplify(raw, 20, ell, trial);
        const ToeplitzHash h(ell, 64 * 5, trial);
        CHECK(out == naive_hash(h, encode_digits(raw, 20)));
    }
}

TEST_CASE("digit encoding") {
    CHECK(digit_width(2) == 1);
    CHECK(digit_width(3) == 2);
    CHECK(digit_width(4) == 2);
    CHECK(digit_width(5) == 3);
    CHECK(digit_width(816) == 10);
    const std::vector<std::uint32_t> d{5, 0, 3};
    const auto bits = encode_digits(d, 6);
    CHECK(bits.size() == 9);
    CHECK(bits.to_hex() == "a180");  // 101 000 011
    std::mt19937_64 gen(6);
    for (std::uint32_t alphabet : {2u, 3u, 5u, 12u, 40u, 816u}) {
        std::vector<std::uint32_t> xs(200);
        for (auto& x : xs) x = static_cast<std::uint32_t>(gen() % alphabet);
        CHECK(decode_digits(encode_digits(xs, alphabet), alphabet) == xs);
    }
    CHECK_THROWS_AS(encode_digits(std::vector<std::uint32_t>{6}, 6), ParameterError);
}

TEST_CASE("random subset") {
    const auto s = random_subset(1000, 100, 3);
    CHECK(s.size() == 100);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    CHECK(s.back() < 1000);
    CHECK(random_subset(1000, 100, 3) == s);
    CHECK(random_subset(10, 10, 1).size() == 10);
    CHECK_THROWS_AS(random_subset(10, 11, 1), ParameterError);
}

TEST_CASE("honest source") {
    const auto batch = sample_outcomes(source(5, 1, 1, 0.0, 9), 100'000, MeasurementMode::All);
    CHECK(std::count(batch.test.begin(), batch.test.end(), 1) == 0);
    CHECK(batch.alphabet == 10);
    // One step from (0,0): outcomes (1,0) and (4,1), probability 1/2 each.
    std::vector<double> counts(10, 0.0);
    for (auto d : batch.digits) counts[d] += 1.0;
    const auto exact = distribution(evolve(source(5, 1, 1, 0.0, 9).config), MeasurementMode::All);
    double chi2 = 0.0;
    int cells = 0;
    for (std::size_t i = 0; i < 10; ++i) {
        if (exact.probs[i] < 1e-12) {
            CHECK(counts[i] == 0.0);
            continue;
        }
        const double e = exact.probs[i] * 100'000;
        chi2 += (counts[i] - e) * (counts[i] - e) / e;
        ++cells;
    }
    CHECK(cells == 2);
    CHECK(chi2 < 10.83);  // one degree of freedom, p = 0.001
}

TEST_CASE("chi-square against a spread-out distribution") {
    const auto s = source(5, 2, 17, 0.0, 31);
    const auto batch = sample_outcomes(s, 100'000, MeasurementMode::All);
    const auto exact = distribution(evolve(s.config), MeasurementMode::All);
    std::vector<double> counts(exact.outcome_count(), 0.0);
    for (auto d : batch.digits) counts[d] += 1.0;
    double chi2 = 0.0;
    int dof = -1;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double e = exact.probs[i] * 100'000;
        if (e < 5.0) continue;
        chi2 += (counts[i] - e) * (counts[i] - e) / e;
        ++dof;
    }
    // Mean dof, standard deviation sqrt(2 dof); allow five of them.
    CHECK(chi2 < dof + 5.0 * std::sqrt(2.0 * dof));
}

TEST_CASE("depolarized source test frequency") {
    const std::int64_t N = 200'000;
    const auto full = sample_outcomes(source(3, 2, 5, 1.0, 12), N, MeasurementMode::All);
    const double p = 1.0 - 1.0 / 12.0;
    const double freq = static_cast<double>(std::count(full.test.begin(), full.test.end(), 1)) / N;
    CHECK(std::abs(freq - p) <= 3.0 * std::sqrt(p * (1 - p) / N));

    const auto part = sample_outcomes(source(3, 2, 5, 0.2, 13), N, MeasurementMode::All);
    const double q = 0.2 * p;
    const double f2 = static_cast<double>(std::count(part.test.begin(), part.test.end(), 1)) / N;
    CHECK(std::abs(f2 - q) <= 3.0 * std::sqrt(q * (1 - q) / N));
}

TEST_CASE("sampling does not depend on the thread count") {
    const auto s = source(11, 3, 40, 0.3, 55);
    const auto a = sample_outcomes(s, 300'000, MeasurementMode::MemoryOnly, 1);
    const auto b = sample_outcomes(s, 300'000, MeasurementMode::MemoryOnly, 3);
    CHECK(a.digits == b.digits);
    CHECK(a.test == b.test);
}

TEST_CASE("protocol run at zero noise") {
    auto s = source(5, 1, 239, 0.0, 42);
    ProtocolParams p = ProtocolParams::with_sqrt_sample(1'000'000);
    const auto rec = run_protocol(s, p, MeasurementMode::MemoryOnly);
    CHECK(rec.t_subset.size() == static_cast<std::size_t>(p.m));
    CHECK(rec.raw.size() == static_cast<std::size_t>(p.n()));
    CHECK(rec.q.size() == static_cast<std::size_t>(p.m));
    CHECK(rec.w_q == 0.0);
    const double gamma = gamma_from_g(max_outcome_prob(s.config, MeasurementMode::MemoryOnly));
    const auto expect = ell_memory_case(p, gamma, 10);
    CHECK(rec.rate.ell == expect.ell);
    CHECK(!rec.aborted);
    CHECK(rec.output.size() == static_cast<std::size_t>(std::floor(expect.ell)));
    const double ones = static_cast<double>(rec.output.count_ones()) / rec.output.size();
    CHECK(std::abs(ones - 0.5) < 0.02);

    const auto again = run_protocol(s, p, MeasurementMode::MemoryOnly);
    CHECK(again.output == rec.output);
    CHECK(again.t_subset == rec.t_subset);
    CHECK(again.to_json() == rec.to_json());
}

TEST_CASE("protocol run with noise") {
    auto s = source(3, 2, 3, 0.2, 8);
    const auto p = ProtocolParams::with_sqrt_sample(1'000'000);
    const auto rec = run_protocol(s, p, MeasurementMode::All);
    const double q = 0.2 * (1.0 - 1.0 / 12.0);
    CHECK(std::abs(rec.w_q - q) <= 3.0 * std::sqrt(q * (1 - q) / static_cast<double>(p.m)));
    ProtocolParams observed = p;
    observed.Q = rec.w_q;
    CHECK(rec.rate.ell == ell_using_all(observed, rec.rate.gamma, 12).ell);
    CHECK(rec.output.size() == static_cast<std::size_t>(std::max(0.0, std::floor(rec.rate.ell))));
}

TEST_CASE("protocol aborts when the bound is empty") {
    auto s = source(5, 1, 10, 0.9, 1);
    const auto rec = run_protocol(s, ProtocolParams::with_sqrt_sample(100'000), MeasurementMode::MemoryOnly);
    CHECK(rec.aborted);
    CHECK(rec.output.empty());
    CHECK(rec.rate.rate == 0.0);
    ProtocolParams bad;
    bad.N = 100;
    bad.m = 100;
    CHECK_THROWS_AS(run_protocol(s, bad, MeasurementMode::All), ParameterError);
}

TEST_CASE("run record document") {
    auto s = source(3, 1, 4, 0.0, 2);
    const auto rec = run_protocol(s, ProtocolParams::with_sqrt_sample(10'000), MeasurementMode::PositionOnly);
    const auto doc = rec.to_json();
    CHECK(doc.find("\"t_subset\"") != std::string::npos);
    CHECK(doc.find("\"q_sha256\"") != std::string::npos);
    CHECK(doc.find("\"closeness\"") != std::string::npos);
    CHECK(doc.find(rec.seed_matrix_id()) != std::string::npos);

    ProtocolParams wide;
    wide.N = 50'000;
    wide.m = 20'000;
    const auto big = run_protocol(s, wide, MeasurementMode::PositionOnly);
    const auto big_doc = big.to_json();
    CHECK(big_doc.find("\"t_subset\"") == std::string::npos);
    CHECK(big_doc.find("\"t_subset_sha256\"") != std::string::npos);
}

TEST_CASE("sha-256 digest") {
    const std::string abc = "abc";
    const std::vector<std::uint8_t> bytes(abc.begin(), abc.end());
    CHECK(sha256_hex(bytes) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
