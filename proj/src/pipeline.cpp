#include "hdqw/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "hdqw/maxprob.hpp"
#include "hdqw/parallel.hpp"
#include "hdqw/rng.hpp"
#include "hdqw/toeplitz.hpp"

namespace hdqw {

namespace {

constexpr std::int64_t kChunkSignals = 1 << 16;
constexpr std::size_t kInlineSubsetLimit = 10'000;

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<double> cumulative(const Distribution& dist) {
    std::vector<double> cdf(dist.probs.size());
    std::partial_sum(dist.probs.begin(), dist.probs.end(), cdf.begin());
    const double total = cdf.back();
    for (auto& c : cdf) c /= total;
    cdf.back() = 1.0;
    return cdf;
}

std::uint32_t draw(const std::vector<double>& cdf, double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1));
}

WalkConfig honest_config(const WalkConfig& config) {
    WalkConfig honest = config;
    honest.initial = BasisPoint{};
    return honest;
}

}  // namespace

SignalBatch sample_outcomes(const SourceModel& source, std::int64_t N, MeasurementMode mode,
                            unsigned threads) {
    if (N < 2) throw ParameterError("sample_outcomes: need N >= 2");
    if (!(source.Q >= 0.0 && source.Q <= 1.0)) throw ParameterError("source Q must lie in [0, 1]");
    const WalkConfig config = honest_config(source.config);
    const Distribution honest = distribution(evolve(config), mode);
    const std::vector<double> cdf = cumulative(honest);
    const auto alphabet = static_cast<std::uint32_t>(honest.outcome_count());
    // Overlap of the maximally mixed state with [w_0].
    const double mixed_fail = 1.0 - 1.0 / static_cast<double>(config.dimension());

    SignalBatch batch;
    batch.alphabet = alphabet;
    batch.digits.resize(N);
    batch.test.resize(N);
    batch.depolarized.resize(N);
    const std::uint64_t stream = derive_seed(source.rng_seed, static_cast<std::uint64_t>(SeedStream::Signals));
    const auto chunks = static_cast<std::size_t>((N + kChunkSignals - 1) / kChunkSignals);
    parallel_for(chunks, threads, [&](std::size_t chunk) {
        SplitMix64 gen(derive_seed(stream, chunk));
        const std::int64_t begin = static_cast<std::int64_t>(chunk) * kChunkSignals;
        const std::int64_t end = std::min(N, begin + kChunkSignals);
        for (std::int64_t i = begin; i < end; ++i) {
            const bool noisy = gen.uniform() < source.Q;
            batch.depolarized[i] = noisy;
            if (noisy) {
                batch.test[i] = gen.uniform() < mixed_fail;
                batch.digits[i] = static_cast<std::uint32_t>(gen.below(alphabet));
            } else {
                batch.test[i] = 0;
                batch.digits[i] = draw(cdf, gen.uniform());
            }
        }
    });
    return batch;
}

std::vector<std::int64_t> random_subset(std::int64_t N, std::int64_t m, std::uint64_t seed) {
    if (m < 0 || m > N) throw ParameterError("random_subset: need 0 <= m <= N");
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(m));
    SplitMix64 gen(seed);
    std::int64_t needed = m;
    for (std::int64_t i = 0; i < N && needed > 0; ++i) {
        if (static_cast<std::int64_t>(gen.below(static_cast<std::uint64_t>(N - i))) < needed) {
            out.push_back(i);
            --needed;
        }
    }
    return out;
}

unsigned digit_width(std::uint32_t alphabet) {
    if (alphabet < 2) return 1;
    unsigned width = 0;
    while ((std::uint64_t{1} << width) < alphabet) ++width;
    return width;
}

BitString encode_digits(std::span<const std::uint32_t> digits, std::uint32_t alphabet) {
    const unsigned width = digit_width(alphabet);
    BitString bits(digits.size() * width);
    std::size_t pos = 0;
    for (auto d : digits) {
        if (d >= alphabet) throw ParameterError("encode_digits: digit outside alphabet");
        for (unsigned b = width; b-- > 0;) bits.set(pos++, (d >> b) & 1u);
    }
    return bits;
}

std::vector<std::uint32_t> decode_digits(const BitString& bits, std::uint32_t alphabet) {
    const unsigned width = digit_width(alphabet);
    if (bits.size() % width) throw ParameterError("decode_digits: length is not a multiple of the digit width");
    std::vector<std::uint32_t> digits(bits.size() / width);
    std::size_t pos = 0;
    for (auto& d : digits) {
        d = 0;
        for (unsigned b = 0; b < width; ++b) d = (d << 1) | static_cast<std::uint32_t>(bits.get(pos++));
    }
    return digits;
}

BitString privacy_amplify(std::span<const std::uint32_t> raw, std::uint32_t alphabet,
                          std::size_t ell, std::uint64_t seed) {
    const std::size_t input_bits = raw.size() * digit_width(alphabet);
    if (ell > input_bits) throw ParameterError("privacy_amplify: ell exceeds the encoded input length");
    if (ell == 0) return {};
    const ToeplitzHash hash(ell, input_bits, seed);
    return hash.apply(encode_digits(raw, alphabet));
}

std::string RunRecord::seed_matrix_id() const { return "toeplitz-splitmix64:" + hex64(hash_seed); }

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < length; ++i) {
        out.push_back(kDigits[digest[i] >> 4]);
        out.push_back(kDigits[digest[i] & 15]);
    }
    return out;
}

std::string RunRecord::to_json() const {
    nlohmann::ordered_json doc;
    doc["mode"] = to_string(mode);
    doc["case"] = to_string(rate.extraction);
    doc["N"] = N;
    doc["m"] = m;
    doc["n"] = N - m;
    doc["seed"] = seed;
    if (t_subset.size() <= kInlineSubsetLimit) {
        doc["t_subset"] = t_subset;
    } else {
        std::vector<std::uint8_t> bytes;
        bytes.reserve(t_subset.size() * 8);
        for (auto v : t_subset)
            for (int b = 7; b >= 0; --b) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
        doc["t_subset_sha256"] = sha256_hex(bytes);
    }
    const auto q_bytes = q.to_bytes();
    doc["q_weight"] = q.count_ones();
    doc["q_sha256"] = sha256_hex(q_bytes);
    doc["w_q"] = w_q;
    doc["alphabet"] = alphabet;
    doc["gamma"] = rate.gamma;
    doc["delta"] = rate.delta;
    doc["ell"] = rate.ell;
    doc["rate"] = rate.rate;
    doc["failure_prob"] = rate.failure_prob;
    if (rate.extraction == ExtractionCase::UsingAll) doc["smoothing"] = rate.smoothing;
    else doc["closeness"] = rate.closeness;
    doc["aborted"] = aborted;
    doc["seed_matrix_id"] = seed_matrix_id();
    doc["output_bits"] = output.size();
    doc["output"] = output.to_hex();
    return doc.dump(2);
}

RunRecord run_protocol(const SourceModel& source, const ProtocolParams& params,
                       MeasurementMode mode, unsigned threads) {
    params.validate();
    const WalkConfig config = honest_config(source.config);
    config.validate();

    RunRecord record;
    record.mode = mode;
    record.N = params.N;
    record.m = params.m;
    record.seed = source.rng_seed;

    const SignalBatch batch = sample_outcomes(source, params.N, mode, threads);
    record.alphabet = batch.alphabet;
    record.t_subset = random_subset(params.N, params.m,
                                    derive_seed(source.rng_seed, static_cast<std::uint64_t>(SeedStream::Subset)));

    record.q = BitString(record.t_subset.size());
    record.raw.reserve(static_cast<std::size_t>(params.n()));
    std::size_t next_test = 0;
    for (std::int64_t i = 0; i < params.N; ++i) {
        if (next_test < record.t_subset.size() && record.t_subset[next_test] == i) {
            record.q.set(next_test, batch.test[i]);
            ++next_test;
        } else {
            record.raw.push_back(batch.digits[i]);
        }
    }
    record.w_q = static_cast<double>(record.q.count_ones()) / static_cast<double>(params.m);

    const double gamma = gamma_from_g(max_outcome_prob(config, mode));
    ProtocolParams observed = params;
    observed.Q = record.w_q;
    record.rate = rate_for_mode(observed, gamma, config.P, config.kappa, mode);

    record.hash_seed = derive_seed(source.rng_seed, static_cast<std::uint64_t>(SeedStream::Hash));
    if (!(record.rate.ell > 0.0)) {
        record.aborted = true;
        return record;
    }
    const auto ell = static_cast<std::size_t>(std::floor(record.rate.ell));
    record.output = privacy_amplify(record.raw, record.alphabet, ell, record.hash_seed);
    return record;
}

}  // namespace hdqw
