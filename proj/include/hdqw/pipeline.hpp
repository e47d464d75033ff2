// End-to-end simulation of the randomness-generation protocol: a source of
// N walker signals (honest or depolarized), a random test subset measured
// against the honest state, extraction measurements on the rest, and
// Toeplitz privacy amplification of the raw digits.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdqw/bitstring.hpp"
#include "hdqw/entropy.hpp"
#include "hdqw/walk.hpp"

namespace hdqw {

struct SourceModel {
    /// Walk that defines the honest state |w_0>. Its initial point must be
    /// the all-zeros basis point.
    WalkConfig config;
    /// Depolarization probability per signal.
    double Q = 0.0;
    std::uint64_t rng_seed = 0;
};

/// Per-signal outcomes of both measurements. Each signal is later either
/// tested or used for extraction, never both.
struct SignalBatch {
    /// Extraction outcome in [0, outcome_space_size).
    std::vector<std::uint32_t> digits;
    /// Test outcome: 1 for the element I - [w_0].
    std::vector<std::uint8_t> test;
    /// Whether the source depolarized the signal (bookkeeping only).
    std::vector<std::uint8_t> depolarized;
    std::uint32_t alphabet = 0;
};

/// Signals are generated in fixed-size chunks, each from its own derived
/// seed, so the result does not depend on the thread count.
SignalBatch sample_outcomes(const SourceModel& source, std::int64_t N, MeasurementMode mode,
                            unsigned threads = 0);

/// Sorted uniformly random m-subset of [0, N), by selection sampling.
std::vector<std::int64_t> random_subset(std::int64_t N, std::int64_t m, std::uint64_t seed);

/// Bits per digit for an alphabet of size d: ceil(log2 d), at least 1.
unsigned digit_width(std::uint32_t alphabet);
/// Fixed-width big-endian encoding of each digit.
BitString encode_digits(std::span<const std::uint32_t> digits, std::uint32_t alphabet);
std::vector<std::uint32_t> decode_digits(const BitString& bits, std::uint32_t alphabet);

/// Encode and hash to `ell` bits with a Toeplitz matrix seeded by `seed`.
/// Throws ParameterError when ell exceeds the encoded input length.
BitString privacy_amplify(std::span<const std::uint32_t> raw, std::uint32_t alphabet,
                          std::size_t ell, std::uint64_t seed);

struct RunRecord {
    MeasurementMode mode = MeasurementMode::All;
    std::int64_t N = 0;
    std::int64_t m = 0;
    std::vector<std::int64_t> t_subset;
    BitString q;
    double w_q = 0.0;
    std::vector<std::uint32_t> raw;
    std::uint32_t alphabet = 0;
    /// Length bound evaluated at the observed w_q.
    RateResult rate;
    BitString output;
    std::uint64_t seed = 0;
    std::uint64_t hash_seed = 0;
    bool aborted = false;

    std::string seed_matrix_id() const;
    /// Key-value document: subset (or its digest above 10^4 entries), digest
    /// of q, w_q, ell, and the output bits in hex.
    std::string to_json() const;
};

/// Seed streams derived from SourceModel::rng_seed.
enum class SeedStream : std::uint64_t { Signals = 1, Subset = 2, Hash = 3 };

/// Runs the protocol. gamma is -log2 of the largest outcome probability of
/// the honest state under `mode`; the output length is floor(ell) at the
/// observed test weight, and ell <= 0 aborts with an empty output.
RunRecord run_protocol(const SourceModel& source, const ProtocolParams& params,
                       MeasurementMode mode, unsigned threads = 0);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::span<const std::uint8_t> bytes);

}  // namespace hdqw
