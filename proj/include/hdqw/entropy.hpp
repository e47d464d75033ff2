// Closed-form security quantities: d-ary entropies, the sampling deviation
// delta, the classical sampling error bound, and the extractable output
// length for the full-measurement and marginal-measurement protocols.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "hdqw/maxprob.hpp"
#include "hdqw/walk.hpp"

namespace hdqw {

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// h_d(x) = x log_d(d-1) - x log_d x - (1-x) log_d(1-x), with 0 log 0 = 0.
double entropy_d(double x, std::int64_t d);

/// h_d on [0, 1 - 1/d], 0 below, 1 above.
double extended_entropy_d(double x, std::int64_t d);

/// sqrt((N+2) ln(2/eps^2) / (m N)).
double sampling_delta(std::int64_t N, std::int64_t m, double epsilon);

/// The same deviation written with n = N - m:
/// sqrt((m+n+2) ln(2/eps^2) / (m (m+n))).
double sampling_delta_split(std::int64_t m, std::int64_t n, double epsilon);

/// 2 exp(-delta^2 m N / (N+2)).
double classical_sampling_error(std::int64_t N, std::int64_t m, double delta);

struct ProtocolParams {
    std::int64_t N = 1'000'000;
    std::int64_t m = 1'000;
    double epsilon = 1e-7;
    double epsilon_pa = 1e-6;
    double beta = 0.25;
    /// Relative test weight w(q) fed into the length formulas.
    double Q = 0.0;

    /// m = floor(sqrt(N)).
    static ProtocolParams with_sqrt_sample(std::int64_t N, double Q = 0.0);

    std::int64_t n() const { return N - m; }
    /// Checks 1 <= m <= N/2 and 0 < epsilon < 1, 0 <= Q <= 1.
    void validate() const;
};

enum class ExtractionCase { UsingAll, UsingMemory, NotUsingMemory };

std::string_view to_string(ExtractionCase c);
ExtractionCase extraction_case(MeasurementMode mode);

struct RateResult {
    double gamma = 0.0;
    double delta = 0.0;
    /// Unclamped length bound in bits.
    double ell = 0.0;
    /// max(0, ell) / N.
    double rate = 0.0;
    double failure_prob = 0.0;
    /// Distance from an ideal output (marginal-measurement protocols).
    double closeness = 0.0;
    /// Smoothing parameter of the min-entropy bound (full-measurement protocol).
    double smoothing = 0.0;
    ExtractionCase extraction = ExtractionCase::UsingAll;
};

/// ell = n (gamma - Hbar_d(Q + delta) log2 d) - 2 log2(1 / (eps_PA - 2 eps)).
RateResult ell_using_all(const ProtocolParams& params, double gamma, std::int64_t d);

/// ell' = eta gamma' - n Hbar_D(Q + delta) log2 D - 2 log2(1/eps),
/// eta = (N - m)(1 - Q - delta), D = 2^kappa P (the full walker dimension).
RateResult ell_memory_case(const ProtocolParams& params, double gamma_prime, std::int64_t d_full,
                           ExtractionCase extraction = ExtractionCase::UsingMemory);

/// Dispatches on the measurement mode: full measurement uses ell_using_all
/// with d = 2^kappa P, marginal measurements use ell_memory_case.
RateResult rate_for_mode(const ProtocolParams& params, double gamma, int P, int kappa,
                         MeasurementMode mode);

}  // namespace hdqw
