#include "hdqw/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace hdqw {

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

void check_alphabet(std::int64_t d) {
    if (d < 2) throw DomainError("entropy: alphabet size must be at least 2");
}

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
}

// Hbar_d(x) / log_d(2) = Hbar_d(x) log2(d), the entropy term in bits.
double entropy_bits(double x, std::int64_t d) {
    return extended_entropy_d(x, d) * std::log2(static_cast<double>(d));
}

RateResult finish(RateResult r, std::int64_t N) {
    r.rate = std::max(0.0, r.ell) / static_cast<double>(N);
    return r;
}

}  // namespace

double entropy_d(double x, std::int64_t d) {
    check_alphabet(d);
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("entropy_d: x must lie in [0, 1]");
    const double bits = x * std::log2(static_cast<double>(d - 1)) - xlog2x(x) - xlog2x(1.0 - x);
    // The peak value is exactly 1; keep rounding from overshooting it.
    return std::min(1.0, bits / std::log2(static_cast<double>(d)));
}

double extended_entropy_d(double x, std::int64_t d) {
    check_alphabet(d);
    if (std::isnan(x)) throw DomainError("extended_entropy_d: x is NaN");
    if (x < 0.0) return 0.0;
    if (x > 1.0 - 1.0 / static_cast<double>(d)) return 1.0;
    return entropy_d(x, d);
}

double sampling_delta(std::int64_t N, std::int64_t m, double epsilon) {
    if (m < 1 || N <= m) throw ParameterError("sampling_delta: need N > m >= 1");
    check_epsilon(epsilon);
    const double Nd = static_cast<double>(N);
    const double md = static_cast<double>(m);
    return std::sqrt((Nd + 2.0) * std::log(2.0 / (epsilon * epsilon)) / (md * Nd));
}

double sampling_delta_split(std::int64_t m, std::int64_t n, double epsilon) {
    if (m < 1 || n < 1) throw ParameterError("sampling_delta_split: need m, n >= 1");
    check_epsilon(epsilon);
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return std::sqrt((md + nd + 2.0) * std::log(2.0 / (epsilon * epsilon)) / (md * (md + nd)));
}

double classical_sampling_error(std::int64_t N, std::int64_t m, double delta) {
    if (m < 1 || N <= m) throw ParameterError("classical_sampling_error: need N > m >= 1");
    const double Nd = static_cast<double>(N);
    return 2.0 * std::exp(-delta * delta * static_cast<double>(m) * Nd / (Nd + 2.0));
}

ProtocolParams ProtocolParams::with_sqrt_sample(std::int64_t N, double Q) {
    ProtocolParams p;
    p.N = N;
    auto m = static_cast<std::int64_t>(std::sqrt(static_cast<double>(N)));
    while (m * m > N) --m;
    while ((m + 1) * (m + 1) <= N) ++m;
    p.m = m;
    p.Q = Q;
    return p;
}

void ProtocolParams::validate() const {
    if (m < 1) throw ParameterError("sample size m must be at least 1");
    if (m >= N) throw ParameterError("sample size m must be smaller than N");
    if (2 * m > N) throw ParameterError("sample size m must not exceed N/2");
    check_epsilon(epsilon);
    if (!(Q >= 0.0 && Q <= 1.0)) throw ParameterError("Q must lie in [0, 1]");
}

std::string_view to_string(ExtractionCase c) {
    switch (c) {
        case ExtractionCase::UsingAll: return "using_all";
        case ExtractionCase::UsingMemory: return "using_memory";
        case ExtractionCase::NotUsingMemory: return "not_using_memory";
    }
    return "?";
}

ExtractionCase extraction_case(MeasurementMode mode) {
    switch (mode) {
        case MeasurementMode::All: return ExtractionCase::UsingAll;
        case MeasurementMode::MemoryOnly: return ExtractionCase::UsingMemory;
        case MeasurementMode::PositionOnly: return ExtractionCase::NotUsingMemory;
    }
    return ExtractionCase::UsingAll;
}

RateResult ell_using_all(const ProtocolParams& params, double gamma, std::int64_t d) {
    params.validate();
    check_alphabet(d);
    if (!(params.beta > 0.0 && params.beta < 0.5)) throw ParameterError("beta must lie in (0, 1/2)");
    if (!(params.epsilon_pa > 2.0 * params.epsilon))
        throw ParameterError("epsilon_pa must exceed 2 epsilon");
    const double n = static_cast<double>(params.n());
    const double eps_tilde = params.epsilon_pa - 2.0 * params.epsilon;

    RateResult r;
    r.extraction = ExtractionCase::UsingAll;
    r.gamma = gamma;
    r.delta = sampling_delta_split(params.m, params.n(), params.epsilon);
    r.ell = n * (gamma - entropy_bits(params.Q + r.delta, d)) - 2.0 * std::log2(1.0 / eps_tilde);
    r.failure_prob = 2.0 * std::pow(params.epsilon, 1.0 - 2.0 * params.beta);
    r.smoothing = 4.0 * params.epsilon + 2.0 * std::pow(params.epsilon, params.beta);
    return finish(r, params.N);
}

RateResult ell_memory_case(const ProtocolParams& params, double gamma_prime, std::int64_t d_full,
                           ExtractionCase extraction) {
    params.validate();
    check_alphabet(d_full);
    const double n = static_cast<double>(params.n());

    RateResult r;
    r.extraction = extraction;
    r.gamma = gamma_prime;
    r.delta = sampling_delta(params.N, params.m, params.epsilon);
    const double eta = n * (1.0 - params.Q - r.delta);
    r.ell = eta * gamma_prime - n * entropy_bits(params.Q + r.delta, d_full) -
            2.0 * std::log2(1.0 / params.epsilon);
    r.failure_prob = std::cbrt(params.epsilon);
    r.closeness = 5.0 * params.epsilon + 2.0 * std::cbrt(params.epsilon);
    return finish(r, params.N);
}

RateResult rate_for_mode(const ProtocolParams& params, double gamma, int P, int kappa,
                         MeasurementMode mode) {
    const auto d_full = static_cast<std::int64_t>(outcome_space_size(P, kappa, MeasurementMode::All));
    if (mode == MeasurementMode::All) return ell_using_all(params, gamma, d_full);
    return ell_memory_case(params, gamma, d_full, extraction_case(mode));
}

}  // namespace hdqw
