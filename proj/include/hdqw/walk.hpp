// History-dependent (recycled-coin) quantum walks on a P-cycle.
//
// The walker space is H_P (x) H_{c_0} (x) ... (x) H_{c_{kappa-1}}: a position
// on the cycle plus kappa qubit coins. The last coin c_{kappa-1} is the
// active coin; c_0..c_{kappa-2} are memory coins. One walk step is
// W = M * S * C:
//   C  coin unitary on the active coin,
//   S  x -> x + (-1)^{c_{kappa-1}} (mod P),
//   M  right rotation of the coin register (c_0..c_{kappa-1}) -> (c_{kappa-1}, c_0..c_{kappa-2}).
//
// Basis layout: index = x * 2^kappa + (c_0 2^{kappa-1} + ... + c_{kappa-1} 2^0).
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hdqw {

using Complex = std::complex<double>;

/// Row-major 2x2 matrix {a00, a01, a10, a11}.
using Matrix2 = std::array<Complex, 4>;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class MeasurementMode { All, MemoryOnly, PositionOnly };

std::string_view to_string(MeasurementMode mode);
/// Accepts "all", "memory", "position".
MeasurementMode parse_mode(std::string_view text);

/// Number of outcomes of the extraction measurement: 2^kappa P, 2^(kappa-1) P or P.
std::size_t outcome_space_size(int P, int kappa, MeasurementMode mode);

struct CoinOperator {
    enum class Kind { Hadamard, Generalized };

    Kind kind = Kind::Hadamard;
    double theta = 0.0;
    double phi = 0.0;

    static CoinOperator hadamard() { return {}; }
    static CoinOperator generalized(double theta, double phi) {
        return {Kind::Generalized, theta, phi};
    }

    /// [[e^{i phi} cos t, e^{i phi} sin t], [-e^{-i phi} sin t, e^{-i phi} cos t]]
    /// for the generalized coin.
    Matrix2 matrix() const;
    std::string describe() const;
};

enum class FlipOperator { I, X, Y };

std::string_view to_string(FlipOperator flip);
/// Accepts "i", "x", "y" (either case).
FlipOperator parse_flip(std::string_view text);
Matrix2 flip_matrix(FlipOperator flip);

struct BasisPoint {
    std::int64_t x = 0;
    /// c_0..c_{kappa-1}; empty means all zeros.
    std::vector<std::uint8_t> coins;
};

struct WalkConfig {
    int P = 3;
    int kappa = 1;
    int T = 0;
    CoinOperator coin;
    FlipOperator flip = FlipOperator::I;
    BasisPoint initial;

    /// Throws ConfigError for P < 2, kappa < 1, T < 0 or an initial point
    /// outside the walker space.
    void validate() const;
    std::size_t dimension() const;
};

/// Maps (x, c_0..c_{kappa-1}) to its basis index.
std::size_t basis_index(int P, int kappa, const BasisPoint& point);
BasisPoint basis_point(int P, int kappa, std::size_t index);

/// Normalized amplitude vector over the 2^kappa P walker basis.
class WalkState {
public:
    WalkState(int P, int kappa, std::vector<Complex> amplitudes);

    int P() const { return P_; }
    int kappa() const { return kappa_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t index) const { return amplitudes_[index]; }
    double norm_squared() const;

private:
    int P_;
    int kappa_;
    std::vector<Complex> amplitudes_;
};

struct Distribution {
    MeasurementMode mode = MeasurementMode::All;
    /// Indexed by x * 2^kappa + coins (All), x * 2^(kappa-1) + memory coins
    /// (MemoryOnly) or x (PositionOnly).
    std::vector<double> probs;

    std::size_t outcome_count() const { return probs.size(); }
    double max() const;
    double total() const;
};

/// Basis state at config.initial with the flip operator applied to the
/// active coin.
WalkState initial_state(const WalkConfig& config);

WalkState apply_coin(const WalkState& state, const CoinOperator& coin);
WalkState apply_shift(const WalkState& state);
WalkState apply_memory(const WalkState& state);

/// W^T applied to initial_state(config).
WalkState evolve(const WalkConfig& config);

Distribution distribution(const WalkState& state, MeasurementMode mode);

/// |<a|b>|^2. Throws ConfigError on dimension mismatch.
double fidelity_with(const WalkState& a, const WalkState& b);

/// Maximum outcome probability under each measurement mode, indexed by
/// static_cast<int>(MeasurementMode).
using ModeMaxima = std::array<double, 3>;
ModeMaxima mode_maxima(std::span<const Complex> amplitudes, int P, int kappa);

/// Incremental evolution: holds the current state and advances it by one
/// walk step at a time. Used by evolve() and by parameter sweeps, which
/// inspect the state after every step.
class WalkStepper {
public:
    explicit WalkStepper(const WalkConfig& config);

    void step();
    int steps_taken() const { return steps_; }
    std::span<const Complex> amplitudes() const { return current_; }
    ModeMaxima maxima() const { return mode_maxima(current_, P_, kappa_); }
    WalkState state() const { return WalkState(P_, kappa_, current_); }

private:
    int P_;
    int kappa_;
    Matrix2 coin_;
    std::vector<Complex> current_;
    std::vector<Complex> next_;
    int steps_ = 0;
};

}  // namespace hdqw
