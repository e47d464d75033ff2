#include "hdqw/walk.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace hdqw {

namespace {

constexpr int kMaxKappa = 24;

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void check_dimensions(int P, int kappa) {
    if (P < 2) throw ConfigError("P must be at least 2 (got " + std::to_string(P) + ")");
    if (kappa < 1) throw ConfigError("kappa must be at least 1 (got " + std::to_string(kappa) + ")");
    if (kappa > kMaxKappa) throw ConfigError("kappa too large (max " + std::to_string(kMaxKappa) + ")");
}

std::size_t coin_states(int kappa) { return std::size_t{1} << kappa; }

// Right rotation of the kappa-bit coin register; c_0 is the most significant bit.
std::size_t rotate_coins(std::size_t coins, int kappa) {
    return (coins >> 1) | ((coins & 1u) << (kappa - 1));
}

}  // namespace

std::string_view to_string(MeasurementMode mode) {
    switch (mode) {
        case MeasurementMode::All: return "all";
        case MeasurementMode::MemoryOnly: return "memory";
        case MeasurementMode::PositionOnly: return "position";
    }
    return "?";
}

MeasurementMode parse_mode(std::string_view text) {
    const auto s = lowercase(text);
    if (s == "all") return MeasurementMode::All;
    if (s == "memory") return MeasurementMode::MemoryOnly;
    if (s == "position") return MeasurementMode::PositionOnly;
    throw ConfigError("unknown measurement mode '" + std::string(text) + "' (all|memory|position)");
}

std::size_t outcome_space_size(int P, int kappa, MeasurementMode mode) {
    check_dimensions(P, kappa);
    switch (mode) {
        case MeasurementMode::All: return coin_states(kappa) * P;
        case MeasurementMode::MemoryOnly: return coin_states(kappa - 1) * P;
        case MeasurementMode::PositionOnly: return static_cast<std::size_t>(P);
    }
    return 0;
}

Matrix2 CoinOperator::matrix() const {
    if (kind == Kind::Hadamard) {
        const double r = std::numbers::sqrt2 / 2.0;
        return {Complex(r, 0), Complex(r, 0), Complex(r, 0), Complex(-r, 0)};
    }
    const Complex up = std::polar(1.0, phi);
    const Complex down = std::polar(1.0, -phi);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {up * c, up * s, -down * s, down * c};
}

std::string CoinOperator::describe() const {
    if (kind == Kind::Hadamard) return "hadamard";
    std::ostringstream os;
    os.precision(17);
    os << "general(theta=" << theta << ",phi=" << phi << ")";
    return os.str();
}

std::string_view to_string(FlipOperator flip) {
    switch (flip) {
        case FlipOperator::I: return "I";
        case FlipOperator::X: return "X";
        case FlipOperator::Y: return "Y";
    }
    return "?";
}

FlipOperator parse_flip(std::string_view text) {
    const auto s = lowercase(text);
    if (s == "i") return FlipOperator::I;
    if (s == "x") return FlipOperator::X;
    if (s == "y") return FlipOperator::Y;
    throw ConfigError("unknown flip operator '" + std::string(text) + "' (i|x|y)");
}

Matrix2 flip_matrix(FlipOperator flip) {
    const double r = std::numbers::sqrt2 / 2.0;
    switch (flip) {
        case FlipOperator::I: return {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)};
        case FlipOperator::X: return {Complex(r, 0), Complex(r, 0), Complex(r, 0), Complex(-r, 0)};
        case FlipOperator::Y: return {Complex(r, 0), Complex(r, 0), Complex(0, r), Complex(0, -r)};
    }
    return {};
}

void WalkConfig::validate() const {
    check_dimensions(P, kappa);
    if (T < 0) throw ConfigError("T must be non-negative");
    if (initial.x < 0 || initial.x >= P) throw ConfigError("initial position outside [0, P)");
    if (!initial.coins.empty()) {
        if (initial.coins.size() != static_cast<std::size_t>(kappa))
            throw ConfigError("initial coin string must have kappa entries");
        for (auto c : initial.coins)
            if (c > 1) throw ConfigError("coin values must be 0 or 1");
    }
}

std::size_t WalkConfig::dimension() const { return coin_states(kappa) * static_cast<std::size_t>(P); }

std::size_t basis_index(int P, int kappa, const BasisPoint& point) {
    check_dimensions(P, kappa);
    if (point.x < 0 || point.x >= P) throw ConfigError("position outside [0, P)");
    std::size_t coins = 0;
    if (!point.coins.empty()) {
        if (point.coins.size() != static_cast<std::size_t>(kappa))
            throw ConfigError("coin string must have kappa entries");
        for (auto c : point.coins) coins = (coins << 1) | (c & 1u);
    }
    return static_cast<std::size_t>(point.x) * coin_states(kappa) + coins;
}

BasisPoint basis_point(int P, int kappa, std::size_t index) {
    check_dimensions(P, kappa);
    const std::size_t per_site = coin_states(kappa);
    if (index >= per_site * P) throw ConfigError("basis index out of range");
    BasisPoint point;
    point.x = static_cast<std::int64_t>(index / per_site);
    const std::size_t coins = index % per_site;
    point.coins.resize(kappa);
    for (int j = 0; j < kappa; ++j) point.coins[j] = (coins >> (kappa - 1 - j)) & 1u;
    return point;
}

WalkState::WalkState(int P, int kappa, std::vector<Complex> amplitudes)
    : P_(P), kappa_(kappa), amplitudes_(std::move(amplitudes)) {
    check_dimensions(P, kappa);
    if (amplitudes_.size() != coin_states(kappa) * static_cast<std::size_t>(P))
        throw ConfigError("amplitude vector does not match 2^kappa * P");
}

double WalkState::norm_squared() const {
    return std::accumulate(amplitudes_.begin(), amplitudes_.end(), 0.0,
                           [](double acc, Complex a) { return acc + std::norm(a); });
}

double Distribution::max() const {
    return probs.empty() ? 0.0 : *std::max_element(probs.begin(), probs.end());
}

double Distribution::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

WalkState initial_state(const WalkConfig& config) {
    config.validate();
    std::vector<Complex> amps(config.dimension());
    const std::size_t index = basis_index(config.P, config.kappa, config.initial);
    const std::size_t pair = index & ~std::size_t{1};
    const std::size_t active = index & 1u;
    const Matrix2 f = flip_matrix(config.flip);
    // Column `active` of the flip matrix.
    amps[pair] = f[active];
    amps[pair + 1] = f[2 + active];
    return WalkState(config.P, config.kappa, std::move(amps));
}

WalkState apply_coin(const WalkState& state, const CoinOperator& coin) {
    const Matrix2 u = coin.matrix();
    const auto in = state.amplitudes();
    std::vector<Complex> out(in.size());
    for (std::size_t i = 0; i < in.size(); i += 2) {
        out[i] = u[0] * in[i] + u[1] * in[i + 1];
        out[i + 1] = u[2] * in[i] + u[3] * in[i + 1];
    }
    return WalkState(state.P(), state.kappa(), std::move(out));
}

WalkState apply_shift(const WalkState& state) {
    const auto in = state.amplitudes();
    const std::size_t per_site = coin_states(state.kappa());
    const std::size_t P = static_cast<std::size_t>(state.P());
    std::vector<Complex> out(in.size());
    for (std::size_t x = 0; x < P; ++x) {
        const std::size_t up = (x + 1) % P;
        const std::size_t down = (x + P - 1) % P;
        for (std::size_t c = 0; c < per_site; ++c) {
            const std::size_t target = (c & 1u) ? down : up;
            out[target * per_site + c] = in[x * per_site + c];
        }
    }
    return WalkState(state.P(), state.kappa(), std::move(out));
}

WalkState apply_memory(const WalkState& state) {
    const auto in = state.amplitudes();
    const int kappa = state.kappa();
    const std::size_t per_site = coin_states(kappa);
    std::vector<Complex> out(in.size());
    for (std::size_t base = 0; base < in.size(); base += per_site)
        for (std::size_t c = 0; c < per_site; ++c) out[base + rotate_coins(c, kappa)] = in[base + c];
    return WalkState(state.P(), kappa, std::move(out));
}

WalkStepper::WalkStepper(const WalkConfig& config)
    : P_(config.P), kappa_(config.kappa), coin_(config.coin.matrix()) {
    const WalkState start = initial_state(config);
    current_.assign(start.amplitudes().begin(), start.amplitudes().end());
    next_.resize(current_.size());
}

void WalkStepper::step() {
    // C, S and M fused into one pass: the coin mixes each (c_mu, 0/1) pair,
    // the active-coin value picks the shift direction, and the rotated coin
    // register for (c_mu, a) is c_mu | a << (kappa - 1).
    const std::size_t per_site = coin_states(kappa_);
    const std::size_t memory_states = per_site / 2;
    const std::size_t active_high = std::size_t{1} << (kappa_ - 1);
    const std::size_t P = static_cast<std::size_t>(P_);
    const Complex* in = current_.data();
    Complex* out = next_.data();
    for (std::size_t x = 0; x < P; ++x) {
        const std::size_t up = ((x + 1) % P) * per_site;
        const std::size_t down = ((x + P - 1) % P) * per_site;
        const Complex* site = in + x * per_site;
        for (std::size_t m = 0; m < memory_states; ++m) {
            const Complex a0 = site[2 * m];
            const Complex a1 = site[2 * m + 1];
            out[up + m] = coin_[0] * a0 + coin_[1] * a1;
            out[down + (m | active_high)] = coin_[2] * a0 + coin_[3] * a1;
        }
    }
    current_.swap(next_);
    ++steps_;
}

WalkState evolve(const WalkConfig& config) {
    WalkStepper stepper(config);
    for (int t = 0; t < config.T; ++t) stepper.step();
    return stepper.state();
}

Distribution distribution(const WalkState& state, MeasurementMode mode) {
    const int P = state.P();
    const int kappa = state.kappa();
    const std::size_t per_site = coin_states(kappa);
    Distribution dist;
    dist.mode = mode;
    dist.probs.assign(outcome_space_size(P, kappa, mode), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        switch (mode) {
            case MeasurementMode::All: dist.probs[i] += p; break;
            case MeasurementMode::MemoryOnly: dist.probs[i >> 1] += p; break;
            case MeasurementMode::PositionOnly: dist.probs[i / per_site] += p; break;
        }
    }
    return dist;
}

ModeMaxima mode_maxima(std::span<const Complex> amplitudes, int P, int kappa) {
    const std::size_t per_site = coin_states(kappa);
    ModeMaxima best{0.0, 0.0, 0.0};
    for (std::size_t x = 0; x < static_cast<std::size_t>(P); ++x) {
        const Complex* site = amplitudes.data() + x * per_site;
        double position = 0.0;
        for (std::size_t c = 0; c < per_site; c += 2) {
            const double p0 = std::norm(site[c]);
            const double p1 = std::norm(site[c + 1]);
            best[0] = std::max({best[0], p0, p1});
            best[1] = std::max(best[1], p0 + p1);
            position += p0 + p1;
        }
        best[2] = std::max(best[2], position);
    }
    return best;
}

double fidelity_with(const WalkState& a, const WalkState& b) {
    if (a.dimension() != b.dimension() || a.P() != b.P())
        throw ConfigError("fidelity_with: dimension mismatch");
    Complex overlap = 0.0;
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) overlap += std::conj(x[i]) * y[i];
    return std::min(1.0, std::norm(overlap));
}

}  // namespace hdqw
