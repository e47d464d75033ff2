#include "hdqw/maxprob.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include "hdqw/parallel.hpp"

namespace hdqw {

namespace {

constexpr std::array<FlipOperator, 3> kAllFlips{FlipOperator::I, FlipOperator::X, FlipOperator::Y};

struct Triple {
    FlipOperator flip = FlipOperator::I;
    int theta_index = 0;
    int phi_index = 0;
};

// Enumerated in tie-break order: flip, then theta, then phi.
std::vector<Triple> enumerate_triples(const SweepGrid& grid) {
    std::vector<Triple> out;
    const auto flips = grid.effective_flips();
    const int steps = grid.R ? *grid.R : 0;
    for (auto f : flips)
        for (int g = 0; g <= steps; ++g)
            for (int h = 0; h <= steps; ++h) out.push_back({f, g, h});
    return out;
}

CoinOperator coin_for(const SweepGrid& grid, const Triple& triple) {
    if (!grid.R) return CoinOperator::hadamard();
    const double unit = std::numbers::pi / *grid.R;
    return CoinOperator::generalized(triple.theta_index * unit, triple.phi_index * unit);
}

struct Candidate {
    double value = 2.0;
    int t = 0;
    std::size_t triple = 0;

    bool better_than(const Candidate& other) const {
        return std::tie(value, t, triple) < std::tie(other.value, other.t, other.triple);
    }
};

using ModeCandidates = std::array<Candidate, 3>;

ModeCandidates sweep_triple(int P, int kappa, const SweepGrid& grid, const Triple& triple,
                            std::size_t triple_index) {
    WalkConfig config;
    config.P = P;
    config.kappa = kappa;
    config.coin = coin_for(grid, triple);
    config.flip = triple.flip;
    WalkStepper stepper(config);
    ModeCandidates best;
    for (auto& b : best) b.triple = triple_index;
    for (int t = 1; t <= grid.t_max; ++t) {
        stepper.step();
        if (t < grid.t_min) continue;
        const ModeMaxima maxima = stepper.maxima();
        for (int mode = 0; mode < 3; ++mode) {
            if (maxima[mode] < best[mode].value) {
                best[mode].value = maxima[mode];
                best[mode].t = t;
            }
        }
    }
    return best;
}

MaxProbResult to_result(int P, int kappa, MeasurementMode mode, const SweepGrid& grid,
                        const Triple& triple, const Candidate& candidate) {
    MaxProbResult result;
    result.value = candidate.value;
    result.at_t = candidate.t;
    result.at_flip = triple.flip;
    result.mode = mode;
    result.P = P;
    result.kappa = kappa;
    if (grid.R) {
        const CoinOperator coin = coin_for(grid, triple);
        result.at_theta = coin.theta;
        result.at_phi = coin.phi;
        result.theta_index = triple.theta_index;
        result.phi_index = triple.phi_index;
    }
    return result;
}

}  // namespace

void SweepGrid::validate() const {
    if (t_min < 1) throw ConfigError("sweep grid: t_min must be at least 1");
    if (t_max < t_min) throw ConfigError("sweep grid: empty time range");
    if (R && *R < 1) throw ConfigError("sweep grid: R must be positive");
}

std::vector<FlipOperator> SweepGrid::effective_flips() const {
    if (!flips.empty()) return flips;
    if (R) return {kAllFlips.begin(), kAllFlips.end()};
    return {FlipOperator::I};
}

std::size_t SweepGrid::triple_count() const {
    const std::size_t angles = R ? static_cast<std::size_t>(*R + 1) * (*R + 1) : 1;
    return angles * effective_flips().size();
}

std::string SweepGrid::describe() const {
    std::ostringstream os;
    os << "t=" << t_min << ".." << t_max;
    if (R) {
        os << " R=" << *R << " flips=";
        for (auto f : effective_flips()) os << to_string(f);
    } else {
        os << " hadamard";
    }
    return os.str();
}

WalkConfig MaxProbResult::config() const {
    WalkConfig config;
    config.P = P;
    config.kappa = kappa;
    config.T = at_t;
    config.flip = at_flip;
    if (at_theta && at_phi) config.coin = CoinOperator::generalized(*at_theta, *at_phi);
    return config;
}

double max_outcome_prob(const WalkConfig& config, MeasurementMode mode) {
    return distribution(evolve(config), mode).max();
}

std::array<MaxProbResult, 3> g_function_all_modes(int P, int kappa, const SweepGrid& grid,
                                                  unsigned threads) {
    grid.validate();
    WalkConfig probe;
    probe.P = P;
    probe.kappa = kappa;
    probe.validate();

    const auto triples = enumerate_triples(grid);
    std::vector<ModeCandidates> per_triple(triples.size());
    parallel_for(triples.size(), threads, [&](std::size_t i) {
        per_triple[i] = sweep_triple(P, kappa, grid, triples[i], i);
    });

    ModeCandidates best;
    for (const auto& candidates : per_triple)
        for (int mode = 0; mode < 3; ++mode)
            if (candidates[mode].better_than(best[mode])) best[mode] = candidates[mode];

    std::array<MaxProbResult, 3> out;
    for (int mode = 0; mode < 3; ++mode)
        out[mode] = to_result(P, kappa, static_cast<MeasurementMode>(mode), grid,
                              triples[best[mode].triple], best[mode]);
    return out;
}

MaxProbResult g_function(int P, int kappa, MeasurementMode mode, const SweepGrid& grid,
                         unsigned threads) {
    return g_function_all_modes(P, kappa, grid, threads)[static_cast<int>(mode)];
}

MaxProbResult min_over_time(const WalkConfig& base, MeasurementMode mode, int t_min, int t_max) {
    if (t_min < 1 || t_max < t_min) throw ConfigError("min_over_time: empty time range");
    WalkStepper stepper(base);
    MaxProbResult result;
    result.value = 2.0;
    result.mode = mode;
    result.P = base.P;
    result.kappa = base.kappa;
    result.at_flip = base.flip;
    if (base.coin.kind == CoinOperator::Kind::Generalized) {
        result.at_theta = base.coin.theta;
        result.at_phi = base.coin.phi;
    }
    for (int t = 1; t <= t_max; ++t) {
        stepper.step();
        if (t < t_min) continue;
        const double v = stepper.maxima()[static_cast<int>(mode)];
        if (v < result.value) {
            result.value = v;
            result.at_t = t;
        }
    }
    return result;
}

double gamma_from_g(double g) {
    if (!(g > 0.0) || g > 1.0) throw DomainError("gamma_from_g: probability must lie in (0, 1]");
    return -std::log2(g);
}

}  // namespace hdqw
