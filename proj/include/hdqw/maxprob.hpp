// Max guessing probabilities of the honest walker state, minimized over
// walk parameters (time, and optionally coin angles and flip operator).
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdqw/walk.hpp"

namespace hdqw {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Parameter grid for the sweep. Without R only the Hadamard coin is swept
/// over t; with R the generalized coin is swept over
/// theta, phi in {g pi / R | g = 0..R} and over the flip operators.
struct SweepGrid {
    int t_min = 1;
    int t_max = 2000;
    std::optional<int> R;
    /// Empty selects the default: {I, X, Y} with R, {I} without.
    std::vector<FlipOperator> flips;

    static SweepGrid hadamard(int t_min, int t_max) { return {t_min, t_max, std::nullopt, {}}; }
    static SweepGrid generalized(int t_min, int t_max, int R, std::vector<FlipOperator> flips = {}) {
        return {t_min, t_max, R, std::move(flips)};
    }

    /// Throws ConfigError when the grid is empty or malformed.
    void validate() const;
    std::vector<FlipOperator> effective_flips() const;
    /// Number of (flip, theta, phi) combinations; 1 for a Hadamard grid.
    std::size_t triple_count() const;
    std::string describe() const;
};

struct MaxProbResult {
    double value = 1.0;
    int at_t = 0;
    std::optional<double> at_theta;
    std::optional<double> at_phi;
    /// Grid indices g of the recorded angles (theta = g pi / R).
    std::optional<int> theta_index;
    std::optional<int> phi_index;
    FlipOperator at_flip = FlipOperator::I;
    MeasurementMode mode = MeasurementMode::All;
    int P = 0;
    int kappa = 0;

    /// Walk configuration that attains `value`.
    WalkConfig config() const;
};

/// Evolve and return the largest outcome probability of the mode's
/// distribution.
double max_outcome_prob(const WalkConfig& config, MeasurementMode mode);

/// min over the grid of max_outcome_prob. Ties go to the smallest t, then
/// flip order I, X, Y, then smallest theta, then smallest phi.
/// `threads` = 0 uses the hardware concurrency.
MaxProbResult g_function(int P, int kappa, MeasurementMode mode, const SweepGrid& grid,
                         unsigned threads = 0);

/// One sweep, all three measurement modes (indexed by MeasurementMode).
std::array<MaxProbResult, 3> g_function_all_modes(int P, int kappa, const SweepGrid& grid,
                                                  unsigned threads = 0);

/// min over t in [t_min, t_max] with coin, flip and initial point fixed by `base`.
MaxProbResult min_over_time(const WalkConfig& base, MeasurementMode mode, int t_min, int t_max);

/// -log2(g); throws DomainError unless 0 < g <= 1.
double gamma_from_g(double g);

}  // namespace hdqw
