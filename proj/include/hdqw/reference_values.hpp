// Published max-probability values for the standard walk sizes, used to
// annotate reproduced tables.
#pragma once

#include <optional>

#include "hdqw/walk.hpp"

namespace hdqw {

/// Published G value for (kappa, P) under `mode`; `generalized` selects the
/// generalized-coin/flip sweep. Empty when no value was published.
std::optional<double> reference_g(MeasurementMode mode, bool generalized, int kappa, int P);

}  // namespace hdqw
