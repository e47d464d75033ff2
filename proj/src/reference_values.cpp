#include "hdqw/reference_values.hpp"

#include <array>

namespace hdqw {

namespace {

struct Entry {
    MeasurementMode mode;
    bool generalized;
    int kappa;
    int P;
    double value;
};

using M = MeasurementMode;

constexpr std::array kEntries{
    // Hadamard coin, t = 1..2000. kappa = 1: MemoryOnly and PositionOnly coincide.
    Entry{M::All, false, 1, 3, 0.2224}, Entry{M::All, false, 1, 5, 0.1474},
    Entry{M::All, false, 1, 11, 0.0983}, Entry{M::All, false, 1, 21, 0.0642},
    Entry{M::All, false, 1, 51, 0.0367},
    Entry{M::MemoryOnly, false, 1, 3, 0.3634}, Entry{M::MemoryOnly, false, 1, 5, 0.2447},
    Entry{M::MemoryOnly, false, 1, 11, 0.1358}, Entry{M::MemoryOnly, false, 1, 21, 0.0919},
    Entry{M::MemoryOnly, false, 1, 51, 0.0517},
    Entry{M::PositionOnly, false, 1, 3, 0.3634}, Entry{M::PositionOnly, false, 1, 5, 0.2447},
    Entry{M::PositionOnly, false, 1, 11, 0.1358}, Entry{M::PositionOnly, false, 1, 21, 0.0919},
    Entry{M::PositionOnly, false, 1, 51, 0.0517},

    Entry{M::All, false, 2, 3, 0.1250}, Entry{M::All, false, 2, 5, 0.1249},
    Entry{M::All, false, 2, 11, 0.0995}, Entry{M::All, false, 2, 21, 0.1044},
    Entry{M::All, false, 2, 51, 0.1057},
    Entry{M::All, false, 3, 3, 0.0570}, Entry{M::All, false, 3, 5, 0.0535},
    Entry{M::All, false, 3, 11, 0.0450}, Entry{M::All, false, 3, 21, 0.0282},
    Entry{M::All, false, 3, 51, 0.0190},
    Entry{M::All, false, 4, 3, 0.0312}, Entry{M::All, false, 4, 5, 0.0312},
    Entry{M::All, false, 4, 11, 0.0312}, Entry{M::All, false, 4, 21, 0.0272},
    Entry{M::All, false, 4, 51, 0.0274},

    Entry{M::MemoryOnly, false, 2, 3, 0.2500}, Entry{M::MemoryOnly, false, 2, 5, 0.1875},
    Entry{M::MemoryOnly, false, 2, 11, 0.1378}, Entry{M::MemoryOnly, false, 2, 21, 0.1342},
    Entry{M::MemoryOnly, false, 2, 51, 0.1377},
    Entry{M::MemoryOnly, false, 3, 3, 0.1120}, Entry{M::MemoryOnly, false, 3, 5, 0.0656},
    Entry{M::MemoryOnly, false, 3, 11, 0.0524}, Entry{M::MemoryOnly, false, 3, 21, 0.0374},
    Entry{M::MemoryOnly, false, 3, 51, 0.0233},
    Entry{M::MemoryOnly, false, 4, 3, 0.0625}, Entry{M::MemoryOnly, false, 4, 5, 0.0617},
    Entry{M::MemoryOnly, false, 4, 11, 0.0453}, Entry{M::MemoryOnly, false, 4, 21, 0.0340},
    Entry{M::MemoryOnly, false, 4, 51, 0.0314},

    Entry{M::PositionOnly, false, 2, 3, 0.3336}, Entry{M::PositionOnly, false, 2, 5, 0.2570},
    Entry{M::PositionOnly, false, 2, 11, 0.1831}, Entry{M::PositionOnly, false, 2, 21, 0.1692},
    Entry{M::PositionOnly, false, 2, 51, 0.1701},
    Entry{M::PositionOnly, false, 3, 3, 0.3400}, Entry{M::PositionOnly, false, 3, 5, 0.2165},
    Entry{M::PositionOnly, false, 3, 11, 0.1186}, Entry{M::PositionOnly, false, 3, 21, 0.0778},
    Entry{M::PositionOnly, false, 3, 51, 0.0379},
    Entry{M::PositionOnly, false, 4, 3, 0.3437}, Entry{M::PositionOnly, false, 4, 5, 0.2055},
    Entry{M::PositionOnly, false, 4, 11, 0.1230}, Entry{M::PositionOnly, false, 4, 21, 0.0808},
    Entry{M::PositionOnly, false, 4, 51, 0.0709},

    // Generalized coin with flips, t = 1..1000.
    Entry{M::All, true, 1, 3, 0.1729}, Entry{M::All, true, 1, 5, 0.1133},
    Entry{M::All, true, 1, 11, 0.0534}, Entry{M::All, true, 1, 21, 0.0420},
    Entry{M::All, true, 2, 3, 0.1228}, Entry{M::All, true, 2, 5, 0.1251},
    Entry{M::All, true, 2, 11, 0.0799}, Entry{M::All, true, 2, 21, 0.0709},
    Entry{M::All, true, 3, 3, 0.0614}, Entry{M::All, true, 3, 5, 0.0402},
    Entry{M::All, true, 3, 11, 0.0274}, Entry{M::All, true, 3, 21, 0.0192},

    Entry{M::MemoryOnly, true, 1, 3, 0.3334}, Entry{M::MemoryOnly, true, 1, 5, 0.2017},
    Entry{M::MemoryOnly, true, 1, 11, 0.0952}, Entry{M::MemoryOnly, true, 1, 21, 0.0617},
    Entry{M::MemoryOnly, true, 2, 3, 0.1751}, Entry{M::MemoryOnly, true, 2, 5, 0.1615},
    Entry{M::MemoryOnly, true, 2, 11, 0.1082}, Entry{M::MemoryOnly, true, 2, 21, 0.0743},
    Entry{M::MemoryOnly, true, 3, 3, 0.0898}, Entry{M::MemoryOnly, true, 3, 5, 0.0661},
    Entry{M::MemoryOnly, true, 3, 11, 0.0417}, Entry{M::MemoryOnly, true, 3, 21, 0.0264},

    Entry{M::PositionOnly, true, 1, 3, 0.3334}, Entry{M::PositionOnly, true, 1, 5, 0.2017},
    Entry{M::PositionOnly, true, 1, 11, 0.0952}, Entry{M::PositionOnly, true, 1, 21, 0.0617},
    Entry{M::PositionOnly, true, 2, 3, 0.3340}, Entry{M::PositionOnly, true, 2, 5, 0.2197},
    Entry{M::PositionOnly, true, 2, 11, 0.1275}, Entry{M::PositionOnly, true, 2, 21, 0.0834},
    Entry{M::PositionOnly, true, 3, 3, 0.3336}, Entry{M::PositionOnly, true, 3, 5, 0.2097},
    Entry{M::PositionOnly, true, 3, 11, 0.1039}, Entry{M::PositionOnly, true, 3, 21, 0.0642},
};

}  // namespace

std::optional<double> reference_g(MeasurementMode mode, bool generalized, int kappa, int P) {
    for (const auto& e : kEntries)
        if (e.mode == mode && e.generalized == generalized && e.kappa == kappa && e.P == P) return e.value;
    return std::nullopt;
}

}  // namespace hdqw
