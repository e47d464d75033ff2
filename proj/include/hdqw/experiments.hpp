// Presets that regenerate the max-probability tables and the rate-vs-N
// curves, plus CSV / JSON emission.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hdqw/entropy.hpp"
#include "hdqw/maxprob.hpp"

namespace hdqw {

struct ExperimentCase {
    int P = 3;
    int kappa = 1;
    MeasurementMode mode = MeasurementMode::All;
    SweepGrid grid;
};

struct ExperimentSpec {
    enum class Kind { Table, Curve };

    std::string name;
    Kind kind = Kind::Table;
    std::vector<ExperimentCase> cases;
    std::vector<double> noise_levels;
    std::vector<std::int64_t> N_grid;
    double epsilon = 1e-7;
    double epsilon_pa = 1e-6;
    double beta = 0.25;
};

/// table1..table6, kappa1, fig1..fig7.
std::vector<std::string> preset_names();
/// Throws ConfigError listing the known presets when `name` is unknown.
/// `R` overrides the angle resolution of generalized-coin presets.
ExperimentSpec preset(const std::string& name, std::optional<int> R = std::nullopt);

/// `count` log-spaced signal counts in [lo, hi], rounded to integers.
std::vector<std::int64_t> log_spaced_counts(double lo, double hi, int count);

/// Memoizes sweep results by (P, kappa, grid); one sweep serves all modes.
class GammaCache {
public:
    MaxProbResult get(int P, int kappa, MeasurementMode mode, const SweepGrid& grid,
                      unsigned threads = 0);

private:
    using Key = std::tuple<int, int, int, int, int, std::string>;
    std::mutex mutex_;
    std::map<Key, std::array<MaxProbResult, 3>> entries_;
};

struct TableRow {
    int kappa = 0;
    int P = 0;
    MeasurementMode mode = MeasurementMode::All;
    MaxProbResult result;
    std::optional<double> reference;
    std::optional<double> deviation;
};

struct ResultTable {
    std::string name;
    std::string grid;
    std::vector<TableRow> rows;

    double max_abs_deviation() const;
};

struct CurvePoint {
    MeasurementMode mode = MeasurementMode::All;
    int kappa = 0;
    int P = 0;
    double Q = 0.0;
    std::int64_t N = 0;
    double rate = 0.0;
    double gamma = 0.0;
};

ResultTable run_table(const ExperimentSpec& spec, unsigned threads = 0, GammaCache* cache = nullptr);
std::vector<CurvePoint> run_rate_curve(const ExperimentSpec& spec, unsigned threads = 0,
                                       GammaCache* cache = nullptr);

/// Rows in CSV: header `kappa,P,mode,value,t,theta,phi,flip`.
std::string table_csv(const ResultTable& table);
/// Header `case,kappa,P,Q,N,rate`.
std::string curve_csv(const std::vector<CurvePoint>& points);
std::string table_json(const ResultTable& table);
std::string curve_json(const std::string& name, const std::vector<CurvePoint>& points);

enum class EmitFormat { Csv, Json };

/// `<dir>/<preset>.csv` (or `.json`), or `<dir>/<preset>_<timestamp>.csv` when
/// `timestamp` is non-empty.
std::filesystem::path output_path(const std::filesystem::path& dir, const std::string& preset,
                                  EmitFormat format, const std::string& timestamp = {});

/// Writes the table / curve. Throws ConfigError for empty results and
/// std::runtime_error for an unwritable path; nothing is written on error.
std::filesystem::path emit(const ResultTable& table, EmitFormat format, const std::filesystem::path& path);
std::filesystem::path emit(const std::string& name, const std::vector<CurvePoint>& points,
                           EmitFormat format, const std::filesystem::path& path);

}  // namespace hdqw
