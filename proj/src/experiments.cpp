#include "hdqw/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hdqw/parallel.hpp"
#include "hdqw/reference_values.hpp"

namespace hdqw {

namespace {

constexpr int kHadamardTMax = 2000;
constexpr int kGeneralizedTMax = 1000;
constexpr int kDefaultR = 16;

const std::vector<int> kAllPositions{3, 5, 11, 21, 51};
const std::vector<int> kGeneralizedPositions{3, 5, 11, 21};
const std::vector<double> kFourNoise{0.0, 0.15, 0.2, 0.3};
const std::vector<double> kThreeNoise{0.0, 0.15, 0.2};

struct PresetShape {
    const char* name;
    ExperimentSpec::Kind kind;
    MeasurementMode mode;
    bool generalized;
    std::vector<int> kappas;
    const std::vector<int>* positions;
    const std::vector<double>* noise;
};

const std::vector<PresetShape>& shapes() {
    using K = ExperimentSpec::Kind;
    using M = MeasurementMode;
    static const std::vector<PresetShape> table{
        {"table1", K::Table, M::All, false, {2, 3, 4}, &kAllPositions, nullptr},
        {"table2", K::Table, M::All, true, {1, 2, 3}, &kGeneralizedPositions, nullptr},
        {"table3", K::Table, M::MemoryOnly, false, {2, 3, 4}, &kAllPositions, nullptr},
        {"table4", K::Table, M::MemoryOnly, true, {1, 2, 3}, &kGeneralizedPositions, nullptr},
        {"table5", K::Table, M::PositionOnly, false, {2, 3, 4}, &kAllPositions, nullptr},
        {"table6", K::Table, M::PositionOnly, true, {1, 2, 3}, &kGeneralizedPositions, nullptr},
        {"fig1", K::Curve, M::All, false, {1, 3}, &kAllPositions, &kFourNoise},
        {"fig2", K::Curve, M::All, false, {2, 4}, &kAllPositions, &kFourNoise},
        {"fig3", K::Curve, M::All, true, {1, 2, 3}, &kGeneralizedPositions, &kFourNoise},
        {"fig4", K::Curve, M::MemoryOnly, false, {1, 2, 3, 4}, &kAllPositions, &kThreeNoise},
        {"fig5", K::Curve, M::MemoryOnly, true, {1, 2, 3}, &kGeneralizedPositions, &kThreeNoise},
        {"fig6", K::Curve, M::PositionOnly, false, {1, 2, 3, 4}, &kAllPositions, &kThreeNoise},
        {"fig7", K::Curve, M::PositionOnly, true, {1, 2, 3}, &kGeneralizedPositions, &kThreeNoise},
    };
    return table;
}

SweepGrid preset_grid(bool generalized, std::optional<int> R) {
    if (generalized) return SweepGrid::generalized(1, kGeneralizedTMax, R.value_or(kDefaultR));
    return SweepGrid::hadamard(1, kHadamardTMax);
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << content;
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

nlohmann::ordered_json result_json(const MaxProbResult& r) {
    nlohmann::ordered_json j;
    j["value"] = r.value;
    j["gamma"] = gamma_from_g(r.value);
    j["t"] = r.at_t;
    j["theta"] = r.at_theta ? nlohmann::ordered_json(*r.at_theta) : nlohmann::ordered_json(nullptr);
    j["phi"] = r.at_phi ? nlohmann::ordered_json(*r.at_phi) : nlohmann::ordered_json(nullptr);
    j["flip"] = to_string(r.at_flip);
    return j;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& s : shapes()) {
        names.emplace_back(s.name);
        if (std::string(s.name) == "table6") names.emplace_back("kappa1");
    }
    return names;
}

std::vector<std::int64_t> log_spaced_counts(double lo, double hi, int count) {
    if (!(lo >= 1.0) || hi < lo || count < 1) throw ConfigError("log_spaced_counts: bad range");
    std::vector<std::int64_t> out;
    if (count == 1) return {static_cast<std::int64_t>(std::llround(lo))};
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < count; ++i) {
        const double exponent = a + (b - a) * i / (count - 1);
        out.push_back(static_cast<std::int64_t>(std::llround(std::pow(10.0, exponent))));
    }
    return out;
}

ExperimentSpec preset(const std::string& name, std::optional<int> R) {
    ExperimentSpec spec;
    spec.name = name;
    if (name == "kappa1") {
        spec.kind = ExperimentSpec::Kind::Table;
        for (auto mode : {MeasurementMode::All, MeasurementMode::MemoryOnly, MeasurementMode::PositionOnly})
            for (int P : kAllPositions) spec.cases.push_back({P, 1, mode, preset_grid(false, R)});
        return spec;
    }
    for (const auto& s : shapes()) {
        if (name != s.name) continue;
        spec.kind = s.kind;
        for (int kappa : s.kappas)
            for (int P : *s.positions) spec.cases.push_back({P, kappa, s.mode, preset_grid(s.generalized, R)});
        if (s.noise) spec.noise_levels = *s.noise;
        if (s.kind == ExperimentSpec::Kind::Curve) spec.N_grid = log_spaced_counts(1e3, 1e10, 40);
        return spec;
    }
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "'; known presets: " + known);
}

MaxProbResult GammaCache::get(int P, int kappa, MeasurementMode mode, const SweepGrid& grid,
                              unsigned threads) {
    std::string flips;
    for (auto f : grid.effective_flips()) flips += to_string(f);
    const Key key{P, kappa, grid.t_min, grid.t_max, grid.R.value_or(0), flips};
    {
        std::lock_guard lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) return it->second[static_cast<int>(mode)];
    }
    const auto all = g_function_all_modes(P, kappa, grid, threads);
    std::lock_guard lock(mutex_);
    entries_.emplace(key, all);
    return all[static_cast<int>(mode)];
}

double ResultTable::max_abs_deviation() const {
    double worst = 0.0;
    for (const auto& row : rows)
        if (row.deviation) worst = std::max(worst, std::abs(*row.deviation));
    return worst;
}

ResultTable run_table(const ExperimentSpec& spec, unsigned threads, GammaCache* cache) {
    GammaCache local;
    GammaCache& gammas = cache ? *cache : local;
    ResultTable table;
    table.name = spec.name;
    if (!spec.cases.empty()) table.grid = spec.cases.front().grid.describe();
    table.rows.resize(spec.cases.size());
    parallel_for(spec.cases.size(), threads, [&](std::size_t i) {
        const auto& c = spec.cases[i];
        TableRow row;
        row.kappa = c.kappa;
        row.P = c.P;
        row.mode = c.mode;
        row.result = gammas.get(c.P, c.kappa, c.mode, c.grid, 1);
        row.reference = reference_g(c.mode, c.grid.R.has_value(), c.kappa, c.P);
        if (row.reference) row.deviation = row.result.value - *row.reference;
        table.rows[i] = row;
    });
    return table;
}

std::vector<CurvePoint> run_rate_curve(const ExperimentSpec& spec, unsigned threads, GammaCache* cache) {
    GammaCache local;
    GammaCache& gammas = cache ? *cache : local;
    std::vector<double> gamma(spec.cases.size());
    parallel_for(spec.cases.size(), threads, [&](std::size_t i) {
        const auto& c = spec.cases[i];
        gamma[i] = gamma_from_g(gammas.get(c.P, c.kappa, c.mode, c.grid, 1).value);
    });
    std::vector<CurvePoint> points;
    points.reserve(spec.cases.size() * spec.noise_levels.size() * spec.N_grid.size());
    for (std::size_t i = 0; i < spec.cases.size(); ++i) {
        const auto& c = spec.cases[i];
        for (double Q : spec.noise_levels) {
            for (auto N : spec.N_grid) {
                ProtocolParams params = ProtocolParams::with_sqrt_sample(N, Q);
                params.epsilon = spec.epsilon;
                params.epsilon_pa = spec.epsilon_pa;
                params.beta = spec.beta;
                const RateResult r = rate_for_mode(params, gamma[i], c.P, c.kappa, c.mode);
                points.push_back({c.mode, c.kappa, c.P, Q, N, r.rate, gamma[i]});
            }
        }
    }
    return points;
}

std::string table_csv(const ResultTable& table) {
    std::ostringstream os;
    os << "kappa,P,mode,value,t,theta,phi,flip\n";
    for (const auto& row : table.rows) {
        const auto& r = row.result;
        os << row.kappa << ',' << row.P << ',' << to_string(row.mode) << ',' << fixed(r.value, 10) << ','
           << r.at_t << ',' << (r.at_theta ? fixed(*r.at_theta, 10) : "") << ','
           << (r.at_phi ? fixed(*r.at_phi, 10) : "") << ',' << to_string(r.at_flip) << '\n';
    }
    return os.str();
}

std::string curve_csv(const std::vector<CurvePoint>& points) {
    std::ostringstream os;
    os << "case,kappa,P,Q,N,rate\n";
    for (const auto& p : points)
        os << to_string(extraction_case(p.mode)) << ',' << p.kappa << ',' << p.P << ',' << general(p.Q) << ','
           << p.N << ',' << general(p.rate) << '\n';
    return os.str();
}

std::string table_json(const ResultTable& table) {
    nlohmann::ordered_json doc;
    doc["preset"] = table.name;
    doc["grid"] = table.grid;
    doc["tolerance"] = 5e-4;
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json j;
        j["kappa"] = row.kappa;
        j["P"] = row.P;
        j["mode"] = to_string(row.mode);
        const auto result = result_json(row.result);
        for (const auto& [k, v] : result.items()) j[k] = v;
        j["reference"] = row.reference ? nlohmann::ordered_json(*row.reference) : nlohmann::ordered_json(nullptr);
        j["deviation"] = row.deviation ? nlohmann::ordered_json(*row.deviation) : nlohmann::ordered_json(nullptr);
        rows.push_back(j);
    }
    return doc.dump(2) + "\n";
}

std::string curve_json(const std::string& name, const std::vector<CurvePoint>& points) {
    nlohmann::ordered_json doc;
    doc["preset"] = name;
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& p : points) {
        nlohmann::ordered_json j;
        j["case"] = to_string(extraction_case(p.mode));
        j["kappa"] = p.kappa;
        j["P"] = p.P;
        j["Q"] = p.Q;
        j["N"] = p.N;
        j["rate"] = p.rate;
        j["gamma"] = p.gamma;
        rows.push_back(j);
    }
    return doc.dump(2) + "\n";
}

std::filesystem::path output_path(const std::filesystem::path& dir, const std::string& preset,
                                  EmitFormat format, const std::string& timestamp) {
    std::string file = preset;
    if (!timestamp.empty()) file += "_" + timestamp;
    file += format == EmitFormat::Csv ? ".csv" : ".json";
    return dir / file;
}

std::filesystem::path emit(const ResultTable& table, EmitFormat format, const std::filesystem::path& path) {
    if (table.rows.empty()) throw ConfigError("emit: empty result table");
    write_file(path, format == EmitFormat::Csv ? table_csv(table) : table_json(table));
    return path;
}

std::filesystem::path emit(const std::string& name, const std::vector<CurvePoint>& points, EmitFormat format,
                           const std::filesystem::path& path) {
    if (points.empty()) throw ConfigError("emit: empty curve");
    write_file(path, format == EmitFormat::Csv ? curve_csv(points) : curve_json(name, points));
    return path;
}

}  // namespace hdqw
