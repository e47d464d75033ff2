// hdqw: evolve | maxprob | table | curve | extract
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdqw/entropy.hpp"
#include "hdqw/experiments.hpp"
#include "hdqw/maxprob.hpp"
#include "hdqw/pipeline.hpp"
#include "hdqw/walk.hpp"

namespace {

using json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    int P = 3;
    int kappa = 1;
    std::optional<int> steps;
    std::string mode = "all";
    std::string coin = "hadamard";
    double theta = 0.0;
    double phi = 0.0;
    std::optional<int> R;
    std::vector<std::string> flips;
    int tmin = 1;
    std::optional<int> tmax;
    std::int64_t N = 100'000;
    std::optional<std::int64_t> m;
    double Q = 0.0;
    double eps = 1e-7;
    double eps_pa = 1e-6;
    double beta = 0.25;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string preset;
    std::string format = "csv";
    double nmin = 1e3;
    double nmax = 1e10;
    int npoints = 40;
    bool json = false;
    bool no_timestamp = false;
    unsigned threads = 0;
    std::string config_file;
};

void add_walk_options(CLI::App* cmd, Options& o) {
    cmd->add_option("-P", o.P, "cycle length (P >= 2)")->capture_default_str();
    cmd->add_option("-k,--kappa", o.kappa, "number of recycled coins (kappa >= 1)")->capture_default_str();
    cmd->add_option("--mode", o.mode, "measurement: all | memory | position")->capture_default_str();
    cmd->add_option("--coin", o.coin, "coin: hadamard | general")->capture_default_str();
    cmd->add_option("--flip", o.flips, "flip operator(s): i | x | y");
}

void add_protocol_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--eps", o.eps, "epsilon")->capture_default_str();
    cmd->add_option("--eps-pa", o.eps_pa, "privacy-amplification epsilon")->capture_default_str();
    cmd->add_option("--beta", o.beta, "beta in (0, 1/2)")->capture_default_str();
}

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

hdqw::CoinOperator parse_coin(const Options& o) {
    if (o.coin == "hadamard") return hdqw::CoinOperator::hadamard();
    if (o.coin == "general") return hdqw::CoinOperator::generalized(o.theta, o.phi);
    throw UsageError("unknown coin '" + o.coin + "' (hadamard|general)");
}

hdqw::FlipOperator single_flip(const Options& o) {
    if (o.flips.empty()) return hdqw::FlipOperator::I;
    if (o.flips.size() > 1) throw UsageError("this command takes a single --flip");
    return hdqw::parse_flip(o.flips.front());
}

hdqw::WalkConfig walk_config(const Options& o, int steps) {
    hdqw::WalkConfig config;
    config.P = o.P;
    config.kappa = o.kappa;
    config.T = steps;
    config.coin = parse_coin(o);
    config.flip = single_flip(o);
    config.validate();
    return config;
}

hdqw::SweepGrid sweep_grid(const Options& o, int default_tmax) {
    hdqw::SweepGrid grid;
    grid.t_min = o.tmin;
    grid.t_max = o.tmax.value_or(default_tmax);
    if (o.coin == "general") grid.R = o.R.value_or(16);
    else if (o.coin != "hadamard") throw UsageError("unknown coin '" + o.coin + "' (hadamard|general)");
    else if (o.R) throw UsageError("--R requires --coin general");
    for (const auto& f : o.flips) grid.flips.push_back(hdqw::parse_flip(f));
    grid.validate();
    return grid;
}

std::string outcome_label(int kappa, hdqw::MeasurementMode mode, std::size_t index) {
    using hdqw::MeasurementMode;
    const int coin_bits = mode == MeasurementMode::All ? kappa : mode == MeasurementMode::MemoryOnly ? kappa - 1 : 0;
    const std::size_t per_site = std::size_t{1} << coin_bits;
    std::string label = "x=" + std::to_string(index / per_site);
    if (coin_bits > 0) {
        label += " c=";
        const std::size_t coins = index % per_site;
        for (int b = coin_bits - 1; b >= 0; --b) label.push_back(((coins >> b) & 1u) ? '1' : '0');
    }
    return label;
}

json result_json(const hdqw::MaxProbResult& r) {
    json j;
    j["P"] = r.P;
    j["kappa"] = r.kappa;
    j["mode"] = hdqw::to_string(r.mode);
    j["value"] = r.value;
    j["gamma"] = hdqw::gamma_from_g(r.value);
    j["t"] = r.at_t;
    j["theta"] = r.at_theta ? json(*r.at_theta) : json(nullptr);
    j["phi"] = r.at_phi ? json(*r.at_phi) : json(nullptr);
    j["flip"] = hdqw::to_string(r.at_flip);
    return j;
}

int cmd_evolve(const Options& o) {
    const auto config = walk_config(o, o.steps.value_or(0));
    const auto mode = hdqw::parse_mode(o.mode);
    const auto dist = hdqw::distribution(hdqw::evolve(config), mode);
    constexpr double kShown = 1e-14;
    if (o.json) {
        json doc;
        doc["P"] = config.P;
        doc["kappa"] = config.kappa;
        doc["T"] = config.T;
        doc["mode"] = hdqw::to_string(mode);
        doc["coin"] = config.coin.describe();
        doc["flip"] = hdqw::to_string(config.flip);
        doc["probs"] = dist.probs;
        doc["max"] = dist.max();
        std::cout << doc.dump(2) << '\n';
        return kOk;
    }
    std::size_t support = 0;
    for (double p : dist.probs) support += p > kShown;
    std::printf("# P=%d kappa=%d T=%d mode=%s coin=%s flip=%s outcomes=%zu support=%zu\n", config.P,
                config.kappa, config.T, std::string(hdqw::to_string(mode)).c_str(), config.coin.describe().c_str(),
                std::string(hdqw::to_string(config.flip)).c_str(), dist.outcome_count(), support);
    for (std::size_t i = 0; i < dist.probs.size(); ++i)
        if (dist.probs[i] > kShown)
            std::printf("%s %.12f\n", outcome_label(config.kappa, mode, i).c_str(), dist.probs[i]);
    std::printf("max %.12f\n", dist.max());
    return kOk;
}

int cmd_maxprob(const Options& o) {
    const auto mode = hdqw::parse_mode(o.mode);
    const auto grid = sweep_grid(o, o.coin == "general" ? 1000 : 2000);
    const auto r = hdqw::g_function(o.P, o.kappa, mode, grid, o.threads);
    if (!o.out.empty()) {
        hdqw::ResultTable table;
        table.name = "maxprob";
        table.grid = grid.describe();
        table.rows.push_back({o.kappa, o.P, mode, r, std::nullopt, std::nullopt});
        hdqw::emit(table, hdqw::EmitFormat::Csv, o.out);
    }
    if (o.json) {
        json doc = result_json(r);
        doc["grid"] = grid.describe();
        std::cout << doc.dump(2) << '\n';
        return kOk;
    }
    std::printf("value %.10f\n", r.value);
    std::printf("gamma %.10f\n", hdqw::gamma_from_g(r.value));
    std::printf("t %d\n", r.at_t);
    if (r.at_theta) std::printf("theta %.10f\nphi %.10f\n", *r.at_theta, *r.at_phi);
    std::printf("flip %s\n", std::string(hdqw::to_string(r.at_flip)).c_str());
    return kOk;
}

std::filesystem::path emit_target(const Options& o, hdqw::EmitFormat format) {
    const std::filesystem::path dir = o.out.empty() ? "." : o.out;
    return hdqw::output_path(dir, o.preset, format, o.no_timestamp ? "" : timestamp_utc());
}

hdqw::EmitFormat parse_format(const std::string& f) {
    if (f == "csv") return hdqw::EmitFormat::Csv;
    if (f == "json") return hdqw::EmitFormat::Json;
    throw UsageError("unknown format '" + f + "' (csv|json)");
}

int cmd_table(const Options& o) {
    const auto spec = hdqw::preset(o.preset, o.R);
    if (spec.kind != hdqw::ExperimentSpec::Kind::Table)
        throw hdqw::ConfigError("'" + o.preset + "' is a curve preset; use `curve`");
    const auto format = parse_format(o.format);
    const auto table = hdqw::run_table(spec, o.threads);
    const auto path = hdqw::emit(table, format, emit_target(o, format));
    if (o.json) {
        std::cout << hdqw::table_json(table);
        return kOk;
    }
    std::printf("# %s (%s) -> %s\n", table.name.c_str(), table.grid.c_str(), path.string().c_str());
    for (const auto& row : table.rows) {
        std::printf("kappa=%d P=%-3d %-8s %.4f t=%-5d", row.kappa, row.P, std::string(hdqw::to_string(row.mode)).c_str(),
                    row.result.value, row.result.at_t);
        if (row.reference) std::printf(" reference=%.4f deviation=%+.5f", *row.reference, *row.deviation);
        std::printf("\n");
    }
    return kOk;
}

int cmd_curve(const Options& o) {
    auto spec = hdqw::preset(o.preset, o.R);
    if (spec.kind != hdqw::ExperimentSpec::Kind::Curve)
        throw hdqw::ConfigError("'" + o.preset + "' is a table preset; use `table`");
    spec.N_grid = hdqw::log_spaced_counts(o.nmin, o.nmax, o.npoints);
    spec.epsilon = o.eps;
    spec.epsilon_pa = o.eps_pa;
    spec.beta = o.beta;
    const auto format = parse_format(o.format);
    const auto points = hdqw::run_rate_curve(spec, o.threads);
    const auto path = hdqw::emit(spec.name, points, format, emit_target(o, format));
    if (o.json) {
        std::cout << hdqw::curve_json(spec.name, points);
        return kOk;
    }
    std::printf("# %s: %zu points -> %s\n", spec.name.c_str(), points.size(), path.string().c_str());
    return kOk;
}

int cmd_extract(const Options& o) {
    const auto mode = hdqw::parse_mode(o.mode);
    hdqw::WalkConfig config = walk_config(o, 0);
    if (o.steps) {
        config.T = *o.steps;
    } else {
        // Run at the time step that minimizes the guessing probability.
        config.T = hdqw::min_over_time(config, mode, o.tmin, o.tmax.value_or(2000)).at_t;
    }
    config.validate();

    std::uint64_t seed;
    if (o.seed) {
        seed = *o.seed;
    } else {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        std::fprintf(stderr, "# generated seed %llu\n", static_cast<unsigned long long>(seed));
    }
    hdqw::ProtocolParams params = hdqw::ProtocolParams::with_sqrt_sample(o.N, o.Q);
    if (o.m) params.m = *o.m;
    params.epsilon = o.eps;
    params.epsilon_pa = o.eps_pa;
    params.beta = o.beta;

    hdqw::SourceModel source{config, o.Q, seed};
    const auto record = hdqw::run_protocol(source, params, mode, o.threads);

    const std::string stem = o.out.empty() ? "extract" : o.out;
    const std::string record_path = stem + ".json";
    const std::string bits_path = stem + ".bin";
    {
        std::ofstream rec(record_path, std::ios::trunc);
        if (!rec) throw std::runtime_error("cannot open '" + record_path + "' for writing");
        rec << record.to_json() << '\n';
    }
    {
        std::ofstream bits(bits_path, std::ios::binary | std::ios::trunc);
        if (!bits) throw std::runtime_error("cannot open '" + bits_path + "' for writing");
        const auto bytes = record.output.to_bytes();
        bits.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
    if (o.json) {
        std::cout << record.to_json() << '\n';
        return kOk;
    }
    std::printf("T %d\nseed %llu\nw_q %.6f\ngamma %.10f\nell %.3f\noutput_bits %zu\naborted %s\nrecord %s\nbits %s\n",
                config.T, static_cast<unsigned long long>(seed), record.w_q, record.rate.gamma, record.rate.ell,
                record.output.size(), record.aborted ? "true" : "false", record_path.c_str(), bits_path.c_str());
    return kOk;
}

// Fills options that were not given on the command line from a flat JSON
// document keyed by long flag names (or the bare short name, e.g. "P").
void apply_config_file(CLI::App* cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("config file '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw UsageError("config file must hold a flat object");
    for (auto& [key, value] : doc.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (!opt) opt = cmd->get_option_no_throw("-" + key);
        if (!opt) throw UsageError("config file: unknown option '" + key + "' for " + cmd->get_name());
        if (opt->count() > 0) continue;
        std::vector<std::string> values;
        auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        if (value.is_array()) for (const auto& v : value) values.push_back(scalar(v));
        else if (value.is_boolean()) values.push_back(value.get<bool>() ? "true" : "false");
        else values.push_back(scalar(value));
        for (const auto& v : values) opt->add_result(v);
        opt->run_callback();
    }
}

void log_resolved(const CLI::App* cmd) {
    json doc;
    doc["command"] = cmd->get_name();
    for (const CLI::Option* opt : cmd->get_options()) {
        const std::string name = opt->get_single_name();
        if (name.empty() || name == "help") continue;
        if (opt->count() > 0) {
            const auto& results = opt->results();
            if (results.size() == 1) doc[name] = results.front();
            else doc[name] = results;
        }
        else if (!opt->get_default_str().empty()) doc[name] = opt->get_default_str();
    }
    std::fprintf(stderr, "# config %s\n", doc.dump().c_str());
}

void report_error(const char* kind, const std::string& message) {
    json err;
    err["error"] = kind;
    err["message"] = message;
    std::fprintf(stderr, "%s\n", err.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"History-dependent quantum walk randomness tools"};
    app.require_subcommand(1);

    auto add_global = [&](CLI::App* cmd) {
        cmd->add_flag("--json", o.json, "print structured output");
        cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)")->capture_default_str();
        cmd->add_option("--config", o.config_file, "flat JSON file of option values; flags win");
    };

    auto* evolve = app.add_subcommand("evolve", "evolve one walk and print its outcome distribution");
    add_walk_options(evolve, o);
    evolve->add_option("-T,--steps", o.steps, "number of walk steps");
    evolve->add_option("--theta", o.theta, "generalized coin angle (radians)")->capture_default_str();
    evolve->add_option("--phi", o.phi, "generalized coin phase (radians)")->capture_default_str();
    add_global(evolve);

    auto* maxprob = app.add_subcommand("maxprob", "minimize the max outcome probability over a parameter grid");
    add_walk_options(maxprob, o);
    maxprob->add_option("--R", o.R, "angle grid resolution (generalized coin, default 16)");
    maxprob->add_option("--tmin", o.tmin, "first time step")->capture_default_str();
    maxprob->add_option("--tmax", o.tmax, "last time step (default 2000 hadamard, 1000 general)");
    maxprob->add_option("-o,--out", o.out, "also write a one-row CSV here");
    add_global(maxprob);

    auto* table = app.add_subcommand("table", "reproduce a max-probability table preset");
    table->add_option("preset", o.preset, "table1..table6 | kappa1")->required();
    table->add_option("--R", o.R, "angle grid resolution for generalized presets");
    table->add_option("-o,--out", o.out, "output directory")->capture_default_str();
    table->add_option("--format", o.format, "csv | json")->capture_default_str();
    table->add_flag("--no-timestamp", o.no_timestamp, "name the file <preset>.csv");
    add_global(table);

    auto* curve = app.add_subcommand("curve", "compute a rate-vs-N curve preset");
    curve->add_option("preset", o.preset, "fig1..fig7")->required();
    curve->add_option("--R", o.R, "angle grid resolution for generalized presets");
    curve->add_option("-o,--out", o.out, "output directory")->capture_default_str();
    curve->add_option("--format", o.format, "csv | json")->capture_default_str();
    curve->add_option("--nmin", o.nmin, "smallest N")->capture_default_str();
    curve->add_option("--nmax", o.nmax, "largest N")->capture_default_str();
    curve->add_option("--npoints", o.npoints, "number of log-spaced N values")->capture_default_str();
    curve->add_flag("--no-timestamp", o.no_timestamp, "name the file <preset>.csv");
    add_protocol_options(curve, o);
    add_global(curve);

    auto* extract = app.add_subcommand("extract", "simulate the protocol and write the output bits");
    add_walk_options(extract, o);
    extract->add_option("-T,--steps", o.steps, "walk steps (default: minimizing t in [tmin, tmax])");
    extract->add_option("--theta", o.theta, "generalized coin angle (radians)")->capture_default_str();
    extract->add_option("--phi", o.phi, "generalized coin phase (radians)")->capture_default_str();
    extract->add_option("--tmin", o.tmin, "first time step considered")->capture_default_str();
    extract->add_option("--tmax", o.tmax, "last time step considered (default 2000)");
    extract->add_option("-N", o.N, "number of signals")->capture_default_str();
    extract->add_option("-m", o.m, "test sample size (default floor(sqrt(N)))");
    extract->add_option("-Q", o.Q, "depolarization probability")->capture_default_str();
    extract->add_option("--seed", o.seed, "64-bit seed (generated and printed when absent)");
    extract->add_option("-o,--out", o.out, "output stem: <out>.json and <out>.bin")->capture_default_str();
    add_protocol_options(extract, o);
    add_global(extract);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("usage", e.what());
        return kUsageError;
    }

    CLI::App* cmd = app.get_subcommands().front();
    try {
        if (!o.config_file.empty()) apply_config_file(cmd, o.config_file);
        log_resolved(cmd);
        if (cmd == evolve) return cmd_evolve(o);
        if (cmd == maxprob) return cmd_maxprob(o);
        if (cmd == table) return cmd_table(o);
        if (cmd == curve) return cmd_curve(o);
        if (cmd == extract) return cmd_extract(o);
    } catch (const UsageError& e) {
        report_error("usage", e.what());
        return kUsageError;
    } catch (const CLI::ParseError& e) {
        report_error("usage", e.what());
        return kUsageError;
    } catch (const hdqw::ConfigError& e) {
        report_error("usage", e.what());
        return kUsageError;
    } catch (const hdqw::ParameterError& e) {
        report_error("usage", e.what());
        return kUsageError;
    } catch (const std::exception& e) {
        report_error("runtime", e.what());
        return kRuntimeError;
    }
    return kRuntimeError;
}
