#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdqw/experiments.hpp"
#include "hdqw/reference_values.hpp"

using namespace hdqw;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const TableRow& cell(const ResultTable& t, int kappa, int P) {
    for (const auto& r : t.rows)
        if (r.kappa == kappa && r.P == P) return r;
    throw std::runtime_error("missing cell");
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("hdqw_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("preset catalogue") {
    const auto names = preset_names();
    for (const char* n : {"table1", "table2", "table3", "table4", "table5", "table6", "kappa1", "fig1", "fig7"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    CHECK(preset("table1").cases.size() == 15);
    CHECK(preset("table2").cases.size() == 12);
    CHECK(preset("table2").cases.front().grid.R == 16);
    CHECK(preset("table2", 8).cases.front().grid.R == 8);
    CHECK(preset("fig1").noise_levels == std::vector<double>{0.0, 0.15, 0.2, 0.3});
    CHECK(preset("fig1").N_grid.size() == 40);
    CHECK(preset("fig1").N_grid.front() == 1000);
    CHECK(preset("fig1").N_grid.back() == 10'000'000'000LL);
    try {
        preset("table9");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("table1") != std::string::npos);
        CHECK(std::string(e.what()).find("fig7") != std::string::npos);
    }
}

TEST_CASE("table cells") {
    GammaCache cache;
    const auto t1 = run_table(preset("table1"), 0, &cache);
    CHECK(std::abs(cell(t1, 3, 5).result.value - 0.0535) <= 5e-4);
    const auto t3 = run_table(preset("table3"), 0, &cache);
    CHECK(std::abs(cell(t3, 4, 3).result.value - 0.0625) <= 5e-4);
    const auto t5 = run_table(preset("table5"), 0, &cache);
    CHECK(std::abs(cell(t5, 2, 51).result.value - 0.1701) <= 5e-4);
    for (const auto& row : t5.rows) {
        REQUIRE(row.reference);
        CHECK(*row.deviation == doctest::Approx(row.result.value - *row.reference));
        CHECK(std::abs(max_outcome_prob(row.result.config(), row.mode) - row.result.value) < 1e-12);
    }
}

TEST_CASE("tables are reproducible") {
    const auto spec = preset("kappa1");
    CHECK(table_csv(run_table(spec, 1)) == table_csv(run_table(spec, 3)));
}

TEST_CASE("rate curves") {
    auto spec = preset("fig4");
    spec.N_grid = log_spaced_counts(1e2, 1e10, 25);
    const auto pts = run_rate_curve(spec);
    CHECK(pts.size() == spec.cases.size() * 3 * 25);
    CHECK(pts.front().N == 100);
    CHECK(pts.front().rate == 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i].rate <= pts[i].gamma);
        CHECK(pts[i].rate >= 0.0);
        if (i > 0 && pts[i].Q == 0.0 && pts[i - 1].Q == 0.0 && pts[i].P == pts[i - 1].P &&
            pts[i].kappa == pts[i - 1].kappa)
            CHECK(pts[i].rate >= pts[i - 1].rate);
    }
    CHECK(curve_csv(pts) == curve_csv(run_rate_curve(spec)));
}

TEST_CASE("emission") {
    const auto dir = scratch("emit");
    const auto table = run_table(preset("kappa1"));
    const auto csv = emit(table, EmitFormat::Csv, output_path(dir, "kappa1", EmitFormat::Csv));
    CHECK(csv.filename() == "kappa1.csv");
    const auto text = slurp(csv);
    CHECK(text.rfind("kappa,P,mode,value,t,theta,phi,flip\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 16);

    const auto json = emit(table, EmitFormat::Json, output_path(dir, "kappa1", EmitFormat::Json, "20260101T000000Z"));
    CHECK(json.filename() == "kappa1_20260101T000000Z.json");
    CHECK(slurp(json).find("\"deviation\"") != std::string::npos);

    auto spec = preset("fig6");
    spec.N_grid = {1000, 100000};
    const auto pts = run_rate_curve(spec);
    const auto curve = emit("fig6", pts, EmitFormat::Csv, output_path(dir, "fig6", EmitFormat::Csv));
    CHECK(slurp(curve).rfind("case,kappa,P,Q,N,rate\n", 0) == 0);
    CHECK(slurp(curve).find("not_using_memory") != std::string::npos);

    const auto empty_path = dir / "empty.csv";
    CHECK_THROWS_AS(emit(ResultTable{}, EmitFormat::Csv, empty_path), ConfigError);
    CHECK_THROWS_AS(emit("x", {}, EmitFormat::Csv, empty_path), ConfigError);
    CHECK(!fs::exists(empty_path));

    std::ofstream(dir / "blocker") << "file";
    CHECK_THROWS_AS(emit(table, EmitFormat::Csv, dir / "blocker" / "out.csv"), std::runtime_error);
    fs::remove_all(dir);
}

TEST_CASE("reference values") {
    CHECK(reference_g(MeasurementMode::All, false, 2, 3) == 0.1250);
    CHECK(reference_g(MeasurementMode::PositionOnly, false, 1, 3) == 0.3634);
    CHECK(reference_g(MeasurementMode::MemoryOnly, true, 2, 5) == 0.1615);
    CHECK(!reference_g(MeasurementMode::All, true, 2, 51));
}
