#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "spincool/config.hpp"
#include "spincool/constants.hpp"
#include "spincool/errors.hpp"
#include "spincool/model.hpp"
#include "spincool/output.hpp"
#include "spincool/runner.hpp"

using namespace spincool;
namespace fs = std::filesystem;

namespace {

const char* kSampleConfig = R"(# sample configuration
[model]
omega_c_hz = 10e9
omega_s_hz = 10e9    # on resonance
rabi_hz = 100e6
g_hz = 1
kappa_hz = 1e6
nbar = 0.25
n_spins = 500

[analysis]
n_spins_list = 100,300,1000
kappa_ratio_list = 0.5,1,5,10

[cli_io]
engine = both
time_count = 64
workers = 2
)";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "spincool_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunConfig small_run_config() {
    RunConfig cfg = parse_config(kSampleConfig);
    cfg.n_spins = 60;
    cfg.n_spins_list = {20, 60};
    cfg.time_grid.count = 50;
    return cfg;
}

} // namespace

TEST_CASE("config: parse, serialize, parse round-trips exactly") {
    const RunConfig first = parse_config(kSampleConfig);
    CHECK(first.engine == "both");
    CHECK(first.nbar == 0.25);
    CHECK(first.n_spins == 500);
    CHECK(first.n_spins_list == std::vector<std::int64_t>{100, 300, 1000});
    CHECK(first.workers == 2);

    const std::string canonical = serialize_config(first);
    const RunConfig second = parse_config(canonical);
    CHECK(first == second);
    CHECK(serialize_config(second) == canonical);
}

TEST_CASE("config: unknown keys and sections carry the line number") {
    const std::string bad = "[model]\nomega_c_hz = 1e9\nbogus_key = 3\n";
    try {
        parse_config(bad);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("bogus_key") != std::string::npos);
    }

    try {
        parse_config("[nonsense]\nx = 1\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("nonsense") != std::string::npos);
    }
}

TEST_CASE("config: missing required keys are all reported") {
    try {
        parse_config("");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        for (const char* key : {"model.omega_c_hz", "model.g_hz", "model.n_spins"})
            CHECK(msg.find(key) != std::string::npos);
    }
}

TEST_CASE("config: malformed lines, duplicates, bad values") {
    CHECK_THROWS_AS(parse_config("[model\nomega_c_hz = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("omega_c_hz = 1\n"), ValidationError); // no section
    CHECK_THROWS_AS(parse_config("[model]\nomega_c_hz\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[model]\nomega_c_hz = ten\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[model]\nn_spins = 1.5\n"), ValidationError);
    CHECK_THROWS_AS(
        parse_config("[model]\nomega_c_hz = 1e9\nomega_c_hz = 2e9\n"),
        ValidationError);
    CHECK_THROWS_AS(
        parse_config("[cli_io]\ntime_spacing = cubic\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[cli_io]\nengine = quantum\n"), ValidationError);
}

TEST_CASE("config: temperature and nbar are exclusive; conversion works") {
    const std::string both = std::string(kSampleConfig) + "\n[model]\n"; // no-op
    RunConfig cfg = parse_config(kSampleConfig);
    CHECK(cfg.effective_nbar() == 0.25);

    const double t_ln2 = constants::hbar * constants::two_pi * 10e9 /
                         (constants::boltzmann * std::log(2.0));
    std::ostringstream with_temp;
    with_temp << "[model]\nomega_c_hz = 10e9\nomega_s_hz = 10e9\nrabi_hz = 1e8\n"
              << "g_hz = 1\nkappa_hz = 1e6\nn_spins = 10\ntemperature_k = "
              << std::setprecision(17) << t_ln2 << "\n";
    const RunConfig temp_cfg = parse_config(with_temp.str());
    CHECK(temp_cfg.effective_nbar() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(temp_cfg.physical().nbar == doctest::Approx(1.0).epsilon(1e-12));
    // round-trips through the serializer as temperature, not nbar
    const RunConfig again = parse_config(serialize_config(temp_cfg));
    CHECK(again == temp_cfg);

    const std::string conflict =
        "[model]\nomega_c_hz = 1e9\nnbar = 1\ntemperature_k = 0.5\n";
    CHECK_THROWS_AS(parse_config(conflict), ValidationError);
}

TEST_CASE("config: overrides replace file values and are validated") {
    const RunConfig cfg =
        parse_config(kSampleConfig, {"model.nbar=0.5", "cli_io.workers=7"});
    CHECK(cfg.nbar == 0.5);
    CHECK(cfg.workers == 7);
    CHECK_THROWS_AS(parse_config(kSampleConfig, {"modelnbar=0.5"}), ValidationError);
    CHECK_THROWS_AS(parse_config(kSampleConfig, {"model.unknown=1"}), ValidationError);
}

TEST_CASE("time grids: linear and log spacing") {
    TimeGridSpec lin;
    lin.stop = 2.0;
    lin.count = 4;
    const std::vector<double> g = lin.build(1.0);
    REQUIRE(g.size() == 4);
    CHECK(g.front() == doctest::Approx(0.5));
    CHECK(g.back() == doctest::Approx(2.0));

    TimeGridSpec log;
    log.stop = 100.0;
    log.count = 5;
    log.log_spacing = true;
    log.start = 1.0;
    const std::vector<double> lg = log.build(1.0);
    CHECK(lg.front() == doctest::Approx(1.0));
    CHECK(lg.back() == doctest::Approx(100.0));
    CHECK(lg[1] / lg[0] == doctest::Approx(lg[2] / lg[1]).epsilon(1e-12));

    TimeGridSpec autos; // stop <= 0 falls back to the guess
    const std::vector<double> ag = autos.build(3.0);
    CHECK(ag.back() == doctest::Approx(3.0));

    TimeGridSpec bad;
    bad.count = 1;
    CHECK_THROWS_AS(bad.build(1.0), ValidationError);
}

TEST_CASE("double formatting: shortest round-trip, dot decimal") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1e-6) == "1e-06");
    const double v = 2.0866753256621446e-05;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("runner: identical configs produce byte-identical artifacts") {
    const RunConfig cfg = small_run_config();
    const fs::path d1 = fresh_dir("det1");
    const fs::path d2 = fresh_dir("det2");
    run_command("simulate-markov", cfg, d1);
    run_command("simulate-markov", cfg, d2);
    for (const char* name : {"markov_ns20.csv", "markov_ns60.csv",
                             "simulate_markov_summary.json"}) {
        const std::string a = slurp(d1 / name);
        const std::string b = slurp(d2 / name);
        REQUIRE(!a.empty());
        CHECK(a == b);
    }
}

TEST_CASE("runner: trajectory CSV schema and increasing time column") {
    const RunConfig cfg = small_run_config();
    const fs::path dir = fresh_dir("traj");
    run_command("simulate-markov", cfg, dir);
    std::ifstream in(dir / "markov_ns20.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "time_scaled,time_seconds,jx_norm");
    double prev = -1.0;
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const double t = std::stod(line.substr(0, line.find(',')));
        CHECK(t > prev);
        prev = t;
        ++rows;
    }
    CHECK(rows == cfg.time_grid.count);
}

TEST_CASE("runner: thermal sweep JSON carries the piecewise reference values") {
    RunConfig cfg = small_run_config();
    cfg.n_spins_list = {10, 40};
    cfg.nbar_list = {0.0, 2.0};
    cfg.grid_points = 160;
    const fs::path dir = fresh_dir("thermal");
    const nlohmann::ordered_json doc = run_command("sweep-thermal", cfg, dir);
    REQUIRE(doc.contains("cells"));
    REQUIRE(doc["cells"].size() == 4);
    for (const auto& cell : doc["cells"]) {
        const double n = cell["n_spins"].get<double>();
        CHECK(cell["reference_t1_scaled"]["small_nbar_2_over_ns"].get<double>() ==
              doctest::Approx(2.0 / n));
        if (cell["nbar"].get<double>() > 0.0)
            CHECK(cell["reference_t1_scaled"]["large_nbar_1_over_2nbar"].get<double>() ==
                  doctest::Approx(1.0 / (2.0 * cell["nbar"].get<double>())));
        CHECK(cell.contains("equilibrium_polarization"));
    }
    CHECK(fs::exists(dir / "sweep_thermal.csv"));
}

TEST_CASE("runner: check-regime emits the ESR bound") {
    RunConfig cfg = parse_config(kSampleConfig);
    cfg.n_spins = 100'000'000'000;
    const fs::path dir = fresh_dir("regime");
    const nlohmann::ordered_json doc = run_command("check-regime", cfg, dir);
    CHECK(doc["regime"]["ensemble_size"]["n_spins_bound"].get<double>() ==
          doctest::Approx(1e12));
    CHECK(doc["regime"]["all_ok"].get<bool>());
    CHECK(doc["regime"]["markov_strict"]["ok"].get<bool>() == false);
    CHECK(fs::exists(dir / "check_regime_summary.json"));
}

TEST_CASE("runner: compare writes per-ratio curves plus the summary table") {
    RunConfig cfg = small_run_config();
    cfg.n_spins = 4;
    cfg.kappa_ratio_list = {0.5, 10.0};
    cfg.time_grid.count = 80;
    const fs::path dir = fresh_dir("compare");
    const nlohmann::ordered_json doc = run_command("compare", cfg, dir);
    CHECK(fs::exists(dir / "compare_summary.csv"));
    CHECK(fs::exists(dir / "compare_markov_r0.5.csv"));
    CHECK(fs::exists(dir / "compare_full_r10.csv"));
    CHECK(doc["checks"]["agreement_at_largest_ratio_ok"].get<bool>());
    CHECK(doc["checks"]["deviation_monotone_decreasing"].get<bool>());

    std::ifstream in(dir / "compare_full_r10.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "time_scaled,time_seconds,jx_norm,leakage");
}

TEST_CASE("runner: unknown command and unwritable output are validation errors") {
    const RunConfig cfg = small_run_config();
    CHECK_THROWS_AS(run_command("simulate-everything", cfg, fresh_dir("x")),
                    ValidationError);
    CHECK_THROWS_AS(run_command("fit-t1", cfg, "/proc/no_such_dir/out"),
                    ValidationError);
}

TEST_CASE("runner: sweep-size abort writes partial results and raises") {
    RunConfig cfg = small_run_config();
    cfg.n_spins_list = {20, 60, 120, 4000};
    cfg.max_dimension = 1000;
    const fs::path dir = fresh_dir("abort");
    CHECK_THROWS_AS(run_command("sweep-size", cfg, dir), NumericsError);
    CHECK(fs::exists(dir / "sweep_size.csv"));
    std::ifstream in(dir / "sweep_size.csv");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4); // header + the three completed points
}
