#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hdwalk/errors.hpp"
#include "hdwalk/harness.hpp"
#include "json.hpp"

using namespace hdwalk;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("hdwalk_test_" + name)).string();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HDWALK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

ExperimentConfig small_clt() {
    ExperimentConfig c;
    c.experiment = ExperimentKind::CltModel1;
    c.n = 40;
    c.d = 40;
    c.replicates = 300;
    c.seed = 7;
    return c;
}

}  // namespace

TEST_SUITE("harness-cli") {

TEST_CASE("config parsing and overrides") {
    const ExperimentConfig c = parse_config_text(
        "# comment\nexperiment = clt_model2\nlaw = twopoint:0.5\nn = 100\nd = 10000 # trailing\nreps=50\nseed=9\n"
        "ladder = 256x256, 1024x1024\nformat = json\n");
    CHECK(c.experiment == ExperimentKind::CltModel2);
    CHECK(c.law == "twopoint:0.5");
    CHECK(c.n == 100);
    CHECK(c.d == 10000);
    CHECK(c.replicates == 50);
    CHECK(c.seed == 9);
    CHECK(c.format == OutputFormat::Json);
    CHECK(c.ladder == std::vector<LadderRung>{{256, 256}, {1024, 1024}});
    ExperimentConfig o = c;
    o.set("n", "7");
    CHECK(o.n == 7);

    CHECK_THROWS_AS(parse_config_text("bogus = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("n = -3"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("alpha = x"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("no equals sign"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("ladder = 10by20"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/cfg"), IoError);
}

TEST_CASE("regime table is a one-to-one map") {
    const auto& table = regime_table();
    CHECK(table.size() == 17);
    std::set<std::pair<int, int>> keys;
    for (const auto& e : table) keys.insert({static_cast<int>(e.experiment), static_cast<int>(e.regime)});
    CHECK(keys.size() == table.size());
    CHECK(regime_entry(ExperimentKind::CltModel2, Regime::C).limit == "N(0,2gamma+Var R^2)");
    CHECK_THROWS_AS(regime_entry(ExperimentKind::CltModel1, Regime::A), ConfigError);
}

TEST_CASE("regime classification") {
    CHECK(classify_ratio(100, 10000) == Regime::A);
    CHECK(classify_ratio(10000, 100) == Regime::B);
    CHECK(classify_ratio(2000, 2000) == Regime::C);
    CHECK(classify_stable(ExperimentKind::StableModel1, 1.5, 20, 40000) == Regime::B);
    CHECK(classify_stable(ExperimentKind::StableModel2, 1.5, 200, 100) == Regime::B);
    CHECK(classify_stable(ExperimentKind::StableModel2, 1.5, 10000, 100) == Regime::A);
    CHECK(classify_stable(ExperimentKind::StableModel2, 1.5, 1000, 100) == Regime::Critical);
    CHECK(classify_simple_walk(10, 1000000) == Regime::A);
    CHECK(classify_simple_walk(100, 10000) == Regime::B);
    CHECK(classify_simple_walk(10000, 100) == Regime::C);
}

TEST_CASE("invalid regime combinations name the constraint") {
    ExperimentConfig c;
    c.experiment = ExperimentKind::PoissonSimpleRw;
    c.n = 500;
    c.d = 10000;
    c.c = 1.0;
    c.replicates = 10;
    CHECK_THROWS_WITH_AS(run_experiment(c), doctest::Contains("n ~ c sqrt(d)"), ConfigError);

    ExperimentConfig g;
    g.experiment = ExperimentKind::CltModel2;
    g.n = 100;
    g.d = 100;
    g.gamma = 2.0;
    CHECK_THROWS_AS(run_experiment(g), ConfigError);

    ExperimentConfig p;
    p.experiment = ExperimentKind::CriticalConjectureProbe;
    p.n = 10000;
    p.d = 100;
    CHECK_THROWS_AS(run_experiment(p), ConfigError);

    ExperimentConfig m;
    m.experiment = ExperimentKind::CltModel1;
    m.model = "axis";
    CHECK_THROWS_AS(run_experiment(m), ConfigError);

    ExperimentConfig heavy = small_clt();
    heavy.law = "pareto:1.5";
    CHECK_THROWS_AS(run_experiment(heavy), ConfigError);
}

TEST_CASE("empty walk experiment") {
    ExperimentConfig c = small_clt();
    c.n = 0;
    c.replicates = 1;
    const Report r = run_experiment(c);
    CHECK(r.verdicts.empty());
    REQUIRE(r.rows.size() == 1);
    for (std::size_t k = 1; k < r.rows[0].size(); ++k) CHECK(r.rows[0][k] == 0.0);
}

TEST_CASE("reports do not depend on the thread count") {
    for (ExperimentKind kind : {ExperimentKind::CltModel1, ExperimentKind::DistortionLadder}) {
        ExperimentConfig c = small_clt();
        c.experiment = kind;
        if (kind == ExperimentKind::DistortionLadder) {
            c.ladder = {{16, 16}, {64, 64}};
            c.replicates = 16;
        }
        c.threads = 1;
        const Report one = run_experiment(c);
        c.threads = 8;
        const Report eight = run_experiment(c);
        for (auto f : {OutputFormat::Csv, OutputFormat::Json})
            CHECK(render_report(one, f, false) == render_report(eight, f, false));
        CHECK(render_report(one, OutputFormat::Json, true) != render_report(one, OutputFormat::Json, false));
    }
}

TEST_CASE("clt experiment attaches a KS verdict") {
    const Report r = run_experiment(small_clt());
    REQUIRE(r.verdicts.size() == 1);
    CHECK(r.verdicts[0].name == "ks_normal");
    CHECK(r.verdicts[0].sample_size == 300);
    CHECK(r.qq.size() == 200);
    CHECK(!r.histogram.counts.empty());
}

TEST_CASE("JSON round trip is exact") {
    ExperimentConfig c = small_clt();
    c.format = OutputFormat::Json;
    const Report r = run_experiment(c);
    const std::string path = temp_path("roundtrip.json");
    emit_report(r, OutputFormat::Json, path);
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    REQUIRE(j["rows"].size() == r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        for (std::size_t k = 0; k < r.columns.size(); ++k) REQUIRE(j["rows"][i][k].get<double>() == r.rows[i][k]);
    for (std::size_t a = 0; a < r.aggregates.size(); ++a) {
        CHECK(j["aggregates"][a]["mean"].get<double>() == r.aggregates[a].summary.mean);
        CHECK(j["aggregates"][a]["variance"].get<double>() == r.aggregates[a].summary.variance);
    }
    CHECK(j["verdicts"][0]["statistic"].get<double>() == r.verdicts[0].statistic);
    for (const char* key : {"config", "aggregates", "verdicts", "histogram", "qq"}) CHECK(j.contains(key));
    std::filesystem::remove(path);
}

TEST_CASE("CSV row count and exact numbers") {
    const Report r = run_experiment(small_clt());
    const std::string text = render_report(r, OutputFormat::Csv, true);
    std::istringstream in(text);
    std::string line;
    std::size_t header = 0, data = 0, footer = 0;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            ++header;
            first = false;
        } else if (line.rfind("#", 0) == 0) {
            ++footer;
        } else {
            if (data == 5) {
                std::istringstream cells(line);
                std::string cell;
                std::size_t k = 0;
                while (std::getline(cells, cell, ',')) CHECK(std::strtod(cell.c_str(), nullptr) == r.rows[5][k++]);
            }
            ++data;
        }
    }
    CHECK(header == 1);
    CHECK(data == r.rows.size());
    CHECK(header + data + footer == r.rows.size() + 1 + footer);
    CHECK(footer > 0);
}

TEST_CASE("empty verdict list is still a valid document") {
    ExperimentConfig c = small_clt();
    c.experiment = ExperimentKind::Simulate;
    c.replicates = 3;
    const Report r = run_experiment(c);
    CHECK(r.verdicts.empty());
    const auto j = nlohmann::json::parse(render_report(r, OutputFormat::Json));
    CHECK(j["verdicts"].is_array());
    CHECK(j["verdicts"].empty());
}

TEST_CASE("I/O errors carry the path") {
    const Report r = run_experiment(small_clt());
    CHECK_THROWS_WITH_AS(emit_report(r, OutputFormat::Csv, "/nonexistent/dir/out.csv"),
                         doctest::Contains("/nonexistent/dir/out.csv"), IoError);
}

TEST_CASE("conjecture probe reports without a verdict") {
    ExperimentConfig c;
    c.experiment = ExperimentKind::CriticalConjectureProbe;
    c.n = 1000;
    c.d = 100;
    c.replicates = 50;
    const Report r = run_experiment(c);
    CHECK(r.verdicts.empty());
    CHECK(std::isfinite(r.scalar("ks_vs_convolution")));
    CHECK(r.scalar("gamma") > 0.0);
}

TEST_CASE("spiral check and conditions experiments") {
    ExperimentConfig s;
    s.experiment = ExperimentKind::SpiralCheck;
    s.grid = 10;
    const Report rs = run_experiment(s);
    CHECK(rs.verdicts.size() == 3);
    CHECK(rs.all_pass());

    ExperimentConfig c;
    c.experiment = ExperimentKind::Conditions;
    c.d = 32;
    c.replicates = 20000;
    const Report rc = run_experiment(c);
    CHECK(rc.verdicts.size() == 4);
    CHECK(rc.all_pass());
}

TEST_CASE("command-line exit codes") {
    const std::string out = temp_path("cli.csv");
    CHECK(run_cli("clt --n 40 --d 40 --reps 200 --seed 3 --out " + out) == 0);
    CHECK(std::filesystem::exists(out));
    CHECK(run_cli("clt --n 40 --d 40 --reps 200 --model bogus") == 2);
    CHECK(run_cli("poisson --n 500 --d 10000 --c 1 --reps 10") == 2);
    CHECK(run_cli("fwlln --ladder 64x64,128x128 --reps 8 --fixture 0 --out " + out) == 3);
    CHECK(run_cli("--not-a-flag") == 2);

    const std::string cfg = temp_path("cli.cfg");
    std::ofstream(cfg) << "experiment = clt_model1\nn = 40\nd = 40\nreps = 200\nformat = json\n";
    CHECK(run_cli("--config " + cfg + " --out " + out) == 0);
    std::ifstream in(out);
    const auto j = nlohmann::json::parse(in);
    CHECK(j["config"]["experiment"] == "clt_model1");
    CHECK(run_cli("--config " + cfg + " --n 1 --reps 1 --out " + out) == 0);
    std::filesystem::remove(out);
    std::filesystem::remove(cfg);
}

}
