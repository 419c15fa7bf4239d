#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "qng/config.hpp"
#include "qng/errors.hpp"
#include "qng/estimation.hpp"
#include "qng/homodyne.hpp"
#include "qng/report.hpp"

using namespace qng;

namespace {

std::string tmpPath(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("config round trip and parsing") {
    const std::string path = tmpPath("qng_test_cfg.conf");
    config::KeyValues kv{{"Vx", 0.364}, {"Vp", 0.705}, {"T", 0.923}, {"Q", 0.625}};
    config::writeConfig(kv, path);
    CHECK(config::readConfig(path) == kv);

    {
        std::ofstream out(path);
        out << "# comment line\n"
            << "Vx = 0.364   # trailing comment\n"
            << "\n"
            << "  Vp=0.705\n"
            << "R = 0.077\n";
    }
    const auto parsed = config::readConfig(path);
    CHECK(parsed.at("Vx") == 0.364);
    CHECK(parsed.at("Vp") == 0.705);
    const auto params = config::modelParamsFrom(parsed);
    CHECK(params.T == doctest::Approx(0.923).epsilon(1e-12));

    {
        std::ofstream out(path);
        out << "Vx = 0.364\nbroken line\n";
    }
    CHECK_THROWS_WITH_AS(config::readConfig(path), doctest::Contains(":2:"), ParseError);

    {
        std::ofstream out(path);
        out << "Vx = abc\n";
    }
    CHECK_THROWS_AS(config::readConfig(path), ParseError);

    {
        std::ofstream out(path);
        out << "T = 0.9\nR = 0.1\n";
    }
    CHECK_THROWS_AS(config::modelParamsFrom(config::readConfig(path)), ParseError);

    CHECK_THROWS_AS(config::readConfig(tmpPath("qng_cfg_missing.conf")), IoError);
    std::filesystem::remove(path);
}

TEST_CASE("fit spec from config") {
    config::KeyValues kv{{"R", 0.05}, {"etaH", 0.9}, {"eta", 0.1}, {"Vp_max", 3.0}};
    const auto spec = config::fitSpecFrom(kv);
    CHECK(spec.R == 0.05);
    CHECK(spec.etaH == 0.9);
    CHECK(spec.eta == 0.1);
    CHECK(spec.bounds.VpHi == 3.0);
    CHECK(spec.bounds.QLo == 0.0);
}

TEST_CASE("report envelope and JSON round trip") {
    report::json cfg;
    cfg["seed"] = 7;
    report::json results;
    results["value"] = 0.123456789012345;
    const report::json env = report::envelope(cfg, results);
    CHECK(env.at("spec_version").get<std::string>() == report::kVersion);
    CHECK(env.at("config").at("seed") == 7);

    const std::string path = tmpPath("qng_test_report.json");
    report::writeJson(env, path);
    const report::json back = report::readJson(path);
    CHECK(back.at("spec_version") == env.at("spec_version"));
    CHECK(back.at("results").at("value").get<double>() == results.at("value").get<double>());
    std::filesystem::remove(path);

    CHECK_THROWS_AS(report::writeJson(env, "/nonexistent_dir_xyz/out.json"), IoError);
    CHECK_THROWS_AS(report::readJson(tmpPath("qng_absent.json")), IoError);
}

TEST_CASE("witness report JSON carries both bounds") {
    witness::WitnessReport rep;
    rep.params = {0.5, 0.15};
    rep.W = 0.4;
    rep.WG = 0.39;
    rep.Wcl = 0.35;
    const auto j = report::toJson(rep);
    CHECK(j.contains("WG"));
    CHECK(j.contains("Wcl"));
    CHECK(j.contains("negativity_flag"));
    CHECK(j.at("params").at("s").get<double>() == 0.15);
}

TEST_CASE("CSV output uses 12 significant digits") {
    const std::string path = tmpPath("qng_test_csv.csv");
    report::writeCsv(path, "a,b", {{1.0 / 3.0, 2.0 / 3.0}});
    const std::string content = slurp(path);
    CHECK(content == "a,b\n0.333333333333,0.666666666667\n");
    std::filesystem::remove(path);
}

TEST_CASE("pipeline determinism: identical bytes for identical seeds") {
    const auto params = testutil::friendlyParams();
    const auto st = model::heraldedState(params);
    const std::vector<double> grid = {0.0, 0.1, 0.2};

    auto runOnce = [&](const char* dataName, const char* jsonName) {
        const auto ds = homodyne::generateDataset(st, 12, 150, 99);
        const std::string dataPath = tmpPath(dataName);
        homodyne::writeDataset(ds, dataPath);
        const auto back = homodyne::readDataset(dataPath);
        const auto reports = est::scanWitness(back, grid);
        report::json results = report::json::array();
        for (const auto& rep : reports) results.push_back(report::toJson(rep));
        report::json cfg;
        cfg["seed"] = 99;
        const std::string jsonPath = tmpPath(jsonName);
        report::writeJson(report::envelope(cfg, results), jsonPath);
        return std::pair{slurp(dataPath), slurp(jsonPath)};
    };

    const auto [data1, json1] = runOnce("qng_det_a.csv", "qng_det_a.json");
    const auto [data2, json2] = runOnce("qng_det_b.csv", "qng_det_b.json");
    CHECK(data1 == data2);
    CHECK(json1 == json2);
    CHECK(!json1.empty());
    for (const char* n : {"qng_det_a.csv", "qng_det_a.json", "qng_det_b.csv", "qng_det_b.json"}) {
        std::filesystem::remove(tmpPath(n));
    }
}
