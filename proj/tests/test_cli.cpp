#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "revmix/errors.hpp"
#include "revmix/runner.hpp"

using namespace revmix;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("block runner emits its report set and passes") {
    fs::path dir = fresh_dir("revmix-test-block");
    std::ostringstream log;
    auto res = run_block(1.0 / 9.0, 1.0 / 9.0, 100, dir.string(), 3, 5000, log);
    CHECK(res.ok);
    for (const char* f : {"transition.csv", "joint.csv", "beta.csv", "covariance.csv",
                          "variance.csv", "wlaw.csv"})
        CHECK(fs::exists(dir / f));
}

TEST_CASE("block runner accepts a single-lag table") {
    fs::path dir = fresh_dir("revmix-test-block1");
    std::ostringstream log;
    auto res = run_block(0.05, 0.05, 1, dir.string(), 3, 0, log);
    CHECK(res.ok);
    CHECK(!fs::exists(dir / "wlaw.csv"));
    std::string beta = slurp(dir / "beta.csv");
    CHECK(std::count(beta.begin(), beta.end(), '\n') == 2);  // header + one row
}

TEST_CASE("out-of-range block parameters are usage errors") {
    std::ostringstream log;
    CHECK_THROWS_AS(run_block(0.2, 0.1, 10, "/tmp/revmix-unused", 1, 0, log),
                    InvalidParams);
}

TEST_CASE("experiment config json round trip and overrides") {
    fs::path dir = fresh_dir("revmix-test-config");
    {
        std::ofstream os(dir / "config.json");
        os << R"({"rate_source":"stretched-exp","alpha":0.5,"horizon":2000,)"
           << R"("master_seed":9,"trials":12000,"t_max":4.0,"out_dir":")"
           << (dir / "out").string() << R"("})";
    }
    ExperimentConfig cfg = ExperimentConfig::from_json_file((dir / "config.json").string());
    CHECK(cfg.horizon == 2000);
    CHECK(cfg.master_seed == 9);
    CHECK(cfg.trials == 12000);
    CHECK(cfg.t_max == 4.0);
    cfg.validate();

    ExperimentConfig bad = cfg;
    bad.rate_source = "nope";
    CHECK_THROWS_AS(bad.validate(), InvalidParams);
}

TEST_CASE("full run is deterministic byte for byte") {
    ExperimentConfig cfg;
    cfg.rate_source = "stretched-exp";
    cfg.alpha = 0.5;
    cfg.horizon = 2000;
    cfg.trials = 10000;
    cfg.master_seed = 12345;

    fs::path a = fresh_dir("revmix-test-full-a");
    fs::path b = fresh_dir("revmix-test-full-b");
    std::ostringstream log;
    cfg.out_dir = a.string();
    auto ra = run_full(cfg, log);
    cfg.out_dir = b.string();
    auto rb = run_full(cfg, log);
    CHECK(ra.ok == rb.ok);
    CHECK(ra.achieved_levels == rb.achieved_levels);

    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        if (entry.path().extension() != ".csv") continue;
        fs::path other = b / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
        ++compared;
    }
    CHECK(compared >= 6);
}

TEST_CASE("full run surfaces an unusable horizon") {
    ExperimentConfig cfg;
    cfg.rate_source = "stretched-exp";
    cfg.alpha = 0.5;
    cfg.horizon = 10;  // no tangent qualifies this close in
    cfg.trials = 10000;
    cfg.out_dir = fresh_dir("revmix-test-short").string();
    std::ostringstream log;
    auto res = run_full(cfg, log);
    CHECK(!res.ok);
    CHECK(res.achieved_levels == 0);
    CHECK(!res.notes.empty());
}
