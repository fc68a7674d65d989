#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "crossflow/config.hpp"

using namespace crossflow;

namespace {

std::string write_temp(const char* stem, const std::string& text) {
    const std::string path = (std::filesystem::temp_directory_path() / stem).string();
    std::ofstream os(path);
    os << text;
    return path;
}

}  // namespace

TEST_CASE("mode names round-trip") {
    for (const char* name : {"E", "EE", "EEC", "signal"}) {
        CHECK(mode_name(parse_mode(name)) == name);
    }
    CHECK(parse_mode("E") == Mode::Rules);
    CHECK(parse_mode("EE") == Mode::RulesEdge);
    CHECK(parse_mode("EEC") == Mode::RulesEdgeCloud);
    CHECK(parse_mode("signal") == Mode::Signal);
    CHECK_THROWS_AS(parse_mode("bogus"), std::invalid_argument);
}

TEST_CASE("validation catches bad values") {
    ScenarioConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    ScenarioConfig bad = cfg;
    bad.rows = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.density = -5.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.steps = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("networked modes require their checkpoints") {
    ScenarioConfig cfg;
    cfg.mode = Mode::RulesEdge;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.checkpoint = "edge.ckpt";
    CHECK_NOTHROW(cfg.validate());

    cfg.mode = Mode::RulesEdgeCloud;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.cloud_checkpoint = "cloud.ckpt";
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config files parse key=value with comments") {
    const std::string path = write_temp("crossflow_cfg.txt",
                                        "# scenario\n"
                                        "rows=3\n"
                                        "cols = 3\n"
                                        "\n"
                                        "density=1500\n"
                                        "mode=EE\n"
                                        "checkpoint=weights.ckpt\n"
                                        "seed=17\n");
    ScenarioConfig cfg;
    apply_config_file(cfg, path);
    CHECK(cfg.rows == 3);
    CHECK(cfg.cols == 3);
    CHECK(cfg.density == 1500.0);
    CHECK(cfg.mode == Mode::RulesEdge);
    CHECK(cfg.checkpoint == "weights.ckpt");
    CHECK(cfg.seed == 17);
    std::remove(path.c_str());
}

TEST_CASE("unknown keys are rejected") {
    ScenarioConfig cfg;
    CHECK_THROWS_AS(apply_config_pairs(cfg, {{"turbo", "1"}}), std::invalid_argument);
    const std::string path = write_temp("crossflow_badcfg.txt", "rows=1\nwat=2\n");
    CHECK_THROWS_AS(apply_config_file(cfg, path), std::invalid_argument);
    std::remove(path.c_str());
}

TEST_CASE("missing config file is an error") {
    ScenarioConfig cfg;
    CHECK_THROWS(apply_config_file(cfg, "/nonexistent/crossflow.cfg"));
}

TEST_CASE("canonical text and hash are stable and value-sensitive") {
    ScenarioConfig a, b;
    CHECK(a.canonical() == b.canonical());
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);

    b.density = 2100.0;
    CHECK(a.canonical() != b.canonical());
    CHECK(a.hash() != b.hash());

    b = a;
    b.seed = 2;
    CHECK(a.hash() != b.hash());
}

TEST_CASE("cli-style overrides land on top of file values") {
    const std::string path = write_temp("crossflow_base.txt", "density=300\nsteps=1000\n");
    ScenarioConfig cfg;
    apply_config_file(cfg, path);
    apply_config_pairs(cfg, {{"density", "900"}});
    CHECK(cfg.density == 900.0);
    CHECK(cfg.steps == 1000);
    std::remove(path.c_str());
}
