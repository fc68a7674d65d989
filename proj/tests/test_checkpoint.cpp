#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

#include "crossflow/checkpoint.hpp"
#include "crossflow/ddpg.hpp"

using namespace crossflow;

namespace {

std::string temp_path(const char* stem) {
    return (std::filesystem::temp_directory_path() / stem).string();
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

TEST_CASE("checkpoint round-trips bit-exactly") {
    CheckpointMap m;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    m["alpha"] = {{3, 4}, std::vector<double>(12)};
    m["beta/weights"] = {{2, 2, 5}, std::vector<double>(20)};
    m["gamma"] = {{7}, std::vector<double>(7)};
    for (auto& [name, seg] : m) {
        for (double& v : seg.data) v = u(rng);
    }
    // include values that stress the codec
    m["alpha"].data[0] = 0.1 + 0.2;  // not exactly 0.3
    m["alpha"].data[1] = -0.0;
    m["alpha"].data[2] = 1e-308;

    const std::string path = temp_path("ckpt_roundtrip.bin");
    write_checkpoint(path, m);
    const CheckpointMap back = read_checkpoint(path);

    REQUIRE(back.size() == m.size());
    for (const auto& [name, seg] : m) {
        REQUIRE(back.count(name) == 1);
        const CheckpointSegment& b = back.at(name);
        CHECK(b.shape == seg.shape);
        REQUIRE(b.data.size() == seg.data.size());
        CHECK(std::memcmp(b.data.data(), seg.data.data(),
                          seg.data.size() * sizeof(double)) == 0);
    }
    std::remove(path.c_str());
}

TEST_CASE("re-writing the same map is byte-identical") {
    CheckpointMap m;
    m["x"] = {{4}, {1.5, -2.5, 3.25, 0.0}};
    const std::string p1 = temp_path("ckpt_a.bin");
    const std::string p2 = temp_path("ckpt_b.bin");
    write_checkpoint(p1, m);
    write_checkpoint(p2, m);
    CHECK(slurp(p1) == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("corrupt magic is rejected") {
    const std::string path = temp_path("ckpt_bad.bin");
    {
        std::ofstream os(path, std::ios::binary);
        os << "NOTACKPTJUNKJUNK";
    }
    CHECK_THROWS_AS(read_checkpoint(path), std::runtime_error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_checkpoint(temp_path("ckpt_missing.bin")), std::runtime_error);
}

TEST_CASE("agent snapshot covers eval and target networks") {
    Hyperparams hp;
    DdpgAgent agent(Tier::Edge, hp, 3);
    const CheckpointMap m = snapshot_agent(agent);
    size_t actor = 0, critic = 0, t_actor = 0, t_critic = 0;
    for (const auto& [name, seg] : m) {
        if (name.rfind("actor.", 0) == 0) ++actor;
        if (name.rfind("critic.", 0) == 0) ++critic;
        if (name.rfind("target_actor.", 0) == 0) ++t_actor;
        if (name.rfind("target_critic.", 0) == 0) ++t_critic;
    }
    CHECK(actor > 0);
    CHECK(critic > 0);
    CHECK(t_actor == actor);
    CHECK(t_critic == critic);
}

TEST_CASE("agent save/load restores parameters bit-exactly") {
    Hyperparams hp;
    DdpgAgent source(Tier::Edge, hp, 4);
    DdpgAgent dest(Tier::Edge, hp, 999);  // different initialization
    REQUIRE(source.actor().params() != dest.actor().params());

    const std::string path = temp_path("ckpt_agent.bin");
    save_agent(path, source);
    load_agent(path, dest);
    CHECK(dest.actor().params() == source.actor().params());
    CHECK(dest.critic().params() == source.critic().params());
    CHECK(dest.target_actor().params() == source.target_actor().params());
    CHECK(dest.target_critic().params() == source.target_critic().params());

    // second round trip is byte-identical on disk
    const std::string path2 = temp_path("ckpt_agent2.bin");
    save_agent(path2, dest);
    CHECK(slurp(path) == slurp(path2));
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("restoring a mismatched tier is rejected") {
    Hyperparams hp;
    DdpgAgent edge(Tier::Edge, hp, 5);
    DdpgAgent cloud(Tier::Cloud, hp, 6);
    const CheckpointMap m = snapshot_agent(edge);
    CHECK_THROWS(restore_agent(cloud, m));
}
