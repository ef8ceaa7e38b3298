#include "multihess/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

fs::path scratch() {
    const auto dir = fs::temp_directory_path() / "multihess_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string write_config(const std::string& name, const std::string& text) {
    const auto path = scratch() / name;
    std::ofstream(path) << text;
    return path.string();
}

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = multihess::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kOnes = R"({"p": 1, "alphas": {"kind": "constant", "value": 1}})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("verify passes on a constant generator") {
    const auto cfg = write_config("ones.json", kOnes);
    const auto r = run({"verify", "--config", cfg, "--N", "10"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "verify");
    REQUIRE(j["checks"].size() == 7);
    CHECK(j["arithmetic"] == "double");
    for (const auto& c : j["checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("verify reports breaches with exit 4") {
    const auto cfg = write_config("p2.json", R"({"p": 2, "alphas": {"kind": "uniform", "lo": 0.5, "hi": 2, "seed": 3}})");
    const auto r = run({"verify", "--config", cfg, "--N", "30"});
    CHECK(r.code == 4);
    const auto j = nlohmann::json::parse(r.out);
    bool any_failed = false;
    for (const auto& c : j["checks"]) any_failed |= c["pass"] == false;
    CHECK(any_failed);
}

TEST_CASE("malformed JSON gives line and column") {
    const auto cfg = write_config("bad.json", "{\n  \"p\": 1,\n  \"alphas\": {\"kind\": \"constant\" \"value\": 1}\n}\n");
    const auto r = run({"spectrum", "--config", cfg, "--N", "3"});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK(r.err.find("column") != std::string::npos);
}

TEST_CASE("config errors") {
    const auto unknown = write_config("unknown.json", R"({"p": 1, "alphas": {"kind": "constant", "value": 1}, "N": 3, "colour": 1})");
    auto r = run({"spectrum", "--config", unknown});
    CHECK(r.code == 2);
    CHECK(r.err.find("colour: unknown config field") != std::string::npos);

    const auto neg = write_config("neg.json", R"({"p": 1, "alphas": {"kind": "list", "values": [1, -1, 1, 1]}, "N": 1})");
    r = run({"spectrum", "--config", neg});
    CHECK(r.code == 2);

    const auto ones = write_config("ones.json", kOnes);
    CHECK(run({"spectrum", "--config", ones}).code == 2);
    CHECK(run({"spectrum", "--config", ones, "--N", "-1"}).code == 2);
    CHECK(run({"quadrature", "--config", ones, "--nodes", "3", "--measure", "2"}).code == 2);
    CHECK(run({"chain", "--config", ones, "--N", "3", "--s", "1"}).code == 2);
    CHECK(run({"spectrum", "--config", (scratch() / "missing.json").string(), "--N", "3"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
}

TEST_CASE("precision from the environment") {
    const auto cfg = write_config("ones.json", kOnes);
    setenv("MULTIHESS_PRECISION", "quad", 1);
    auto r = run({"spectrum", "--config", cfg, "--N", "3"});
    CHECK(r.code == 2);
    CHECK(r.err.find("MULTIHESS_PRECISION") != std::string::npos);
    setenv("MULTIHESS_PRECISION", "extended", 1);
    r = run({"spectrum", "--config", cfg, "--N", "3"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["arithmetic"] == "extended");
    unsetenv("MULTIHESS_PRECISION");
}

TEST_CASE("quadrature reports its degree") {
    const auto cfg = write_config("p2ones.json", R"({"p": 2, "alphas": {"kind": "constant", "value": 1}})");
    const auto r = run({"quadrature", "--config", cfg, "--nodes", "3", "--measure", "1"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["precision"] == 4);
    CHECK(j["exact_through"].get<int>() >= 4);
}

TEST_CASE("chain output") {
    const auto cfg = write_config("chain.json", R"({"p": 2, "alphas": {"kind": "uniform", "lo": 0.5, "hi": 2, "seed": 5},
        "N": 6, "kind": "I", "steps": 4, "from": 1, "to": 3, "s": 0.5})");
    const auto r = run({"chain", "--config", cfg});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("stationary"));
    CHECK(j.contains("generating"));
}

TEST_CASE("semi-infinite export on a generic generator is a numeric failure") {
    const auto cfg = write_config("semi.json", R"({"p": 2, "alphas": {"kind": "uniform", "lo": 0.5, "hi": 2, "seed": 5}, "N": 4})");
    const auto r = run({"chain", "--config", cfg, "--semi-orders", "5,10,20", "--rows", "8"});
    CHECK(r.code == 3);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["error"] == "numeric");
    CHECK(j["kind"] == "normalization");
}

TEST_CASE("reruns are byte identical") {
    const auto cfg = write_config("sim.json", R"({"p": 1, "alphas": {"kind": "constant", "value": 1}, "N": 5, "steps": 3, "trials": 20000, "seed": 7})");
    const auto d1 = scratch() / "run1";
    const auto d2 = scratch() / "run2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    const auto a = run({"simulate", "--config", cfg, "--out", d1.string()});
    const auto b = run({"simulate", "--config", cfg, "--out", d2.string()});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(slurp(d1 / "simulate.json") == slurp(d2 / "simulate.json"));
    for (const char* cmd : {"spectrum", "chain"}) {
        const auto x = run({cmd, "--config", cfg, "--out", d1.string()});
        const auto y = run({cmd, "--config", cfg, "--out", d2.string()});
        CHECK(x.out == y.out);
    }
    CHECK(slurp(d1 / "spectrum.csv") == slurp(d2 / "spectrum.csv"));
    CHECK(slurp(d1 / "chain.csv") == slurp(d2 / "chain.csv"));
}

TEST_CASE("poly subcommand") {
    const auto cfg = write_config("ones.json", kOnes);
    const auto r = run({"poly", "--config", cfg, "--N", "3", "--x", "0,1.5"});
    REQUIRE(r.code == 0);
    CHECK(run({"poly", "--config", cfg, "--N", "3", "--x", "zz"}).code == 2);
}

}  // TEST_SUITE
