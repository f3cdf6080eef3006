#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "gqmap");
    std::ostringstream out, err;
    const int code = gqi::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("map from entropic parameters") {
    const Outcome o = run({"map", "--s", "2", "--d", "0", "--g", "2", "--lambda", "1"});
    REQUIRE(o.code == 0);
    const auto j = nlohmann::json::parse(o.out);
    CHECK(j["diagnostics"]["qubit_negativity"].get<double>() == doctest::Approx(0.10355339059327379).epsilon(1e-12));
    CHECK(j["diagnostics"]["qubit_entropy_global"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(j["input"]["c_plus"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(j["params"]["lambda"] == 1.0);
    CHECK(j["steady_state"][3][3][0].get<double>() == doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("map of the vacuum") {
    const Outcome o = run({"map", "--a", "1", "--b", "1", "--cplus", "0", "--cminus", "0"});
    REQUIRE(o.code == 0);
    const auto j = nlohmann::json::parse(o.out);
    CHECK(j["steady_state"][3][3][0].get<double>() == doctest::Approx(1.0));
    CHECK(j["steady_state"][0][0][0].get<double>() == doctest::Approx(0.0));
    CHECK(j["diagnostics"]["qubit_negativity"] == 0.0);
    CHECK(j["params"]["g"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("usage and domain errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"map", "--a", "1"}).code == 2);
    CHECK(run({"map", "--a", "1", "--s", "2"}).code == 2);
    const Outcome bad = run({"map", "--a", "1", "--b", "1", "--cplus", "0.5", "--cminus", "0"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("error") != std::string::npos);
    CHECK(run({"map", "--s", "2", "--d", "0", "--g", "9", "--lambda", "0"}).code == 2);
    CHECK(run({"sample", "--kind", "nope", "--out", "x.csv"}).code == 2);
    CHECK(run({"boundary", "--curve", "nope"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("evolve writes a trajectory") {
    const Outcome o = run({"evolve", "--s", "2", "--d", "0", "--g", "2", "--lambda", "1", "--tau-max", "30", "--steps",
                           "4", "--initial", "11"});
    REQUIRE(o.code == 0);
    std::istringstream is(o.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(is, line)) lines.push_back(line);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0].rfind("tau,", 0) == 0);
    CHECK(lines[1].rfind("0,", 0) == 0);
    CHECK(run({"evolve", "--s", "2", "--d", "0", "--g", "2", "--lambda", "1", "--initial", "up"}).code == 2);
}

TEST_CASE("sample, boundary and verify") {
    const auto dir = std::filesystem::temp_directory_path() / "gqi_test_cli";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "s.csv").string();

    const Outcome s = run({"sample", "--kind", "fig1b_negativity_scatter", "--n", "50", "--seed", "7", "--out", path});
    REQUIRE(s.code == 0);
    std::ifstream side(path + ".json");
    REQUIRE(side);
    const auto j = nlohmann::json::parse(side);
    CHECK(j["seed"] == 7);
    CHECK(j["n_samples"] == 50);
    CHECK(j["kind"] == "fig1b_negativity_scatter");
    std::ifstream csv(path);
    long lines = 0;
    for (std::string l; std::getline(csv, l);) ++lines;
    CHECK(lines == 51);

    const Outcome b = run({"boundary", "--curve", "mems_werner", "--points", "5"});
    REQUIRE(b.code == 0);
    CHECK(b.out.rfind("# kind: mems_werner\n", 0) == 0);

    const Outcome v = run({"verify", "--samples", "100"});
    CHECK(v.code == 0);
    CHECK(nlohmann::json::parse(v.out)["passed"] == true);
    std::filesystem::remove_all(dir);
}
