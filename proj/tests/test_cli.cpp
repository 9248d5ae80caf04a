#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "experiments.hpp"
#include "sectorial/error.hpp"

using namespace sectorial;
using namespace sectorial::tools;

namespace {

int exit_code(const std::string& args) {
    const std::string cmd = std::string(SECTORIAL_CLI) + " " + args + " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ErrorKind kind_of(const ExperimentSpec& spec) {
    try {
        run_experiment(spec);
    } catch (const NumericError& e) {
        return e.kind();
    }
    return ErrorKind::BadParameters;
}

} // namespace

TEST_CASE("catalog is sorted and anchored") {
    const auto& c = catalog();
    REQUIRE(c.size() == 9);
    for (std::size_t k = 1; k < c.size(); ++k) CHECK(c[k - 1].name < c[k].name);
    const std::string text = catalog_text();
    CHECK(text.find("dirac-divergence → Dirac example") != std::string::npos);
    CHECK(text.find("block-projection → block Dirichlet example") != std::string::npos);
    CHECK(text == catalog_text());

    // every criterion 1..10 is covered
    std::map<int, int> count;
    for (const auto& e : c)
        for (int k : e.criteria) ++count[k];
    for (int k = 1; k <= 10; ++k) CHECK(count[k] >= 1);
}

TEST_CASE("unknown experiment and invalid parameters") {
    CHECK(kind_of({"no-such-thing", {}, 7}) == ErrorKind::UnknownExperiment);
    CHECK(kind_of({"dirac-divergence", {{"a", "x"}}, 7}) == ErrorKind::InvalidParameters);
    CHECK(kind_of({"dirac-divergence", {{"colour", "1"}}, 7}) == ErrorKind::InvalidParameters);
    CHECK(kind_of({"zeta-interval", {{"N", "1.5"}}, 7}) == ErrorKind::InvalidParameters);
    CHECK(kind_of({"block-projection", {{"n_s", "8"}, {"n_t", "8"}}, 7}) == ErrorKind::InvalidParameters);
}

TEST_CASE("results are deterministic for a fixed seed") {
    const ExperimentSpec spec{"keyhole-identity", {{"matrices", "3"}, {"max_dim", "6"}}, 11};
    const auto a = run_experiment(spec).results_json(spec).dump();
    const auto b = run_experiment(spec).results_json(spec).dump();
    CHECK(a == b);
    const ExperimentSpec other{"keyhole-identity", {{"matrices", "3"}, {"max_dim", "6"}}, 12};
    CHECK(run_experiment(other).results_json(other).dump() != a);
}

TEST_CASE("zeta-interval example run") {
    const ExperimentSpec spec{"zeta-interval", {{"N", "1"}, {"decades", "3"}}, 7};
    const auto out = run_experiment(spec);
    CHECK(out.all_pass());
    const auto j = out.results_json(spec);
    CHECK(j["schema_version"] == schema_version);
    const double c1 = j["data"]["fits"][0]["coefficients"][1][0];
    CHECK(std::abs(c1 + 0.5) <= 1e-3);
}

TEST_CASE("binary: exit codes and artifacts") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "sectorial_cli_test";
    fs::remove_all(dir);
    CHECK(exit_code("list") == 0);
    CHECK(exit_code("run unknown-name") == 2);
    CHECK(exit_code("run dirac-divergence --param a") == 2);
    CHECK(exit_code("run dirac-divergence --param a=1 --out " + (dir / "dd").string()) == 0);
    CHECK(fs::exists(dir / "dd" / "results.json"));
    CHECK(fs::exists(dir / "dd" / "probe.csv"));
    CHECK(slurp(dir / "dd" / "probe.svg").find("<svg") == 0);
    CHECK(exit_code("run laplace-glog --param xi=0 --param grid=256 --out " + (dir / "lg").string()) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "lg" / "results.json"));
    CHECK(j["all_pass"] == true);
    CHECK(j["data"]["kernel_identity"][0]["max_deviation"].get<double>() <= 1e-8);

    // same inputs twice: byte-identical results.json
    CHECK(exit_code("run dirac-projection --seed 5 --out " + (dir / "p1").string()) == 0);
    CHECK(exit_code("run dirac-projection --seed 5 --out " + (dir / "p2").string()) == 0);
    CHECK(slurp(dir / "p1" / "results.json") == slurp(dir / "p2" / "results.json"));

    // environment override of the default output directory
    const std::string env_cmd = "SECTORIAL_OUT=" + (dir / "env").string() + " " + SECTORIAL_CLI +
                                " run dirac-divergence >/dev/null 2>&1";
    CHECK(std::system(env_cmd.c_str()) == 0);
    CHECK(fs::exists(dir / "env" / "dirac-divergence" / "results.json"));
    fs::remove_all(dir);
}
