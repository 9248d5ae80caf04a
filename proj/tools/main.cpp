#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "sectorial/error.hpp"

using namespace sectorial;
using namespace sectorial::tools;

namespace {

constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

std::string default_out(const std::string& name) {
    const char* env = std::getenv("SECTORIAL_OUT");
    const std::string base = env && *env ? env : "sectorial_runs";
    return base + "/" + name;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sectorial: named experiments for sectorial projections and log-type boundary operators"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "print the experiment catalog");

    auto* run = app.add_subcommand("run", "run one experiment and write its artifacts");
    std::string name;
    std::vector<std::string> raw_params;
    std::string out_dir;
    std::uint64_t seed = 7;
    run->add_option("name", name, "experiment name")->required();
    run->add_option("--param,-p", raw_params, "key=value")->allow_extra_args(false);
    run->add_option("--out,-o", out_dir, "output directory (default $SECTORIAL_OUT/<name>)");
    run->add_option("--seed", seed, "seed for randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : exit_usage;
    }

    if (list->parsed()) {
        std::cout << catalog_text();
        return 0;
    }

    ExperimentSpec spec{name, {}, seed};
    for (const auto& kv : raw_params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "InvalidParameters: expected key=value, got " << kv << '\n';
            return exit_usage;
        }
        spec.parameters[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (out_dir.empty()) out_dir = default_out(name);

    ExperimentOutput out;
    try {
        out = run_experiment(spec);
    } catch (const NumericError& e) {
        std::cerr << e.what() << '\n';
        if (e.kind() == ErrorKind::UnknownExperiment || e.kind() == ErrorKind::InvalidParameters) return exit_usage;
        // numerical failure: record it and exit nonzero
        out.name = name;
        out.data["error"] = e.what();
        out.checks.push_back({0, "experiment completed", 0.0, 1.0, "true", false});
    }

    try {
        write_artifacts(spec, out, out_dir);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return exit_fail;
    }

    for (const auto& c : out.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << "[" << c.criterion << "] " << c.name << ": " << c.value << ' '
                  << c.relation << ' ' << c.threshold << '\n';
    std::cout << "artifacts: " << out_dir << '\n';
    return out.all_pass() ? 0 : exit_fail;
}
