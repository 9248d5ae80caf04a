#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace sectorial::tools {

struct ExperimentSpec {
    std::string name;
    std::map<std::string, std::string> parameters;
    std::uint64_t seed = 7;
};

struct Check {
    int criterion = 0;
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;   // "<=", ">=", "==" or "true"
    bool pass = false;
};

struct ExperimentOutput {
    std::string name;
    nlohmann::json data;
    std::vector<Check> checks;
    std::map<std::string, std::string> files;   // extra artifacts: file name -> content

    bool all_pass() const;
    nlohmann::json results_json(const ExperimentSpec& spec) const;
};

struct CatalogEntry {
    std::string name;
    std::string anchor;
    std::string parameters;
    std::vector<int> criteria;
};

/// Sorted by name.
const std::vector<CatalogEntry>& catalog();
std::string catalog_text();

/// Throws NumericError with UnknownExperiment or InvalidParameters before any work.
ExperimentOutput run_experiment(const ExperimentSpec& spec);

/// results.json plus the extra files into `dir` (created if missing).
void write_artifacts(const ExperimentSpec& spec, const ExperimentOutput& out, const std::string& dir);

using Series = std::vector<std::pair<double, double>>;

std::string svg_line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<std::pair<std::string, Series>>& series);

inline constexpr int schema_version = 1;

} // namespace sectorial::tools
