#ifndef SPLITQUAT_EXPERIMENTS_HPP
#define SPLITQUAT_EXPERIMENTS_HPP

#include <map>
#include <string>
#include <vector>

#include "splitquat/biquaternion.hpp"

namespace sq {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, std::string> parameters; // flat key/value
    std::string output_path;
    std::string format = "csv";
};

struct ReportRow {
    std::string case_id;
    Biquaternion value;
    bool has_ref = false;
    Biquaternion ref;
    std::string provenance = "none"; // closed-form | oracle | none
    double abs_error = 0.0;
    double tolerance = 0.0;
    std::string resolution;
    double epsilon = 0.0;
    double wall_ms = 0.0;
};

struct RunReport {
    ExperimentConfig config;
    std::vector<ReportRow> rows;

    bool all_within_tolerance() const;
};

std::vector<std::string> experiment_names();

/// Runs the named experiment; deterministic for a fixed config.
/// Throws ConfigError for unknown experiments or parameter keys.
RunReport run(const ExperimentConfig& config);

/// Writes the report (csv or json) plus a sidecar metadata file.
void emit(const RunReport& report, const std::string& path, const std::string& format);

/// Flat key=value config file; lines starting with '#' are comments.
ExperimentConfig parse_config_file(const std::string& path);

/// Parses a CSV emitted by emit(); round-trip oracle for tests.
std::vector<ReportRow> parse_csv(const std::string& path);

} // namespace sq

#endif
