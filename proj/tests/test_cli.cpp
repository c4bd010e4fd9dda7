#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "splitquat/errors.hpp"
#include "splitquat/experiments.hpp"

using namespace sq;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

} // namespace

TEST_CASE("config files parse into experiment, parameters, and output settings") {
    const std::string path = temp_path("sq_cfg_basic.cfg");
    write_file(path,
               "# a comment line\n"
               "experiment = restriction-lemma\n"
               "samples = 25\n"
               "\n"
               "output_path = /tmp/out.csv\n"
               "format = json\n");
    const ExperimentConfig cfg = parse_config_file(path);
    CHECK(cfg.experiment == "restriction-lemma");
    CHECK(cfg.format == "json");
    CHECK(cfg.output_path == "/tmp/out.csv");
    CHECK(cfg.parameters.at("samples") == "25");
    CHECK(cfg.parameters.size() == 1);
    std::remove(path.c_str());
}

TEST_CASE("unknown experiments are rejected") {
    ExperimentConfig cfg;
    cfg.experiment = "definitely-not-an-experiment";
    CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("unknown parameter keys are rejected") {
    ExperimentConfig cfg;
    cfg.experiment = "algebra-identities";
    cfg.parameters["not_a_real_key"] = "1";
    CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("malformed numeric parameters are rejected") {
    ExperimentConfig cfg;
    cfg.experiment = "algebra-identities";
    cfg.parameters["samples"] = "twelve";
    CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("every advertised experiment name is runnable in principle") {
    const auto names = experiment_names();
    CHECK(names.size() == 11);
    for (const auto& n : names) CHECK(!n.empty());
    CHECK(std::filesystem::path(names.front()).string() == names.front());
}

TEST_CASE("csv round-trip preserves every row field") {
    ExperimentConfig cfg;
    cfg.experiment = "algebra-identities";
    cfg.parameters["samples"] = "200";
    RunReport report = run(cfg);
    CHECK(report.rows.size() >= 3);
    CHECK(report.all_within_tolerance());

    const std::string path = temp_path("sq_roundtrip.csv");
    emit(report, path, "csv");
    const std::vector<ReportRow> rows = parse_csv(path);
    REQUIRE(rows.size() == report.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].case_id == report.rows[i].case_id);
        CHECK(euclid_norm(rows[i].value - report.rows[i].value) == 0.0);
        CHECK(euclid_norm(rows[i].ref - report.rows[i].ref) == 0.0);
        CHECK(rows[i].abs_error == report.rows[i].abs_error);
        CHECK(rows[i].resolution == report.rows[i].resolution);
        CHECK(rows[i].epsilon == report.rows[i].epsilon);
    }
    CHECK(std::filesystem::exists(path + ".meta.json"));
    std::remove(path.c_str());
    std::remove((path + ".meta.json").c_str());
}

TEST_CASE("an empty report emits just the header") {
    RunReport report;
    report.config.experiment = "algebra-identities";
    const std::string path = temp_path("sq_empty.csv");
    emit(report, path, "csv");
    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("case_id,", 0) == 0);
    CHECK(!std::getline(in, line));
    CHECK(parse_csv(path).empty());
    std::remove(path.c_str());
    std::remove((path + ".meta.json").c_str());
}

TEST_CASE("json emission produces a parseable document") {
    ExperimentConfig cfg;
    cfg.experiment = "restriction-lemma";
    cfg.parameters["samples"] = "5";
    RunReport report = run(cfg);
    const std::string path = temp_path("sq_report.json");
    emit(report, path, "json");
    std::ifstream in(path);
    std::string body((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(body.find("\"experiment\"") != std::string::npos);
    CHECK(body.find("restriction-lemma") != std::string::npos);
    CHECK(body.find("\"rows\"") != std::string::npos);
    std::remove(path.c_str());
    std::remove((path + ".meta.json").c_str());
}

TEST_CASE("runs are bit-reproducible apart from wall time") {
    ExperimentConfig cfg;
    cfg.experiment = "kernel-regularity";
    cfg.parameters["samples"] = "20";
    const RunReport a = run(cfg);
    const RunReport b = run(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].case_id == b.rows[i].case_id);
        CHECK(euclid_norm(a.rows[i].value - b.rows[i].value) == 0.0);
        CHECK(a.rows[i].abs_error == b.rows[i].abs_error);
    }
}

TEST_CASE("the cheap experiments pass their own tolerances") {
    for (const char* name : {"algebra-identities", "restriction-lemma"}) {
        ExperimentConfig cfg;
        cfg.experiment = name;
        cfg.parameters["samples"] = "50";
        const RunReport report = run(cfg);
        CHECK(report.all_within_tolerance());
        for (const auto& row : report.rows) CHECK(row.abs_error <= row.tolerance);
    }
}
