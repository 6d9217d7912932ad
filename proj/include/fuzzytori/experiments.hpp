#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "fuzzytori/table.hpp"

namespace ft::experiments {

using json = nlohmann::json;

// Validation failure naming the offending field; what() is "<field>: <message>".
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Config file, version 1 (JSON):
//   {"config_version": 1, "kind": "<kind>", "seed": <u64>, "threads": <n>, "params": {...}}
struct ExperimentConfig {
    int config_version = 1;
    std::string kind;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    json params = json::object();
};

constexpr int kConfigVersion = 1;

ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

const std::vector<std::string>& known_kinds();
// Anchor and short description of what an experiment certifies.
// Throws std::invalid_argument("unknown experiment kind: ...").
std::string describe(const std::string& kind);

struct OutputFile {
    std::string name;
    std::string content;
};

struct ExperimentResult {
    std::string kind;
    std::vector<std::pair<std::string, Table>> tables;  // file name, table
    std::vector<OutputFile> plots;                      // svg
    std::vector<OutputFile> extra;                      // e.g. plan fragments
    std::string summary;
    std::size_t failed_rows = 0;  // certificate rows marked FAILED
};

// Parses and checks every parameter of the kind without running it.
void validate(const ExperimentConfig& cfg);
ExperimentResult run(const ExperimentConfig& cfg);
// Writes tables (.csv), plots, extra files and summary.txt into dir.
void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir);

}  // namespace ft::experiments
