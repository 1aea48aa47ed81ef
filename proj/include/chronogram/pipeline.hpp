#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chronogram/ingest.hpp"
#include "chronogram/layout.hpp"
#include "chronogram/simnet.hpp"
#include "chronogram/windowing.hpp"

namespace chronogram {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string input;
    std::optional<std::string> stopwords;  // unset: bundled list
    std::optional<int> origin;             // unset: earliest year rounded down to a window multiple
    int window_length = 5;
    int min_occ = 2;
    double threshold = 0.2;
    std::optional<std::string> anchor;
    std::vector<std::string> excluded_journals;
    double alpha = 1.0;
    int stability_window = 4;
    std::uint64_t seed = 1;
    std::string out = "chronogram-out";
    double fps = 2.0;
    int transition_frames = 10;
    bool binarize = false;
    std::optional<std::string> config_file;
    std::map<std::string, std::string> config_file_values;  // echoed into the manifest
};

/// Throws ConfigError for out-of-range values or a missing input file.
void validate(const RunConfig& config);

/// Parses the command line (and an optional `--config` key=value file).
/// Throws ConfigError on bad usage; returns nullopt after printing --help.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv);

struct StageTiming {
    std::string stage;
    double milliseconds = 0.0;
};

struct RunManifest {
    RunConfig config;
    int origin = 0;
    std::string input_sha256;
    std::string version;
    std::size_t records_read = 0;
    std::size_t records_retained = 0;
    std::vector<FilterLogEntry> filter_log;
    std::vector<std::string> windows;
    std::vector<StageTiming> timings;
    std::vector<std::string> outputs;  // relative to config.out

    nlohmann::json to_json() const;
};

/// Everything computed before files are written.
struct Analysis {
    Corpus corpus;
    int origin = 0;
    std::vector<TimeWindow> windows;
    std::vector<IncidenceMatrix> matrices;
    std::vector<SliceGraph> graphs;
    std::vector<DistanceTable> tables;
    Trajectory trajectory;
    std::vector<StageTiming> timings;
};

StressParams stress_params(const RunConfig& config);

Analysis analyze(std::vector<BiblioRecord> records, const RunConfig& config, const StopwordSet& stopwords);

/// Runs the whole pipeline and writes every artifact under `config.out`.
/// On failure, files written so far are removed.
RunManifest run_pipeline(const RunConfig& config);

/// Command-line entry point; returns the process exit code
/// (0 success, 1 malformed input, 2 configuration error, 3 other failure).
int run_cli(int argc, const char* const* argv);

std::string sha256_hex(std::string_view bytes);

}  // namespace chronogram
