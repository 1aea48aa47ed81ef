#include "chronogram/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "chronogram/pajek.hpp"
#include "chronogram/render.hpp"

#ifndef CHRONOGRAM_VERSION
#define CHRONOGRAM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace chronogram {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot read '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Stopwatch {
public:
    explicit Stopwatch(std::vector<StageTiming>& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}

    void lap(std::string stage) {
        const auto now = std::chrono::steady_clock::now();
        sink_.push_back({std::move(stage), std::chrono::duration<double, std::milli>(now - start_).count()});
        start_ = now;
    }

private:
    std::vector<StageTiming>& sink_;
    std::chrono::steady_clock::time_point start_;
};

std::map<std::string, std::string> read_key_values(const std::string& path) {
    std::map<std::string, std::string> out;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        line = normalize_whitespace(line);
        if (line.empty() || line.front() == '#' || line.front() == ';' || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("config line without '=': {}", line));
        std::string key = normalize_whitespace(line.substr(0, eq));
        std::string value = normalize_whitespace(line.substr(eq + 1));
        if (out.count(key)) value = out[key] + ";" + value;
        out[key] = value;
    }
    return out;
}

/// Removes what a failed run wrote; keeps anything that predates it.
class OutputTransaction {
public:
    explicit OutputTransaction(fs::path root) : root_(std::move(root)) {}
    OutputTransaction(const OutputTransaction&) = delete;
    OutputTransaction& operator=(const OutputTransaction&) = delete;

    ~OutputTransaction() {
        if (committed_) return;
        std::error_code ec;
        for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(root_ / *it, ec);
        for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);
    }

    void make_dir(const fs::path& dir) {
        if (fs::exists(dir)) {
            if (!fs::is_directory(dir)) throw ConfigError(fmt::format("'{}' exists and is not a directory", dir.string()));
            return;
        }
        fs::create_directories(dir);
        dirs_.push_back(dir);
    }

    void write(const std::string& relative, std::string_view content) {
        const fs::path path = root_ / relative;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
        files_.push_back(relative);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
    }

    const std::vector<std::string>& files() const { return files_; }
    void commit() { committed_ = true; }

private:
    fs::path root_;
    std::vector<std::string> files_;
    std::vector<fs::path> dirs_;
    bool committed_ = false;
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

void validate(const RunConfig& c) {
    if (c.input.empty()) throw ConfigError("--input is required");
    if (!fs::is_regular_file(c.input)) throw ConfigError(fmt::format("input file '{}' does not exist", c.input));
    if (c.stopwords && !fs::is_regular_file(*c.stopwords))
        throw ConfigError(fmt::format("stopword file '{}' does not exist", *c.stopwords));
    if (c.window_length < 1) throw ConfigError("--window-length must be >= 1");
    if (c.min_occ < 1) throw ConfigError("--min-occ must be >= 1");
    if (!(c.threshold >= 0.0 && c.threshold <= 1.0)) throw ConfigError("--threshold must lie in [0, 1]");
    if (!(c.alpha >= 0.0)) throw ConfigError("--alpha must be >= 0");
    if (c.stability_window < 0) throw ConfigError("--stability-window must be >= 0");
    if (!(c.fps > 0.0)) throw ConfigError("--fps must be positive");
    if (c.transition_frames < 0) throw ConfigError("--transition-frames must be >= 0");
    if (c.out.empty()) throw ConfigError("--out must not be empty");
    if (c.origin && *c.origin <= 0) throw ConfigError("--origin must be a positive year");
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv) {
    RunConfig c;
    CLI::App app{"Animated co-word / co-author / journal maps over time windows", "chronogram"};
    int origin = 0;
    std::string stopwords, anchor;
    app.add_option("--input", c.input, "Field-tagged export (.txt) or TSV (.tsv) of records")->required();
    auto* stop_opt = app.add_option("--stopwords", stopwords, "Stopword list (one word per line)");
    auto* origin_opt = app.add_option("--origin", origin,
                                      "First year of the first window (default: earliest year rounded down "
                                      "to a multiple of the window length)");
    app.add_option("--window-length", c.window_length, "Years per window")->capture_default_str();
    app.add_option("--min-occ", c.min_occ, "Minimum document frequency per window")->capture_default_str();
    app.add_option("--threshold", c.threshold, "Cosine threshold for edges")->capture_default_str();
    auto* anchor_opt = app.add_option("--anchor", anchor, "Author label added as a constant attribute");
    app.add_option("--exclude-journal", c.excluded_journals, "Journal to drop (repeatable)")->take_all();
    app.add_option("--alpha", c.alpha, "Stability coefficient between slices")->capture_default_str();
    app.add_option("--stability-window", c.stability_window, "Neighboring slices tied together")->capture_default_str();
    app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
    app.add_option("--out", c.out, "Output directory")->capture_default_str();
    app.add_option("--fps", c.fps, "Animation frames per second")->capture_default_str();
    app.add_option("--transition-frames", c.transition_frames, "Interpolated frames between slices")
        ->capture_default_str();
    app.add_flag("--binarize", c.binarize, "Use 0/1 incidence instead of counts");
    auto* config_opt = app.set_config("--config", "", "Optional key=value configuration file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    if (stop_opt->count()) c.stopwords = stopwords;
    if (origin_opt->count()) c.origin = origin;
    if (anchor_opt->count()) c.anchor = anchor;
    if (config_opt->count()) {
        c.config_file = config_opt->as<std::string>();
        c.config_file_values = read_key_values(*c.config_file);
    }
    return c;
}

StressParams stress_params(const RunConfig& config) {
    StressParams p;
    p.alpha = config.alpha;
    p.stability_window = config.stability_window;
    p.seed = config.seed;
    return p;
}

Analysis analyze(std::vector<BiblioRecord> records, const RunConfig& config, const StopwordSet& stopwords) {
    Analysis a;
    Stopwatch watch(a.timings);

    int first = 0, last = 0;
    if (!records.empty()) {
        auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                            [](const auto& x, const auto& y) { return x.year < y.year; });
        first = lo->year;
        last = hi->year;
    }
    const int len = config.window_length;
    a.origin = config.origin.value_or(first - ((first % len) + len) % len);
    std::set<std::string> excluded(config.excluded_journals.begin(), config.excluded_journals.end());
    a.corpus = filter_corpus(std::move(records), excluded, {a.origin, std::max(last, a.origin)});
    a.corpus.source = config.input;
    watch.lap("filter");

    a.windows = windows_for_range(a.origin, a.corpus.records.empty() ? a.origin - 1 : a.corpus.max_year(),
                                  config.window_length);
    IncidenceOptions opts;
    opts.min_occ = config.min_occ;
    opts.anchor = config.anchor;
    opts.binarize = config.binarize;
    for (const auto& w : a.windows) a.matrices.push_back(build_incidence(a.corpus, w, stopwords, opts));
    watch.lap("windowing");

    for (const auto& m : a.matrices) {
        a.graphs.push_back(build_slice_graph(m, config.threshold));
        a.tables.push_back(target_distances(a.graphs.back()));
    }
    watch.lap("simnet");

    a.trajectory = solve_trajectory(a.graphs, a.tables, stress_params(config));
    watch.lap("layout");
    return a;
}

nlohmann::json RunManifest::to_json() const {
    using nlohmann::json;
    json j;
    j["tool"] = "chronogram";
    j["version"] = version;
    const RunConfig& c = config;
    j["config"] = {
        {"input", c.input},
        {"stopwords", c.stopwords ? json(*c.stopwords) : json("(bundled)")},
        {"origin", origin},
        {"window_length", c.window_length},
        {"min_occ", c.min_occ},
        {"threshold", c.threshold},
        {"anchor", c.anchor ? json(*c.anchor) : json(nullptr)},
        {"excluded_journals", c.excluded_journals},
        {"alpha", c.alpha},
        {"stability_window", c.stability_window},
        {"seed", c.seed},
        {"out", c.out},
        {"fps", c.fps},
        {"transition_frames", c.transition_frames},
        {"binarize", c.binarize},
    };
    j["config_file"] = c.config_file ? json{{"path", *c.config_file}, {"values", c.config_file_values}} : json(nullptr);
    json log = json::array();
    for (const auto& e : filter_log) log.push_back({{"id", e.id}, {"reason", e.reason}});
    j["input"] = {{"sha256", input_sha256},
                  {"records_read", records_read},
                  {"records_retained", records_retained},
                  {"filter_log", log}};
    j["windows"] = windows;
    json t = json::object();
    for (const auto& s : timings) t[s.stage] = s.milliseconds;
    j["timings_ms"] = t;
    j["outputs"] = outputs;
    return j;
}

RunManifest run_pipeline(const RunConfig& config) {
    validate(config);
    RunManifest manifest;
    manifest.config = config;
    manifest.version = CHRONOGRAM_VERSION;

    std::vector<StageTiming> parse_timing;
    Stopwatch watch(parse_timing);
    const std::string input_bytes = read_file(config.input);
    manifest.input_sha256 = sha256_hex(input_bytes);
    const StopwordSet stopwords =
        config.stopwords ? load_stopwords(read_file(*config.stopwords)) : default_stopwords();
    const bool tsv = fs::path(config.input).extension() == ".tsv";
    std::vector<BiblioRecord> records = tsv ? parse_tsv(input_bytes) : parse_field_tagged(input_bytes);
    manifest.records_read = records.size();
    watch.lap("parse");

    Analysis a = analyze(std::move(records), config, stopwords);
    manifest.origin = a.origin;
    manifest.records_retained = a.corpus.records.size();
    manifest.filter_log = a.corpus.filter_log;
    for (const auto& w : a.windows) manifest.windows.push_back(w.label);
    manifest.timings = parse_timing;
    manifest.timings.insert(manifest.timings.end(), a.timings.begin(), a.timings.end());

    std::vector<StageTiming> export_timing;
    Stopwatch export_watch(export_timing);
    const fs::path root(config.out);
    OutputTransaction tx(root);
    tx.make_dir(root);
    tx.make_dir(root / "slices");
    tx.make_dir(root / "frames");

    const Normalizer normalizer = Normalizer::fit(a.trajectory);
    for (std::size_t t = 0; t < a.graphs.size(); ++t)
        tx.write(fmt::format("slices/window-{}.net", a.windows[t].label),
                 write_pajek_net(a.graphs[t], a.trajectory.slices[t], normalizer));
    tx.write("project.paj", write_pajek_project(a.trajectory, a.graphs, normalizer));

    std::vector<Frame> keys;
    for (std::size_t t = 0; t < a.graphs.size(); ++t)
        keys.push_back(make_frame(a.graphs[t], a.trajectory.slices[t], normalizer));
    if (keys.empty()) keys.push_back(Frame{"(no windows)", {}, {}});
    const auto sequence = animation_sequence(keys, config.transition_frames);
    for (std::size_t i = 0; i < sequence.size(); ++i)
        tx.write(fmt::format("frames/frame-{:04d}.svg", i), render_svg_frame(sequence[i]));
    tx.write("animation.html", write_animation_html(keys, default_style(), config.fps, config.transition_frames));
    tx.write("stats.csv", write_stats(a.trajectory, a.graphs, a.matrices));
    export_watch.lap("export");
    manifest.timings.insert(manifest.timings.end(), export_timing.begin(), export_timing.end());

    manifest.outputs = tx.files();
    manifest.outputs.push_back("manifest.json");
    tx.write("manifest.json", manifest.to_json().dump(2) + "\n");
    tx.commit();
    return manifest;
}

int run_cli(int argc, const char* const* argv) {
    try {
        auto config = parse_command_line(argc, argv);
        if (!config) return 0;
        const RunManifest m = run_pipeline(*config);
        std::cout << fmt::format("wrote {} files for {} windows to {}\n", m.outputs.size(), m.windows.size(),
                                 config->out);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const MalformedRecord& e) {
        std::cerr << "malformed record: " << e.what() << "\n";
        return 1;
    } catch (const MalformedFile& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace chronogram
