#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "inertia/data_core.hpp"
#include "inertia/growth_analysis.hpp"
#include "inertia/inertial_model.hpp"
#include "inertia/stats_kernel.hpp"

namespace inertia::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitConfigError = 2;

enum class CsvLayout { Long, Wide };

struct DataSource {
    std::filesystem::path path;
    CsvLayout layout = CsvLayout::Long;
    std::string basis = "GK1990";
};

/// The thirteen OECD economies with continuous series since 1870.
[[nodiscard]] std::vector<std::string> default_countries();

struct SimSettings {
    ModelParams params{300.0, 3000.0, 1950, 0.5};
    int years = 61;
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;
    bool linearize = false;
    bool recover = false;
    int trials = 1000;
    std::optional<std::filesystem::path> cohort_path;
    std::string cohort_country;
};

/// Everything a run needs. Built from the JSON config, then overridden by flags.
struct RunConfig {
    std::optional<DataSource> data;  // one file covering both eras
    std::optional<DataSource> pre;   // early-era source (e.g. Maddison, wide)
    std::optional<DataSource> post;  // late-era source (e.g. TED, long)
    std::optional<int> cutover;      // first year taken from `post`; defaults to the POST level start
    std::optional<std::filesystem::path> cohorts;
    std::optional<std::vector<std::string>> countries = default_countries();  // nullopt = all in data
    SegmentSpec pre_segment = SegmentSpec::pre();
    SegmentSpec post_segment = SegmentSpec::post();
    double bin_width = 200.0;
    double trim = 800.0;
    std::optional<int> round_digits;
    LevelTiming level_timing = LevelTiming::Previous;
    std::filesystem::path out_dir = "inertia_out";
    SimSettings sim;

    /// Throws Error(Config) when an invariant fails.
    void validate() const;
};

/// Parses a JSON config; relative paths resolve against the file's directory.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Loads the configured sources and restricts them to the configured countries.
[[nodiscard]] Dataset load_dataset(const RunConfig& cfg);

void run_analyze(const RunConfig& cfg, std::ostream& log);

struct NormalitySummary {
    SegmentLabel segment;
    std::size_t n = 0;
    stats::NormalityResult before;
    std::size_t n_trimmed = 0;
    stats::NormalityResult after;
};

std::vector<NormalitySummary> run_normality(const RunConfig& cfg, std::ostream& log);

void run_simulate(const RunConfig& cfg, std::ostream& log);

void run_validate(const RunConfig& cfg, std::ostream& log);

/// Full command line entry point (argv[0] excluded). Returns the exit code:
/// 0 success, 1 data/validation error, 2 configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace inertia::cli
