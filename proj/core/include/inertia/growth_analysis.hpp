#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "inertia/data_core.hpp"
#include "inertia/stats_kernel.hpp"

namespace inertia {

struct Increment {
    int year;            // t
    double delta;        // G(t) - G(t-1)
    double prior_level;  // G(t-1)

    [[nodiscard]] double level() const noexcept { return prior_level + delta; }
};

/// First differences of a GDP series over one segment.
struct IncrementSeries {
    CountryId country;
    std::string basis;
    std::vector<Increment> observations;

    [[nodiscard]] std::size_t size() const noexcept { return observations.size(); }
    [[nodiscard]] std::vector<double> deltas() const;
    [[nodiscard]] std::vector<double> years() const;
    [[nodiscard]] std::vector<double> prior_levels() const;
    [[nodiscard]] std::vector<double> levels() const;
};

/// Which attained level an increment dG(t) is regressed on.
enum class LevelTiming {
    Previous,  // G(t-1), the level the increment grew from
    Current,   // G(t)
};

[[nodiscard]] std::string_view to_string(LevelTiming timing) noexcept;
[[nodiscard]] std::optional<LevelTiming> parse_level_timing(std::string_view text) noexcept;

/// One increment per year in seg.increment_years.
[[nodiscard]] IncrementSeries annual_increments(const GdpSeries& series, const SegmentSpec& seg);

/// dG on the attained level; slope is dimensionless ($ per $).
[[nodiscard]] stats::OlsFit increment_regression_vs_level(const IncrementSeries& inc,
                                                          LevelTiming timing = LevelTiming::Previous);

/// dG on calendar year; slope in $/y per year.
[[nodiscard]] stats::OlsFit increment_regression_vs_time(const IncrementSeries& inc);

/// G(t) on calendar year over seg.level_years; slope in $/y.
[[nodiscard]] stats::OlsFit level_time_regression(const GdpSeries& series, const SegmentSpec& seg);

struct BreakRow {
    CountryId country;
    stats::OlsFit pre;
    stats::OlsFit post;
    double ratio;  // post.slope / pre.slope from unrounded slopes
};

/// Level-on-time slopes before and after the break, one row per series in
/// country-code order.
[[nodiscard]] std::vector<BreakRow> break_table(const Dataset& ds, const SegmentSpec& pre = SegmentSpec::pre(),
                                                const SegmentSpec& post = SegmentSpec::post());

struct MeanIncrementRow {
    CountryId country;
    stats::SummaryStats pre;
    stats::SummaryStats post;
    double ratio;  // post.mean / pre.mean
};

[[nodiscard]] std::vector<MeanIncrementRow> mean_increment_table(const Dataset& ds,
                                                                 const SegmentSpec& pre = SegmentSpec::pre(),
                                                                 const SegmentSpec& post = SegmentSpec::post());

struct IncrementRegressionRow {
    CountryId country;
    stats::OlsFit fit;
};

enum class Regressor { Level, Time };

/// increment_regression_vs_level / _vs_time for every series in the dataset.
[[nodiscard]] std::vector<IncrementRegressionRow> increment_regression_table(
    const Dataset& ds, const SegmentSpec& seg, Regressor regressor, LevelTiming timing = LevelTiming::Previous);

struct CountrySlice {
    std::string code;
    std::size_t offset;  // into PooledResiduals::demeaned
    std::size_t count;
    double mean;         // segment mean increment that was subtracted
};

struct PooledResiduals {
    SegmentSpec segment;
    std::vector<double> raw;       // increments before demeaning, same order as `demeaned`
    std::vector<double> demeaned;  // all countries, code order, before trimming
    std::vector<CountrySlice> parts;
    std::vector<double> values;    // demeaned after trimming
    std::optional<double> trim_threshold;
    std::size_t n_trimmed = 0;
};

/// Subtracts each country's segment-mean increment and concatenates the
/// residuals in country-code order. With a threshold, values with
/// |v| > threshold are dropped (values exactly at the threshold stay).
[[nodiscard]] PooledResiduals demean_and_pool(const Dataset& ds, const SegmentSpec& seg,
                                              std::optional<double> trim_threshold = std::nullopt);

}  // namespace inertia
