#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace inertia {

struct CountryId {
    std::string code;          // uppercase, e.g. "AUS"
    std::string display_name;  // e.g. "Australia"

    friend bool operator==(const CountryId&, const CountryId&) = default;
};

/// Builds a CountryId from a raw code: uppercases it and attaches the display
/// name of the known OECD countries (falls back to the code itself).
[[nodiscard]] CountryId make_country(std::string_view raw_code);

struct Observation {
    int year;
    double value;

    friend bool operator==(const Observation&, const Observation&) = default;
};

/// Real GDP per capita of one country in one currency basis (e.g. "GK1990").
/// Years are strictly increasing and values finite and positive.
class GdpSeries {
public:
    GdpSeries(CountryId country, std::string basis, std::vector<Observation> observations);

    [[nodiscard]] const CountryId& country() const noexcept { return country_; }
    [[nodiscard]] const std::string& basis() const noexcept { return basis_; }
    [[nodiscard]] std::span<const Observation> observations() const noexcept { return obs_; }
    [[nodiscard]] std::size_t size() const noexcept { return obs_.size(); }
    [[nodiscard]] bool empty() const noexcept { return obs_.empty(); }
    [[nodiscard]] int first_year() const;
    [[nodiscard]] int last_year() const;
    [[nodiscard]] std::optional<double> value_at(int year) const;

    [[nodiscard]] std::vector<int> years() const;
    [[nodiscard]] std::vector<double> values() const;

    friend bool operator==(const GdpSeries&, const GdpSeries&) = default;

private:
    CountryId country_;
    std::string basis_;
    std::vector<Observation> obs_;
};

/// Head count of the country-specific age (N_s). Years strictly increasing
/// and contiguous, counts positive.
class CohortSeries {
public:
    CohortSeries(CountryId country, std::vector<Observation> observations);

    [[nodiscard]] const CountryId& country() const noexcept { return country_; }
    [[nodiscard]] std::span<const Observation> observations() const noexcept { return obs_; }
    [[nodiscard]] std::optional<double> value_at(int year) const;
    [[nodiscard]] bool covers(int first, int last) const;

    friend bool operator==(const CohortSeries&, const CohortSeries&) = default;

private:
    CountryId country_;
    std::vector<Observation> obs_;
};

struct YearRange {
    int first;
    int last;

    [[nodiscard]] bool contains(int year) const noexcept { return year >= first && year <= last; }
    [[nodiscard]] int length() const noexcept { return last - first + 1; }

    friend bool operator==(const YearRange&, const YearRange&) = default;
};

enum class SegmentLabel { Pre, Post, Custom };

[[nodiscard]] std::string_view to_string(SegmentLabel label) noexcept;

struct SegmentSpec {
    SegmentLabel label;
    YearRange level_years;      // used for level-on-time regressions
    YearRange increment_years;  // labels t of increments G(t) - G(t-1)

    /// Levels 1870-1940, increments 1871-1940.
    [[nodiscard]] static SegmentSpec pre();
    /// Levels 1950-2011, increments 1951-2011.
    [[nodiscard]] static SegmentSpec post();
    /// Validates that every increment year y has y-1 and y inside the levels.
    [[nodiscard]] static SegmentSpec make(SegmentLabel label, YearRange levels, YearRange increments);

    friend bool operator==(const SegmentSpec&, const SegmentSpec&) = default;
};

/// A panel of GDP series (at most one per country and basis) plus optional
/// cohort series. Series are kept sorted by country code, then basis.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::string provenance) : provenance_(std::move(provenance)) {}

    void add(GdpSeries series);
    void add_cohort(CohortSeries cohort);

    [[nodiscard]] std::span<const GdpSeries> series() const noexcept { return series_; }
    [[nodiscard]] std::span<const CohortSeries> cohorts() const noexcept { return cohorts_; }
    [[nodiscard]] const std::string& provenance() const noexcept { return provenance_; }
    [[nodiscard]] std::size_t size() const noexcept { return series_.size(); }
    [[nodiscard]] bool empty() const noexcept { return series_.empty(); }

    /// First series (lowest basis tag) for the given code, or nullptr.
    [[nodiscard]] const GdpSeries* find(std::string_view code) const;
    [[nodiscard]] const CohortSeries* find_cohort(std::string_view code) const;

    /// Keeps only the listed countries, in sorted order. Missing codes are
    /// reported as SegmentNotCovered.
    [[nodiscard]] Dataset select(std::span<const std::string> codes) const;

    /// Compares content only; provenance is free-text metadata.
    friend bool operator==(const Dataset& a, const Dataset& b) {
        return a.series_ == b.series_ && a.cohorts_ == b.cohorts_;
    }

private:
    std::vector<GdpSeries> series_;
    std::vector<CohortSeries> cohorts_;
    std::string provenance_;
};

/// Long layout: header `country,year,gdp_pc`.
[[nodiscard]] Dataset load_long_csv(const std::filesystem::path& path, std::string_view basis);

/// Wide (Maddison) layout: header `year,<code1>,<code2>,...`, blank cell = missing.
[[nodiscard]] Dataset load_wide_csv(const std::filesystem::path& path, std::string_view basis);

/// Header `country,year,population`.
[[nodiscard]] std::vector<CohortSeries> load_cohort_csv(const std::filesystem::path& path);

/// Writes every series in long layout with shortest round-trip formatting.
void write_long_csv(const Dataset& ds, const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly the same double.
[[nodiscard]] std::string format_double(double value);

/// Observations whose year lies in seg.level_years. The series must cover the
/// whole range without gaps.
[[nodiscard]] GdpSeries slice_segment(const GdpSeries& series, const SegmentSpec& seg);

/// Splices two sources into one panel: years before `cutover` come from
/// `early`, the rest from `late`. Countries present in only one source are
/// carried over unchanged.
[[nodiscard]] Dataset combine_eras(const Dataset& early, const Dataset& late, int cutover);

}  // namespace inertia
