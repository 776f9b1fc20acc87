#include "inertia/growth_analysis.hpp"

#include <cmath>

#include "inertia/error.hpp"

namespace inertia {

namespace {

stats::OlsFit fit_or_explain(std::span<const double> xs, std::span<const double> ys, const std::string& context) {
    try {
        return stats::ols_fit(xs, ys);
    } catch (const Error& e) {
        throw Error(e.kind(), context + ": " + e.what());
    }
}

std::string context(const CountryId& c, const SegmentSpec& seg) {
    return c.code + " " + std::string(to_string(seg.label));
}

}  // namespace

std::vector<double> IncrementSeries::deltas() const {
    std::vector<double> out;
    out.reserve(observations.size());
    for (const auto& o : observations) out.push_back(o.delta);
    return out;
}

std::vector<double> IncrementSeries::years() const {
    std::vector<double> out;
    out.reserve(observations.size());
    for (const auto& o : observations) out.push_back(static_cast<double>(o.year));
    return out;
}

std::vector<double> IncrementSeries::prior_levels() const {
    std::vector<double> out;
    out.reserve(observations.size());
    for (const auto& o : observations) out.push_back(o.prior_level);
    return out;
}

std::vector<double> IncrementSeries::levels() const {
    std::vector<double> out;
    out.reserve(observations.size());
    for (const auto& o : observations) out.push_back(o.level());
    return out;
}

std::string_view to_string(LevelTiming timing) noexcept {
    return timing == LevelTiming::Previous ? "previous" : "current";
}

std::optional<LevelTiming> parse_level_timing(std::string_view text) noexcept {
    if (text == "previous") return LevelTiming::Previous;
    if (text == "current") return LevelTiming::Current;
    return std::nullopt;
}

IncrementSeries annual_increments(const GdpSeries& series, const SegmentSpec& seg) {
    const auto sliced = slice_segment(series, seg);
    IncrementSeries inc{series.country(), series.basis(), {}};
    inc.observations.reserve(static_cast<std::size_t>(seg.increment_years.length()));
    for (int year = seg.increment_years.first; year <= seg.increment_years.last; ++year) {
        // Both levels exist: slice_segment verified contiguity over level_years.
        const double prior = *sliced.value_at(year - 1);
        const double current = *sliced.value_at(year);
        inc.observations.push_back({year, current - prior, prior});
    }
    return inc;
}

stats::OlsFit increment_regression_vs_level(const IncrementSeries& inc, LevelTiming timing) {
    const auto xs = timing == LevelTiming::Previous ? inc.prior_levels() : inc.levels();
    return fit_or_explain(xs, inc.deltas(), inc.country.code + " increments vs level");
}

stats::OlsFit increment_regression_vs_time(const IncrementSeries& inc) {
    return fit_or_explain(inc.years(), inc.deltas(), inc.country.code + " increments vs time");
}

stats::OlsFit level_time_regression(const GdpSeries& series, const SegmentSpec& seg) {
    const auto sliced = slice_segment(series, seg);
    std::vector<double> years;
    for (int y : sliced.years()) years.push_back(static_cast<double>(y));
    return fit_or_explain(years, sliced.values(), context(series.country(), seg) + " levels vs time");
}

std::vector<BreakRow> break_table(const Dataset& ds, const SegmentSpec& pre, const SegmentSpec& post) {
    std::vector<BreakRow> rows;
    rows.reserve(ds.size());
    for (const auto& s : ds.series()) {
        BreakRow row{s.country(), level_time_regression(s, pre), level_time_regression(s, post), 0.0};
        row.ratio = row.post.slope / row.pre.slope;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<MeanIncrementRow> mean_increment_table(const Dataset& ds, const SegmentSpec& pre,
                                                   const SegmentSpec& post) {
    std::vector<MeanIncrementRow> rows;
    rows.reserve(ds.size());
    for (const auto& s : ds.series()) {
        MeanIncrementRow row{s.country(), stats::summary_stats(annual_increments(s, pre).deltas()),
                             stats::summary_stats(annual_increments(s, post).deltas()), 0.0};
        row.ratio = row.post.mean / row.pre.mean;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<IncrementRegressionRow> increment_regression_table(const Dataset& ds, const SegmentSpec& seg,
                                                               Regressor regressor, LevelTiming timing) {
    std::vector<IncrementRegressionRow> rows;
    rows.reserve(ds.size());
    for (const auto& s : ds.series()) {
        const auto inc = annual_increments(s, seg);
        rows.push_back({s.country(), regressor == Regressor::Level ? increment_regression_vs_level(inc, timing)
                                                                   : increment_regression_vs_time(inc)});
    }
    return rows;
}

PooledResiduals demean_and_pool(const Dataset& ds, const SegmentSpec& seg, std::optional<double> trim_threshold) {
    if (trim_threshold && !(*trim_threshold > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "trim threshold must be positive");
    }
    PooledResiduals pooled{seg, {}, {}, {}, {}, trim_threshold, 0};
    for (const auto& s : ds.series()) {
        const auto deltas = annual_increments(s, seg).deltas();
        const auto mean = stats::summary_stats(deltas).mean;
        pooled.parts.push_back({s.country().code, pooled.demeaned.size(), deltas.size(), mean});
        for (double d : deltas) {
            pooled.raw.push_back(d);
            pooled.demeaned.push_back(d - mean);
        }
    }
    if (!trim_threshold) {
        pooled.values = pooled.demeaned;
        return pooled;
    }
    pooled.values.reserve(pooled.demeaned.size());
    for (double v : pooled.demeaned) {
        if (std::abs(v) > *trim_threshold) {
            ++pooled.n_trimmed;
        } else {
            pooled.values.push_back(v);
        }
    }
    return pooled;
}

}  // namespace inertia
