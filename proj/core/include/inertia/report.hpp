#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "inertia/stats_kernel.hpp"

namespace inertia::report {

using Cell = std::variant<std::string, long long, double, bool>;

/// A named table with full-precision cells. Rounding happens only when the
/// table is emitted.
struct TableDoc {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    /// Throws InvalidParameter when the row width differs from the column count.
    void add_row(std::vector<Cell> row);
};

enum class TableFormat { Csv, Json };

/// CSV: header row plus one line per row, doubles in shortest round-trip
/// form. JSON: {"name", "columns", "rows"}. With `round_digits`, doubles are
/// written with that many decimals. Non-finite doubles become "inf", "-inf"
/// or "nan" (strings in JSON).
[[nodiscard]] std::string render_table(const TableDoc& doc, TableFormat format,
                                       std::optional<int> round_digits = std::nullopt);

/// Throws IoError.
void emit_table(const TableDoc& doc, TableFormat format, const std::filesystem::path& path,
                std::optional<int> round_digits = std::nullopt);

// SVG figures ---------------------------------------------------------------

struct Point {
    double x;
    double y;
};

/// Maps data coordinates onto the fixed 800x600 canvas.
struct PlotFrame {
    static constexpr double kWidth = 800.0;
    static constexpr double kHeight = 600.0;
    static constexpr double kLeft = 90.0;
    static constexpr double kRight = 770.0;
    static constexpr double kTop = 50.0;
    static constexpr double kBottom = 530.0;

    double x_min;
    double x_max;
    double y_min;
    double y_max;

    /// Data extent widened by 5% on each side.
    [[nodiscard]] static PlotFrame around(double x_lo, double x_hi, double y_lo, double y_hi);

    [[nodiscard]] double px(double x) const noexcept;
    [[nodiscard]] double py(double y) const noexcept;
    [[nodiscard]] double data_x(double px) const noexcept;
    [[nodiscard]] double data_y(double py) const noexcept;
};

struct FigureLabels {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::string series_name = "data";
    std::string overlay_name = "overlay";
};

/// One circle per point; with a fit, one <line> across the x-range of the
/// data and the fitted equation as text.
[[nodiscard]] std::string scatter_svg(std::span<const Point> points, const std::optional<stats::OlsFit>& fit,
                                      const FigureLabels& labels);

void render_scatter(std::span<const Point> points, const std::optional<stats::OlsFit>& fit,
                    const std::filesystem::path& path, const FigureLabels& labels);

/// One bar per occupied bin; the overlay is drawn as a second series.
[[nodiscard]] std::string histogram_svg(const stats::Histogram& h, const stats::Histogram* overlay,
                                        const FigureLabels& labels);

void render_histogram(const stats::Histogram& h, const stats::Histogram* overlay, const std::filesystem::path& path,
                      const FigureLabels& labels);

/// "y = 0.016x + 185.3"
[[nodiscard]] std::string fit_equation(const stats::OlsFit& fit);

}  // namespace inertia::report
