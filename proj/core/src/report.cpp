#include "inertia/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "inertia/data_core.hpp"
#include "inertia/error.hpp"

namespace inertia::report {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s(buf);
    if (s == "-0" || (s.starts_with("-0.") && s.find_first_not_of("-0.") == std::string::npos)) s.erase(0, 1);
    return s;
}

std::string non_finite_text(double v) {
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string cell_text(const Cell& cell, std::optional<int> round_digits) {
    struct Visitor {
        std::optional<int> digits;
        std::string operator()(const std::string& s) const { return csv_escape(s); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(double v) const {
            if (!std::isfinite(v)) return non_finite_text(v);
            return digits ? fixed(v, *digits) : format_double(v);
        }
    };
    return std::visit(Visitor{round_digits}, cell);
}

nlohmann::ordered_json cell_json(const Cell& cell, std::optional<int> round_digits) {
    struct Visitor {
        std::optional<int> digits;
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
        nlohmann::ordered_json operator()(long long v) const { return v; }
        nlohmann::ordered_json operator()(bool b) const { return b; }
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v)) return non_finite_text(v);
            if (!digits) return v;
            return std::stod(fixed(v, *digits));
        }
    };
    return std::visit(Visitor{round_digits}, cell);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) { return fixed(v, 2); }

struct Ticks {
    double step;
    std::vector<double> values;
};

Ticks nice_ticks(double lo, double hi) {
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
    Ticks t{step, {}};
    for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
        t.values.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    }
    return t;
}

std::string tick_label(double v, double step) {
    const int digits = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step) - 1e-9));
    return fixed(v, digits);
}

/// Canvas, axes, ticks and labels shared by every figure.
void draw_frame(std::ostringstream& svg, const PlotFrame& f, const FigureLabels& labels) {
    svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">)" << '\n';
    svg << R"(<rect class="background" x="0" y="0" width="800" height="600" fill="white"/>)" << '\n';
    svg << R"(<path class="axes" d="M)" << num(PlotFrame::kLeft) << ' ' << num(PlotFrame::kTop) << " L"
        << num(PlotFrame::kLeft) << ' ' << num(PlotFrame::kBottom) << " L" << num(PlotFrame::kRight) << ' '
        << num(PlotFrame::kBottom) << R"(" fill="none" stroke="black" stroke-width="1"/>)" << '\n';

    const auto xt = nice_ticks(f.x_min, f.x_max);
    const auto yt = nice_ticks(f.y_min, f.y_max);
    svg << R"(<path class="ticks" d=")";
    for (double v : xt.values) svg << 'M' << num(f.px(v)) << ' ' << num(PlotFrame::kBottom) << " v6 ";
    for (double v : yt.values) svg << 'M' << num(PlotFrame::kLeft) << ' ' << num(f.py(v)) << " h-6 ";
    svg << R"(" stroke="black" stroke-width="1"/>)" << '\n';
    for (double v : xt.values) {
        svg << R"(<text class="tick" x=")" << num(f.px(v)) << R"(" y=")" << num(PlotFrame::kBottom + 22)
            << R"(" font-size="12" text-anchor="middle">)" << tick_label(v, xt.step) << "</text>\n";
    }
    for (double v : yt.values) {
        svg << R"(<text class="tick" x=")" << num(PlotFrame::kLeft - 10) << R"(" y=")" << num(f.py(v) + 4)
            << R"(" font-size="12" text-anchor="end">)" << tick_label(v, yt.step) << "</text>\n";
    }
    const double mid_x = (PlotFrame::kLeft + PlotFrame::kRight) / 2.0;
    const double mid_y = (PlotFrame::kTop + PlotFrame::kBottom) / 2.0;
    svg << R"(<text class="title" x=")" << num(mid_x) << R"(" y="30" font-size="16" text-anchor="middle">)"
        << xml_escape(labels.title) << "</text>\n";
    svg << R"(<text class="xlabel" x=")" << num(mid_x) << R"(" y="575" font-size="14" text-anchor="middle">)"
        << xml_escape(labels.x_label) << "</text>\n";
    svg << R"(<text class="ylabel" x="20" y=")" << num(mid_y) << R"(" font-size="14" text-anchor="middle" transform="rotate(-90 20 )"
        << num(mid_y) << ")\">" << xml_escape(labels.y_label) << "</text>\n";
}

}  // namespace

void TableDoc::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw Error(ErrorKind::InvalidParameter, name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                                                     std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string render_table(const TableDoc& doc, TableFormat format, std::optional<int> round_digits) {
    if (format == TableFormat::Csv) {
        std::string out;
        for (std::size_t c = 0; c < doc.columns.size(); ++c) {
            if (c) out += ',';
            out += csv_escape(doc.columns[c]);
        }
        out += '\n';
        for (const auto& row : doc.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ',';
                out += cell_text(row[c], round_digits);
            }
            out += '\n';
        }
        return out;
    }
    nlohmann::ordered_json j;
    j["name"] = doc.name;
    j["columns"] = doc.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : doc.rows) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& cell : row) arr.push_back(cell_json(cell, round_digits));
        j["rows"].push_back(std::move(arr));
    }
    return j.dump(2) + '\n';
}

void emit_table(const TableDoc& doc, TableFormat format, const std::filesystem::path& path,
                std::optional<int> round_digits) {
    write_file(path, render_table(doc, format, round_digits));
}

// PlotFrame -------------------------------------------------------------------

PlotFrame PlotFrame::around(double x_lo, double x_hi, double y_lo, double y_hi) {
    const auto widen = [](double& lo, double& hi) {
        double span = hi - lo;
        if (!(span > 0.0)) {
            span = std::max(std::abs(lo), 1.0) * 0.2;
            lo -= span / 2.0;
            hi += span / 2.0;
        }
        lo -= 0.05 * span;
        hi += 0.05 * span;
    };
    widen(x_lo, x_hi);
    widen(y_lo, y_hi);
    return {x_lo, x_hi, y_lo, y_hi};
}

double PlotFrame::px(double x) const noexcept { return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft); }

double PlotFrame::py(double y) const noexcept { return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop); }

double PlotFrame::data_x(double p) const noexcept { return x_min + (p - kLeft) / (kRight - kLeft) * (x_max - x_min); }

double PlotFrame::data_y(double p) const noexcept { return y_min + (kBottom - p) / (kBottom - kTop) * (y_max - y_min); }

// Figures ---------------------------------------------------------------------

std::string fit_equation(const stats::OlsFit& fit) {
    const std::string sign = fit.intercept < 0.0 ? " - " : " + ";
    return "y = " + fixed(fit.slope, 3) + "x" + sign + fixed(std::abs(fit.intercept), 1);
}

std::string scatter_svg(std::span<const Point> points, const std::optional<stats::OlsFit>& fit,
                        const FigureLabels& labels) {
    if (points.empty()) throw Error(ErrorKind::EmptyInput, "scatter needs at least one point");
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error(ErrorKind::NonFiniteInput, "scatter point");
    }
    const auto [xlo_it, xhi_it] =
        std::minmax_element(points.begin(), points.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    const auto [ylo_it, yhi_it] =
        std::minmax_element(points.begin(), points.end(), [](const Point& a, const Point& b) { return a.y < b.y; });
    const double x_lo = xlo_it->x;
    const double x_hi = xhi_it->x;
    double y_lo = ylo_it->y;
    double y_hi = yhi_it->y;
    if (fit) {
        for (double x : {x_lo, x_hi}) {
            y_lo = std::min(y_lo, fit->predict(x));
            y_hi = std::max(y_hi, fit->predict(x));
        }
    }
    const auto frame = PlotFrame::around(x_lo, x_hi, y_lo, y_hi);

    std::ostringstream svg;
    draw_frame(svg, frame, labels);
    svg << R"(<g class="series" fill="steelblue" stroke="none">)" << '\n';
    for (const auto& p : points) {
        svg << R"(<circle class="marker" cx=")" << num(frame.px(p.x)) << R"(" cy=")" << num(frame.py(p.y))
            << R"(" r="3"/>)" << '\n';
    }
    svg << "</g>\n";
    if (fit) {
        svg << R"(<line class="fit" x1=")" << num(frame.px(x_lo)) << R"(" y1=")" << num(frame.py(fit->predict(x_lo)))
            << R"(" x2=")" << num(frame.px(x_hi)) << R"(" y2=")" << num(frame.py(fit->predict(x_hi)))
            << R"(" stroke="firebrick" stroke-width="2"/>)" << '\n';
        svg << R"(<text class="equation" x=")" << num(PlotFrame::kLeft + 12) << R"(" y=")"
            << num(PlotFrame::kTop + 18) << R"(" font-size="13" fill="firebrick">)" << xml_escape(fit_equation(*fit))
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void render_scatter(std::span<const Point> points, const std::optional<stats::OlsFit>& fit,
                    const std::filesystem::path& path, const FigureLabels& labels) {
    write_file(path, scatter_svg(points, fit, labels));
}

std::string histogram_svg(const stats::Histogram& h, const stats::Histogram* overlay, const FigureLabels& labels) {
    if (h.counts.empty()) throw Error(ErrorKind::EmptyInput, "histogram has no occupied bins");
    double x_lo = h.lower_edge(h.counts.begin()->first);
    double x_hi = h.lower_edge(h.counts.rbegin()->first) + h.bin_width;
    std::size_t peak = 0;
    for (const auto& [k, c] : h.counts) peak = std::max(peak, c);
    if (overlay != nullptr && !overlay->counts.empty()) {
        x_lo = std::min(x_lo, overlay->lower_edge(overlay->counts.begin()->first));
        x_hi = std::max(x_hi, overlay->lower_edge(overlay->counts.rbegin()->first) + overlay->bin_width);
        for (const auto& [k, c] : overlay->counts) peak = std::max(peak, c);
    }
    auto frame = PlotFrame::around(x_lo, x_hi, 0.0, static_cast<double>(peak));
    frame.y_min = 0.0;

    std::ostringstream svg;
    draw_frame(svg, frame, labels);
    const auto bars = [&](const stats::Histogram& hist, int series, const char* fill, const char* opacity) {
        svg << R"(<g class="series s)" << series << R"(" fill=")" << fill << R"(" fill-opacity=")" << opacity
            << R"(" stroke="black" stroke-width="0.5">)" << '\n';
        for (const auto& [k, c] : hist.counts) {
            const double left = hist.lower_edge(k);
            const double top = frame.py(static_cast<double>(c));
            svg << R"(<rect class="bar" data-bin=")" << k << R"(" data-count=")" << c << R"(" x=")"
                << num(frame.px(left)) << R"(" y=")" << num(top) << R"(" width=")"
                << num(frame.px(left + hist.bin_width) - frame.px(left)) << R"(" height=")"
                << num(PlotFrame::kBottom - top) << R"("/>)" << '\n';
        }
        svg << "</g>\n";
    };
    bars(h, 0, "steelblue", "0.8");
    if (overlay != nullptr) bars(*overlay, 1, "darkorange", "0.5");

    svg << R"(<text class="legend" x=")" << num(PlotFrame::kRight - 10) << R"(" y=")" << num(PlotFrame::kTop + 18)
        << R"(" font-size="13" text-anchor="end" fill="steelblue">)" << xml_escape(labels.series_name) << "</text>\n";
    if (overlay != nullptr) {
        svg << R"(<text class="legend" x=")" << num(PlotFrame::kRight - 10) << R"(" y=")"
            << num(PlotFrame::kTop + 36) << R"(" font-size="13" text-anchor="end" fill="darkorange">)"
            << xml_escape(labels.overlay_name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void render_histogram(const stats::Histogram& h, const stats::Histogram* overlay, const std::filesystem::path& path,
                      const FigureLabels& labels) {
    write_file(path, histogram_svg(h, overlay, labels));
}

}  // namespace inertia::report
