#include <cmath>
#include <limits>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "inertia/data_core.hpp"
#include "inertia/error.hpp"
#include "inertia/report.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace inertia;
using namespace inertia::report;
using testio::count_of;
using testio::TempDir;

namespace {

// All elements of one tag name, as attribute maps.
std::vector<std::map<std::string, std::string>> elements(const std::string& svg, const std::string& tag) {
    std::vector<std::map<std::string, std::string>> out;
    const std::regex el("<" + tag + R"(\b([^>]*)/?>)");
    const std::regex attr(R"re(([\w-]+)="([^"]*)")re");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), el); it != std::sregex_iterator(); ++it) {
        const std::string body = (*it)[1];
        std::map<std::string, std::string> m;
        for (auto a = std::sregex_iterator(body.begin(), body.end(), attr); a != std::sregex_iterator(); ++a) {
            m[(*a)[1]] = (*a)[2];
        }
        out.push_back(std::move(m));
    }
    return out;
}

double num(const std::map<std::string, std::string>& m, const std::string& key) { return std::stod(m.at(key)); }

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

TableDoc sample_doc() {
    TableDoc doc{"table1_breaks", {"country", "slope", "n", "flag"}, {}};
    doc.add_row({std::string("CHE"), 247.21234567891234, 62LL, false});
    doc.add_row({std::string("ESP"), 1.0 / 3.0, 71LL, true});
    doc.add_row({std::string("USA"), -0.1, 5LL, false});
    return doc;
}

}  // namespace

TEST_CASE("table: row width is checked") {
    TableDoc doc{"t", {"a", "b"}, {}};
    CHECK_THROWS_AS(doc.add_row({1LL}), Error);
    CHECK_NOTHROW(doc.add_row({1LL, 2.0}));
}

TEST_CASE("table: empty doc is header-only csv") {
    TableDoc doc{"t", {"country", "slope"}, {}};
    CHECK(render_table(doc, TableFormat::Csv) == "country,slope\n");
}

TEST_CASE("table: csv cells parse back at full precision") {
    const auto doc = sample_doc();
    std::stringstream csv(render_table(doc, TableFormat::Csv));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "country,slope,n,flag");
    for (const auto& row : doc.rows) {
        std::getline(csv, line);
        const auto cells = split(line);
        REQUIRE(cells.size() == 4);
        CHECK(cells[0] == std::get<std::string>(row[0]));
        CHECK(std::stod(cells[1]) == std::get<double>(row[1]));
        CHECK(std::stoll(cells[2]) == std::get<long long>(row[2]));
    }
}

TEST_CASE("table: csv and json carry the same values") {
    const auto doc = sample_doc();
    const auto j = nlohmann::json::parse(render_table(doc, TableFormat::Json));
    CHECK(j["name"] == "table1_breaks");
    CHECK(j["columns"].size() == 4);
    REQUIRE(j["rows"].size() == 3);
    std::stringstream csv(render_table(doc, TableFormat::Csv));
    std::string line;
    std::getline(csv, line);
    for (const auto& row : j["rows"]) {
        std::getline(csv, line);
        const auto cells = split(line);
        CHECK(row[0].get<std::string>() == cells[0]);
        CHECK(row[1].get<double>() == std::stod(cells[1]));
        CHECK(row[2].get<long long>() == std::stoll(cells[2]));
        CHECK(row[3].get<bool>() == (cells[3] == "true"));
    }
}

TEST_CASE("table: rounding is display only") {
    TableDoc doc{"table1_breaks", {"country", "ratio"}, {}};
    doc.add_row({std::string("CHE"), 247.2 / 61.4});
    CHECK(render_table(doc, TableFormat::Csv, 1) == "country,ratio\nCHE,4.0\n");
    CHECK(std::get<double>(doc.rows[0][1]) == 247.2 / 61.4);
    const auto j = nlohmann::json::parse(render_table(doc, TableFormat::Json, 1));
    CHECK(j["rows"][0][1].get<double>() == 4.0);
}

TEST_CASE("table: non-finite doubles become strings") {
    TableDoc doc{"t", {"a", "b", "c"}, {}};
    doc.add_row({std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), std::nan("")});
    CHECK(render_table(doc, TableFormat::Csv) == "a,b,c\ninf,-inf,nan\n");
    const auto j = nlohmann::json::parse(render_table(doc, TableFormat::Json));
    CHECK(j["rows"][0][0] == "inf");
    CHECK(j["rows"][0][2] == "nan");
}

TEST_CASE("emit_table writes and reports io errors") {
    TempDir dir;
    const auto doc = sample_doc();
    emit_table(doc, TableFormat::Csv, dir / "sub/t.csv");
    CHECK(testio::read_file(dir / "sub/t.csv") == render_table(doc, TableFormat::Csv));
    testio::write_file(dir / "blocker", "x");
    try {
        emit_table(doc, TableFormat::Csv, dir / "blocker/t.csv");
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IoError);
    }
}

TEST_CASE("plot frame maps and inverts") {
    const auto f = PlotFrame::around(0.0, 100.0, -50.0, 50.0);
    CHECK(f.x_min == doctest::Approx(-5.0));
    CHECK(f.x_max == doctest::Approx(105.0));
    CHECK(f.px(f.x_min) == doctest::Approx(PlotFrame::kLeft));
    CHECK(f.py(f.y_min) == doctest::Approx(PlotFrame::kBottom));
    for (double v : {-3.0, 0.0, 42.0}) {
        CHECK(f.data_x(f.px(v)) == doctest::Approx(v));
        CHECK(f.data_y(f.py(v)) == doctest::Approx(v));
    }
}

TEST_CASE("scatter: one marker per point") {
    const std::vector<Point> pts{{1, 2}, {2, 3}, {3, 5}, {4, 4}, {5, 6}};
    const auto svg = scatter_svg(pts, std::nullopt, {"t", "x", "y"});
    CHECK(elements(svg, "circle").size() == 5);
    CHECK(elements(svg, "line").empty());
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("scatter: fit line endpoints lie on the fitted line") {
    std::vector<Point> pts;
    std::vector<double> xs, ys;
    for (int i = 0; i < 61; ++i) {
        const double x = 7400.0 + 320.0 * i;
        const double y = 185.3 + 0.016 * x + 200.0 * std::sin(i * 1.7);
        pts.push_back({x, y});
        xs.push_back(x);
        ys.push_back(y);
    }
    const auto fit = stats::ols_fit(xs, ys);
    const auto svg = scatter_svg(pts, fit, {"Australia", "GDP per capita", "annual increment"});
    CHECK(elements(svg, "circle").size() == 61);
    const auto lines = elements(svg, "line");
    REQUIRE(lines.size() == 1);

    // same extent rule as the renderer: data plus the fit at both x ends
    double y_lo = *std::min_element(ys.begin(), ys.end()), y_hi = *std::max_element(ys.begin(), ys.end());
    for (double x : {xs.front(), xs.back()}) {
        y_lo = std::min(y_lo, fit.predict(x));
        y_hi = std::max(y_hi, fit.predict(x));
    }
    const auto frame = PlotFrame::around(xs.front(), xs.back(), y_lo, y_hi);
    for (const char* end : {"1", "2"}) {
        const double px = num(lines[0], std::string("x") + end);
        const double py = num(lines[0], std::string("y") + end);
        CHECK(std::abs(frame.py(fit.predict(frame.data_x(px))) - py) <= 0.5);
    }
    CHECK(std::abs(num(lines[0], "x1") - frame.px(xs.front())) <= 0.01);
    CHECK(std::abs(num(lines[0], "x2") - frame.px(xs.back())) <= 0.01);
    CHECK(svg.find("0.016") != std::string::npos);
    CHECK(svg.find(">" + fit_equation(fit) + "<") != std::string::npos);
}

TEST_CASE("fit equation text") {
    stats::OlsFit f;
    f.slope = 0.0159;
    f.intercept = 185.26;
    CHECK(fit_equation(f) == "y = 0.016x + 185.3");
    f.intercept = -2.0;
    CHECK(fit_equation(f) == "y = 0.016x - 2.0");
}

TEST_CASE("scatter: empty input") {
    try {
        (void)scatter_svg({}, std::nullopt, {});
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyInput);
    }
}

TEST_CASE("histogram svg: single bin spans its interval") {
    const std::vector<double> xs{0.0};
    const auto h = stats::histogram(xs, 200.0);
    const auto svg = histogram_svg(h, nullptr, {"t", "x", "count"});
    std::vector<std::map<std::string, std::string>> bars;
    for (auto& r : elements(svg, "rect")) {
        if (r["class"] == "bar") bars.push_back(r);
    }
    REQUIRE(bars.size() == 1);
    auto frame = PlotFrame::around(0.0, 200.0, 0.0, 1.0);
    frame.y_min = 0.0;
    CHECK(num(bars[0], "x") == doctest::Approx(frame.px(0.0)).epsilon(1e-3));
    CHECK(num(bars[0], "x") + num(bars[0], "width") == doctest::Approx(frame.px(200.0)).epsilon(1e-3));
}

TEST_CASE("histogram svg: bar heights follow counts") {
    const std::vector<double> xs{-250, -50, 10, 199, 450};
    const auto svg = histogram_svg(stats::histogram(xs, 200.0), nullptr, {});
    std::vector<double> heights, counts;
    for (auto& r : elements(svg, "rect")) {
        if (r["class"] != "bar") continue;
        heights.push_back(num(r, "height"));
        counts.push_back(num(r, "data-count"));
    }
    CHECK(counts == std::vector<double>{1, 1, 2, 1});
    for (std::size_t i = 0; i < heights.size(); ++i) {
        CHECK(heights[i] / counts[i] == doctest::Approx(heights[0] / counts[0]).epsilon(1e-3));
    }
}

TEST_CASE("histogram svg: overlay is a second series, output is deterministic") {
    const std::vector<double> xs{120, 330, 300, 290, 510, 250};
    std::vector<double> demeaned;
    for (double x : xs) demeaned.push_back(x - 300.0);
    const auto a = stats::histogram(xs, 200.0);
    const auto b = stats::histogram(demeaned, 200.0);
    const auto svg = histogram_svg(a, &b, {"t", "x", "y", "original", "demeaned"});
    CHECK(count_of(svg, R"(class="series s0")") == 1);
    CHECK(count_of(svg, R"(class="series s1")") == 1);
    CHECK(count_of(svg, R"(class="bar")") == a.counts.size() + b.counts.size());
    CHECK(svg.find(">demeaned<") != std::string::npos);
    CHECK(histogram_svg(a, &b, {"t", "x", "y", "original", "demeaned"}) == svg);

    try {
        (void)histogram_svg(stats::Histogram{200.0, 0.0, {}}, nullptr, {});
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyInput);
    }
}

TEST_CASE("render functions write what the string builders return") {
    TempDir dir;
    const std::vector<Point> pts{{1, 2}, {3, 4}};
    render_scatter(pts, std::nullopt, dir / "a/s.svg", {});
    CHECK(testio::read_file(dir / "a/s.svg") == scatter_svg(pts, std::nullopt, {}));
    const std::vector<double> xs{1, 2, 3};
    const auto h = stats::histogram(xs, 1.0);
    render_histogram(h, nullptr, dir / "h.svg", {});
    CHECK(testio::read_file(dir / "h.svg") == histogram_svg(h, nullptr, {}));
}

TEST_CASE("labels are xml-escaped") {
    const std::vector<Point> pts{{1, 2}};
    const auto svg = scatter_svg(pts, std::nullopt, {"A & B <c>", "x", "y"});
    CHECK(svg.find("A &amp; B &lt;c&gt;") != std::string::npos);
}
