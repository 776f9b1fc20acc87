#include "inertia/data_core.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "inertia/error.hpp"

namespace inertia {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::MissingFile: return "MissingFile";
        case ErrorKind::MalformedHeader: return "MalformedHeader";
        case ErrorKind::UnparsableRow: return "UnparsableRow";
        case ErrorKind::RaggedRow: return "RaggedRow";
        case ErrorKind::DuplicateObservation: return "DuplicateObservation";
        case ErrorKind::EmptyDataset: return "EmptyDataset";
        case ErrorKind::GapInSegment: return "GapInSegment";
        case ErrorKind::SegmentNotCovered: return "SegmentNotCovered";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::TooFewPoints: return "TooFewPoints";
        case ErrorKind::ZeroVarianceX: return "ZeroVarianceX";
        case ErrorKind::NonFiniteInput: return "NonFiniteInput";
        case ErrorKind::InvalidDf: return "InvalidDf";
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::SampleTooSmall: return "SampleTooSmall";
        case ErrorKind::SampleTooLarge: return "SampleTooLarge";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::NonPositiveBinWidth: return "NonPositiveBinWidth";
        case ErrorKind::NonPositiveLevel: return "NonPositiveLevel";
        case ErrorKind::YearBeforeStart: return "YearBeforeStart";
        case ErrorKind::CohortNotCovered: return "CohortNotCovered";
        case ErrorKind::InvalidParameter: return "InvalidParameter";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

namespace {

struct KnownCountry {
    std::string_view code;
    std::string_view name;
};

constexpr std::array kKnownCountries{
    KnownCountry{"AUS", "Australia"},      KnownCountry{"AUT", "Austria"},
    KnownCountry{"BEL", "Belgium"},        KnownCountry{"CAN", "Canada"},
    KnownCountry{"CHE", "Switzerland"},    KnownCountry{"ESP", "Spain"},
    KnownCountry{"FRA", "France"},         KnownCountry{"GBR", "United Kingdom"},
    KnownCountry{"ITA", "Italy"},          KnownCountry{"JPN", "Japan"},
    KnownCountry{"NLD", "Netherlands"},    KnownCountry{"SWE", "Sweden"},
    KnownCountry{"USA", "United States"},
};

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(c >= 'a' && c <= 'z' ? c - 'a' + 'A' : c);
    });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

std::optional<int> parse_int(std::string_view s) {
    int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::optional<double> parse_positive(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    if (!std::isfinite(v) || v <= 0.0) return std::nullopt;
    return v;
}

/// Reads a whole text file into lines; strips a UTF-8 BOM and trailing blank lines.
std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::MissingFile, path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    if (!lines.empty() && lines.front().starts_with("\xEF\xBB\xBF")) lines.front().erase(0, 3);
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

std::string line_ref(const std::filesystem::path& path, std::size_t index) {
    return path.filename().string() + " line " + std::to_string(index + 1);
}

using Grouped = std::map<std::string, std::map<int, double>>;

void insert(Grouped& groups, const std::string& code, int year, double value) {
    auto [it, inserted] = groups[code].emplace(year, value);
    if (!inserted) {
        throw Error(ErrorKind::DuplicateObservation, code + " " + std::to_string(year));
    }
}

Dataset build(const Grouped& groups, std::string_view basis, const std::filesystem::path& path) {
    Dataset ds(path.filename().string());
    for (const auto& [code, rows] : groups) {
        if (rows.empty()) continue;
        std::vector<Observation> obs;
        obs.reserve(rows.size());
        for (const auto& [year, value] : rows) obs.push_back({year, value});
        ds.add(GdpSeries(make_country(code), std::string(basis), std::move(obs)));
    }
    if (ds.empty()) throw Error(ErrorKind::EmptyDataset, path.string());
    return ds;
}

void check_increasing(std::span<const Observation> obs, const std::string& code) {
    for (std::size_t i = 1; i < obs.size(); ++i) {
        if (obs[i].year <= obs[i - 1].year) {
            throw Error(ErrorKind::DuplicateObservation,
                        code + " years not strictly increasing at " + std::to_string(obs[i].year));
        }
    }
    for (const auto& o : obs) {
        if (!std::isfinite(o.value) || o.value <= 0.0) {
            throw Error(ErrorKind::NonFiniteInput,
                        code + " " + std::to_string(o.year) + " value must be finite and positive");
        }
    }
}

}  // namespace

CountryId make_country(std::string_view raw_code) {
    CountryId id{upper(trim(raw_code)), {}};
    if (id.code.empty()) throw Error(ErrorKind::InvalidParameter, "empty country code");
    const auto it = std::find_if(kKnownCountries.begin(), kKnownCountries.end(),
                                 [&](const KnownCountry& k) { return k.code == id.code; });
    id.display_name = it != kKnownCountries.end() ? std::string(it->name) : id.code;
    return id;
}

// GdpSeries ------------------------------------------------------------------

GdpSeries::GdpSeries(CountryId country, std::string basis, std::vector<Observation> observations)
    : country_(std::move(country)), basis_(std::move(basis)), obs_(std::move(observations)) {
    if (country_.code.empty()) throw Error(ErrorKind::InvalidParameter, "empty country code");
    check_increasing(obs_, country_.code);
}

int GdpSeries::first_year() const {
    if (obs_.empty()) throw Error(ErrorKind::EmptyInput, country_.code + " has no observations");
    return obs_.front().year;
}

int GdpSeries::last_year() const {
    if (obs_.empty()) throw Error(ErrorKind::EmptyInput, country_.code + " has no observations");
    return obs_.back().year;
}

std::optional<double> GdpSeries::value_at(int year) const {
    const auto it = std::lower_bound(obs_.begin(), obs_.end(), year,
                                     [](const Observation& o, int y) { return o.year < y; });
    if (it == obs_.end() || it->year != year) return std::nullopt;
    return it->value;
}

std::vector<int> GdpSeries::years() const {
    std::vector<int> out;
    out.reserve(obs_.size());
    for (const auto& o : obs_) out.push_back(o.year);
    return out;
}

std::vector<double> GdpSeries::values() const {
    std::vector<double> out;
    out.reserve(obs_.size());
    for (const auto& o : obs_) out.push_back(o.value);
    return out;
}

// CohortSeries ---------------------------------------------------------------

CohortSeries::CohortSeries(CountryId country, std::vector<Observation> observations)
    : country_(std::move(country)), obs_(std::move(observations)) {
    check_increasing(obs_, country_.code);
    for (std::size_t i = 1; i < obs_.size(); ++i) {
        if (obs_[i].year != obs_[i - 1].year + 1) {
            throw Error(ErrorKind::GapInSegment,
                        country_.code + " cohort missing year " + std::to_string(obs_[i - 1].year + 1));
        }
    }
}

std::optional<double> CohortSeries::value_at(int year) const {
    if (obs_.empty() || year < obs_.front().year || year > obs_.back().year) return std::nullopt;
    return obs_[static_cast<std::size_t>(year - obs_.front().year)].value;
}

bool CohortSeries::covers(int first, int last) const {
    return !obs_.empty() && obs_.front().year <= first && obs_.back().year >= last;
}

// Segments -------------------------------------------------------------------

std::string_view to_string(SegmentLabel label) noexcept {
    switch (label) {
        case SegmentLabel::Pre: return "PRE";
        case SegmentLabel::Post: return "POST";
        case SegmentLabel::Custom: return "CUSTOM";
    }
    return "CUSTOM";
}

SegmentSpec SegmentSpec::pre() { return make(SegmentLabel::Pre, {1870, 1940}, {1871, 1940}); }

SegmentSpec SegmentSpec::post() { return make(SegmentLabel::Post, {1950, 2011}, {1951, 2011}); }

SegmentSpec SegmentSpec::make(SegmentLabel label, YearRange levels, YearRange increments) {
    if (levels.first > levels.last || increments.first > increments.last) {
        throw Error(ErrorKind::InvalidParameter, "segment year range is empty");
    }
    if (increments.first - 1 < levels.first || increments.last > levels.last) {
        throw Error(ErrorKind::InvalidParameter,
                    "increment years " + std::to_string(increments.first) + "-" +
                        std::to_string(increments.last) + " need levels " +
                        std::to_string(increments.first - 1) + "-" + std::to_string(increments.last));
    }
    return SegmentSpec{label, levels, increments};
}

GdpSeries slice_segment(const GdpSeries& series, const SegmentSpec& seg) {
    const auto& code = series.country().code;
    const auto range = seg.level_years;
    if (series.empty() || series.first_year() > range.first || series.last_year() < range.last) {
        throw Error(ErrorKind::SegmentNotCovered,
                    code + " does not cover " + std::string(to_string(seg.label)) + " levels " +
                        std::to_string(range.first) + "-" + std::to_string(range.last));
    }
    std::vector<Observation> kept;
    kept.reserve(static_cast<std::size_t>(range.length()));
    int expected = range.first;
    for (const auto& o : series.observations()) {
        if (!range.contains(o.year)) continue;
        if (o.year != expected) {
            throw Error(ErrorKind::GapInSegment, code + " " + std::string(to_string(seg.label)) + " missing year " +
                                                     std::to_string(expected));
        }
        kept.push_back(o);
        ++expected;
    }
    return GdpSeries(series.country(), series.basis(), std::move(kept));
}

// Dataset --------------------------------------------------------------------

void Dataset::add(GdpSeries series) {
    const auto key = [](const GdpSeries& s) { return std::tie(s.country().code, s.basis()); };
    const auto pos = std::lower_bound(series_.begin(), series_.end(), series,
                                      [&](const GdpSeries& a, const GdpSeries& b) { return key(a) < key(b); });
    if (pos != series_.end() && key(*pos) == key(series)) {
        throw Error(ErrorKind::DuplicateObservation,
                    "second series for " + series.country().code + " in basis " + series.basis());
    }
    series_.insert(pos, std::move(series));
}

void Dataset::add_cohort(CohortSeries cohort) {
    const auto pos = std::lower_bound(cohorts_.begin(), cohorts_.end(), cohort,
                                      [](const CohortSeries& a, const CohortSeries& b) {
                                          return a.country().code < b.country().code;
                                      });
    if (pos != cohorts_.end() && pos->country().code == cohort.country().code) {
        throw Error(ErrorKind::DuplicateObservation, "second cohort series for " + cohort.country().code);
    }
    cohorts_.insert(pos, std::move(cohort));
}

const GdpSeries* Dataset::find(std::string_view code) const {
    const auto wanted = upper(code);
    for (const auto& s : series_) {
        if (s.country().code == wanted) return &s;
    }
    return nullptr;
}

const CohortSeries* Dataset::find_cohort(std::string_view code) const {
    const auto wanted = upper(code);
    for (const auto& c : cohorts_) {
        if (c.country().code == wanted) return &c;
    }
    return nullptr;
}

Dataset Dataset::select(std::span<const std::string> codes) const {
    Dataset out(provenance_);
    for (const auto& raw : codes) {
        const auto code = upper(raw);
        bool found = false;
        for (const auto& s : series_) {
            if (s.country().code == code) {
                out.add(s);
                found = true;
            }
        }
        if (!found) throw Error(ErrorKind::SegmentNotCovered, code + " not present in dataset");
        if (const auto* c = find_cohort(code)) out.add_cohort(*c);
    }
    return out;
}

Dataset combine_eras(const Dataset& early, const Dataset& late, int cutover) {
    Dataset out(early.provenance() + "+" + late.provenance());
    std::map<std::string, std::pair<const GdpSeries*, const GdpSeries*>> by_code;
    for (const auto& s : early.series()) by_code[s.country().code].first = &s;
    for (const auto& s : late.series()) by_code[s.country().code].second = &s;
    for (const auto& [code, pair] : by_code) {
        const auto [e, l] = pair;
        if (e == nullptr || l == nullptr) {
            out.add(e != nullptr ? *e : *l);
            continue;
        }
        std::vector<Observation> obs;
        for (const auto& o : e->observations()) {
            if (o.year < cutover) obs.push_back(o);
        }
        for (const auto& o : l->observations()) {
            if (o.year >= cutover) obs.push_back(o);
        }
        const auto basis = e->basis() == l->basis() ? e->basis() : e->basis() + "/" + l->basis();
        out.add(GdpSeries(l->country(), basis, std::move(obs)));
    }
    for (const auto* src : {&early, &late}) {
        for (const auto& c : src->cohorts()) {
            if (out.find_cohort(c.country().code) == nullptr) out.add_cohort(c);
        }
    }
    return out;
}

// CSV I/O --------------------------------------------------------------------

Dataset load_long_csv(const std::filesystem::path& path, std::string_view basis) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw Error(ErrorKind::MalformedHeader, path.string() + " is empty");
    const auto header = split(lines.front());
    if (header != std::vector<std::string_view>{"country", "year", "gdp_pc"}) {
        throw Error(ErrorKind::MalformedHeader, "expected `country,year,gdp_pc` in " + path.string());
    }
    Grouped groups;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i]);
        if (cells.size() != 3 || cells[0].empty()) {
            throw Error(ErrorKind::UnparsableRow, line_ref(path, i));
        }
        const auto year = parse_int(cells[1]);
        const auto value = parse_positive(cells[2]);
        if (!year || !value) throw Error(ErrorKind::UnparsableRow, line_ref(path, i));
        insert(groups, upper(cells[0]), *year, *value);
    }
    return build(groups, basis, path);
}

Dataset load_wide_csv(const std::filesystem::path& path, std::string_view basis) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw Error(ErrorKind::MalformedHeader, path.string() + " is empty");
    const auto header = split(lines.front());
    if (header.size() < 2 || header.front() != "year") {
        throw Error(ErrorKind::MalformedHeader, "expected `year,<code>,...` in " + path.string());
    }
    std::vector<std::string> codes;
    for (std::size_t c = 1; c < header.size(); ++c) {
        auto code = upper(header[c]);
        if (code.empty() || std::find(codes.begin(), codes.end(), code) != codes.end()) {
            throw Error(ErrorKind::MalformedHeader, "empty or repeated country column `" + code + "`");
        }
        codes.push_back(std::move(code));
    }
    Grouped groups;
    for (const auto& code : codes) groups[code];
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i]);
        if (cells.size() != header.size()) throw Error(ErrorKind::RaggedRow, line_ref(path, i));
        const auto year = parse_int(cells[0]);
        if (!year) throw Error(ErrorKind::UnparsableRow, line_ref(path, i));
        for (std::size_t c = 1; c < cells.size(); ++c) {
            if (cells[c].empty()) continue;
            const auto value = parse_positive(cells[c]);
            if (!value) throw Error(ErrorKind::UnparsableRow, line_ref(path, i));
            insert(groups, codes[c - 1], *year, *value);
        }
    }
    return build(groups, basis, path);
}

std::vector<CohortSeries> load_cohort_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw Error(ErrorKind::MalformedHeader, path.string() + " is empty");
    if (split(lines.front()) != std::vector<std::string_view>{"country", "year", "population"}) {
        throw Error(ErrorKind::MalformedHeader, "expected `country,year,population` in " + path.string());
    }
    Grouped groups;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i]);
        if (cells.size() != 3 || cells[0].empty()) throw Error(ErrorKind::UnparsableRow, line_ref(path, i));
        const auto year = parse_int(cells[1]);
        const auto value = parse_positive(cells[2]);
        if (!year || !value) throw Error(ErrorKind::UnparsableRow, line_ref(path, i));
        insert(groups, upper(cells[0]), *year, *value);
    }
    std::vector<CohortSeries> out;
    for (const auto& [code, rows] : groups) {
        std::vector<Observation> obs;
        for (const auto& [year, value] : rows) obs.push_back({year, value});
        out.emplace_back(make_country(code), std::move(obs));
    }
    if (out.empty()) throw Error(ErrorKind::EmptyDataset, path.string());
    return out;
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return ec == std::errc{} ? std::string(buf.data(), ptr) : std::string("nan");
}

void write_long_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << "country,year,gdp_pc\n";
    for (const auto& s : ds.series()) {
        for (const auto& o : s.observations()) {
            out << s.country().code << ',' << o.year << ',' << format_double(o.value) << '\n';
        }
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace inertia
