#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "inertia/error.hpp"
#include "inertia/report.hpp"

namespace inertia::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        config_error(where + "." + key + ": " + e.what());
    }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) config_error(where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!ok.contains(key)) config_error("unknown key `" + where + "." + key + "`");
    }
}

DataSource parse_source(const json& j, const fs::path& base, const std::string& where) {
    check_keys(j, {"path", "format", "basis"}, where);
    DataSource src;
    src.path = resolve(base, get<std::string>(j, "path", where));
    const auto format = j.contains("format") ? get<std::string>(j, "format", where) : std::string("long");
    if (format == "long") {
        src.layout = CsvLayout::Long;
    } else if (format == "wide") {
        src.layout = CsvLayout::Wide;
    } else {
        config_error(where + ".format must be `long` or `wide`");
    }
    if (j.contains("basis")) src.basis = get<std::string>(j, "basis", where);
    return src;
}

SegmentSpec parse_segment(const json& j, SegmentLabel label, const std::string& where) {
    check_keys(j, {"levels", "increments"}, where);
    const auto levels = get<std::array<int, 2>>(j, "levels", where);
    std::array<int, 2> incs{levels[0] + 1, levels[1]};
    if (j.contains("increments")) incs = get<std::array<int, 2>>(j, "increments", where);
    try {
        return SegmentSpec::make(label, {levels[0], levels[1]}, {incs[0], incs[1]});
    } catch (const Error& e) {
        config_error(where + ": " + e.what());
    }
}

void parse_simulate(const json& j, const fs::path& base, SimSettings& sim) {
    check_keys(j,
               {"A", "C", "t0", "years", "cohort_factor", "noise_sigma", "seed", "linearize", "recover", "trials",
                "cohort"},
               "simulate");
    if (j.contains("A")) sim.params.increment = get<double>(j, "A", "simulate");
    if (j.contains("C")) sim.params.initial_level = get<double>(j, "C", "simulate");
    if (j.contains("t0")) sim.params.start_year = get<int>(j, "t0", "simulate");
    if (j.contains("cohort_factor")) sim.params.cohort_factor = get<double>(j, "cohort_factor", "simulate");
    if (j.contains("years")) sim.years = get<int>(j, "years", "simulate");
    if (j.contains("noise_sigma")) sim.noise_sigma = get<double>(j, "noise_sigma", "simulate");
    if (j.contains("seed")) sim.seed = get<std::uint64_t>(j, "seed", "simulate");
    if (j.contains("linearize")) sim.linearize = get<bool>(j, "linearize", "simulate");
    if (j.contains("recover")) sim.recover = get<bool>(j, "recover", "simulate");
    if (j.contains("trials")) sim.trials = get<int>(j, "trials", "simulate");
    if (j.contains("cohort")) {
        const auto& c = j.at("cohort");
        check_keys(c, {"path", "country"}, "simulate.cohort");
        sim.cohort_path = resolve(base, get<std::string>(c, "path", "simulate.cohort"));
        sim.cohort_country = get<std::string>(c, "country", "simulate.cohort");
    }
}

Dataset load_source(const DataSource& src) {
    return src.layout == CsvLayout::Wide ? load_wide_csv(src.path, src.basis) : load_long_csv(src.path, src.basis);
}

report::Cell cell(double v) { return v; }
report::Cell cell(std::size_t v) { return static_cast<long long>(v); }
report::Cell cell(const std::string& s) { return s; }

void emit_both(const report::TableDoc& doc, const fs::path& stem, std::optional<int> round_digits) {
    report::emit_table(doc, report::TableFormat::Csv, fs::path(stem).replace_extension(".csv"), round_digits);
    report::emit_table(doc, report::TableFormat::Json, fs::path(stem).replace_extension(".json"), round_digits);
}

void prepare_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::IoError, "cannot create output directory " + dir.string());
}

std::string segment_name(const SegmentSpec& seg) {
    return std::string(to_string(seg.label)) + " " + std::to_string(seg.increment_years.first) + "-" +
           std::to_string(seg.increment_years.last);
}

report::TableDoc regression_doc(const std::string& name, const std::string& regressor,
                                const std::vector<std::pair<SegmentSpec, std::vector<IncrementRegressionRow>>>& parts) {
    report::TableDoc doc{name,
                         {"country", "name", "segment", "regressor", "slope", "slope_se", "t_stat", "p_value",
                          "r_squared", "n", "degenerate"},
                         {}};
    for (const auto& [seg, rows] : parts) {
        for (const auto& r : rows) {
            doc.add_row({r.country.code, r.country.display_name, std::string(to_string(seg.label)), regressor,
                         r.fit.slope, r.fit.slope_se, r.fit.t_stat, r.fit.p_value, r.fit.r_squared, cell(r.fit.n),
                         r.fit.degenerate});
        }
    }
    return doc;
}

std::string fixed1(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::vector<report::Point> to_points(std::span<const double> xs, std::span<const double> ys) {
    std::vector<report::Point> pts;
    pts.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) pts.push_back({xs[i], ys[i]});
    return pts;
}

}  // namespace

std::vector<std::string> default_countries() {
    return {"AUS", "AUT", "BEL", "CAN", "CHE", "ESP", "FRA", "GBR", "ITA", "JPN", "NLD", "SWE", "USA"};
}

void RunConfig::validate() const {
    if (!(bin_width > 0.0)) config_error("bin width must be positive");
    if (!(trim > 0.0)) config_error("trim threshold must be positive");
    if (round_digits && (*round_digits < 0 || *round_digits > 15)) config_error("round must be in 0..15");
    if (data && (pre || post)) config_error("use either `data` or `pre`/`post`, not both");
    if ((pre && !post) || (!pre && post)) config_error("`pre` and `post` sources must be given together");
    if (countries && countries->empty()) config_error("country list is empty");
    if (out_dir.empty()) config_error("output directory is empty");
    if (sim.years < 1) config_error("simulate.years must be >= 1");
    if (sim.trials < 1) config_error("simulate.trials must be >= 1");
    if (!(sim.noise_sigma >= 0.0)) config_error("simulate.noise_sigma must be >= 0");
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot read config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        config_error(path.string() + ": " + e.what());
    }
    check_keys(j,
               {"data", "pre", "post", "cutover", "cohorts", "countries", "segments", "bin_width", "trim", "round",
                "out", "level_timing", "simulate"},
               "config");
    const auto base = path.parent_path();
    RunConfig cfg;
    if (const char* env = std::getenv("INERTIA_OUT"); env != nullptr && *env != '\0') cfg.out_dir = env;
    if (j.contains("data")) cfg.data = parse_source(j.at("data"), base, "data");
    if (j.contains("pre")) cfg.pre = parse_source(j.at("pre"), base, "pre");
    if (j.contains("post")) cfg.post = parse_source(j.at("post"), base, "post");
    if (j.contains("cutover")) cfg.cutover = get<int>(j, "cutover", "config");
    if (j.contains("cohorts")) cfg.cohorts = resolve(base, get<std::string>(j, "cohorts", "config"));
    if (j.contains("countries")) {
        const auto& c = j.at("countries");
        if (c.is_string() && c.get<std::string>() == "all") {
            cfg.countries.reset();
        } else {
            cfg.countries = get<std::vector<std::string>>(j, "countries", "config");
        }
    }
    if (j.contains("segments")) {
        const auto& s = j.at("segments");
        check_keys(s, {"pre", "post"}, "segments");
        if (s.contains("pre")) cfg.pre_segment = parse_segment(s.at("pre"), SegmentLabel::Pre, "segments.pre");
        if (s.contains("post")) cfg.post_segment = parse_segment(s.at("post"), SegmentLabel::Post, "segments.post");
    }
    if (j.contains("bin_width")) cfg.bin_width = get<double>(j, "bin_width", "config");
    if (j.contains("trim")) cfg.trim = get<double>(j, "trim", "config");
    if (j.contains("round")) cfg.round_digits = get<int>(j, "round", "config");
    if (j.contains("out")) cfg.out_dir = resolve(base, get<std::string>(j, "out", "config"));
    if (j.contains("level_timing")) {
        const auto t = parse_level_timing(get<std::string>(j, "level_timing", "config"));
        if (!t) config_error("level_timing must be `previous` or `current`");
        cfg.level_timing = *t;
    }
    if (j.contains("simulate")) parse_simulate(j.at("simulate"), base, cfg.sim);
    cfg.validate();
    return cfg;
}

Dataset load_dataset(const RunConfig& cfg) {
    Dataset ds;
    if (cfg.data) {
        ds = load_source(*cfg.data);
    } else if (cfg.pre && cfg.post) {
        ds = combine_eras(load_source(*cfg.pre), load_source(*cfg.post),
                          cfg.cutover.value_or(cfg.post_segment.level_years.first));
    } else {
        config_error("no data source configured (need `data` or `pre` + `post`)");
    }
    if (cfg.cohorts) {
        for (auto& c : load_cohort_csv(*cfg.cohorts)) ds.add_cohort(std::move(c));
    }
    if (cfg.countries) ds = ds.select(*cfg.countries);
    return ds;
}

// analyze ---------------------------------------------------------------------

void run_analyze(const RunConfig& cfg, std::ostream& log) {
    const auto ds = load_dataset(cfg);
    const auto& pre = cfg.pre_segment;
    const auto& post = cfg.post_segment;

    // All computation happens before anything is written so a failing
    // country leaves no partial output tree.
    const auto breaks = break_table(ds, pre, post);
    const auto means = mean_increment_table(ds, pre, post);
    const auto level_pre = increment_regression_table(ds, pre, Regressor::Level, cfg.level_timing);
    const auto level_post = increment_regression_table(ds, post, Regressor::Level, cfg.level_timing);
    const auto time_pre = increment_regression_table(ds, pre, Regressor::Time);
    const auto time_post = increment_regression_table(ds, post, Regressor::Time);

    prepare_out_dir(cfg.out_dir);

    report::TableDoc t1{"table1_breaks",
                        {"country", "name", "post_slope", "post_se", "pre_slope", "pre_se", "ratio", "post_n", "pre_n"},
                        {}};
    for (const auto& r : breaks) {
        t1.add_row({r.country.code, r.country.display_name, r.post.slope, r.post.slope_se, r.pre.slope,
                    r.pre.slope_se, r.ratio, cell(r.post.n), cell(r.pre.n)});
    }
    emit_both(t1, cfg.out_dir / "table1", cfg.round_digits);

    report::TableDoc t2{"table2_mean_increments",
                        {"country", "name", "pre_mean", "pre_std_dev", "post_mean", "post_std_dev", "ratio", "pre_n",
                         "post_n"},
                        {}};
    for (const auto& r : means) {
        t2.add_row({r.country.code, r.country.display_name, r.pre.mean, r.pre.std_dev, r.post.mean, r.post.std_dev,
                    r.ratio, cell(r.pre.n), cell(r.post.n)});
    }
    emit_both(t2, cfg.out_dir / "table2", cfg.round_digits);

    const std::string level_name = "level_" + std::string(to_string(cfg.level_timing));
    emit_both(regression_doc("table3_increment_vs_level", level_name, {{pre, level_pre}, {post, level_post}}),
              cfg.out_dir / "table3", cfg.round_digits);
    emit_both(regression_doc("table4_increment_vs_time", "year", {{pre, time_pre}, {post, time_post}}),
              cfg.out_dir / "table4", cfg.round_digits);

    const auto fig_dir = cfg.out_dir / "figures";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& s = ds.series()[i];
        const auto& name = s.country().display_name;

        const auto inc_post = annual_increments(s, post);
        const auto xs = cfg.level_timing == LevelTiming::Previous ? inc_post.prior_levels() : inc_post.levels();
        report::render_scatter(to_points(xs, inc_post.deltas()), level_post[i].fit,
                               fig_dir / (s.country().code + "_post_vs_level.svg"),
                               {name + ": annual increment vs level, " + segment_name(post),
                                "real GDP per capita, " + s.basis(), "annual increment, " + s.basis()});

        const auto inc_pre = annual_increments(s, pre);
        report::render_scatter(to_points(inc_pre.years(), inc_pre.deltas()), time_pre[i].fit,
                               fig_dir / (s.country().code + "_pre_vs_time.svg"),
                               {name + ": annual increment vs time, " + segment_name(pre), "year",
                                "annual increment, " + s.basis()});
    }

    log << "analyzed " << ds.size() << " countries -> " << cfg.out_dir.string() << '\n';
    for (const auto& r : breaks) {
        log << "  " << r.country.code << "  level slope post " << fixed1(r.post.slope) << " pre " << fixed1(r.pre.slope)
            << " ratio " << fixed1(r.ratio) << '\n';
    }
}

// normality -------------------------------------------------------------------

std::vector<NormalitySummary> run_normality(const RunConfig& cfg, std::ostream& log) {
    const auto ds = load_dataset(cfg);
    std::vector<NormalitySummary> out;
    std::vector<std::pair<PooledResiduals, SegmentSpec>> pooled;
    for (const auto& seg : {cfg.post_segment, cfg.pre_segment}) {
        auto p = demean_and_pool(ds, seg, cfg.trim);
        NormalitySummary s;
        s.segment = seg.label;
        s.n = p.demeaned.size();
        s.before = stats::shapiro_francia(p.demeaned);
        s.n_trimmed = p.n_trimmed;
        s.after = stats::shapiro_francia(p.values);
        out.push_back(s);
        pooled.emplace_back(std::move(p), seg);
    }

    prepare_out_dir(cfg.out_dir);
    report::TableDoc doc{"normality",
                         {"segment", "n", "w_before", "p_before", "trim", "n_trimmed", "n_after", "w_after", "p_after"},
                         {}};
    for (const auto& s : out) {
        doc.add_row({std::string(to_string(s.segment)), cell(s.n), s.before.w_stat, s.before.p_value, cfg.trim,
                     cell(s.n_trimmed), cell(s.after.n), s.after.w_stat, s.after.p_value});
    }
    emit_both(doc, cfg.out_dir / "normality", cfg.round_digits);

    for (const auto& [p, seg] : pooled) {
        const auto original = stats::histogram(p.raw, cfg.bin_width);
        const auto demeaned = stats::histogram(p.demeaned, cfg.bin_width);
        const std::string tag = seg.label == SegmentLabel::Post ? "post" : "pre";

        report::TableDoc h{"histogram_" + tag, {"bin_lower", "bin_upper", "original", "demeaned"}, {}};
        std::set<long long> bins;
        for (const auto& [k, c] : original.counts) bins.insert(k);
        for (const auto& [k, c] : demeaned.counts) bins.insert(k);
        for (long long k : bins) {
            const auto count = [k](const stats::Histogram& hh) {
                const auto it = hh.counts.find(k);
                return static_cast<long long>(it == hh.counts.end() ? 0 : it->second);
            };
            h.add_row({original.lower_edge(k), original.lower_edge(k + 1), count(original), count(demeaned)});
        }
        emit_both(h, cfg.out_dir / ("histogram_" + tag), cfg.round_digits);
        report::render_histogram(original, &demeaned, cfg.out_dir / ("histogram_" + tag + ".svg"),
                                 {"Annual increments " + segment_name(seg) + ": original and demeaned",
                                  "annual increment, $", "count", "original", "demeaned"});
    }

    for (const auto& s : out) {
        log << to_string(s.segment) << ": n=" << s.n << " W'=" << format_double(s.before.w_stat)
            << " p=" << format_double(s.before.p_value) << "; trimmed " << s.n_trimmed << " beyond +-"
            << format_double(cfg.trim) << " -> W'=" << format_double(s.after.w_stat)
            << " p=" << format_double(s.after.p_value) << '\n';
    }
    return out;
}

// simulate --------------------------------------------------------------------

void run_simulate(const RunConfig& cfg, std::ostream& log) {
    const auto& st = cfg.sim;
    SimConfig sim;
    sim.params = st.params;
    sim.years = st.years;
    sim.noise_sigma = st.noise_sigma;
    sim.seed = st.seed;
    sim.linearize = st.linearize;
    if (st.cohort_path) {
        const auto cohorts = load_cohort_csv(*st.cohort_path);
        const auto code = make_country(st.cohort_country).code;
        const auto it = std::find_if(cohorts.begin(), cohorts.end(),
                                     [&](const CohortSeries& c) { return c.country().code == code; });
        if (it == cohorts.end()) throw Error(ErrorKind::CohortNotCovered, "no cohort series for " + code);
        sim.cohort = *it;
    }
    const auto series = simulate_series(sim);

    prepare_out_dir(cfg.out_dir);
    Dataset ds("simulate");
    ds.add(series);
    write_long_csv(ds, cfg.out_dir / "simulated.csv");
    log << "simulated " << series.size() << " levels, final " << format_double(series.observations().back().value)
        << " -> " << (cfg.out_dir / "simulated.csv").string() << '\n';

    if (!st.recover) return;

    const int t0 = st.params.start_year;
    const auto seg = SegmentSpec::make(SegmentLabel::Custom, {t0, t0 + st.years}, {t0 + 1, t0 + st.years});
    const auto inc = annual_increments(series, seg);
    const auto est = estimate_A(inc);
    report::TableDoc single{"recovery_single",
                            {"true_A", "estimate_A", "std_dev", "n", "slope_vs_level", "slope_se", "p_value",
                             "degenerate"},
                            {}};
    if (inc.size() >= 3) {
        const auto fit = increment_regression_vs_level(inc, cfg.level_timing);
        single.add_row({st.params.increment, est.mean, est.std_dev, cell(est.n), fit.slope, fit.slope_se,
                        fit.p_value, fit.degenerate});
    } else {
        single.add_row({st.params.increment, est.mean, est.std_dev, cell(est.n), std::string("n/a"),
                        std::string("n/a"), std::string("n/a"), false});
    }
    emit_both(single, cfg.out_dir / "recovery_single", cfg.round_digits);

    const auto rep = run_recovery(st.params, st.noise_sigma, st.years, st.trials, st.seed);
    report::TableDoc mc{"recovery_monte_carlo",
                        {"true_A", "noise_sigma", "steps", "trials", "mean_estimate", "bias_bound", "bias_ok",
                         "rejection_rate", "alpha", "size_ok"},
                        {}};
    mc.add_row({rep.true_increment, rep.noise_sigma, static_cast<long long>(rep.steps),
                static_cast<long long>(rep.trials), rep.mean_estimate, rep.bias_bound, rep.bias_ok(),
                rep.rejection_rate, rep.alpha, rep.size_ok()});
    emit_both(mc, cfg.out_dir / "recovery", cfg.round_digits);
    log << "recovery over " << rep.trials << " seeds: mean A = " << format_double(rep.mean_estimate) << " (bound +-"
        << format_double(rep.bias_bound) << "), rejection rate " << format_double(rep.rejection_rate) << '\n';
}

// validate --------------------------------------------------------------------

void run_validate(const RunConfig& cfg, std::ostream& log) {
    const auto ds = load_dataset(cfg);
    for (const auto& s : ds.series()) {
        for (const auto& seg : {cfg.pre_segment, cfg.post_segment}) (void)slice_segment(s, seg);
        log << s.country().code << " ok " << s.first_year() << "-" << s.last_year() << " (" << s.size()
            << " observations, " << s.basis() << ")\n";
    }
    log << ds.size() << " series valid for " << segment_name(cfg.pre_segment) << " and "
        << segment_name(cfg.post_segment) << '\n';
}

// entry point -----------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Inertial growth analysis of real GDP per capita", "inertia"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<double> bin_width;
    std::optional<double> trim;
    std::optional<int> round_digits;
    std::optional<std::string> level_timing;
    std::optional<std::uint64_t> seed;
    bool linearize = false;
    bool recover = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--out", out_dir, "output directory (default: $INERTIA_OUT or ./inertia_out)");
        sub->add_option("--round", round_digits, "decimals for emitted numbers (default: full precision)");
    };
    auto* analyze = app.add_subcommand("analyze", "break, mean-increment and regression tables plus figures");
    add_common(analyze);
    analyze->add_option("--level-timing", level_timing, "regress increments on the `previous` or `current` level");
    auto* normality = app.add_subcommand("normality", "Shapiro-Francia test of pooled demeaned increments");
    add_common(normality);
    normality->add_option("--bin-width", bin_width, "histogram bin width in dollars (default 200)");
    normality->add_option("--trim", trim, "outlier threshold in dollars (default 800)");
    auto* simulate = app.add_subcommand("simulate", "simulate an inertial economy");
    add_common(simulate);
    simulate->add_flag("--linearize", linearize, "use G + A instead of G * exp(A / G)");
    simulate->add_flag("--recover", recover, "estimate A back and run the Monte-Carlo recovery check");
    simulate->add_option("--seed", seed, "generator seed");
    simulate->add_option("--level-timing", level_timing, "regress increments on the `previous` or `current` level");
    auto* validate = app.add_subcommand("validate", "load data and check segment contiguity");
    add_common(validate);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: Config: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        RunConfig cfg;
        if (config_path) {
            cfg = load_config(*config_path);
        } else if (const char* env = std::getenv("INERTIA_OUT"); env != nullptr && *env != '\0') {
            cfg.out_dir = env;
        }
        if (out_dir) cfg.out_dir = *out_dir;
        if (bin_width) cfg.bin_width = *bin_width;
        if (trim) cfg.trim = *trim;
        if (round_digits) cfg.round_digits = *round_digits;
        if (level_timing) {
            const auto t = parse_level_timing(*level_timing);
            if (!t) config_error("--level-timing must be `previous` or `current`");
            cfg.level_timing = *t;
        }
        if (seed) cfg.sim.seed = *seed;
        if (linearize) cfg.sim.linearize = true;
        if (recover) cfg.sim.recover = true;
        cfg.validate();

        if (analyze->parsed()) {
            run_analyze(cfg, out);
        } else if (normality->parsed()) {
            (void)run_normality(cfg, out);
        } else if (simulate->parsed()) {
            run_simulate(cfg, out);
        } else {
            run_validate(cfg, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::Config ? kExitConfigError : kExitDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    }
    return kExitOk;
}

}  // namespace inertia::cli
