#pragma once

// Independent reference implementations the tests compare the library
// against. Nothing here calls into inertia::stats.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <unistd.h>

namespace oracle {

struct Ols {
    long double slope;
    long double intercept;
    long double slope_se;
    long double ssr;
};

// Textbook normal equations on raw sums, evaluated in long double.
inline Ols ols(std::span<const double> xs, std::span<const double> ys) {
    const auto n = static_cast<long double>(xs.size());
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const long double x = xs[i], y = ys[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const long double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const long double intercept = (sy - slope * sx) / n;
    long double ssr = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const long double r = ys[i] - intercept - slope * xs[i];
        ssr += r * r;
    }
    const long double sxx_c = sxx - sx * sx / n;
    return {slope, intercept, std::sqrt(ssr / (n - 2) / sxx_c), ssr};
}

// Two-sided tail P(|T| >= |t|): Cauchy.
inline long double t_tail_df1(long double t) {
    return 1.0L - 2.0L / std::numbers::pi_v<long double> * std::atan(std::fabs(t));
}

// Two-sided tail for df = 2, from F(t) = 1/2 + t / (2 sqrt(2 + t^2)).
inline long double t_tail_df2(long double t) {
    const long double a = std::fabs(t);
    return 1.0L - a / std::sqrt(2.0L + a * a);
}

inline long double normal_cdf(long double z) { return 0.5L * std::erfc(-z / std::numbers::sqrt2_v<long double>); }

// Plain bisection on the erfc CDF; slow and sure.
inline double normal_quantile(double p) {
    long double lo = -40.0L, hi = 40.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return static_cast<double>(0.5L * (lo + hi));
}

inline double rel_err(long double got, long double want) {
    const long double scale = std::fabs(want) > 1e-300L ? std::fabs(want) : 1.0L;
    return static_cast<double>(std::fabs(got - want) / scale);
}

}  // namespace oracle

namespace testio {

// Fresh scratch directory, removed on scope exit.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("inertia_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Relative path -> bytes, for every regular file under root.
inline std::map<std::string, std::string> tree(const std::filesystem::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[std::filesystem::relative(e.path(), root).generic_string()] = read_file(e.path());
    }
    return out;
}

inline std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + needle.size())) ++n;
    return n;
}

}  // namespace testio
