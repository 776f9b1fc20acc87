// Writes the bundled synthetic 13-country panel used by the acceptance suite
// when no licensed Maddison / Total Economy Database snapshot is available.
//
// Each country is generated from a per-country calibration row: starting
// levels in 1870 and 1950, mean and standard deviation of annual increments
// in each era, the slope of increments on time before 1940, and the slope of
// increments on the attained level after 1950. Pre-war shocks are Laplace
// (heavy tailed); post-war shocks are Gaussian plus common recession years.
//
//   make_fixture <out_dir> [seed]

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "inertia/random.hpp"

namespace {

struct Calibration {
    const char* code;
    double level_1870;
    double pre_mean;
    double pre_sd;
    double pre_time_slope;  // $/y per year
    double level_1950;
    double post_mean;
    double post_sd;
    double post_level_slope;  // $ per $
};

constexpr std::array kCountries{
    Calibration{"AUS", 3273, 41.3, 221.7, 0.356, 7412, 303.2, 257.5, 0.016},
    Calibration{"AUT", 1863, 30.0, 156.1, 0.354, 3706, 344.2, 272.9, 0.006},
    Calibration{"BEL", 2692, 26.7, 188.5, -0.478, 5462, 303.9, 264.9, 0.007},
    Calibration{"CAN", 1695, 52.5, 239.6, 0.708, 7291, 295.2, 353.2, 0.006},
    Calibration{"CHE", 2102, 61.4, 167.1, 0.585, 9064, 271.7, 378.6, -0.005},
    Calibration{"ESP", 1207, 12.5, 108.8, -0.680, 2189, 240.7, 236.0, 0.002},
    Calibration{"FRA", 1876, 31.0, 216.5, -0.216, 5186, 272.2, 223.7, -0.006},
    Calibration{"GBR", 3190, 52.4, 164.4, 1.257, 6939, 253.1, 315.8, 0.007},
    Calibration{"ITA", 1499, 28.7, 123.5, 0.692, 3502, 242.5, 277.6, -0.013},
    Calibration{"JPN", 737, 30.5, 81.7, 1.061, 1921, 297.3, 412.7, -0.010},
    Calibration{"NLD", 2757, 29.6, 192.3, -0.217, 5996, 307.2, 305.4, 0.006},
    Calibration{"SWE", 1662, 54.6, 138.8, 1.403, 6739, 317.5, 395.1, 0.017},
    Calibration{"USA", 2445, 65.2, 283.0, 0.552, 9561, 350.3, 431.3, 0.006},
};

// Common recession years after 1950 and their depth in post-war standard deviations.
constexpr std::array<std::pair<int, double>, 4> kRecessions{{{1975, -1.5}, {1982, -1.2}, {1991, -1.2}, {2009, -2.8}}};

constexpr int kFirstYear = 1870;
constexpr int kPreLast = 1940;
constexpr int kPostFirst = 1950;
constexpr int kLastYear = 2011;

double whole_dollars(double v) { return std::round(v); }

/// Levels 1870..1949. Redraws until the path stays well above zero.
std::map<int, double> early_path(const Calibration& c, std::uint64_t seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        inertia::Rng rng(seed + 7919 * attempt);
        std::map<int, double> g;
        double level = c.level_1870;
        g[kFirstYear] = whole_dollars(level);
        bool ok = true;
        const double scale = c.pre_sd / std::sqrt(2.0);
        for (int t = kFirstYear + 1; t <= kPreLast; ++t) {
            level += c.pre_mean + c.pre_time_slope * (t - 1905.5) + scale * rng.laplace();
            ok = ok && level > 0.3 * c.level_1870;
            g[t] = whole_dollars(level);
        }
        // War years: geometric bridge to the 1950 level with extra volatility.
        const double start = level;
        for (int t = kPreLast + 1; t < kPostFirst; ++t) {
            const double w = static_cast<double>(t - kPreLast) / (kPostFirst - kPreLast);
            const double bridge = start * std::pow(c.level_1950 / start, w);
            g[t] = whole_dollars(bridge * (1.0 + 0.06 * rng.normal()));
            ok = ok && g[t] > 0.0;
        }
        if (ok) return g;
    }
}

/// Levels 1950..2011.
std::map<int, double> late_path(const Calibration& c, std::uint64_t seed) {
    inertia::Rng rng(seed);
    double shock_sq = 0.0;
    double shock_sum = 0.0;
    for (const auto& [year, depth] : kRecessions) {
        shock_sq += depth * depth;
        shock_sum += depth;
    }
    const double n = kLastYear - kPostFirst;
    const double core_sd = c.post_sd * std::sqrt(std::max(0.1, 1.0 - shock_sq / n));
    const double mean = c.post_mean - c.post_sd * shock_sum / n;
    const double centre = c.level_1950 + c.post_mean * n / 2.0;

    std::map<int, double> g;
    double level = c.level_1950;
    g[kPostFirst] = whole_dollars(level);
    for (int t = kPostFirst + 1; t <= kLastYear; ++t) {
        double delta = mean + c.post_level_slope * (level - centre) + core_sd * rng.normal();
        for (const auto& [year, depth] : kRecessions) {
            if (year == t) delta += depth * c.post_sd;
        }
        level += delta;
        g[t] = whole_dollars(level);
    }
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: make_fixture <out_dir> [seed]\n";
        return 2;
    }
    const std::filesystem::path out(argv[1]);
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20120601ULL;
    std::filesystem::create_directories(out);

    std::vector<std::map<int, double>> early;
    std::vector<std::map<int, double>> late;
    for (std::size_t i = 0; i < kCountries.size(); ++i) {
        early.push_back(early_path(kCountries[i], seed + 101 * i));
        late.push_back(late_path(kCountries[i], seed + 100003 + 101 * i));
    }

    std::ofstream wide(out / "maddison_pre.csv", std::ios::binary);
    wide << "year";
    for (const auto& c : kCountries) wide << ',' << c.code;
    wide << '\n';
    for (int t = kFirstYear; t < kPostFirst; ++t) {
        wide << t;
        for (const auto& g : early) wide << ',' << static_cast<long long>(g.at(t));
        wide << '\n';
    }

    std::ofstream lng(out / "ted_post.csv", std::ios::binary);
    lng << "country,year,gdp_pc\n";
    for (std::size_t i = 0; i < kCountries.size(); ++i) {
        for (const auto& [t, v] : late[i]) lng << kCountries[i].code << ',' << t << ',' << static_cast<long long>(v) << '\n';
    }
    if (!wide || !lng) {
        std::cerr << "write failed\n";
        return 1;
    }
    std::cout << "wrote " << (out / "maddison_pre.csv").string() << " and " << (out / "ted_post.csv").string() << '\n';
    return 0;
}
