#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "inertia/error.hpp"
#include "inertia/random.hpp"
#include "inertia/stats_kernel.hpp"
#include "oracles.hpp"

using namespace inertia;
using namespace inertia::stats;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an inertia::Error");
    return ErrorKind::Config;
}

std::vector<double> normal_sample(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.normal();
    return xs;
}

}  // namespace

// ols ------------------------------------------------------------------------

TEST_CASE("ols: constant response is a degenerate zero-slope fit") {
    const std::vector<double> xs{0, 1, 2}, ys{5, 5, 5};
    const auto f = ols_fit(xs, ys);
    CHECK(f.slope == 0.0);
    CHECK(f.intercept == doctest::Approx(5.0));
    CHECK(f.ssr == 0.0);
    CHECK(f.degenerate);
    CHECK(f.p_value == 1.0);
}

TEST_CASE("ols: four-point hand example") {
    const std::vector<double> xs{0, 1, 2, 3}, ys{0, 1, 1, 2};
    const auto f = ols_fit(xs, ys);
    CHECK(f.slope == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(f.slope_se == doctest::Approx(0.141421).epsilon(1e-5));
    CHECK(f.t_stat == doctest::Approx(4.2426).epsilon(1e-4));
    CHECK(f.p_value == doctest::Approx(static_cast<double>(oracle::t_tail_df2(f.t_stat))).epsilon(1e-10));
    CHECK(f.p_value == doctest::Approx(0.0513).epsilon(1e-2));
    CHECK(f.n == 4);
    CHECK_FALSE(f.degenerate);
}

TEST_CASE("ols: exact nonzero line reports infinite t and p = 0") {
    const std::vector<double> xs{1950, 1951, 1952, 1953}, ys{3000, 3300, 3600, 3900};
    const auto f = ols_fit(xs, ys);
    CHECK(f.degenerate);
    CHECK(f.slope == doctest::Approx(300.0).epsilon(1e-12));
    CHECK(std::isinf(f.t_stat));
    CHECK(f.t_stat > 0);
    CHECK(f.p_value == 0.0);
    CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("ols: error kinds") {
    const std::vector<double> a{1, 2, 3}, b{1, 2}, c{1, 1, 1};
    CHECK(kind_of([&] { (void)ols_fit(a, b); }) == ErrorKind::LengthMismatch);
    CHECK(kind_of([&] { (void)ols_fit(b, b); }) == ErrorKind::TooFewPoints);
    CHECK(kind_of([&] { (void)ols_fit(c, a); }) == ErrorKind::ZeroVarianceX);
    const std::vector<double> bad{1, std::numeric_limits<double>::infinity(), 3};
    CHECK(kind_of([&] { (void)ols_fit(a, bad); }) == ErrorKind::NonFiniteInput);
}

TEST_CASE("ols agrees with the long-double closed form on 1000 random instances") {
    std::mt19937_64 gen(12345);
    std::uniform_int_distribution<int> size(3, 40);
    std::uniform_real_distribution<double> coef(-50.0, 50.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = size(gen);
        const double a = coef(gen), b = coef(gen), noise = std::abs(coef(gen)) + 0.1;
        std::normal_distribution<double> eps(0.0, noise);
        std::uniform_real_distribution<double> xd(-100.0, 100.0);
        std::vector<double> xs(static_cast<std::size_t>(n)), ys(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xs[i] = xd(gen);
            ys[i] = a + b * xs[i] + eps(gen);
        }
        const auto f = ols_fit(xs, ys);
        const auto o = oracle::ols(xs, ys);
        worst = std::max({worst, oracle::rel_err(f.slope, o.slope), oracle::rel_err(f.intercept, o.intercept),
                          oracle::rel_err(f.slope_se, o.slope_se)});
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("ols: shift in x moves only the intercept") {
    const auto ys = normal_sample(3, 30);
    std::vector<double> xs(30), shifted(30);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = static_cast<double>(i);
        shifted[i] = xs[i] + 1950.0;
    }
    const auto f = ols_fit(xs, ys);
    const auto g = ols_fit(shifted, ys);
    CHECK(oracle::rel_err(g.slope, f.slope) <= 1e-9);
    CHECK(oracle::rel_err(g.intercept, f.intercept - f.slope * 1950.0) <= 1e-9);
}

TEST_CASE("ols: scaling y scales slope, intercept and se; t and p unchanged") {
    const auto noise = normal_sample(4, 25);
    std::vector<double> xs(25), ys(25), scaled(25);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = static_cast<double>(i);
        ys[i] = 3.0 + 0.2 * xs[i] + noise[i];
        scaled[i] = -7.5 * ys[i];
    }
    const auto f = ols_fit(xs, ys);
    const auto g = ols_fit(xs, scaled);
    CHECK(oracle::rel_err(g.slope, -7.5 * f.slope) <= 1e-9);
    CHECK(oracle::rel_err(g.intercept, -7.5 * f.intercept) <= 1e-9);
    CHECK(oracle::rel_err(g.slope_se, 7.5 * f.slope_se) <= 1e-9);
    CHECK(oracle::rel_err(g.t_stat, -f.t_stat) <= 1e-9);
    CHECK(oracle::rel_err(g.p_value, f.p_value) <= 1e-9);
}

TEST_CASE("ols invariants hold on random input") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 200; ++trial) {
        const auto ys = normal_sample(static_cast<std::uint64_t>(trial), 10);
        std::vector<double> xs(10);
        for (auto& x : xs) x = std::uniform_real_distribution<double>(0, 1)(gen);
        const auto f = ols_fit(xs, ys);
        CHECK(f.slope_se >= 0.0);
        CHECK(f.p_value >= 0.0);
        CHECK(f.p_value <= 1.0);
        CHECK(f.r_squared >= 0.0);
        CHECK(f.r_squared <= 1.0);
    }
}

// t tail ----------------------------------------------------------------------

TEST_CASE("t tail: spot values") {
    CHECK(student_t_sf_two_sided(0.0, 7) == 1.0);
    CHECK(student_t_sf_two_sided(1.0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(student_t_sf_two_sided(4.2426, 2) == doctest::Approx(0.05131).epsilon(2e-3));
    CHECK(std::abs(student_t_sf_two_sided(4.2426, 2) - 0.05131) <= 1e-4);
    CHECK(kind_of([] { (void)student_t_sf_two_sided(1.0, 0); }) == ErrorKind::InvalidDf);
}

TEST_CASE("t tail matches the df = 1 and df = 2 closed forms") {
    double worst = 0.0;
    for (double t = -60.0; t <= 60.0; t += 0.0625) {
        worst = std::max(worst, std::abs(student_t_sf_two_sided(t, 1) - static_cast<double>(oracle::t_tail_df1(t))));
        worst = std::max(worst, std::abs(student_t_sf_two_sided(t, 2) - static_cast<double>(oracle::t_tail_df2(t))));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("t tail is decreasing in |t| and symmetric") {
    for (int df : {1, 2, 5, 30, 59, 791}) {
        double prev = 1.0;
        for (double t = 0.0; t <= 12.0; t += 0.05) {
            const double p = student_t_sf_two_sided(t, df);
            CHECK(p <= prev);
            CHECK(p == student_t_sf_two_sided(-t, df));
            prev = p;
        }
        CHECK(student_t_sf_two_sided(1e-12, df) == doctest::Approx(1.0));
    }
}

TEST_CASE("t tail for large df approaches the normal tail") {
    CHECK(student_t_sf_two_sided(1.959963984540054, 100000) == doctest::Approx(0.05).epsilon(1e-3));
}

// normal quantile ---------------------------------------------------------------

TEST_CASE("normal quantile spot values") {
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(std::abs(normal_quantile(0.975) - 1.9599640) <= 1e-6);
    CHECK(std::abs(normal_quantile(0.975) - oracle::normal_quantile(0.975)) <= 1e-9);
    CHECK(kind_of([] { (void)normal_quantile(0.0); }) == ErrorKind::OutOfDomain);
    CHECK(kind_of([] { (void)normal_quantile(1.0); }) == ErrorKind::OutOfDomain);
    CHECK(kind_of([] { (void)normal_quantile(std::nan("")); }) == ErrorKind::OutOfDomain);
}

TEST_CASE("normal quantile matches erfc bisection to 1e-9 on [1e-6, 1 - 1e-6]") {
    std::vector<double> grid{1e-6, 1e-5, 1e-4, 1e-3, 0.02425, 0.975, 1 - 1e-3, 1 - 1e-4, 1 - 1e-5, 1 - 1e-6};
    for (int i = 1; i < 1000; ++i) grid.push_back(i / 1000.0);
    double worst = 0.0;
    for (double p : grid) worst = std::max(worst, std::abs(normal_quantile(p) - oracle::normal_quantile(p)));
    CHECK(worst <= 1e-9);
}

TEST_CASE("normal quantile composed with the CDF is the identity") {
    double worst = 0.0;
    for (int i = 1; i < 1000; ++i) {
        const double p = i / 1000.0;
        worst = std::max(worst, std::abs(static_cast<double>(oracle::normal_cdf(normal_quantile(p))) - p));
    }
    CHECK(worst <= 1e-9);
}

// shapiro-francia ------------------------------------------------------------------

TEST_CASE("shapiro-francia is affine invariant") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto xs = normal_sample(seed, 50 + 10 * seed);
        std::vector<double> ys(xs.size());
        std::transform(xs.begin(), xs.end(), ys.begin(), [](double x) { return 2.0 * x + 5.0; });
        const auto a = shapiro_francia(xs);
        const auto b = shapiro_francia(ys);
        CHECK(std::abs(a.w_stat - b.w_stat) <= 1e-12);
        CHECK(a.w_stat <= 1.0);
        CHECK(a.w_stat > 0.0);
    }
}

TEST_CASE("shapiro-francia: size under the null, n = 200") {
    int accepted = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        if (shapiro_francia(normal_sample(seed, 200)).p_value > 0.05) ++accepted;
    }
    CHECK(accepted >= 90);
}

TEST_CASE("shapiro-francia rejects a heavy-tailed sample") {
    Rng rng(8);
    std::vector<double> xs(800);
    for (auto& x : xs) x = rng.laplace();
    const auto r = shapiro_francia(xs);
    CHECK(r.p_value < 1e-4);
    CHECK(r.n == 800);
}

TEST_CASE("shapiro-francia: W' is exactly representable for a perfectly normal-score sample") {
    // Data equal to the Blom scores themselves give W' = 1.
    std::vector<double> xs;
    const double n = 40;
    for (int i = 1; i <= 40; ++i) xs.push_back(oracle::normal_quantile((i - 0.375) / (n + 0.25)));
    CHECK(shapiro_francia(xs).w_stat == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shapiro-francia error kinds") {
    CHECK(kind_of([] { (void)shapiro_francia(normal_sample(1, 7)); }) == ErrorKind::SampleTooSmall);
    CHECK(kind_of([] { (void)shapiro_francia(normal_sample(1, 5001)); }) == ErrorKind::SampleTooLarge);
    const std::vector<double> flat(20, 3.0);
    CHECK(kind_of([&] { (void)shapiro_francia(flat); }) == ErrorKind::ZeroVariance);
    CHECK_NOTHROW((void)shapiro_francia(normal_sample(1, 8)));
    CHECK_NOTHROW((void)shapiro_francia(normal_sample(1, 5000)));
}

// histogram ----------------------------------------------------------------------

TEST_CASE("histogram: empty and edge cases") {
    CHECK(histogram({}, 200.0).counts.empty());
    const std::vector<double> zero{0.0};
    const auto h = histogram(zero, 200.0, 0.0);
    REQUIRE(h.counts.size() == 1);
    CHECK(h.counts.at(0) == 1);
    CHECK(h.lower_edge(0) == 0.0);
}

TEST_CASE("histogram: five-value hand binning") {
    const std::vector<double> xs{-250, -50, 10, 199, 450};
    const auto h = histogram(xs, 200.0, 0.0);
    const std::map<long long, std::size_t> want{{-2, 1}, {-1, 1}, {0, 2}, {2, 1}};
    CHECK(h.counts == want);
    CHECK(h.lower_edge(-2) == -400.0);
    CHECK(h.total() == 5);
}

TEST_CASE("histogram: counts sum to n, shift by one width shifts every bin by one") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto xs = normal_sample(seed, 300);
        for (auto& x : xs) x *= 400.0;
        const auto h = histogram(xs, 200.0);
        CHECK(h.total() == xs.size());
        for (auto& x : xs) x += 200.0;
        const auto g = histogram(xs, 200.0);
        std::map<long long, std::size_t> moved;
        for (const auto& [k, c] : h.counts) moved[k + 1] = c;
        CHECK(g.counts == moved);
    }
}

TEST_CASE("histogram: origin offsets the grid") {
    const std::vector<double> xs{50.0, 149.0, 150.0};
    const auto h = histogram(xs, 100.0, 50.0);
    CHECK(h.counts.at(0) == 2);
    CHECK(h.counts.at(1) == 1);
}

TEST_CASE("histogram error kinds") {
    const std::vector<double> xs{1.0};
    CHECK(kind_of([&] { (void)histogram(xs, 0.0); }) == ErrorKind::NonPositiveBinWidth);
    CHECK(kind_of([&] { (void)histogram(xs, -1.0); }) == ErrorKind::NonPositiveBinWidth);
    const std::vector<double> bad{std::nan("")};
    CHECK(kind_of([&] { (void)histogram(bad, 1.0); }) == ErrorKind::NonFiniteInput);
}

// summary ----------------------------------------------------------------------------

TEST_CASE("summary stats") {
    const std::vector<double> flat{5, 5, 5};
    const auto a = summary_stats(flat);
    CHECK(a.mean == 5.0);
    CHECK(a.std_dev == 0.0);
    const std::vector<double> two{10, 15};
    const auto b = summary_stats(two);
    CHECK(b.mean == 12.5);
    CHECK(b.std_dev == doctest::Approx(3.5355).epsilon(1e-4));
    const std::vector<double> one{7};
    CHECK(std::isnan(summary_stats(one).std_dev));
    CHECK(kind_of([] { (void)summary_stats({}); }) == ErrorKind::TooFewPoints);
}

TEST_CASE("incomplete beta endpoints and symmetry") {
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    for (double x : {0.1, 0.3, 0.5, 0.77}) {
        CHECK(incomplete_beta(2.5, 0.5, x) + incomplete_beta(0.5, 2.5, 1.0 - x) == doctest::Approx(1.0).epsilon(1e-13));
    }
    // I_x(1, 1) = x
    CHECK(incomplete_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-14));
}
