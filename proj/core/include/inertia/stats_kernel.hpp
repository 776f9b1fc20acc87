#pragma once

#include <cstddef>
#include <map>
#include <span>

namespace inertia::stats {

/// Simple linear regression y = intercept + slope * x with classical
/// (homoskedastic) inference on the slope.
struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double t_stat = 0.0;   // slope / slope_se; +-inf when the fit is exact
    double p_value = 1.0;  // two-sided, Student-t with n - 2 df
    double r_squared = 0.0;
    double ssr = 0.0;      // residual sum of squares
    std::size_t n = 0;
    bool degenerate = false;  // ssr == 0 exactly

    [[nodiscard]] double predict(double x) const noexcept { return intercept + slope * x; }
};

/// Throws LengthMismatch, TooFewPoints (n < 3), ZeroVarianceX, NonFiniteInput.
[[nodiscard]] OlsFit ols_fit(std::span<const double> xs, std::span<const double> ys);

/// P(|T| >= |t|) for Student-t with `df` degrees of freedom.
[[nodiscard]] double student_t_sf_two_sided(double t, int df);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
[[nodiscard]] double incomplete_beta(double a, double b, double x);

/// Standard normal CDF via erfc.
[[nodiscard]] double normal_cdf(double z) noexcept;

/// Inverse standard normal CDF, |error| <= 1e-9 on (0, 1). Throws OutOfDomain.
[[nodiscard]] double normal_quantile(double p);

struct NormalityResult {
    double w_stat = 0.0;  // W' in (0, 1]
    double p_value = 1.0;
    std::size_t n = 0;
};

/// Shapiro-Francia W' with Blom scores and Royston's normal approximation of
/// ln(1 - W'). Valid for 8 <= n <= 5000.
[[nodiscard]] NormalityResult shapiro_francia(std::span<const double> xs);

struct Histogram {
    double bin_width = 0.0;
    double origin = 0.0;
    std::map<long long, std::size_t> counts;  // bin k covers [origin + k w, origin + (k+1) w)

    [[nodiscard]] std::size_t total() const noexcept;
    [[nodiscard]] double lower_edge(long long k) const noexcept { return origin + static_cast<double>(k) * bin_width; }
};

/// Throws NonPositiveBinWidth, NonFiniteInput.
[[nodiscard]] Histogram histogram(std::span<const double> xs, double bin_width, double origin = 0.0);

struct SummaryStats {
    double mean = 0.0;
    double std_dev = 0.0;  // divisor n - 1
    std::size_t n = 0;
};

/// Throws TooFewPoints on empty input; std_dev is NaN when n == 1.
[[nodiscard]] SummaryStats summary_stats(std::span<const double> xs);

}  // namespace inertia::stats
