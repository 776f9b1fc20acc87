#include "inertia/stats_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "inertia/error.hpp"

namespace inertia::stats {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(std::span<const double> xs, const char* what) {
    for (double v : xs) {
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteInput, std::string(what) + " contains a non-finite value");
    }
}

/// Mean with one correction pass.
double mean_of(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    double m = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double r = 0.0;
    for (double v : xs) r += v - m;
    return m + r / n;
}

double max_abs(std::span<const double> xs) {
    double m = 0.0;
    for (double v : xs) m = std::max(m, std::abs(v));
    return m;
}

/// Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

/// I_x(a, b) with y = 1 - x supplied separately so callers can avoid cancellation.
double ibeta(double a, double b, double x, double y) {
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

}  // namespace

OlsFit ols_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw Error(ErrorKind::LengthMismatch,
                    std::to_string(xs.size()) + " regressors vs " + std::to_string(ys.size()) + " responses");
    }
    if (xs.size() < 3) throw Error(ErrorKind::TooFewPoints, "ols_fit needs n >= 3, got " + std::to_string(xs.size()));
    require_finite(xs, "xs");
    require_finite(ys, "ys");

    const std::size_t n = xs.size();
    const double x_bar = mean_of(xs);
    const double y_bar = mean_of(ys);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - x_bar;
        const double dy = ys[i] - y_bar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::ZeroVarianceX, "regressor has zero variance");

    OlsFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = y_bar - fit.slope * x_bar;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - y_bar - fit.slope * (xs[i] - x_bar);
        fit.ssr += r * r;
    }

    // An exact fit is one whose residuals sit at the rounding level of y.
    const double noise_floor = 8.0 * kEps * std::max(max_abs(ys), std::abs(y_bar));
    const double df = static_cast<double>(n - 2);
    if (fit.ssr <= noise_floor * noise_floor * static_cast<double>(n)) {
        fit.degenerate = true;
        fit.ssr = 0.0;
        fit.slope_se = 0.0;
        fit.r_squared = 1.0;
        const double x_span = *std::max_element(xs.begin(), xs.end()) - *std::min_element(xs.begin(), xs.end());
        if (std::abs(fit.slope) * x_span <= noise_floor) {
            fit.slope = 0.0;
            fit.intercept = y_bar;
            fit.t_stat = 0.0;
            fit.p_value = 1.0;
        } else {
            fit.t_stat = fit.slope > 0.0 ? kInf : -kInf;
            fit.p_value = 0.0;
        }
        return fit;
    }

    fit.slope_se = std::sqrt(fit.ssr / df / sxx);
    fit.t_stat = fit.slope / fit.slope_se;
    fit.p_value = student_t_sf_two_sided(fit.t_stat, static_cast<int>(n - 2));
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - fit.ssr / syy, 0.0, 1.0) : 0.0;
    return fit;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::OutOfDomain, "incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::OutOfDomain, "incomplete beta needs 0 <= x <= 1");
    return ibeta(a, b, x, 1.0 - x);
}

double student_t_sf_two_sided(double t, int df) {
    if (df < 1) throw Error(ErrorKind::InvalidDf, "degrees of freedom must be >= 1, got " + std::to_string(df));
    if (std::isnan(t)) throw Error(ErrorKind::NonFiniteInput, "t is NaN");
    if (std::isinf(t)) return 0.0;
    const double nu = static_cast<double>(df);
    const double t2 = t * t;
    const double x = nu / (nu + t2);
    const double y = t2 / (nu + t2);
    return std::clamp(ibeta(nu / 2.0, 0.5, x, y), 0.0, 1.0);
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::OutOfDomain, "normal_quantile needs 0 < p < 1");
    if (p > 0.5) return -normal_quantile(1.0 - p);

    // Rational approximation (Acklam), relative error ~1.2e-9 before refinement.
    static constexpr std::array a{-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                  1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array b{-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                  6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr std::array c{-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                  -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array d{7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                  3.754408661907416e+00};
    constexpr double kLow = 0.02425;

    double x;
    if (p < kLow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }

    // One Halley step against the erfc-based CDF.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

NormalityResult shapiro_francia(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 8) throw Error(ErrorKind::SampleTooSmall, "Shapiro-Francia needs n >= 8, got " + std::to_string(n));
    if (n > 5000) throw Error(ErrorKind::SampleTooLarge, "Shapiro-Francia needs n <= 5000, got " + std::to_string(n));
    require_finite(xs, "sample");

    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double x_bar = mean_of(sorted);
    double ss = 0.0;
    for (double v : sorted) ss += (v - x_bar) * (v - x_bar);
    if (!(ss > 0.0) || sorted.front() == sorted.back()) throw Error(ErrorKind::ZeroVariance, "all values are equal");

    const double nd = static_cast<double>(n);
    double mm = 0.0;
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = normal_quantile((static_cast<double>(i + 1) - 0.375) / (nd + 0.25));
        mm += m * m;
        mx += m * (sorted[i] - x_bar);
    }

    NormalityResult res;
    res.n = n;
    res.w_stat = std::min(1.0, (mx * mx) / (mm * ss));

    const double u = std::log(nd);
    const double v = std::log(u);
    const double mu = -1.2725 + 1.0521 * (v - u);
    const double sigma = 1.0308 - 0.26758 * (v + 2.0 / u);
    const double z = (std::log1p(-res.w_stat) - mu) / sigma;
    res.p_value = std::clamp(normal_cdf(-z), 0.0, 1.0);
    return res;
}

std::size_t Histogram::total() const noexcept {
    std::size_t t = 0;
    for (const auto& [k, c] : counts) t += c;
    return t;
}

Histogram histogram(std::span<const double> xs, double bin_width, double origin) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw Error(ErrorKind::NonPositiveBinWidth, "bin width must be positive");
    }
    require_finite(xs, "sample");
    Histogram h;
    h.bin_width = bin_width;
    h.origin = origin;
    for (double v : xs) {
        const auto k = static_cast<long long>(std::floor((v - origin) / bin_width));
        ++h.counts[k];
    }
    return h;
}

SummaryStats summary_stats(std::span<const double> xs) {
    if (xs.empty()) throw Error(ErrorKind::TooFewPoints, "summary_stats needs at least one value");
    require_finite(xs, "sample");
    SummaryStats s;
    s.n = xs.size();
    s.mean = mean_of(xs);
    if (s.n < 2) {
        s.std_dev = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double ss = 0.0;
    for (double v : xs) ss += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(ss / static_cast<double>(s.n - 1));
    return s;
}

}  // namespace inertia::stats
