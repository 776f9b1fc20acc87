#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "inertia/data_core.hpp"
#include "inertia/growth_analysis.hpp"
#include "inertia/stats_kernel.hpp"

namespace inertia {

/// Parameters of the inertial growth model
///
///     dlnG/dt = A / G + cohort_factor * dlnN_s/dt
///
/// where A is the constant annual increment of GDP per capita and N_s the
/// number of people of the country-specific age.
struct ModelParams {
    double increment = 0.0;       // A, basis dollars per year
    double initial_level = 0.0;   // C = G(t0), basis dollars
    int start_year = 0;           // t0
    double cohort_factor = 0.5;   // 0.5 for most developed countries, 2/3 for Japan

    /// Throws InvalidParameter / NonPositiveLevel when an invariant fails.
    void validate() const;
};

struct SimConfig {
    ModelParams params;
    int years = 1;                       // number of yearly steps; the series has years + 1 levels
    std::optional<CohortSeries> cohort;  // must cover [t0, t0 + years]
    double noise_sigma = 0.0;            // additive Gaussian noise on the level, dollars
    std::uint64_t seed = 0;
    bool linearize = false;              // G + A (+ cohort term scaled by G) instead of G * exp(g)
    std::string country = "SIM";
    std::string basis = "SIM";
};

/// Relative growth rate per year: A / G + cohort_factor * dlnN.
[[nodiscard]] double growth_rate(const ModelParams& params, double level, double dln_cohort);

/// Inertial level at target_year: C + A * (target_year - t0).
[[nodiscard]] double inertial_forecast(const ModelParams& params, int target_year);

/// Discrete yearly realisation of the model starting at G(t0) = C.
/// Throws CohortNotCovered, NonPositiveLevel.
[[nodiscard]] GdpSeries simulate_series(const SimConfig& cfg);

/// Mean increment as the estimate of A, with its sample standard deviation.
[[nodiscard]] stats::SummaryStats estimate_A(const IncrementSeries& inc);

/// Monte-Carlo parameter recovery on linearized noisy simulations.
struct RecoveryReport {
    double true_increment = 0.0;
    double noise_sigma = 0.0;
    int steps = 0;
    int trials = 0;
    double mean_estimate = 0.0;    // average of estimate_A over trials
    double bias_bound = 0.0;       // 3 sigma / sqrt(steps)
    double rejection_rate = 0.0;   // share of trials where vs-level slope has p < alpha
    double alpha = 0.05;

    [[nodiscard]] bool bias_ok() const noexcept;
    /// Rejection rate within alpha +- 2.5 percentage points.
    [[nodiscard]] bool size_ok() const noexcept;
};

/// Runs `trials` simulations with seeds first_seed, first_seed + 1, ...
[[nodiscard]] RecoveryReport run_recovery(const ModelParams& params, double noise_sigma, int steps, int trials,
                                          std::uint64_t first_seed, double alpha = 0.05);

}  // namespace inertia
