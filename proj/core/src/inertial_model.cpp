#include "inertia/inertial_model.hpp"

#include <cmath>
#include <vector>

#include "inertia/error.hpp"
#include "inertia/random.hpp"

namespace inertia {

void ModelParams::validate() const {
    if (!std::isfinite(increment)) throw Error(ErrorKind::InvalidParameter, "A must be finite");
    if (!(initial_level > 0.0) || !std::isfinite(initial_level)) {
        throw Error(ErrorKind::NonPositiveLevel, "initial level C must be positive");
    }
    if (!(cohort_factor >= 0.0) || !std::isfinite(cohort_factor)) {
        throw Error(ErrorKind::InvalidParameter, "cohort factor must be >= 0");
    }
}

double growth_rate(const ModelParams& params, double level, double dln_cohort) {
    if (!(level > 0.0)) throw Error(ErrorKind::NonPositiveLevel, "level must be positive");
    return params.increment / level + params.cohort_factor * dln_cohort;
}

double inertial_forecast(const ModelParams& params, int target_year) {
    if (target_year < params.start_year) {
        throw Error(ErrorKind::YearBeforeStart,
                    std::to_string(target_year) + " precedes t0 = " + std::to_string(params.start_year));
    }
    return params.initial_level + params.increment * static_cast<double>(target_year - params.start_year);
}

GdpSeries simulate_series(const SimConfig& cfg) {
    const auto& p = cfg.params;
    p.validate();
    if (cfg.years < 1) throw Error(ErrorKind::InvalidParameter, "simulation needs at least one year");
    if (!(cfg.noise_sigma >= 0.0)) throw Error(ErrorKind::InvalidParameter, "noise sigma must be >= 0");
    const int last = p.start_year + cfg.years;
    if (cfg.cohort && !cfg.cohort->covers(p.start_year, last)) {
        throw Error(ErrorKind::CohortNotCovered, "cohort series must cover " + std::to_string(p.start_year) + "-" +
                                                     std::to_string(last));
    }

    Rng rng(cfg.seed);
    std::vector<Observation> obs;
    obs.reserve(static_cast<std::size_t>(cfg.years) + 1);
    double level = p.initial_level;
    obs.push_back({p.start_year, level});
    for (int year = p.start_year; year < last; ++year) {
        const double dln = cfg.cohort ? std::log(*cfg.cohort->value_at(year + 1) / *cfg.cohort->value_at(year)) : 0.0;
        if (cfg.linearize) {
            level = level + p.increment + p.cohort_factor * dln * level;
        } else {
            level = level * std::exp(growth_rate(p, level, dln));
        }
        if (cfg.noise_sigma > 0.0) level += cfg.noise_sigma * rng.normal();
        if (!(level > 0.0) || !std::isfinite(level)) {
            throw Error(ErrorKind::NonPositiveLevel, "simulated level fell to " + format_double(level) + " in " +
                                                         std::to_string(year + 1));
        }
        obs.push_back({year + 1, level});
    }
    return GdpSeries(make_country(cfg.country), cfg.basis, std::move(obs));
}

stats::SummaryStats estimate_A(const IncrementSeries& inc) { return stats::summary_stats(inc.deltas()); }

bool RecoveryReport::bias_ok() const noexcept { return std::abs(mean_estimate - true_increment) <= bias_bound; }

bool RecoveryReport::size_ok() const noexcept { return std::abs(rejection_rate - alpha) <= 0.025; }

RecoveryReport run_recovery(const ModelParams& params, double noise_sigma, int steps, int trials,
                            std::uint64_t first_seed, double alpha) {
    if (trials < 1) throw Error(ErrorKind::InvalidParameter, "recovery needs at least one trial");
    if (steps < 3) throw Error(ErrorKind::InvalidParameter, "recovery needs at least three steps");
    RecoveryReport rep;
    rep.true_increment = params.increment;
    rep.noise_sigma = noise_sigma;
    rep.steps = steps;
    rep.trials = trials;
    rep.alpha = alpha;
    rep.bias_bound = 3.0 * noise_sigma / std::sqrt(static_cast<double>(steps));

    const auto seg = SegmentSpec::make(SegmentLabel::Custom, {params.start_year, params.start_year + steps},
                                       {params.start_year + 1, params.start_year + steps});
    double sum = 0.0;
    int rejections = 0;
    for (int i = 0; i < trials; ++i) {
        SimConfig cfg;
        cfg.params = params;
        cfg.years = steps;
        cfg.noise_sigma = noise_sigma;
        cfg.seed = first_seed + static_cast<std::uint64_t>(i);
        cfg.linearize = true;
        const auto inc = annual_increments(simulate_series(cfg), seg);
        sum += estimate_A(inc).mean;
        if (increment_regression_vs_level(inc).p_value < alpha) ++rejections;
    }
    rep.mean_estimate = sum / trials;
    rep.rejection_rate = static_cast<double>(rejections) / trials;
    return rep;
}

}  // namespace inertia
