#include "inertia/random.hpp"

#include <cmath>

#include "inertia/stats_kernel.hpp"

namespace inertia {

double Rng::normal() { return stats::normal_quantile(uniform()); }

double Rng::laplace() {
    const double u = uniform() - 0.5;
    return u < 0.0 ? std::log1p(2.0 * u) : -std::log1p(-2.0 * u);
}

}  // namespace inertia
