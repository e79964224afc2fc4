#include "facmom/rng.hpp"

#include <cmath>

namespace facmom {

double RandomStream::next_normal() noexcept {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

long RandomStream::next_poisson(double mean) {
    if (!(mean >= 0.0) || mean > 1e7) {
        throw std::invalid_argument("poisson mean must be in [0, 1e7]");
    }
    // Splitting keeps the multiplication method exact for large means:
    // a Poisson(2m) variate is the sum of two independent Poisson(m).
    long total = 0;
    while (mean > 30.0) {
        mean *= 0.5;
        total += next_poisson(mean);
    }
    const double limit = std::exp(-mean);
    double prod = next_double();
    long k = 0;
    while (prod > limit) {
        prod *= next_double();
        ++k;
    }
    return total + k;
}

}  // namespace facmom
