#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace facmom {

/// Normalized probability distribution of a non-negative integer count.
///
/// Probabilities are stored densely, index = count value.  Entries must be
/// non-negative and sum to 1 within 1e-12; trailing zeros are trimmed so
/// support_max() is the largest count with positive probability.
class MultiplicityDistribution {
public:
    explicit MultiplicityDistribution(std::vector<double> probs);

    /// Empirical distribution of raw event counts.
    [[nodiscard]] static MultiplicityDistribution from_counts(std::span<const long> counts);

    /// Poisson reference, truncated where the remaining tail mass drops
    /// below 1e-15 and renormalized.
    [[nodiscard]] static MultiplicityDistribution poisson(double mean);

    /// Poisson reference truncated at an explicit support bound.
    [[nodiscard]] static MultiplicityDistribution poisson(double mean, int support_max);

    [[nodiscard]] int support_max() const noexcept { return static_cast<int>(probs_.size()) - 1; }
    [[nodiscard]] double prob(int n) const;
    [[nodiscard]] const std::vector<double>& probs() const noexcept { return probs_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }

private:
    std::vector<double> probs_;
    double mean_ = 0.0;
};

/// Falling factorial n(n-1)...(n-q+1) evaluated in floating point.
[[nodiscard]] double falling_factorial(double n, int q);

/// Normalized factorial moment F_q = <n(n-1)...(n-q+1)> / <n>^q.
///
/// F_1 = 1 by construction and a Poisson distribution gives F_q = 1 for
/// every order, so values above 1 measure genuine clustering.
/// Requires q >= 1 and a distribution with nonzero mean.
[[nodiscard]] double factorial_moment(const MultiplicityDistribution& dist, int q);

/// Probability generating function G(z) = sum_n P_n (1+z)^n.
///
/// Finite polynomial in z for finite support.  G(0) = 1, and the q-th
/// derivative at z = 0 equals <n>^q F_q.
[[nodiscard]] double generating_function(const MultiplicityDistribution& dist, double z);

/// P(n = 0), identical to G(-1).
[[nodiscard]] double zero_count_probability(const MultiplicityDistribution& dist);

/// Factorial moments F_2..F_qmax with the mean they were normalized by.
struct MomentSet {
    double mean_count = 0.0;
    int q_max = 1;
    std::vector<double> values;  // values[i] = F_{i+2}

    [[nodiscard]] double value(int q) const;
};

/// Factorial cumulants K_2..K_qmax; K_1 = 1 in the same normalization.
/// K_2 = F_2 - 1 and a Poisson distribution has K_q = 0 for q >= 2.
struct CumulantSet {
    double mean_count = 0.0;
    int q_max = 1;
    std::vector<double> values;  // values[i] = K_{i+2}

    [[nodiscard]] double value(int q) const;
};

[[nodiscard]] MomentSet factorial_moments(const MultiplicityDistribution& dist, int q_max);

/// Converts moments to cumulants through the log-series recursion that
/// links the generating function expansions
///   G(z)    = sum_q z^q/q! <n>^q F_q
///   ln G(z) = sum_q z^q/q! <n>^q K_q.
/// The mean cancels identically, so only the F values enter.
/// Requesting q_max above the available moment order is an error.
[[nodiscard]] CumulantSet cumulants_from_moments(const MomentSet& moments);
[[nodiscard]] CumulantSet cumulants_from_moments(const MomentSet& moments, int q_max);

/// Inverse conversion (exp-series recursion); round trips are exact to
/// floating point for moderate orders.
[[nodiscard]] MomentSet moments_from_cumulants(const CumulantSet& cumulants);

/// Sign of the quantity whose coincidences are being counted.
enum class Sign : std::int8_t { positive = 1, negative = -1 };

/// One analysis window split into n_bins equal bins.  pos_counts[k] and
/// neg_counts[k] hold the number of positive and negative ticks in bin k;
/// zero ticks are counted in neither.
struct EventWindow {
    int n_bins = 0;
    std::vector<int> pos_counts;
    std::vector<int> neg_counts;

    [[nodiscard]] long total(Sign sign) const noexcept;
};

/// Which pair of counts enters the binned moment.
enum class BinnedMode { like_positive, like_negative, unlike };

/// Binned factorial moment with its statistical error.
struct MomentEstimate {
    double value = 0.0;
    double stderr_delta = 0.0;      // first-order propagation of event scatter
    double stderr_bootstrap = 0.0;  // 0 unless a bootstrap was requested
};

struct BootstrapConfig {
    int resamples = 200;
    std::uint64_t seed = 0;
};

/// Event-averaged binned factorial moment.
///
/// For like-sign counts n_k of the chosen sign,
///   F_q(M) = <sum_k n_k(n_k-1)...(n_k-q+1) / M> / (<n>/M)^q
/// where <.> averages over event windows, M is the bin count and <n> is
/// the global mean full-window count of that sign.  unlike mode pairs the
/// two signs, numerator n_k^+ n_k^- and denominator <n^+><n^->/M^2, and is
/// defined for q = 2 only.  All windows must share one bin count and at
/// least one window is required; a zero mean in the denominator is an
/// error.  Event sums are compensated, so the result is stable under
/// permutation of the window list.
[[nodiscard]] MomentEstimate estimate_binned_moment(std::span<const EventWindow> windows,
                                                    BinnedMode mode, int q,
                                                    const std::optional<BootstrapConfig>& bootstrap = std::nullopt);

/// F_q(M) for like-sign counts of the chosen sign.
[[nodiscard]] double fq_binned(std::span<const EventWindow> windows, Sign sign, int q);

/// Second-order like-sign moment; identical code path to fq_binned(.., 2).
[[nodiscard]] double f2_like_sign(std::span<const EventWindow> windows, Sign sign);

/// Second-order unlike-sign moment.
[[nodiscard]] double f2_unlike_sign(std::span<const EventWindow> windows);

}  // namespace facmom
