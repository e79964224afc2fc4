#include "facmom/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "facmom/rng.hpp"
#include "facmom/summation.hpp"

namespace facmom {

namespace {

constexpr double kProbSumTolerance = 1e-12;

[[nodiscard]] double sample_covariance(std::span<const double> xs, std::span<const double> ys,
                                       double mean_x, double mean_y) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        acc.add((xs[i] - mean_x) * (ys[i] - mean_y));
    }
    return acc.value() / static_cast<double>(n - 1);
}

}  // namespace

MultiplicityDistribution::MultiplicityDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw std::invalid_argument("multiplicity distribution needs at least one entry");
    }
    CompensatedSum total;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw std::invalid_argument("multiplicity probabilities must be finite and non-negative");
        }
        total.add(p);
    }
    if (std::abs(total.value() - 1.0) > kProbSumTolerance) {
        throw std::invalid_argument("multiplicity probabilities must sum to 1 within 1e-12, got " +
                                    std::to_string(total.value()));
    }
    while (probs_.size() > 1 && probs_.back() == 0.0) probs_.pop_back();
    CompensatedSum mean;
    for (std::size_t n = 0; n < probs_.size(); ++n) {
        mean.add(static_cast<double>(n) * probs_[n]);
    }
    mean_ = mean.value();
}

MultiplicityDistribution MultiplicityDistribution::from_counts(std::span<const long> counts) {
    if (counts.empty()) {
        throw std::invalid_argument("empty count sample");
    }
    long max_count = 0;
    for (long c : counts) {
        if (c < 0) throw std::invalid_argument("counts must be non-negative");
        if (c > max_count) max_count = c;
    }
    // Histogram in integers first so each probability rounds exactly once;
    // accumulating 1/N per event drifts past the constructor tolerance for
    // large samples.
    std::vector<long> freq(static_cast<std::size_t>(max_count) + 1, 0);
    for (long c : counts) ++freq[static_cast<std::size_t>(c)];
    std::vector<double> probs(freq.size());
    const double n = static_cast<double>(counts.size());
    for (std::size_t i = 0; i < freq.size(); ++i) {
        probs[i] = static_cast<double>(freq[i]) / n;
    }
    return MultiplicityDistribution(std::move(probs));
}

MultiplicityDistribution MultiplicityDistribution::poisson(double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson mean must be positive and finite");
    }
    // Truncate once the remaining tail mass is below 1e-15.
    std::vector<double> probs;
    double p = std::exp(-mean);
    double cumulative = 0.0;
    int n = 0;
    while (cumulative < 1.0 - 1e-15) {
        probs.push_back(p);
        cumulative += p;
        ++n;
        p *= mean / static_cast<double>(n);
        if (n > 2000000) throw std::runtime_error("poisson truncation failed to converge");
    }
    for (double& q : probs) q /= cumulative;
    return MultiplicityDistribution(std::move(probs));
}

MultiplicityDistribution MultiplicityDistribution::poisson(double mean, int support_max) {
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson mean must be positive and finite");
    }
    if (support_max < 0) throw std::invalid_argument("poisson support bound must be non-negative");
    std::vector<double> probs(static_cast<std::size_t>(support_max) + 1);
    double p = std::exp(-mean);
    double cumulative = 0.0;
    for (int n = 0; n <= support_max; ++n) {
        probs[static_cast<std::size_t>(n)] = p;
        cumulative += p;
        p *= mean / static_cast<double>(n + 1);
    }
    for (double& q : probs) q /= cumulative;
    return MultiplicityDistribution(std::move(probs));
}

double MultiplicityDistribution::prob(int n) const {
    if (n < 0) throw std::invalid_argument("count must be non-negative");
    if (n > support_max()) return 0.0;
    return probs_[static_cast<std::size_t>(n)];
}

double falling_factorial(double n, int q) {
    if (q < 0) throw std::invalid_argument("falling factorial order must be non-negative");
    double result = 1.0;
    for (int i = 0; i < q; ++i) result *= n - static_cast<double>(i);
    return result;
}

double factorial_moment(const MultiplicityDistribution& dist, int q) {
    if (q < 1) throw std::invalid_argument("factorial moment order must be >= 1");
    const double mean = dist.mean();
    if (!(mean > 0.0)) throw std::runtime_error("factorial moment undefined for zero mean");
    if (q == 1) return 1.0;
    CompensatedSum acc;
    const auto& probs = dist.probs();
    for (std::size_t n = 0; n < probs.size(); ++n) {
        if (probs[n] == 0.0) continue;
        acc.add(probs[n] * falling_factorial(static_cast<double>(n), q));
    }
    return acc.value() / std::pow(mean, q);
}

double generating_function(const MultiplicityDistribution& dist, double z) {
    if (!std::isfinite(z)) throw std::invalid_argument("generating function argument must be finite");
    const double base = 1.0 + z;
    CompensatedSum acc;
    const auto& probs = dist.probs();
    double power = 1.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        acc.add(probs[n] * power);
        power *= base;
    }
    return acc.value();
}

double zero_count_probability(const MultiplicityDistribution& dist) {
    return dist.prob(0);
}

double MomentSet::value(int q) const {
    if (q == 1) return 1.0;
    if (q < 1 || q > q_max) throw std::invalid_argument("moment order out of range");
    return values[static_cast<std::size_t>(q - 2)];
}

double CumulantSet::value(int q) const {
    if (q == 1) return 1.0;
    if (q < 1 || q > q_max) throw std::invalid_argument("cumulant order out of range");
    return values[static_cast<std::size_t>(q - 2)];
}

MomentSet factorial_moments(const MultiplicityDistribution& dist, int q_max) {
    if (q_max < 1) throw std::invalid_argument("q_max must be >= 1");
    MomentSet set;
    set.mean_count = dist.mean();
    set.q_max = q_max;
    for (int q = 2; q <= q_max; ++q) set.values.push_back(factorial_moment(dist, q));
    return set;
}

namespace {

// Factorials up to the orders used here fit a double exactly.
[[nodiscard]] double factorial(int q) {
    double f = 1.0;
    for (int i = 2; i <= q; ++i) f *= static_cast<double>(i);
    return f;
}

}  // namespace

CumulantSet cumulants_from_moments(const MomentSet& moments) {
    return cumulants_from_moments(moments, moments.q_max);
}

CumulantSet cumulants_from_moments(const MomentSet& moments, int q_max) {
    if (q_max < 1) throw std::invalid_argument("q_max must be >= 1");
    if (q_max > moments.q_max) {
        throw std::invalid_argument("requested cumulant order exceeds available moment order");
    }
    // With alpha_q = F_q/q! and beta_q = K_q/q!, ln of the series gives
    //   beta_q = alpha_q - (1/q) sum_{j=1}^{q-1} j beta_j alpha_{q-j}.
    std::vector<double> alpha(static_cast<std::size_t>(q_max) + 1, 0.0);
    std::vector<double> beta(static_cast<std::size_t>(q_max) + 1, 0.0);
    alpha[0] = 1.0;
    for (int q = 1; q <= q_max; ++q) {
        alpha[static_cast<std::size_t>(q)] = moments.value(q) / factorial(q);
    }
    CumulantSet set;
    set.mean_count = moments.mean_count;
    set.q_max = q_max;
    for (int q = 1; q <= q_max; ++q) {
        double acc = 0.0;
        for (int j = 1; j < q; ++j) {
            acc += static_cast<double>(j) * beta[static_cast<std::size_t>(j)] *
                   alpha[static_cast<std::size_t>(q - j)];
        }
        beta[static_cast<std::size_t>(q)] = alpha[static_cast<std::size_t>(q)] -
                                            acc / static_cast<double>(q);
        if (q >= 2) set.values.push_back(beta[static_cast<std::size_t>(q)] * factorial(q));
    }
    return set;
}

MomentSet moments_from_cumulants(const CumulantSet& cumulants) {
    const int q_max = cumulants.q_max;
    if (q_max < 1) throw std::invalid_argument("cumulant set has no usable orders");
    std::vector<double> alpha(static_cast<std::size_t>(q_max) + 1, 0.0);
    std::vector<double> beta(static_cast<std::size_t>(q_max) + 1, 0.0);
    alpha[0] = 1.0;
    for (int q = 1; q <= q_max; ++q) {
        beta[static_cast<std::size_t>(q)] = cumulants.value(q) / factorial(q);
    }
    MomentSet set;
    set.mean_count = cumulants.mean_count;
    set.q_max = q_max;
    for (int q = 1; q <= q_max; ++q) {
        double acc = 0.0;
        for (int j = 1; j <= q; ++j) {
            acc += static_cast<double>(j) * beta[static_cast<std::size_t>(j)] *
                   alpha[static_cast<std::size_t>(q - j)];
        }
        alpha[static_cast<std::size_t>(q)] = acc / static_cast<double>(q);
        if (q >= 2) set.values.push_back(alpha[static_cast<std::size_t>(q)] * factorial(q));
    }
    return set;
}

long EventWindow::total(Sign sign) const noexcept {
    const auto& counts = (sign == Sign::positive) ? pos_counts : neg_counts;
    long total = 0;
    for (int c : counts) total += c;
    return total;
}

MomentEstimate estimate_binned_moment(std::span<const EventWindow> windows, BinnedMode mode, int q,
                                      const std::optional<BootstrapConfig>& bootstrap) {
    if (windows.empty()) throw std::invalid_argument("binned moment needs at least one window");
    if (q < 1) throw std::invalid_argument("binned moment order must be >= 1");
    if (mode == BinnedMode::unlike && q != 2) {
        throw std::invalid_argument("unlike-sign moment is defined for q = 2 only");
    }
    const int m = windows[0].n_bins;
    if (m < 1) throw std::invalid_argument("windows must have at least one bin");

    const std::size_t n_events = windows.size();
    std::vector<double> numer(n_events);     // per-event numerator, already / M
    std::vector<double> total_a(n_events);   // full-window count, first sign
    std::vector<double> total_b;             // second sign, unlike mode only
    if (mode == BinnedMode::unlike) total_b.resize(n_events);

    for (std::size_t e = 0; e < n_events; ++e) {
        const EventWindow& w = windows[e];
        if (w.n_bins != m || w.pos_counts.size() != static_cast<std::size_t>(m) ||
            w.neg_counts.size() != static_cast<std::size_t>(m)) {
            throw std::invalid_argument("all windows must share the same bin layout");
        }
        double y = 0.0;
        long a = 0;
        long b = 0;
        for (int k = 0; k < m; ++k) {
            const int np = w.pos_counts[static_cast<std::size_t>(k)];
            const int nn = w.neg_counts[static_cast<std::size_t>(k)];
            if (np < 0 || nn < 0) throw std::invalid_argument("bin counts must be non-negative");
            switch (mode) {
                case BinnedMode::like_positive:
                    y += falling_factorial(static_cast<double>(np), q);
                    a += np;
                    break;
                case BinnedMode::like_negative:
                    y += falling_factorial(static_cast<double>(nn), q);
                    a += nn;
                    break;
                case BinnedMode::unlike:
                    y += static_cast<double>(np) * static_cast<double>(nn);
                    a += np;
                    b += nn;
                    break;
            }
        }
        numer[e] = y / static_cast<double>(m);
        total_a[e] = static_cast<double>(a);
        if (mode == BinnedMode::unlike) total_b[e] = static_cast<double>(b);
    }

    const double mean_y = compensated_mean(numer);
    const double mean_a = compensated_mean(total_a);
    const double mean_b = (mode == BinnedMode::unlike) ? compensated_mean(total_b) : 0.0;
    const double dm = static_cast<double>(m);

    const auto denominator = [&](double a_bar, double b_bar) {
        if (mode == BinnedMode::unlike) return a_bar * b_bar / (dm * dm);
        return std::pow(a_bar / dm, q);
    };
    const double den = denominator(mean_a, mean_b);
    if (!(den > 0.0)) throw std::runtime_error("binned moment undefined: mean count is zero");

    MomentEstimate est;
    est.value = mean_y / den;

    // First-order propagation of the event-to-event scatter of the
    // numerator and of the normalizing means, covariances included.
    const double n = static_cast<double>(n_events);
    const double v_yy = sample_covariance(numer, numer, mean_y, mean_y) / n;
    if (mode == BinnedMode::unlike) {
        const double v_aa = sample_covariance(total_a, total_a, mean_a, mean_a) / n;
        const double v_bb = sample_covariance(total_b, total_b, mean_b, mean_b) / n;
        const double v_ya = sample_covariance(numer, total_a, mean_y, mean_a) / n;
        const double v_yb = sample_covariance(numer, total_b, mean_y, mean_b) / n;
        const double v_ab = sample_covariance(total_a, total_b, mean_a, mean_b) / n;
        const double gy = 1.0 / den;
        const double ga = -est.value / mean_a;
        const double gb = -est.value / mean_b;
        const double var = gy * gy * v_yy + ga * ga * v_aa + gb * gb * v_bb +
                           2.0 * (gy * ga * v_ya + gy * gb * v_yb + ga * gb * v_ab);
        est.stderr_delta = var > 0.0 ? std::sqrt(var) : 0.0;
    } else {
        const double v_aa = sample_covariance(total_a, total_a, mean_a, mean_a) / n;
        const double v_ya = sample_covariance(numer, total_a, mean_y, mean_a) / n;
        const double gy = 1.0 / den;
        const double ga = -static_cast<double>(q) * est.value / mean_a;
        const double var = gy * gy * v_yy + ga * ga * v_aa + 2.0 * gy * ga * v_ya;
        est.stderr_delta = var > 0.0 ? std::sqrt(var) : 0.0;
    }

    if (bootstrap.has_value()) {
        if (bootstrap->resamples < 2) throw std::invalid_argument("bootstrap needs >= 2 resamples");
        std::vector<double> replicas;
        replicas.reserve(static_cast<std::size_t>(bootstrap->resamples));
        for (int r = 0; r < bootstrap->resamples; ++r) {
            RandomStream stream = RandomStream::substream(bootstrap->seed, static_cast<std::uint64_t>(r));
            double sum_y = 0.0;
            double sum_a = 0.0;
            double sum_b = 0.0;
            for (std::size_t i = 0; i < n_events; ++i) {
                const std::size_t idx = static_cast<std::size_t>(stream.next_below(n_events));
                sum_y += numer[idx];
                sum_a += total_a[idx];
                if (mode == BinnedMode::unlike) sum_b += total_b[idx];
            }
            const double rden = denominator(sum_a / n, sum_b / n);
            if (rden > 0.0) replicas.push_back((sum_y / n) / rden);
        }
        if (replicas.size() >= 2) {
            const double mean_r = compensated_mean(replicas);
            CompensatedSum ss;
            for (double v : replicas) ss.add((v - mean_r) * (v - mean_r));
            est.stderr_bootstrap = std::sqrt(ss.value() / static_cast<double>(replicas.size() - 1));
        }
    }
    return est;
}

double fq_binned(std::span<const EventWindow> windows, Sign sign, int q) {
    const BinnedMode mode = (sign == Sign::positive) ? BinnedMode::like_positive : BinnedMode::like_negative;
    return estimate_binned_moment(windows, mode, q).value;
}

double f2_like_sign(std::span<const EventWindow> windows, Sign sign) {
    return fq_binned(windows, sign, 2);
}

double f2_unlike_sign(std::span<const EventWindow> windows) {
    return estimate_binned_moment(windows, BinnedMode::unlike, 2).value;
}

}  // namespace facmom
