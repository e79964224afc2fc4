#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "facmom/moments.hpp"
#include "facmom/rng.hpp"
#include "facmom/synth.hpp"

using namespace facmom;

namespace {

// q-th derivative at `center` of a polynomial known only through point
// evaluations: Newton divided differences over Chebyshev nodes, then a
// Horner pass that carries the derivative terms.  Exact for polynomials
// up to node-count conditioning, and independent of how the moments are
// computed elsewhere.
double newton_derivative(const std::function<double(double)>& f, int degree, int order, double center,
                         double radius) {
    const int n = degree + 1;
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double angle = 3.14159265358979323846 * (2.0 * i + 1.0) / (2.0 * n);
        x[static_cast<std::size_t>(i)] = center + radius * std::cos(angle);
        c[static_cast<std::size_t>(i)] = f(x[static_cast<std::size_t>(i)]);
    }
    for (int k = 1; k < n; ++k) {
        for (int i = n - 1; i >= k; --i) {
            c[static_cast<std::size_t>(i)] =
                (c[static_cast<std::size_t>(i)] - c[static_cast<std::size_t>(i - 1)]) /
                (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i - k)]);
        }
    }
    std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
    d[0] = c[static_cast<std::size_t>(n - 1)];
    for (int k = n - 2; k >= 0; --k) {
        const double dz = center - x[static_cast<std::size_t>(k)];
        for (int j = order; j >= 1; --j) {
            d[static_cast<std::size_t>(j)] =
                d[static_cast<std::size_t>(j)] * dz + static_cast<double>(j) * d[static_cast<std::size_t>(j - 1)];
        }
        d[0] = d[0] * dz + c[static_cast<std::size_t>(k)];
    }
    return d[static_cast<std::size_t>(order)];
}

MultiplicityDistribution random_distribution(RandomStream& stream, int support_max) {
    std::vector<double> probs(static_cast<std::size_t>(support_max) + 1);
    double total = 0.0;
    for (double& p : probs) {
        p = stream.next_double() + 1e-6;
        total += p;
    }
    for (double& p : probs) p /= total;
    return MultiplicityDistribution(std::move(probs));
}

std::vector<EventWindow> fair_coin_windows(std::size_t n_windows, int window_len, int n_bins,
                                           std::uint64_t seed) {
    RandomStream stream(seed);
    std::vector<EventWindow> windows(n_windows);
    const int width = window_len / n_bins;
    for (auto& w : windows) {
        w.n_bins = n_bins;
        w.pos_counts.assign(static_cast<std::size_t>(n_bins), 0);
        w.neg_counts.assign(static_cast<std::size_t>(n_bins), 0);
        for (int k = 0; k < n_bins; ++k) {
            for (int i = 0; i < width; ++i) {
                if (stream.next_u64() & 1ULL) {
                    ++w.pos_counts[static_cast<std::size_t>(k)];
                } else {
                    ++w.neg_counts[static_cast<std::size_t>(k)];
                }
            }
        }
    }
    return windows;
}

}  // namespace

TEST_CASE("multiplicity distribution from raw counts") {
    const std::vector<long> counts{0, 0, 1, 2};
    const auto dist = MultiplicityDistribution::from_counts(counts);
    CHECK(dist.support_max() == 2);
    CHECK(dist.prob(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(dist.prob(1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(dist.prob(2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(dist.prob(7) == 0.0);
    CHECK(dist.mean() == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("multiplicity distribution validation") {
    CHECK_THROWS_AS(MultiplicityDistribution({0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(MultiplicityDistribution({1.2, -0.2}), std::invalid_argument);
    CHECK_THROWS_AS(MultiplicityDistribution(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(MultiplicityDistribution::from_counts(std::vector<long>{})), std::invalid_argument);    CHECK_THROWS_AS(static_cast<void>(MultiplicityDistribution::from_counts(std::vector<long>{-1})), std::invalid_argument);}

TEST_CASE("factorial moments against hand-computed values") {
    // All mass at n = 2: <n(n-1)> = 2 over <n>^2 = 4.
    const MultiplicityDistribution at_two({0.0, 0.0, 1.0});
    CHECK(factorial_moment(at_two, 2) == doctest::Approx(0.5).epsilon(1e-14));
    // All mass at n = 1: no pairs at all.
    const MultiplicityDistribution at_one({0.0, 1.0});
    CHECK(factorial_moment(at_one, 2) == 0.0);
    CHECK(factorial_moment(at_one, 1) == 1.0);
    CHECK_THROWS_AS(static_cast<void>(factorial_moment(at_two, 0)), std::invalid_argument);
    const MultiplicityDistribution at_zero({1.0});
    CHECK_THROWS_AS(static_cast<void>(factorial_moment(at_zero, 2)), std::runtime_error);
}

TEST_CASE("poisson reference has unit moments at every order") {
    const auto dist = MultiplicityDistribution::poisson(3.0, 60);
    for (int q = 2; q <= 5; ++q) {
        CHECK(factorial_moment(dist, q) == doctest::Approx(1.0).epsilon(1e-9));
    }
    const auto auto_trunc = MultiplicityDistribution::poisson(3.0);
    for (int q = 2; q <= 5; ++q) {
        CHECK(factorial_moment(auto_trunc, q) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("generating function values") {
    const MultiplicityDistribution half({0.5, 0.5});
    CHECK(generating_function(half, -1.0) == doctest::Approx(0.5).epsilon(1e-15));
    const MultiplicityDistribution at_one({0.0, 1.0});
    CHECK(generating_function(at_one, 0.7) == doctest::Approx(1.7).epsilon(1e-15));
}

TEST_CASE("generating function properties on random distributions") {
    RandomStream stream(421);
    for (int rep = 0; rep < 20; ++rep) {
        const auto dist = random_distribution(stream, 2 + static_cast<int>(stream.next_below(28)));
        CHECK(generating_function(dist, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(generating_function(dist, -1.0) ==
              doctest::Approx(zero_count_probability(dist)).epsilon(1e-12));
    }
}

TEST_CASE("factorial moments match generating function derivatives") {
    // d^q G / dz^q at z = 0 equals <n>^q F_q; the derivative oracle knows
    // only point values of G.
    RandomStream stream(97);
    for (int rep = 0; rep < 10; ++rep) {
        const int support = 5 + static_cast<int>(stream.next_below(26));
        const auto dist = random_distribution(stream, support);
        for (int q = 2; q <= 5; ++q) {
            const double via_derivative = newton_derivative(
                [&](double z) { return generating_function(dist, z); }, support, q, 0.0, 0.1);
            const double via_moment = factorial_moment(dist, q) * std::pow(dist.mean(), q);
            CHECK(via_derivative == doctest::Approx(via_moment).epsilon(1e-8));
        }
    }
}

TEST_CASE("zero count probability of a truncated poisson") {
    const auto dist = MultiplicityDistribution::poisson(2.0, 40);
    CHECK(zero_count_probability(dist) == doctest::Approx(std::exp(-2.0)).epsilon(1e-6));
}

TEST_CASE("cumulants from moments, hand values") {
    MomentSet moments;
    moments.mean_count = 3.0;
    moments.q_max = 2;
    moments.values = {1.5};
    const auto cumulants = cumulants_from_moments(moments);
    CHECK(cumulants.value(2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cumulants.value(1) == 1.0);
}

TEST_CASE("third cumulant combination") {
    // K_3 = F_3 - 3 F_2 + 2.
    RandomStream stream(55);
    for (int rep = 0; rep < 25; ++rep) {
        const auto dist = random_distribution(stream, 12);
        const auto moments = factorial_moments(dist, 3);
        const auto cumulants = cumulants_from_moments(moments);
        const double expected = moments.value(3) - 3.0 * moments.value(2) + 2.0;
        CHECK(cumulants.value(3) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("poisson cumulants vanish above first order") {
    const auto dist = MultiplicityDistribution::poisson(4.0, 80);
    const auto cumulants = cumulants_from_moments(factorial_moments(dist, 5));
    for (int q = 2; q <= 5; ++q) {
        CHECK(std::abs(cumulants.value(q)) < 1e-9);
    }
}

TEST_CASE("moment cumulant round trip") {
    RandomStream stream(2024);
    for (int rep = 0; rep < 100; ++rep) {
        const auto dist = random_distribution(stream, 2 + static_cast<int>(stream.next_below(19)));
        const auto moments = factorial_moments(dist, 8);
        const auto cumulants = cumulants_from_moments(moments);
        const auto back = moments_from_cumulants(cumulants);
        for (int q = 2; q <= 8; ++q) {
            CHECK(back.value(q) == doctest::Approx(moments.value(q)).epsilon(1e-10));
        }
        CHECK(std::abs(cumulants.value(2) - (moments.value(2) - 1.0)) < 1e-12);
    }
}

TEST_CASE("cumulant order cannot exceed available moments") {
    MomentSet moments;
    moments.mean_count = 1.0;
    moments.q_max = 3;
    moments.values = {1.1, 1.4};
    CHECK_THROWS_AS(static_cast<void>(cumulants_from_moments(moments, 4)), std::invalid_argument);
    CHECK_NOTHROW(static_cast<void>(cumulants_from_moments(moments, 2)));
}

TEST_CASE("binned like-sign moment, single window cases") {
    EventWindow a;
    a.n_bins = 1;
    a.pos_counts = {2};
    a.neg_counts = {0};
    const std::vector<EventWindow> one{a};
    CHECK(f2_like_sign(one, Sign::positive) == doctest::Approx(0.5).epsilon(1e-14));

    EventWindow b;
    b.n_bins = 2;
    b.pos_counts = {1, 1};
    b.neg_counts = {0, 0};
    const std::vector<EventWindow> split{b};
    CHECK(f2_like_sign(split, Sign::positive) == 0.0);
}

TEST_CASE("binned unlike-sign moment, single window case") {
    EventWindow w;
    w.n_bins = 1;
    w.pos_counts = {1};
    w.neg_counts = {1};
    const std::vector<EventWindow> one{w};
    CHECK(f2_unlike_sign(one) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("third order binned moment, hand value") {
    EventWindow w;
    w.n_bins = 1;
    w.pos_counts = {3};
    w.neg_counts = {0};
    const std::vector<EventWindow> one{w};
    // 3*2*1 / 3^3.
    CHECK(fq_binned(one, Sign::positive, 3) == doctest::Approx(6.0 / 27.0).epsilon(1e-14));
}

TEST_CASE("fq_binned at q = 2 reduces to f2_like_sign bit for bit") {
    const auto windows = fair_coin_windows(500, 40, 4, 99);
    CHECK(fq_binned(windows, Sign::positive, 2) == f2_like_sign(windows, Sign::positive));
    CHECK(fq_binned(windows, Sign::negative, 2) == f2_like_sign(windows, Sign::negative));
}

TEST_CASE("fair coin windows give unit moments at wide bins") {
    // Bin occupancies are binomial, so F_2 carries a 1 - 1/width depletion;
    // widths of 100+ keep the baseline inside 1 +- 0.02.
    for (const int n_bins : {1, 2, 4}) {
        const auto windows = fair_coin_windows(20000, 400, n_bins, 7);
        CHECK(f2_like_sign(windows, Sign::positive) == doctest::Approx(1.0).epsilon(0.02));
        CHECK(f2_like_sign(windows, Sign::negative) == doctest::Approx(1.0).epsilon(0.02));
        CHECK(f2_unlike_sign(windows) == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("poisson bin counts give unit moments at any order") {
    RandomStream stream(314);
    std::vector<std::vector<long>> series(100000);
    for (auto& s : series) {
        s.resize(4);
        for (auto& c : s) c = stream.next_poisson(3.0);
    }
    const auto windows = windows_from_counts(series, 4);
    CHECK(fq_binned(windows, Sign::positive, 3) == doctest::Approx(1.0).epsilon(0.03));
    CHECK(fq_binned(windows, Sign::positive, 2) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("binned moment is stable under window permutation") {
    auto windows = fair_coin_windows(10000, 200, 4, 1234);
    const double before = f2_like_sign(windows, Sign::positive);
    std::mt19937 shuffler(5);
    std::shuffle(windows.begin(), windows.end(), shuffler);
    const double after = f2_like_sign(windows, Sign::positive);
    CHECK(std::abs(after - before) <= 1e-12);
}

TEST_CASE("binned moment validation") {
    const std::vector<EventWindow> none;
    CHECK_THROWS_AS(static_cast<void>(f2_like_sign(none, Sign::positive)), std::invalid_argument);

    EventWindow w;
    w.n_bins = 2;
    w.pos_counts = {1, 1};
    w.neg_counts = {0, 0};
    EventWindow other;
    other.n_bins = 4;
    other.pos_counts = {1, 1, 0, 0};
    other.neg_counts = {0, 0, 0, 0};
    const std::vector<EventWindow> mixed{w, other};
    CHECK_THROWS_AS(static_cast<void>(f2_like_sign(mixed, Sign::positive)), std::invalid_argument);

    const std::vector<EventWindow> single{w};
    CHECK_THROWS_AS(static_cast<void>(fq_binned(single, Sign::positive, 0)), std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(estimate_binned_moment(single, BinnedMode::unlike, 3)),
                    std::invalid_argument);
    // No negative ticks anywhere: the negative-sign mean vanishes.
    CHECK_THROWS_AS(static_cast<void>(f2_like_sign(single, Sign::negative)), std::runtime_error);
}

TEST_CASE("delta and bootstrap errors agree on poisson windows") {
    RandomStream stream(8);
    std::vector<std::vector<long>> series(20000);
    for (auto& s : series) {
        s.resize(4);
        for (auto& c : s) c = stream.next_poisson(2.0);
    }
    const auto windows = windows_from_counts(series, 4);
    const auto est = estimate_binned_moment(windows, BinnedMode::like_positive, 2,
                                            BootstrapConfig{200, 77});
    CHECK(est.stderr_delta > 0.0);
    CHECK(est.stderr_bootstrap > 0.0);
    CHECK(est.stderr_bootstrap / est.stderr_delta > 0.5);
    CHECK(est.stderr_bootstrap / est.stderr_delta < 2.0);
    // And the estimate itself is compatible with the poisson value 1.
    CHECK(std::abs(est.value - 1.0) < 5.0 * est.stderr_delta);
}

TEST_CASE("falling factorial") {
    CHECK(falling_factorial(5.0, 3) == doctest::Approx(60.0).epsilon(1e-14));
    CHECK(falling_factorial(3.0, 5) == 0.0);
    CHECK(falling_factorial(4.0, 0) == 1.0);
    CHECK_THROWS_AS(static_cast<void>(falling_factorial(4.0, -1)), std::invalid_argument);
}
