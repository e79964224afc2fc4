#include "facmom/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "facmom/rng.hpp"

namespace facmom {

PriceSeries gen_iid_gaussian(std::size_t length, std::uint64_t seed) {
    if (length < 2) throw std::invalid_argument("series length must be >= 2");
    RandomStream stream(seed);
    PriceSeries series;
    series.unit = 1;
    series.timestamps.resize(length);
    series.prices.resize(length);
    double level = 0.0;
    double min_level = 0.0;
    for (std::size_t i = 0; i < length; ++i) {
        series.timestamps[i] = static_cast<std::int64_t>(i);
        if (i > 0) level += stream.next_normal();
        series.prices[i] = level;
        min_level = std::min(min_level, level);
    }
    const double shift = 1.0 - min_level;
    for (double& p : series.prices) p += shift;
    return series;
}

std::vector<long> gen_poisson_counts(double mean, std::size_t n_events, std::uint64_t seed) {
    if (!(mean > 0.0)) throw std::invalid_argument("poisson mean must be positive");
    if (n_events == 0) throw std::invalid_argument("need at least one event");
    RandomStream stream(seed);
    std::vector<long> counts(n_events);
    for (auto& c : counts) c = stream.next_poisson(mean);
    return counts;
}

SignSeries gen_markov_signs(double persistence, std::size_t length, std::uint64_t seed) {
    if (!(persistence > 0.0) || !(persistence < 1.0)) {
        throw std::invalid_argument("persistence must lie in (0, 1)");
    }
    if (length == 0) throw std::invalid_argument("need at least one sign");
    RandomStream stream(seed);
    SignSeries series;
    series.unit = 1;
    series.signs.resize(length);
    std::int8_t sign = stream.next_double() < 0.5 ? std::int8_t{1} : std::int8_t{-1};
    series.signs[0] = sign;
    for (std::size_t i = 1; i < length; ++i) {
        if (stream.next_double() >= persistence) sign = static_cast<std::int8_t>(-sign);
        series.signs[i] = sign;
    }
    return series;
}

CascadeRealization gen_cascade(const CascadeParams& params, std::uint64_t seed) {
    if (params.levels < 1 || params.levels > 24) {
        throw std::invalid_argument("cascade levels must lie in [1, 24]");
    }
    if (!(params.weight >= 0.5) || !(params.weight < 1.0)) {
        throw std::invalid_argument("cascade weight must lie in [0.5, 1)");
    }
    if (!(params.mean_count > 0.0)) throw std::invalid_argument("cascade mean count must be positive");

    RandomStream stream(seed);
    const std::size_t n_cells = std::size_t{1} << params.levels;
    CascadeRealization out;
    // Total mass mean_count * 2^levels keeps the per-cell average fixed
    // across depths.
    out.intensity.assign(n_cells, params.mean_count);
    for (int level = 0; level < params.levels; ++level) {
        const std::size_t half = n_cells >> (level + 1);
        for (std::size_t block = 0; block < n_cells; block += 2 * half) {
            const bool left_heavy = stream.next_double() < 0.5;
            const double left = left_heavy ? 2.0 * params.weight : 2.0 * (1.0 - params.weight);
            const double right = 2.0 - left;
            for (std::size_t i = 0; i < half; ++i) {
                out.intensity[block + i] *= left;
                out.intensity[block + half + i] *= right;
            }
        }
    }
    out.counts.resize(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
        out.counts[i] = stream.next_poisson(out.intensity[i]);
    }
    return out;
}

std::vector<CascadeRealization> gen_cascade_ensemble(const CascadeParams& params,
                                                     std::size_t n_realizations, std::uint64_t seed) {
    if (n_realizations == 0) throw std::invalid_argument("need at least one realization");
    std::vector<CascadeRealization> out;
    out.reserve(n_realizations);
    for (std::size_t i = 0; i < n_realizations; ++i) {
        RandomStream sub = RandomStream::substream(seed, i);
        out.push_back(gen_cascade(params, sub.next_u64()));
    }
    return out;
}

std::vector<EventWindow> windows_from_counts(std::span<const std::vector<long>> series, int n_bins) {
    if (series.empty()) throw std::invalid_argument("need at least one count series");
    if (n_bins < 1) throw std::invalid_argument("bin count must be >= 1");
    const std::size_t len = series[0].size();
    if (len == 0 || len % static_cast<std::size_t>(n_bins) != 0) {
        throw std::invalid_argument("bin count must divide the series length");
    }
    const std::size_t width = len / static_cast<std::size_t>(n_bins);
    std::vector<EventWindow> windows;
    windows.reserve(series.size());
    for (const auto& counts : series) {
        if (counts.size() != len) throw std::invalid_argument("count series must share one length");
        EventWindow w;
        w.n_bins = n_bins;
        w.pos_counts.assign(static_cast<std::size_t>(n_bins), 0);
        w.neg_counts.assign(static_cast<std::size_t>(n_bins), 0);
        for (std::size_t i = 0; i < len; ++i) {
            long c = counts[i];
            if (c < 0) throw std::invalid_argument("counts must be non-negative");
            w.pos_counts[i / width] += static_cast<int>(c);
        }
        windows.push_back(std::move(w));
    }
    return windows;
}

std::vector<EventWindow> windows_from_scalar_counts(std::span<const long> counts) {
    if (counts.empty()) throw std::invalid_argument("need at least one count");
    std::vector<EventWindow> windows;
    windows.reserve(counts.size());
    for (long c : counts) {
        if (c < 0) throw std::invalid_argument("counts must be non-negative");
        EventWindow w;
        w.n_bins = 1;
        w.pos_counts.assign(1, static_cast<int>(c));
        w.neg_counts.assign(1, 0);
        windows.push_back(std::move(w));
    }
    return windows;
}

}  // namespace facmom
