#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "facmom/ingest.hpp"
#include "facmom/moments.hpp"

namespace facmom {

/// Random walk with standard normal increments, shifted so every price is
/// positive.  Timestamps run 0, 1, 2, ... with unit 1.  The shift leaves
/// the increment signs untouched.  Identical seeds give identical series.
[[nodiscard]] PriceSeries gen_iid_gaussian(std::size_t length, std::uint64_t seed);

/// Independent Poisson event counts with the given mean.
[[nodiscard]] std::vector<long> gen_poisson_counts(double mean, std::size_t n_events, std::uint64_t seed);

/// Two-state sign chain: each tick repeats the previous sign with the
/// given persistence, otherwise flips.  persistence in (0, 1);
/// persistence 0.5 is a fair coin.  The first sign is drawn evenly.
[[nodiscard]] SignSeries gen_markov_signs(double persistence, std::size_t length, std::uint64_t seed);

/// Binary multiplicative cascade.
///
/// Starting from a uniform intensity, each refinement level splits every
/// cell in two and multiplies the halves by 2w and 2(1-w) in a seeded
/// random order, conserving total mass.  weight in [0.5, 1); weight 0.5
/// leaves the intensity flat.  mean_count fixes the average count per
/// finest cell, so the total mass is mean_count * 2^levels regardless of
/// depth.
struct CascadeParams {
    int levels = 0;
    double weight = 0.5;
    double mean_count = 5.0;
};

/// One cascade draw: cell intensities and Poisson counts with those
/// intensities.  Both vectors have 2^levels entries.
struct CascadeRealization {
    std::vector<double> intensity;
    std::vector<long> counts;
};

[[nodiscard]] CascadeRealization gen_cascade(const CascadeParams& params, std::uint64_t seed);

/// Independent cascade draws with per-realization substreams of the seed.
[[nodiscard]] std::vector<CascadeRealization> gen_cascade_ensemble(const CascadeParams& params,
                                                                   std::size_t n_realizations,
                                                                   std::uint64_t seed);

/// Wraps count series as single-sign event windows: series entries are
/// aggregated into n_bins equal bins of positive counts.  Every series
/// must have the same length, divisible by n_bins.
[[nodiscard]] std::vector<EventWindow> windows_from_counts(std::span<const std::vector<long>> series,
                                                           int n_bins);

/// One count as a one-bin window; a plain count sample seen this way has
/// the same factorial moments as its multiplicity distribution.
[[nodiscard]] std::vector<EventWindow> windows_from_scalar_counts(std::span<const long> counts);

}  // namespace facmom
