#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "facmom/moments.hpp"

namespace facmom {

/// Uniformly sampled price history.  Timestamps are strictly increasing;
/// unit is the nominal tick spacing in timestamp units.
struct PriceSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> prices;
    std::int64_t unit = 1;
};

/// Signs of consecutive price differences: +1, -1, or 0 for an exact tie.
///
/// session_breaks lists indices i where the return from tick i to i+1
/// spans a timestamp gap larger than 3x the unit; windows never cross
/// such a break.
struct SignSeries {
    std::vector<std::int8_t> signs;
    std::int64_t unit = 1;
    std::vector<std::size_t> session_breaks;
};

struct SegmentationConfig {
    int window_len = 0;  // signs per window
    int n_bins = 0;      // must divide window_len
};

struct CsvConfig {
    char delimiter = ',';
};

/// Reads a two-column (timestamp, price) file.
///
/// A first line whose leading field is not numeric is treated as a header.
/// Accepts LF or CRLF endings.  Errors carry the 1-based file line number:
/// unreadable file, malformed row, non-positive price, non-increasing
/// timestamp, or fewer than two data rows.  The unit is inferred as the
/// most frequent timestamp difference (smallest on ties).
[[nodiscard]] PriceSeries load_price_csv(const std::filesystem::path& path, const CsvConfig& config = {});

/// Keeps every k-th tick starting from the first and scales the unit by k.
/// Decimation, not aggregation: resampled prices are a subset of inputs.
[[nodiscard]] PriceSeries resample(const PriceSeries& series, int every);

/// Sign series of the price differences; length is one less than the
/// price count.
[[nodiscard]] SignSeries to_signs(const PriceSeries& series);

/// Splits the sign series into consecutive non-overlapping windows of
/// window_len ticks, each divided into n_bins equal bins; bin counts tally
/// positive and negative ticks separately and zeros fall in neither.
/// The trailing partial window is discarded, and windows restart after
/// each session break.  n_bins must divide window_len.
[[nodiscard]] std::vector<EventWindow> segment(const SignSeries& series, const SegmentationConfig& config);

}  // namespace facmom
