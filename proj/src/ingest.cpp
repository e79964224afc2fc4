#include "facmom/ingest.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace facmom {

namespace {

[[nodiscard]] bool parse_int64(std::string_view field, std::int64_t& out) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto result = std::from_chars(begin, end, out);
    return result.ec == std::errc() && result.ptr == end;
}

[[nodiscard]] bool parse_double(std::string_view field, double& out) {
    if (field.empty()) return false;
    std::string buffer(field);
    char* end = nullptr;
    errno = 0;
    out = std::strtod(buffer.c_str(), &end);
    return errno == 0 && end == buffer.c_str() + buffer.size();
}

[[nodiscard]] std::string row_error(std::size_t line_no, const std::string& what) {
    return "row " + std::to_string(line_no) + ": " + what;
}

}  // namespace

PriceSeries load_price_csv(const std::filesystem::path& path, const CsvConfig& config) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open input file: " + path.string());
    }
    PriceSeries series;
    std::string line;
    std::size_t line_no = 0;
    bool checked_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto cut = line.find(config.delimiter);
        if (cut == std::string::npos) {
            throw std::runtime_error(row_error(line_no, "expected two delimited columns"));
        }
        const std::string_view ts_field(line.data(), cut);
        const std::string_view price_field(line.data() + cut + 1, line.size() - cut - 1);

        std::int64_t ts = 0;
        if (!parse_int64(ts_field, ts)) {
            if (!checked_header) {
                // Non-numeric leading field on the first row is a header.
                checked_header = true;
                continue;
            }
            throw std::runtime_error(row_error(line_no, "malformed timestamp"));
        }
        checked_header = true;

        double price = 0.0;
        if (!parse_double(price_field, price) || !std::isfinite(price)) {
            throw std::runtime_error(row_error(line_no, "malformed price"));
        }
        if (price <= 0.0) {
            throw std::runtime_error(row_error(line_no, "price must be positive"));
        }
        if (!series.timestamps.empty() && ts <= series.timestamps.back()) {
            throw std::runtime_error(row_error(line_no, "timestamp not strictly increasing"));
        }
        series.timestamps.push_back(ts);
        series.prices.push_back(price);
    }
    if (series.prices.size() < 2) {
        throw std::runtime_error("input needs at least two data rows");
    }

    // Modal timestamp difference; the smallest wins a tie.
    std::map<std::int64_t, std::size_t> gap_freq;
    for (std::size_t i = 1; i < series.timestamps.size(); ++i) {
        ++gap_freq[series.timestamps[i] - series.timestamps[i - 1]];
    }
    series.unit = gap_freq.begin()->first;
    std::size_t best = gap_freq.begin()->second;
    for (const auto& [gap, count] : gap_freq) {
        if (count > best) {
            best = count;
            series.unit = gap;
        }
    }
    return series;
}

PriceSeries resample(const PriceSeries& series, int every) {
    if (every < 1) throw std::invalid_argument("resample factor must be >= 1");
    if (series.prices.size() < 2) throw std::invalid_argument("series too short to resample");
    PriceSeries out;
    out.unit = series.unit * every;
    for (std::size_t i = 0; i < series.prices.size(); i += static_cast<std::size_t>(every)) {
        out.timestamps.push_back(series.timestamps[i]);
        out.prices.push_back(series.prices[i]);
    }
    return out;
}

SignSeries to_signs(const PriceSeries& series) {
    if (series.prices.size() < 2) throw std::invalid_argument("need at least two prices");
    if (series.timestamps.size() != series.prices.size()) {
        throw std::invalid_argument("timestamp and price columns differ in length");
    }
    SignSeries out;
    out.unit = series.unit;
    out.signs.reserve(series.prices.size() - 1);
    const std::int64_t max_gap = 3 * series.unit;
    for (std::size_t i = 1; i < series.prices.size(); ++i) {
        const double diff = series.prices[i] - series.prices[i - 1];
        out.signs.push_back(diff > 0.0 ? std::int8_t{1} : (diff < 0.0 ? std::int8_t{-1} : std::int8_t{0}));
        if (series.timestamps[i] - series.timestamps[i - 1] > max_gap) {
            out.session_breaks.push_back(i - 1);
        }
    }
    return out;
}

std::vector<EventWindow> segment(const SignSeries& series, const SegmentationConfig& config) {
    if (config.window_len < 1) throw std::invalid_argument("window length must be >= 1");
    if (config.n_bins < 1) throw std::invalid_argument("bin count must be >= 1");
    if (config.window_len % config.n_bins != 0) {
        throw std::invalid_argument("bin count " + std::to_string(config.n_bins) +
                                    " does not divide window length " + std::to_string(config.window_len));
    }
    const std::size_t window_len = static_cast<std::size_t>(config.window_len);
    const std::size_t bin_width = window_len / static_cast<std::size_t>(config.n_bins);

    std::vector<EventWindow> windows;
    std::size_t session_start = 0;
    auto emit_session = [&](std::size_t session_end) {
        // Whole windows only; the trailing partial window is dropped.
        for (std::size_t start = session_start; start + window_len <= session_end; start += window_len) {
            EventWindow w;
            w.n_bins = config.n_bins;
            w.pos_counts.assign(static_cast<std::size_t>(config.n_bins), 0);
            w.neg_counts.assign(static_cast<std::size_t>(config.n_bins), 0);
            for (std::size_t i = 0; i < window_len; ++i) {
                const std::size_t bin = i / bin_width;
                const std::int8_t s = series.signs[start + i];
                if (s > 0) {
                    ++w.pos_counts[bin];
                } else if (s < 0) {
                    ++w.neg_counts[bin];
                }
            }
            windows.push_back(std::move(w));
        }
    };

    // A break index marks the return spanning the oversized gap; that
    // return belongs to no window and the next window starts after it.
    for (std::size_t brk : series.session_breaks) {
        if (brk >= series.signs.size()) {
            throw std::invalid_argument("session break index out of range");
        }
        if (brk > session_start) emit_session(brk);
        session_start = brk + 1;
    }
    emit_session(series.signs.size());
    return windows;
}

}  // namespace facmom
