#include "facmom/gaps.hpp"

#include <cmath>
#include <stdexcept>

#include "facmom/summation.hpp"

namespace facmom {

RunExtraction extract_runs_detail(const SignSeries& series, Sign sign) {
    if (series.signs.empty()) throw std::invalid_argument("empty sign series");
    const std::int8_t wanted = (sign == Sign::positive) ? std::int8_t{1} : std::int8_t{-1};
    RunExtraction out;
    const std::size_t n = series.signs.size();
    std::size_t i = 0;
    while (i < n) {
        const std::int8_t s = series.signs[i];
        if (s == 0) {
            ++out.zero_ticks;
            ++i;
            continue;
        }
        if (s != wanted) {
            ++out.other_ticks;
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && series.signs[j] == wanted) ++j;
        const long len = static_cast<long>(j - i);
        // A run is complete only when bounded by non-matching ticks on
        // both sides; runs touching the series edges are censored.
        if (i > 0 && j < n) {
            out.runs.push_back(static_cast<int>(len));
        } else {
            out.boundary_ticks += len;
        }
        i = j;
    }
    return out;
}

std::vector<int> extract_runs(const SignSeries& series, Sign sign) {
    return extract_runs_detail(series, sign).runs;
}

GapHistogram::GapHistogram(Sign sign, std::map<int, double> counts)
    : sign_(sign), counts_(std::move(counts)) {
    CompensatedSum total;
    for (const auto& [gap, count] : counts_) {
        if (gap < 1) throw std::invalid_argument("gap lengths must be >= 1");
        if (!(count > 0.0) || !std::isfinite(count)) {
            throw std::invalid_argument("histogram counts must be positive and finite");
        }
        total.add(count);
    }
    total_ = total.value();
}

GapHistogram GapHistogram::from_runs(std::span<const int> runs, Sign sign) {
    if (runs.empty()) throw std::invalid_argument("no runs to histogram");
    std::map<int, double> counts;
    for (int g : runs) {
        if (g < 1) throw std::invalid_argument("run lengths must be >= 1");
        counts[g] += 1.0;
    }
    return GapHistogram(sign, std::move(counts));
}

double GapHistogram::probability(int gap) const {
    if (total_ <= 0.0) return 0.0;
    const auto it = counts_.find(gap);
    return it == counts_.end() ? 0.0 : it->second / total_;
}

double GapHistogram::mean_gap() const {
    CompensatedSum acc;
    for (const auto& [gap, count] : counts_) acc.add(static_cast<double>(gap) * count);
    return acc.value() / total_;
}

namespace {

ExponentialFit fit_wls(const GapHistogram& histogram) {
    // ln(count) regressed on gap length; Poisson scatter of a count c
    // gives ln(c) a variance of 1/c, so the weight is the count itself.
    // Sparse bins (count < 5) are dropped.
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> ws;
    for (const auto& [gap, count] : histogram.counts()) {
        if (count < 5.0) continue;
        xs.push_back(static_cast<double>(gap));
        ys.push_back(std::log(count));
        ws.push_back(count);
    }
    if (xs.size() < 2) {
        throw std::runtime_error("insufficient gap support: need >= 2 populated lengths");
    }
    CompensatedSum sw;
    CompensatedSum swx;
    CompensatedSum swy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sw.add(ws[i]);
        swx.add(ws[i] * xs[i]);
        swy.add(ws[i] * ys[i]);
    }
    const double mean_x = swx.value() / sw.value();
    const double mean_y = swy.value() / sw.value();
    CompensatedSum sxx;
    CompensatedSum sxy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx.add(ws[i] * (xs[i] - mean_x) * (xs[i] - mean_x));
        sxy.add(ws[i] * (xs[i] - mean_x) * (ys[i] - mean_y));
    }
    const double slope = sxy.value() / sxx.value();
    ExponentialFit fit;
    fit.method = FitMethod::log_linear_wls;
    fit.rho = -slope;
    fit.rho_stderr = 1.0 / std::sqrt(sxx.value());
    fit.amplitude = std::exp(mean_y - slope * mean_x);
    fit.n_bins_used = static_cast<int>(xs.size());
    return fit;
}

ExponentialFit fit_mle(const GapHistogram& histogram) {
    if (histogram.counts().size() < 2) {
        throw std::runtime_error("insufficient gap support: need >= 2 populated lengths");
    }
    const double mean = histogram.mean_gap();
    const double total = histogram.total_runs();
    // Geometric law on lengths 1, 2, ...: decay per unit is 1 - 1/mean.
    const double rho = -std::log(1.0 - 1.0 / mean);
    CompensatedSum ss;
    for (const auto& [gap, count] : histogram.counts()) {
        ss.add(count * (static_cast<double>(gap) - mean) * (static_cast<double>(gap) - mean));
    }
    const double sd = std::sqrt(ss.value() / (total - 1.0));
    const double mean_se = sd / std::sqrt(total);
    ExponentialFit fit;
    fit.method = FitMethod::geometric_mle;
    fit.rho = rho;
    // d rho / d mean = -1 / (mean (mean - 1)).
    fit.rho_stderr = mean_se / (mean * (mean - 1.0));
    fit.amplitude = std::exp(rho) - 1.0;  // normalizes sum_{g>=1} A e^{-rho g} to 1
    fit.n_bins_used = static_cast<int>(histogram.counts().size());
    return fit;
}

}  // namespace

ExponentialFit fit_exponential(const GapHistogram& histogram, FitMethod method) {
    switch (method) {
        case FitMethod::log_linear_wls:
            return fit_wls(histogram);
        case FitMethod::geometric_mle:
            return fit_mle(histogram);
    }
    throw std::invalid_argument("unknown fit method");
}

double predicted_p0(double rho, double delta) {
    if (!(delta >= 0.0)) throw std::invalid_argument("window delta must be >= 0");
    if (!std::isfinite(rho)) throw std::invalid_argument("rate must be finite");
    return std::exp(-rho * delta);
}

SamplingComparison sampling_consistency(const PriceSeries& series, int factor_a, int factor_b,
                                        Sign sign, FitMethod method) {
    if (factor_a < 1 || factor_b < 1) throw std::invalid_argument("resample factors must be >= 1");
    if (factor_b % factor_a != 0) {
        throw std::invalid_argument("coarse factor must be a multiple of the fine factor");
    }
    const auto fit_at = [&](int factor) {
        const PriceSeries sampled = resample(series, factor);
        const SignSeries signs = to_signs(sampled);
        const auto runs = extract_runs(signs, sign);
        if (runs.empty()) throw std::runtime_error("insufficient gap support: no complete runs");
        return fit_exponential(GapHistogram::from_runs(runs, sign), method);
    };
    SamplingComparison out;
    out.factor_a = factor_a;
    out.factor_b = factor_b;
    out.fit_a = fit_at(factor_a);
    out.fit_b = fit_at(factor_b);
    out.ratio = out.fit_b.rho / out.fit_a.rho;
    const double rel_a = out.fit_a.rho_stderr / out.fit_a.rho;
    const double rel_b = out.fit_b.rho_stderr / out.fit_b.rho;
    out.ratio_stderr = std::abs(out.ratio) * std::sqrt(rel_a * rel_a + rel_b * rel_b);
    return out;
}

}  // namespace facmom
