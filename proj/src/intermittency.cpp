#include "facmom/intermittency.hpp"

#include <cmath>
#include <stdexcept>

#include "facmom/summation.hpp"
#include "facmom/synth.hpp"

namespace facmom {

double CouplingParams::gamma0() const {
    if (!(alpha_s > 0.0)) throw std::invalid_argument("alpha_s must be positive");
    if (!(c_a > 0.0)) throw std::invalid_argument("c_a must be positive");
    return std::sqrt(4.0 * c_a * alpha_s / (2.0 * 3.14159265358979323846));
}

std::vector<ScalingPoint> scan_bins(std::span<const SegmentationLevel> levels, Sign sign, int q,
                                    const BootstrapConfig& bootstrap) {
    if (levels.empty()) throw std::invalid_argument("scan needs at least one segmentation level");
    const std::size_t n_events = levels[0].windows.size();
    std::vector<ScalingPoint> points;
    points.reserve(levels.size());
    int last_bins = 0;
    const BinnedMode mode = (sign == Sign::positive) ? BinnedMode::like_positive : BinnedMode::like_negative;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const SegmentationLevel& level = levels[i];
        if (level.n_bins <= last_bins) {
            throw std::invalid_argument("bin counts must be strictly increasing");
        }
        if (level.windows.size() != n_events) {
            throw std::invalid_argument("all levels must hold the same events");
        }
        last_bins = level.n_bins;
        BootstrapConfig cfg = bootstrap;
        // Distinct substream per level; resample indices re-derive from it.
        cfg.seed = bootstrap.seed ^ (0x9E3779B97F4A7C15ULL * (i + 1));
        const MomentEstimate est = estimate_binned_moment(level.windows, mode, q, cfg);
        points.push_back({level.n_bins, est.value, est.stderr_bootstrap, est.stderr_delta});
    }
    return points;
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points, int q, double d) {
    if (q < 2) throw std::invalid_argument("scaling fit needs q >= 2");
    if (!(d >= 1.0)) throw std::invalid_argument("embedding dimension must be >= 1");

    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> ws;
    int excluded = 0;
    bool weighted = true;
    for (const ScalingPoint& p : points) {
        if (!(p.f_q > 0.0)) {
            ++excluded;
            continue;
        }
        xs.push_back(std::log(static_cast<double>(p.n_bins)));
        ys.push_back(std::log(p.f_q));
        if (!(p.std_err > 0.0)) weighted = false;
        // ln f carries relative error, so the weight is (std_err/f)^-2.
        ws.push_back(p.std_err > 0.0 ? (p.f_q * p.f_q) / (p.std_err * p.std_err) : 1.0);
    }
    if (xs.size() < 2) throw std::invalid_argument("scaling fit needs >= 2 usable segmentations");
    if (!weighted) ws.assign(xs.size(), 1.0);

    CompensatedSum sw;
    CompensatedSum swx;
    CompensatedSum swy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sw.add(ws[i]);
        swx.add(ws[i] * xs[i]);
        swy.add(ws[i] * ys[i]);
    }
    const double total_w = sw.value();
    const double mean_x = swx.value() / total_w;
    const double mean_y = swy.value() / total_w;
    CompensatedSum sxx;
    CompensatedSum sxy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx.add(ws[i] * (xs[i] - mean_x) * (xs[i] - mean_x));
        sxy.add(ws[i] * (xs[i] - mean_x) * (ys[i] - mean_y));
    }
    if (!(sxx.value() > 0.0)) throw std::invalid_argument("scaling fit needs distinct bin counts");

    ScalingFit fit;
    fit.q = q;
    fit.d = d;
    fit.slope_phi = sxy.value() / sxx.value();
    fit.intercept = mean_y - fit.slope_phi * mean_x;
    fit.n_used = static_cast<int>(xs.size());
    fit.n_excluded = excluded;

    CompensatedSum srr;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope_phi * xs[i]);
        srr.add(ws[i] * r * r);
    }
    fit.residual_rms = std::sqrt(srr.value() / total_w);
    if (weighted) {
        // Known-variance weights: Var(slope) = 1 / sum w (x - xbar)^2.
        fit.slope_stderr = 1.0 / std::sqrt(sxx.value());
    } else if (xs.size() > 2) {
        const double s2 = srr.value() / static_cast<double>(xs.size() - 2);
        fit.slope_stderr = std::sqrt(s2 / sxx.value());
    } else {
        fit.slope_stderr = 0.0;
    }
    fit.dq = d * (1.0 - fit.slope_phi / static_cast<double>(q - 1));
    return fit;
}

double dq_prediction(const CouplingParams& params, int q) {
    if (q < 2) throw std::invalid_argument("anomalous dimension defined for q >= 2");
    return params.gamma0() * static_cast<double>(q + 1) / static_cast<double>(q);
}

std::vector<SegmentationLevel> build_levels(const SignSeries& series, int window_len,
                                            std::span<const int> bins_list) {
    if (bins_list.empty()) throw std::invalid_argument("need at least one bin count");
    std::vector<SegmentationLevel> levels;
    levels.reserve(bins_list.size());
    for (int m : bins_list) {
        SegmentationLevel level;
        level.n_bins = m;
        level.windows = segment(series, SegmentationConfig{window_len, m});
        levels.push_back(std::move(level));
    }
    return levels;
}

std::vector<SegmentationLevel> build_levels_from_counts(std::span<const std::vector<long>> series,
                                                        std::span<const int> bins_list) {
    if (bins_list.empty()) throw std::invalid_argument("need at least one bin count");
    std::vector<SegmentationLevel> levels;
    levels.reserve(bins_list.size());
    for (int m : bins_list) {
        SegmentationLevel level;
        level.n_bins = m;
        level.windows = windows_from_counts(series, m);
        levels.push_back(std::move(level));
    }
    return levels;
}

}  // namespace facmom
