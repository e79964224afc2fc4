#pragma once

#include <span>
#include <vector>

#include "facmom/ingest.hpp"
#include "facmom/moments.hpp"

namespace facmom {

/// One segmentation level: the same events binned at one resolution.
struct SegmentationLevel {
    int n_bins = 0;
    std::vector<EventWindow> windows;
};

/// F_q at one bin count.  std_err is the bootstrap error that downstream
/// fits weight by; delta_std_err keeps the propagated estimate for
/// cross-checks.
struct ScalingPoint {
    int n_bins = 0;
    double f_q = 0.0;
    double std_err = 0.0;
    double delta_std_err = 0.0;
};

/// Power-law fit F_q = c * M^phi in log-log space.
struct ScalingFit {
    int q = 0;
    double d = 1.0;
    double slope_phi = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;   // ln c
    double dq = 0.0;          // d * (1 - phi/(q-1))
    double residual_rms = 0.0;
    int n_used = 0;
    int n_excluded = 0;       // points dropped for non-positive f_q
};

/// Shower coupling entering the anomalous dimension prediction.
struct CouplingParams {
    double alpha_s = 0.0;
    double c_a = 3.0;

    /// gamma0 = sqrt(4 c_a alpha_s / (2 pi)); both parameters positive.
    [[nodiscard]] double gamma0() const;
};

/// Computes F_q across the given segmentation levels of one event set.
///
/// Levels must be ordered by strictly increasing bin count and every
/// level must hold the same number of events.  Errors are bootstrap
/// resampled over events (seeded substream per level and resample) with
/// the delta-method value kept alongside.
[[nodiscard]] std::vector<ScalingPoint> scan_bins(std::span<const SegmentationLevel> levels, Sign sign,
                                                  int q, const BootstrapConfig& bootstrap = {});

/// Weighted least squares of ln f_q on ln M with weights
/// (std_err / f_q)^-2; falls back to an unweighted fit when any std_err
/// is not positive.  Points with f_q <= 0 are excluded and counted in
/// n_excluded.  Fewer than two usable points is an error; q >= 2 and
/// d >= 1 are required.
[[nodiscard]] ScalingFit fit_scaling(std::span<const ScalingPoint> points, int q, double d);

/// Anomalous dimension D_q = gamma0 (q+1)/q for q >= 2.  Strictly
/// decreasing in q, and ratios between orders do not depend on the
/// coupling.
[[nodiscard]] double dq_prediction(const CouplingParams& params, int q);

/// Segments one sign series at each bin count using a fixed window
/// length; every level sees identical windows, only the binning differs.
[[nodiscard]] std::vector<SegmentationLevel> build_levels(const SignSeries& series, int window_len,
                                                          std::span<const int> bins_list);

/// Segmentation levels for count series (one event per series).
[[nodiscard]] std::vector<SegmentationLevel> build_levels_from_counts(
    std::span<const std::vector<long>> series, std::span<const int> bins_list);

}  // namespace facmom
