#pragma once

#include <map>
#include <vector>

#include "facmom/ingest.hpp"
#include "facmom/moments.hpp"

namespace facmom {

/// Breakdown of a sign series into maximal same-sign runs.
///
/// Runs touching either end of the series are censored (their true length
/// is unknown) and only contribute to boundary_ticks.  Zero signs close a
/// run and are tallied separately.  For one sign:
///   sum(runs) + boundary_ticks + zero_ticks + other_ticks = series length.
struct RunExtraction {
    std::vector<int> runs;     // interior-complete run lengths, in order
    long boundary_ticks = 0;   // ticks inside censored boundary runs
    long zero_ticks = 0;       // zero-sign ticks
    long other_ticks = 0;      // ticks of the opposite sign
};

[[nodiscard]] RunExtraction extract_runs_detail(const SignSeries& series, Sign sign);

/// Interior-complete run lengths of the chosen sign.
[[nodiscard]] std::vector<int> extract_runs(const SignSeries& series, Sign sign);

/// Histogram of run lengths.  Counts are stored raw; probability() gives
/// the normalized view.  Stored counts are strictly positive.
class GapHistogram {
public:
    GapHistogram(Sign sign, std::map<int, double> counts);

    [[nodiscard]] static GapHistogram from_runs(std::span<const int> runs, Sign sign);

    [[nodiscard]] Sign sign() const noexcept { return sign_; }
    [[nodiscard]] const std::map<int, double>& counts() const noexcept { return counts_; }
    [[nodiscard]] double total_runs() const noexcept { return total_; }
    [[nodiscard]] double probability(int gap) const;
    [[nodiscard]] double mean_gap() const;

private:
    Sign sign_;
    std::map<int, double> counts_;
    double total_ = 0.0;
};

enum class FitMethod { log_linear_wls, geometric_mle };

/// Exponential gap law  P(g) = amplitude * exp(-rho * g).
struct ExponentialFit {
    double rho = 0.0;
    double rho_stderr = 0.0;
    double amplitude = 0.0;
    FitMethod method = FitMethod::log_linear_wls;
    int n_bins_used = 0;
};

/// Fits the decay rate of the run-length histogram.
///
/// log_linear_wls regresses ln(count) on the length with Poisson weights
/// (weight = count) and drops bins with fewer than 5 entries; the
/// geometric MLE uses every run through rho = -ln(1 - 1/mean_gap).
/// Fewer than two usable support points means the rate is undetermined
/// and raises an error.
[[nodiscard]] ExponentialFit fit_exponential(const GapHistogram& histogram, FitMethod method);

/// Zero-count probability exp(-rho * delta) implied by an exponential
/// gap law over a window of delta sampling units.  delta must be >= 0.
[[nodiscard]] double predicted_p0(double rho, double delta);

/// Gap-law comparison of one series read at two sampling densities.
struct SamplingComparison {
    int factor_a = 1;
    int factor_b = 1;
    ExponentialFit fit_a;
    ExponentialFit fit_b;
    double ratio = 0.0;         // rho_b / rho_a
    double ratio_stderr = 0.0;
};

/// Resamples the series at both factors (factor_b a multiple of factor_a),
/// fits the gap law of the chosen sign at each density and reports both
/// per-unit rates with their ratio.  A scale-free sign process keeps the
/// per-unit rate unchanged, so ratio is compatible with 1.
[[nodiscard]] SamplingComparison sampling_consistency(const PriceSeries& series, int factor_a,
                                                      int factor_b, Sign sign, FitMethod method);

}  // namespace facmom
