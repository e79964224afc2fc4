// Command line front end: moments, scan, gaps, predict and synth
// subcommands shared by the analysis pipelines.  Reports are JSON (or
// flat CSV) on stdout and are byte-stable for a fixed seed and input.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "facmom/gaps.hpp"
#include "facmom/ingest.hpp"
#include "facmom/intermittency.hpp"
#include "facmom/moments.hpp"
#include "facmom/rng.hpp"
#include "facmom/synth.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr std::uint64_t kDefaultSeed = 12345;
constexpr int kBootstrapResamples = 200;

struct CommonOptions {
    std::string input;
    std::string synth;
    int window = 2000;
    std::vector<int> bins{1, 2, 4, 10, 20};
    int q = 2;
    double d = 1.0;
    std::string sign = "both";
    std::string method = "wls";
    std::vector<int> resample_factors{1};
    std::uint64_t seed = kDefaultSeed;
    std::string format = "json";
    std::string emit_points;
};

struct SynthSpec {
    std::string kind;
    std::size_t length = 1000000;    // iid, markov
    double lambda = 2.0;             // poisson
    std::size_t n_events = 100000;   // poisson
    double persistence = 0.7;        // markov
    int levels = 10;                 // cascade
    double weight = 0.7;             // cascade
    std::size_t realizations = 200;  // cascade
    double mean_count = 5.0;         // cascade
    std::uint64_t seed = kDefaultSeed;
};

double require_finite(double v, const std::string& what) {
    if (!std::isfinite(v)) throw std::runtime_error("non-finite result for " + what);
    return v;
}

SynthSpec parse_synth_spec(const std::string& text, std::uint64_t default_seed) {
    SynthSpec spec;
    spec.seed = default_seed;
    const auto colon = text.find(':');
    spec.kind = text.substr(0, colon);
    if (spec.kind != "iid" && spec.kind != "poisson" && spec.kind != "markov" && spec.kind != "cascade") {
        throw std::invalid_argument("unknown synth kind '" + spec.kind +
                                    "' (expected iid, poisson, markov or cascade)");
    }
    if (colon == std::string::npos) return spec;
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        const std::string pair = rest.substr(pos, comma - pos);
        pos = comma + 1;
        if (pair.empty()) continue;
        const auto eq = pair.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("synth spec entries must look like key=value, got '" + pair + "'");
        }
        const std::string key = pair.substr(0, eq);
        const std::string value = pair.substr(eq + 1);
        try {
            if (key == "length") {
                spec.length = static_cast<std::size_t>(std::stoull(value));
            } else if (key == "lambda") {
                spec.lambda = std::stod(value);
            } else if (key == "n" || key == "events") {
                spec.n_events = static_cast<std::size_t>(std::stoull(value));
                spec.realizations = spec.n_events;
            } else if (key == "p") {
                spec.persistence = std::stod(value);
            } else if (key == "levels") {
                spec.levels = std::stoi(value);
            } else if (key == "w") {
                spec.weight = std::stod(value);
            } else if (key == "mean") {
                spec.mean_count = std::stod(value);
            } else if (key == "seed") {
                spec.seed = std::stoull(value);
            } else {
                throw std::invalid_argument("unknown synth spec key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("bad value for synth spec key '" + key + "'");
        }
    }
    return spec;
}

json spec_to_json(const SynthSpec& spec) {
    json j;
    j["kind"] = spec.kind;
    if (spec.kind == "iid" || spec.kind == "markov") j["length"] = spec.length;
    if (spec.kind == "markov") j["p"] = spec.persistence;
    if (spec.kind == "poisson") {
        j["lambda"] = spec.lambda;
        j["n"] = spec.n_events;
    }
    if (spec.kind == "cascade") {
        j["levels"] = spec.levels;
        j["w"] = spec.weight;
        j["events"] = spec.realizations;
        j["mean"] = spec.mean_count;
    }
    j["seed"] = spec.seed;
    return j;
}

/// Input data resolved to one of the shapes the pipelines consume.
struct SourceData {
    std::optional<facmom::PriceSeries> prices;
    std::optional<facmom::SignSeries> signs;
    std::vector<std::vector<long>> count_series;  // cascade realizations
    std::vector<long> scalar_counts;              // poisson events
    std::optional<SynthSpec> spec;
};

SourceData load_source(const CommonOptions& opt, bool need_prices) {
    if (opt.input.empty() == opt.synth.empty()) {
        throw std::invalid_argument("exactly one of --input and --synth is required");
    }
    SourceData data;
    if (!opt.input.empty()) {
        data.prices = facmom::load_price_csv(opt.input);
        data.signs = facmom::to_signs(*data.prices);
        return data;
    }
    const SynthSpec spec = parse_synth_spec(opt.synth, opt.seed);
    data.spec = spec;
    if (spec.kind == "iid") {
        data.prices = facmom::gen_iid_gaussian(spec.length, spec.seed);
        data.signs = facmom::to_signs(*data.prices);
    } else if (spec.kind == "markov") {
        if (need_prices) {
            throw std::invalid_argument("markov synth yields signs only; resampling needs a price input");
        }
        data.signs = facmom::gen_markov_signs(spec.persistence, spec.length, spec.seed);
    } else if (spec.kind == "poisson") {
        data.scalar_counts = facmom::gen_poisson_counts(spec.lambda, spec.n_events, spec.seed);
    } else {
        const facmom::CascadeParams params{spec.levels, spec.weight, spec.mean_count};
        auto ensemble = facmom::gen_cascade_ensemble(params, spec.realizations, spec.seed);
        data.count_series.reserve(ensemble.size());
        for (auto& r : ensemble) data.count_series.push_back(std::move(r.counts));
    }
    return data;
}

json common_config(const std::string& command, const CommonOptions& opt, const SourceData& data) {
    json cfg;
    cfg["command"] = command;
    if (!opt.input.empty()) cfg["input"] = opt.input;
    if (data.spec.has_value()) cfg["synth"] = spec_to_json(*data.spec);
    cfg["seed"] = opt.seed;
    cfg["format"] = opt.format;
    if (!opt.emit_points.empty()) cfg["emit_points"] = opt.emit_points;
    return cfg;
}

void write_emit_file(const std::string& dir, const std::string& name,
                     const std::vector<std::pair<double, double>>& points) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw std::runtime_error("cannot write plot file in " + dir);
    char buffer[80];
    for (const auto& [x, y] : points) {
        std::snprintf(buffer, sizeof(buffer), "%.12g\t%.12g\n", x, y);
        out << buffer;
    }
}

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return buffer;
}

void print_report(const json& report, const std::string& format,
                  const std::vector<std::pair<std::string, std::string>>& csv_rows) {
    if (format == "json") {
        std::cout << report.dump(2) << "\n";
    } else {
        for (const auto& [key, row] : csv_rows) std::cout << key << "," << row << "\n";
    }
}

facmom::Sign parse_single_sign(const std::string& sign, const char* context) {
    if (sign == "pos") return facmom::Sign::positive;
    if (sign == "neg") return facmom::Sign::negative;
    throw std::invalid_argument(std::string(context) + " needs --sign pos or neg");
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

int cmd_moments(const CommonOptions& opt) {
    if (opt.q < 2) throw std::invalid_argument("--q must be >= 2");
    SourceData data = load_source(opt, false);
    std::vector<std::string> warnings;

    // Resolve the event windows per bin count.
    std::vector<facmom::SegmentationLevel> levels;
    bool sign_data = false;
    if (data.signs.has_value()) {
        sign_data = true;
        levels = facmom::build_levels(*data.signs, opt.window, opt.bins);
    } else if (!data.count_series.empty()) {
        levels = facmom::build_levels_from_counts(data.count_series, opt.bins);
    } else {
        levels.push_back({1, facmom::windows_from_scalar_counts(data.scalar_counts)});
        warnings.emplace_back("count sample input: no bin structure, table uses 1 bin");
    }
    if (levels.empty() || levels[0].windows.empty()) {
        throw std::runtime_error("no complete windows; input too short for --window " +
                                 std::to_string(opt.window));
    }

    std::vector<facmom::BinnedMode> modes;
    if (!sign_data) {
        if (opt.sign == "neg") throw std::invalid_argument("count inputs carry positive counts only");
        modes = {facmom::BinnedMode::like_positive};
        if (opt.sign == "both") {
            warnings.emplace_back("count input has positive counts only; unlike/negative rows skipped");
        }
    } else if (opt.sign == "pos") {
        modes = {facmom::BinnedMode::like_positive};
    } else if (opt.sign == "neg") {
        modes = {facmom::BinnedMode::like_negative};
    } else {
        modes = {facmom::BinnedMode::like_positive, facmom::BinnedMode::like_negative,
                 facmom::BinnedMode::unlike};
    }

    const auto mode_name = [](facmom::BinnedMode m) {
        switch (m) {
            case facmom::BinnedMode::like_positive: return "pos";
            case facmom::BinnedMode::like_negative: return "neg";
            default: return "unlike";
        }
    };

    json table = json::array();
    std::vector<std::pair<std::string, std::string>> csv_rows;
    std::map<std::string, std::vector<std::pair<double, double>>> plot_points;
    for (const auto& level : levels) {
        for (const auto mode : modes) {
            const int q_top = (mode == facmom::BinnedMode::unlike) ? 2 : opt.q;
            // Cumulants need the full moment ladder at this bin count.
            facmom::MomentSet ladder;
            ladder.q_max = q_top;
            std::vector<double> stderrs;
            for (int q = 2; q <= q_top; ++q) {
                const auto est = facmom::estimate_binned_moment(level.windows, mode, q);
                ladder.values.push_back(est.value);
                stderrs.push_back(est.stderr_delta);
            }
            const facmom::CumulantSet cumulants =
                (mode == facmom::BinnedMode::unlike) ? facmom::CumulantSet{}
                                                     : facmom::cumulants_from_moments(ladder);
            for (int q = 2; q <= q_top; ++q) {
                json row;
                row["n_bins"] = level.n_bins;
                row["mode"] = mode_name(mode);
                row["q"] = q;
                row["f"] = require_finite(ladder.value(q), "F_q");
                row["std_err"] = require_finite(stderrs[static_cast<std::size_t>(q - 2)], "std_err");
                // The unlike pair has a single order; its reduced moment is F - 1.
                const double k = (mode == facmom::BinnedMode::unlike) ? ladder.value(2) - 1.0
                                                                      : cumulants.value(q);
                row["k"] = require_finite(k, "K_q");
                table.push_back(row);
                csv_rows.emplace_back("row", std::to_string(level.n_bins) + "," + mode_name(mode) + "," +
                                                 std::to_string(q) + "," + format_double(ladder.value(q)) +
                                                 "," +
                                                 format_double(stderrs[static_cast<std::size_t>(q - 2)]) +
                                                 "," + format_double(k));
                plot_points["f" + std::to_string(q) + "_" + mode_name(mode) + ".tsv"].emplace_back(
                    static_cast<double>(level.n_bins), ladder.value(q));
            }
        }
    }

    json report;
    report["schema_version"] = kSchemaVersion;
    json cfg = common_config("moments", opt, data);
    cfg["window"] = sign_data ? opt.window : 0;
    cfg["bins"] = opt.bins;
    cfg["q_max"] = opt.q;
    cfg["sign"] = opt.sign;
    report["config"] = cfg;
    json results;
    results["n_events"] = levels[0].windows.size();
    results["table"] = table;
    report["results"] = results;
    report["warnings"] = warnings;

    if (!opt.emit_points.empty()) {
        for (const auto& [name, pts] : plot_points) write_emit_file(opt.emit_points, name, pts);
    }
    std::vector<std::pair<std::string, std::string>> csv;
    csv.emplace_back("header", "n_bins,mode,q,f,std_err,k");
    for (auto& r : csv_rows) csv.push_back(r);
    print_report(report, opt.format, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

int cmd_scan(const CommonOptions& opt) {
    if (opt.q < 2) throw std::invalid_argument("--q must be >= 2");
    if (opt.bins.size() < 2) throw std::invalid_argument("scan needs >= 2 segmentations");
    SourceData data = load_source(opt, false);
    if (!data.scalar_counts.empty()) {
        throw std::invalid_argument("scan needs a binnable series, not a plain count sample");
    }
    std::vector<std::string> warnings;

    facmom::Sign sign = facmom::Sign::positive;
    std::vector<facmom::SegmentationLevel> levels;
    if (data.signs.has_value()) {
        sign = parse_single_sign(opt.sign, "scan");
        levels = facmom::build_levels(*data.signs, opt.window, opt.bins);
    } else {
        if (opt.sign == "neg") throw std::invalid_argument("cascade counts carry positive counts only");
        levels = facmom::build_levels_from_counts(data.count_series, opt.bins);
    }
    if (levels.empty() || levels[0].windows.empty()) {
        throw std::runtime_error("no complete windows; input too short for --window " +
                                 std::to_string(opt.window));
    }

    const facmom::BootstrapConfig bootstrap{kBootstrapResamples, opt.seed ^ 0xB005757A90000000ULL};
    const auto points = facmom::scan_bins(levels, sign, opt.q, bootstrap);
    const auto fit = facmom::fit_scaling(points, opt.q, opt.d);
    if (fit.n_excluded > 0) {
        warnings.push_back("excluded " + std::to_string(fit.n_excluded) +
                           " non-positive moment values from the fit");
    }

    json report;
    report["schema_version"] = kSchemaVersion;
    json cfg = common_config("scan", opt, data);
    cfg["window"] = data.signs.has_value() ? opt.window : 0;
    cfg["bins"] = opt.bins;
    cfg["q"] = opt.q;
    cfg["d"] = opt.d;
    cfg["sign"] = data.signs.has_value() ? opt.sign : "pos";
    cfg["bootstrap_resamples"] = kBootstrapResamples;
    report["config"] = cfg;

    json jpoints = json::array();
    std::vector<std::pair<std::string, std::string>> csv;
    csv.emplace_back("header", "n_bins,f_q,std_err,delta_std_err");
    std::vector<std::pair<double, double>> plot;
    for (const auto& p : points) {
        json jp;
        jp["n_bins"] = p.n_bins;
        jp["f_q"] = require_finite(p.f_q, "f_q");
        jp["std_err"] = require_finite(p.std_err, "std_err");
        jp["delta_std_err"] = require_finite(p.delta_std_err, "delta_std_err");
        jpoints.push_back(jp);
        csv.emplace_back("point", std::to_string(p.n_bins) + "," + format_double(p.f_q) + "," +
                                      format_double(p.std_err) + "," + format_double(p.delta_std_err));
        plot.emplace_back(static_cast<double>(p.n_bins), p.f_q);
    }
    json jfit;
    jfit["q"] = fit.q;
    jfit["d"] = fit.d;
    jfit["phi"] = require_finite(fit.slope_phi, "phi");
    jfit["phi_stderr"] = require_finite(fit.slope_stderr, "phi_stderr");
    jfit["intercept"] = require_finite(fit.intercept, "intercept");
    jfit["dq"] = require_finite(fit.dq, "dq");
    jfit["residual_rms"] = require_finite(fit.residual_rms, "residual_rms");
    jfit["n_used"] = fit.n_used;
    jfit["n_excluded"] = fit.n_excluded;
    json results;
    results["n_events"] = levels[0].windows.size();
    results["points"] = jpoints;
    results["fit"] = jfit;
    report["results"] = results;
    report["warnings"] = warnings;

    csv.emplace_back("fit", "phi," + format_double(fit.slope_phi));
    csv.emplace_back("fit", "phi_stderr," + format_double(fit.slope_stderr));
    csv.emplace_back("fit", "intercept," + format_double(fit.intercept));
    csv.emplace_back("fit", "dq," + format_double(fit.dq));
    csv.emplace_back("fit", "residual_rms," + format_double(fit.residual_rms));

    if (!opt.emit_points.empty()) {
        write_emit_file(opt.emit_points, "scan_q" + std::to_string(opt.q) + ".tsv", plot);
    }
    print_report(report, opt.format, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// gaps
// ---------------------------------------------------------------------------

int cmd_gaps(const CommonOptions& opt) {
    if (opt.resample_factors.empty() || opt.resample_factors.size() > 2) {
        throw std::invalid_argument("--resample takes one or two factors");
    }
    const bool needs_prices =
        opt.resample_factors.size() > 1 || opt.resample_factors[0] != 1;
    SourceData data = load_source(opt, needs_prices);
    if (!data.scalar_counts.empty() || !data.count_series.empty()) {
        throw std::invalid_argument("gap analysis needs a price or sign series");
    }
    const facmom::Sign sign = parse_single_sign(opt.sign, "gaps");
    const facmom::FitMethod method =
        (opt.method == "mle") ? facmom::FitMethod::geometric_mle : facmom::FitMethod::log_linear_wls;
    if (opt.method != "mle" && opt.method != "wls") {
        throw std::invalid_argument("--method must be wls or mle");
    }

    struct FactorResult {
        int factor;
        facmom::GapHistogram histogram;
        facmom::ExponentialFit fit;
        std::size_t n_runs;
    };
    std::vector<FactorResult> results;
    for (int factor : opt.resample_factors) {
        facmom::SignSeries signs;
        if (factor == 1 && data.signs.has_value() && !data.prices.has_value()) {
            signs = *data.signs;
        } else {
            signs = facmom::to_signs(facmom::resample(*data.prices, factor));
        }
        const auto runs = facmom::extract_runs(signs, sign);
        if (runs.empty()) throw std::runtime_error("insufficient gap support: no complete runs");
        auto histogram = facmom::GapHistogram::from_runs(runs, sign);
        auto fit = facmom::fit_exponential(histogram, method);
        results.push_back({factor, std::move(histogram), fit, runs.size()});
    }

    json report;
    report["schema_version"] = kSchemaVersion;
    json cfg = common_config("gaps", opt, data);
    cfg["sign"] = opt.sign;
    cfg["method"] = opt.method;
    cfg["resample"] = opt.resample_factors;
    report["config"] = cfg;

    json jfits = json::array();
    std::vector<std::pair<std::string, std::string>> csv;
    csv.emplace_back("header", "factor,gap,count,probability");
    for (const auto& r : results) {
        json jf;
        jf["factor"] = r.factor;
        jf["n_runs"] = r.n_runs;
        jf["mean_gap"] = require_finite(r.histogram.mean_gap(), "mean_gap");
        jf["rho"] = require_finite(r.fit.rho, "rho");
        jf["rho_stderr"] = require_finite(r.fit.rho_stderr, "rho_stderr");
        jf["amplitude"] = require_finite(r.fit.amplitude, "amplitude");
        jf["n_bins_used"] = r.fit.n_bins_used;
        jf["p0_per_unit"] = require_finite(facmom::predicted_p0(r.fit.rho, 1.0), "p0_per_unit");
        json gaps = json::array();
        json counts = json::array();
        json probs = json::array();
        std::vector<std::pair<double, double>> plot;
        for (const auto& [gap, count] : r.histogram.counts()) {
            gaps.push_back(gap);
            counts.push_back(count);
            probs.push_back(require_finite(r.histogram.probability(gap), "probability"));
            plot.emplace_back(static_cast<double>(gap), count);
            csv.emplace_back("hist", std::to_string(r.factor) + "," + std::to_string(gap) + "," +
                                         format_double(count) + "," +
                                         format_double(r.histogram.probability(gap)));
        }
        jf["histogram"] = json{{"gap", gaps}, {"count", counts}, {"probability", probs}};
        jfits.push_back(jf);
        if (!opt.emit_points.empty()) {
            write_emit_file(opt.emit_points,
                            "gaps_factor" + std::to_string(r.factor) + "_" + opt.sign + ".tsv", plot);
        }
        csv.emplace_back("fit", std::to_string(r.factor) + ",rho," + format_double(r.fit.rho));
        csv.emplace_back("fit", std::to_string(r.factor) + ",rho_stderr," + format_double(r.fit.rho_stderr));
    }
    json jresults;
    jresults["fits"] = jfits;
    if (results.size() == 2) {
        const auto& a = results[0].fit;
        const auto& b = results[1].fit;
        json cmp;
        cmp["factor_a"] = results[0].factor;
        cmp["factor_b"] = results[1].factor;
        cmp["rho_a"] = require_finite(a.rho, "rho_a");
        cmp["rho_b"] = require_finite(b.rho, "rho_b");
        cmp["ratio"] = require_finite(b.rho / a.rho, "ratio");
        const double rel_a = a.rho_stderr / a.rho;
        const double rel_b = b.rho_stderr / b.rho;
        cmp["ratio_stderr"] =
            require_finite(std::abs(b.rho / a.rho) * std::sqrt(rel_a * rel_a + rel_b * rel_b),
                           "ratio_stderr");
        cmp["combined_stderr"] = require_finite(
            std::sqrt(a.rho_stderr * a.rho_stderr + b.rho_stderr * b.rho_stderr), "combined_stderr");
        jresults["comparison"] = cmp;
        csv.emplace_back("comparison", "ratio," + format_double(b.rho / a.rho));
    }
    report["results"] = jresults;
    report["warnings"] = json::array();
    print_report(report, opt.format, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

int cmd_predict(const CommonOptions& opt, double alpha_s, double c_a, const std::vector<int>& q_list) {
    if (q_list.empty()) throw std::invalid_argument("--q-list needs at least one order");
    const facmom::CouplingParams params{alpha_s, c_a};
    json report;
    report["schema_version"] = kSchemaVersion;
    json cfg;
    cfg["command"] = "predict";
    cfg["alpha_s"] = alpha_s;
    cfg["c_a"] = c_a;
    cfg["q_list"] = q_list;
    cfg["format"] = opt.format;
    report["config"] = cfg;
    json table = json::array();
    std::vector<std::pair<std::string, std::string>> csv;
    csv.emplace_back("header", "q,dq");
    for (int q : q_list) {
        json row;
        row["q"] = q;
        row["dq"] = require_finite(facmom::dq_prediction(params, q), "dq");
        table.push_back(row);
        csv.emplace_back("row", std::to_string(q) + "," + format_double(facmom::dq_prediction(params, q)));
    }
    json results;
    results["gamma0"] = require_finite(params.gamma0(), "gamma0");
    results["table"] = table;
    report["results"] = results;
    report["warnings"] = json::array();
    csv.emplace_back("gamma0", format_double(params.gamma0()));
    print_report(report, opt.format, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

int cmd_synth(const CommonOptions& opt, const std::string& out_path) {
    if (opt.synth.empty()) throw std::invalid_argument("synth needs --synth SPEC");
    if (out_path.empty()) throw std::invalid_argument("synth needs --out PATH");
    const SynthSpec spec = parse_synth_spec(opt.synth, opt.seed);

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write output file: " + out_path);
    char buffer[96];
    std::size_t rows = 0;
    if (spec.kind == "iid") {
        const auto series = facmom::gen_iid_gaussian(spec.length, spec.seed);
        out << "timestamp,price\n";
        for (std::size_t i = 0; i < series.prices.size(); ++i) {
            std::snprintf(buffer, sizeof(buffer), "%lld,%.17g\n",
                          static_cast<long long>(series.timestamps[i]), series.prices[i]);
            out << buffer;
            ++rows;
        }
    } else if (spec.kind == "markov") {
        const auto signs = facmom::gen_markov_signs(spec.persistence, spec.length, spec.seed);
        // Unit-step walk with matching difference signs, shifted positive.
        out << "timestamp,price\n";
        long long level = static_cast<long long>(signs.signs.size()) + 1;
        std::snprintf(buffer, sizeof(buffer), "0,%lld\n", level);
        out << buffer;
        ++rows;
        for (std::size_t i = 0; i < signs.signs.size(); ++i) {
            level += signs.signs[i];
            std::snprintf(buffer, sizeof(buffer), "%lld,%lld\n", static_cast<long long>(i + 1), level);
            out << buffer;
            ++rows;
        }
    } else if (spec.kind == "poisson") {
        const auto counts = facmom::gen_poisson_counts(spec.lambda, spec.n_events, spec.seed);
        out << "timestamp,value\n";
        for (std::size_t i = 0; i < counts.size(); ++i) {
            std::snprintf(buffer, sizeof(buffer), "%lld,%ld\n", static_cast<long long>(i), counts[i]);
            out << buffer;
            ++rows;
        }
    } else {
        const facmom::CascadeParams params{spec.levels, spec.weight, spec.mean_count};
        const auto realization = facmom::gen_cascade(params, spec.seed);
        out << "timestamp,value\n";
        for (std::size_t i = 0; i < realization.intensity.size(); ++i) {
            std::snprintf(buffer, sizeof(buffer), "%lld,%.17g\n", static_cast<long long>(i),
                          realization.intensity[i]);
            out << buffer;
            ++rows;
        }
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file: " + out_path);

    json report;
    report["schema_version"] = kSchemaVersion;
    json cfg;
    cfg["command"] = "synth";
    cfg["synth"] = spec_to_json(spec);
    cfg["out"] = out_path;
    cfg["format"] = opt.format;
    report["config"] = cfg;
    json results;
    results["rows_written"] = rows;
    report["results"] = results;
    report["warnings"] = json::array();
    std::vector<std::pair<std::string, std::string>> csv;
    csv.emplace_back("rows_written", std::to_string(rows));
    print_report(report, opt.format, csv);
    return 0;
}

void add_common_options(CLI::App* cmd, CommonOptions& opt, bool with_data) {
    if (with_data) {
        cmd->add_option("--input", opt.input, "CSV input path (timestamp,price)");
        cmd->add_option("--synth", opt.synth, "synthetic source spec kind:key=value,...");
        cmd->add_option("--window", opt.window, "signs per analysis window");
        cmd->add_option("--bins", opt.bins, "comma separated bin counts")->delimiter(',');
    }
    cmd->add_option("--q", opt.q, "moment order (max order for moments)");
    cmd->add_option("--d", opt.d, "embedding dimension for D_q");
    cmd->add_option("--sign", opt.sign, "pos, neg or both")
        ->check(CLI::IsMember({"pos", "neg", "both"}));
    cmd->add_option("--method", opt.method, "gap fit method: wls or mle")
        ->check(CLI::IsMember({"wls", "mle"}));
    cmd->add_option("--resample", opt.resample_factors, "resample factors, one or two")->delimiter(',');
    cmd->add_option("--seed", opt.seed, "seed for synthetic sources and bootstrap");
    cmd->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--emit-points", opt.emit_points, "directory for two-column plot files");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Factorial moment, intermittency and gap statistics for binned event series"};
    app.require_subcommand(1);

    CommonOptions opt;
    double alpha_s = 0.12;
    double c_a = 3.0;
    std::vector<int> q_list{2, 3, 4, 5, 6};
    std::string out_path;

    auto* moments = app.add_subcommand("moments", "Binned factorial moments and cumulants");
    add_common_options(moments, opt, true);
    auto* scan = app.add_subcommand("scan", "F_q versus bin count with a power-law fit");
    add_common_options(scan, opt, true);
    auto* gaps = app.add_subcommand("gaps", "Run-length histogram and exponential gap law");
    add_common_options(gaps, opt, true);
    auto* predict = app.add_subcommand("predict", "Anomalous dimension prediction D_q");
    predict->add_option("--alpha-s", alpha_s, "coupling constant");
    predict->add_option("--ca", c_a, "color factor");
    predict->add_option("--q-list", q_list, "comma separated orders")->delimiter(',');
    predict->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    auto* synth = app.add_subcommand("synth", "Write a synthetic series as CSV");
    synth->add_option("--synth", opt.synth, "synthetic source spec kind:key=value,...");
    synth->add_option("--seed", opt.seed, "seed");
    synth->add_option("--out", out_path, "output CSV path");
    synth->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        // moments defaults to a deeper ladder than scan's single order,
        // and the single-sign commands default to positive.
        if (moments->parsed() && moments->count("--q") == 0) opt.q = 4;
        if (scan->parsed() && scan->count("--sign") == 0) opt.sign = "pos";
        if (gaps->parsed() && gaps->count("--sign") == 0) opt.sign = "pos";
        if (moments->parsed()) return cmd_moments(opt);
        if (scan->parsed()) return cmd_scan(opt);
        if (gaps->parsed()) return cmd_gaps(opt);
        if (predict->parsed()) return cmd_predict(opt, alpha_s, c_a, q_list);
        if (synth->parsed()) return cmd_synth(opt, out_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
