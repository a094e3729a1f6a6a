#include "stlf/detect.hpp"

#include "stlf/error.hpp"
#include "stlf/seed.hpp"
#include "stlf/text.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace stlf {

using similarity::kAllMeasures;
using similarity::kMeasureCount;
using similarity::Measure;
using similarity::measure_name;
using similarity::SimilarityVector;

double sample_quantile(std::vector<double> x, double q) {
    if (x.empty()) throw Error(ErrorKind::InvalidArgument, "quantile of no values");
    if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::InvalidArgument, "quantile level must be in [0, 1]");
    std::sort(x.begin(), x.end());
    const double h = q * static_cast<double>(x.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

Baseline baseline_from_windows(std::span<const SimilarityVector> windows, std::size_t window_length,
                               const similarity::SimilarityParams& params) {
    if (windows.size() < kMinCalibrationWindows) {
        throw Error(ErrorKind::InsufficientData, "baseline needs at least " + std::to_string(kMinCalibrationWindows) +
                                                     " windows, got " + std::to_string(windows.size()));
    }
    Baseline b;
    b.params = params;
    b.window_length = window_length;
    b.n_windows = windows.size();
    for (Measure m : kAllMeasures) {
        auto& mb = b.measures[static_cast<std::size_t>(m)];
        std::vector<double> values;
        for (const auto& w : windows) {
            if (w[m]) values.push_back(*w[m]);
        }
        mb.n = values.size();
        if (values.size() < windows.size()) {
            mb.excluded = true;
            mb.reason = "undefined on " + std::to_string(windows.size() - values.size()) + " windows";
        }
        if (values.size() < 2) {
            mb.excluded = true;
            if (mb.reason.empty()) mb.reason = "fewer than 2 values";
            continue;
        }
        std::tie(mb.mean, mb.sd) = sample_mean_sd(values);
        for (std::size_t k = 0; k < kBaselineQuantiles.size(); ++k) {
            mb.quantiles[k] = sample_quantile(values, kBaselineQuantiles[k]);
        }
        if (!(mb.sd > kZeroVarianceThreshold * std::max(1.0, std::abs(mb.mean)))) {
            mb.excluded = true;
            mb.reason = "zero spread";
        }
    }
    return b;
}

std::vector<std::size_t> bootstrap_starts(std::size_t n, std::size_t window_length, std::size_t n_windows,
                                          std::uint64_t seed) {
    if (window_length == 0) throw Error(ErrorKind::InvalidArgument, "window length must be positive");
    if (n < window_length) {
        throw Error(ErrorKind::InsufficientData, "series of " + std::to_string(n) + " hours is shorter than a " +
                                                     std::to_string(window_length) + "-hour window");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - window_length);
    std::vector<std::size_t> starts(n_windows);
    for (auto& s : starts) s = pick(rng);
    return starts;
}

std::vector<SimilarityVector> window_vectors(std::span<const double> x, std::span<const double> y,
                                             std::span<const std::size_t> starts, std::size_t window_length,
                                             const similarity::SimilarityParams& params) {
    if (x.size() != y.size()) throw Error(ErrorKind::LengthMismatch, "forecast pair lengths differ");
    for (std::size_t s : starts) {
        if (s + window_length > x.size()) throw Error(ErrorKind::InvalidArgument, "window runs past the series");
    }
    std::vector<SimilarityVector> out(starts.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(starts.size()); ++i) {
        const std::size_t s = starts[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] =
            similarity::similarity_vector(x.subspan(s, window_length), y.subspan(s, window_length), params);
    }
    return out;
}

Baseline calibrate_baseline(std::span<const double> x, std::span<const double> y, std::size_t window_length,
                            std::size_t n_windows, std::uint64_t seed, const similarity::SimilarityParams& params) {
    if (n_windows < kMinCalibrationWindows) {
        throw Error(ErrorKind::InsufficientData, "n_windows must be at least " + std::to_string(kMinCalibrationWindows));
    }
    const auto starts = bootstrap_starts(x.size(), window_length, n_windows, seed);
    const auto windows = window_vectors(x, y, starts, window_length, params);
    return baseline_from_windows(windows, window_length, params);
}

std::string Baseline::to_csv() const {
    std::ostringstream out;
    out << "measure,mean,sd";
    for (double q : kBaselineQuantiles) out << ",q" << text::format_sig(q * 100.0, 3);
    out << ",n,window_length,n_windows,excluded,reason\n";
    for (Measure m : kAllMeasures) {
        const auto& mb = (*this)[m];
        out << measure_name(m) << ',' << text::format_exact(mb.mean) << ',' << text::format_exact(mb.sd);
        for (double q : mb.quantiles) out << ',' << text::format_exact(q);
        out << ',' << mb.n << ',' << window_length << ',' << n_windows << ',' << (mb.excluded ? "true" : "false") << ','
            << mb.reason << '\n';
    }
    return out.str();
}

DetectionVerdict evaluate_vector(const SimilarityVector& v, const Baseline& baseline, double tau) {
    if (!(tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau must be > 0");
    if (v.params != baseline.params) {
        throw Error(ErrorKind::ParameterMismatch, "similarity parameters differ from the baseline's");
    }
    if (v.length != baseline.window_length) {
        throw Error(ErrorKind::ParameterMismatch, "pair has " + std::to_string(v.length) + " hours, baseline windows have " +
                                                      std::to_string(baseline.window_length));
    }
    DetectionVerdict out;
    out.tau = tau;
    for (Measure m : kAllMeasures) {
        const auto& mb = baseline[m];
        auto& mv = out.measures[static_cast<std::size_t>(m)];
        mv.observed = v[m];
        mv.excluded = mb.excluded;
        if (mb.excluded || !mv.observed) continue;
        ++out.eligible;
        const double dev = *mv.observed - mb.mean;
        mv.z = dev / mb.sd;
        mv.g = std::abs(dev) - tau * mb.sd;
        mv.flagged = mv.g > 0.0;
        if (mv.flagged) ++out.votes;
    }
    out.any_flag = out.votes > 0;
    return out;
}

DetectionVerdict evaluate_constraints(std::span<const double> x, std::span<const double> y, const Baseline& baseline,
                                      double tau) {
    if (x.size() != baseline.window_length || y.size() != baseline.window_length) {
        throw Error(ErrorKind::ParameterMismatch, "pair length differs from the baseline window length " +
                                                      std::to_string(baseline.window_length));
    }
    return evaluate_vector(similarity::similarity_vector(x, y, baseline.params), baseline, tau);
}

std::string verdicts_csv_header() {
    std::ostringstream out;
    out << "label";
    for (Measure m : kAllMeasures) {
        const auto n = measure_name(m);
        out << ',' << n << ',' << n << "_z," << n << "_g," << n << "_flag";
    }
    out << ",votes,eligible,any_flag\n";
    return out.str();
}

std::string verdict_csv_row(const std::string& label, const DetectionVerdict& v) {
    std::ostringstream out;
    out << label;
    for (Measure m : kAllMeasures) {
        const auto& mv = v[m];
        out << ',' << (mv.observed ? text::format_exact(*mv.observed) : "");
        if (mv.excluded || !mv.observed) {
            out << ",,,excluded";
        } else {
            out << ',' << text::format_exact(mv.z) << ',' << text::format_exact(mv.g) << ','
                << (mv.flagged ? "true" : "false");
        }
    }
    out << ',' << v.votes << ',' << v.eligible << ',' << (v.any_flag ? "true" : "false") << '\n';
    return out.str();
}

namespace {

FittedModel fit_zone(const ZoneSeries& zone, const std::string& name, const ExperimentConfig& cfg) {
    const auto x = build_design(cfg.model, zone);
    auto [train, test] = train_test_split(x, cfg.split_ratio, derive_seed(cfg.seed, "split/" + name));
    return fit_and_evaluate(train, test);
}

std::vector<double> poly_forecast(const ForecastPolynomial& poly, const ZoneSeries& zone) {
    std::vector<double> out(poly.rows().size());
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = poly.value(r, zone.temperature[poly.rows()[r]]);
    return out;
}

}  // namespace

PreparedExperiment prepare_experiment(const ZonalDataset& dataset, const ExperimentConfig& cfg) {
    dataset.require_pairwise();
    const std::string& target = cfg.attack.target_zone;
    if (!dataset.has_zone(target)) throw Error(ErrorKind::InvalidArgument, "unknown target zone '" + target + "'");
    if (!dataset.has_zone(cfg.reference_zone) || cfg.reference_zone == target) {
        throw Error(ErrorKind::InvalidArgument, "reference zone must be a different zone of the dataset");
    }
    if (cfg.n_trials < 1) throw Error(ErrorKind::InvalidArgument, "n_trials must be >= 1");
    cfg.attack.validate();

    PreparedExperiment p;
    p.target_zone = dataset.zone(target);
    const ZoneSeries& reference = dataset.zone(cfg.reference_zone);
    p.target_model = fit_zone(p.target_zone, target, cfg);
    p.reference_model = fit_zone(reference, cfg.reference_zone, cfg);

    const ForecastPolynomial tp(p.target_model, p.target_zone);
    const ForecastPolynomial rp(p.reference_model, reference);
    if (tp.rows() != rp.rows()) throw Error(ErrorKind::InvalidArgument, "zones produce different forecast rows");
    p.rows = tp.rows();
    p.target_forecast = poly_forecast(tp, p.target_zone);
    p.reference_forecast = poly_forecast(rp, reference);
    p.baseline = calibrate_baseline(p.target_forecast, p.reference_forecast, cfg.window_length, cfg.n_windows,
                                    derive_seed(cfg.seed, "calibrate"), cfg.params);
    return p;
}

ExperimentResult run_trials(const PreparedExperiment& p, const ExperimentConfig& cfg) {
    const std::size_t n_rows = p.rows.size();
    const std::size_t len = cfg.window_length;
    if (n_rows < len) throw Error(ErrorKind::InsufficientData, "fewer forecast rows than one window");
    if (len != p.baseline.window_length) throw Error(ErrorKind::ParameterMismatch, "window length differs from baseline");
    const ForecastPolynomial poly(p.target_model, p.target_zone);

    ExperimentResult r;
    r.n_trials = cfg.n_trials;
    r.attacked_verdicts.resize(cfg.n_trials);
    r.clean_verdicts.resize(cfg.n_trials);
    std::vector<double> shifts(cfg.n_trials, 0.0);
    std::vector<std::string> failures(cfg.n_trials);

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t ti = 0; ti < static_cast<std::ptrdiff_t>(cfg.n_trials); ++ti) {
        const auto i = static_cast<std::size_t>(ti);
        try {
            std::mt19937_64 rng(derive_seed(cfg.seed, "trial/" + std::to_string(i)));
            const std::size_t start = std::uniform_int_distribution<std::size_t>(0, n_rows - len)(rng);
            AttackSpec spec = cfg.attack;
            spec.seed = rng();

            const std::size_t first = p.rows[start];
            const std::size_t last = p.rows[start + len - 1];
            std::vector<double> attacked(len);
            if (spec.kind == AttackKind::Gaussian) {
                const TimeSeries noisy = inject_gaussian(p.target_zone.temperature.slice(first, last - first + 1), spec);
                for (std::size_t k = 0; k < len; ++k) attacked[k] = poly.value(start + k, noisy[p.rows[start + k] - first]);
            } else {
                const auto res = optimize_attack(p.target_model, p.target_zone, spec, RowRange{first, last + 1});
                for (std::size_t k = 0; k < len; ++k) {
                    const std::size_t pos = p.rows[start + k];
                    attacked[k] = poly.value(start + k, p.target_zone.temperature[pos] + res.delta[pos]);
                }
            }
            const std::span<const double> clean(p.target_forecast.data() + start, len);
            const std::span<const double> other(p.reference_forecast.data() + start, len);
            double shift = 0.0;
            for (std::size_t k = 0; k < len; ++k) shift += attacked[k] - clean[k];
            shifts[i] = shift / static_cast<double>(len);
            r.attacked_verdicts[i] = evaluate_constraints(attacked, other, p.baseline, cfg.tau);
            r.clean_verdicts[i] = evaluate_constraints(clean, other, p.baseline, cfg.tau);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    }
    for (const auto& f : failures) {
        if (!f.empty()) throw Error(ErrorKind::InvalidArgument, "trial failed: " + f);
    }

    const double n = static_cast<double>(cfg.n_trials);
    for (std::size_t i = 0; i < cfg.n_trials; ++i) {
        const auto& a = r.attacked_verdicts[i];
        const auto& c = r.clean_verdicts[i];
        r.detection_rate += a.k_of_n(cfg.vote_k) ? 1.0 : 0.0;
        r.false_positive_rate += c.k_of_n(cfg.vote_k) ? 1.0 : 0.0;
        for (std::size_t m = 0; m < kMeasureCount; ++m) {
            r.measure_detection_rate[m] += a.measures[m].flagged ? 1.0 : 0.0;
            r.measure_false_positive_rate[m] += c.measures[m].flagged ? 1.0 : 0.0;
            r.mean_abs_z[m] += std::abs(a.measures[m].z);
        }
        r.mean_forecast_shift += shifts[i];
    }
    r.detection_rate /= n;
    r.false_positive_rate /= n;
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
        r.measure_detection_rate[m] /= n;
        r.measure_false_positive_rate[m] /= n;
        r.mean_abs_z[m] /= n;
    }
    r.mean_forecast_shift /= n;
    return r;
}

ExperimentResult detection_experiment(const ZonalDataset& dataset, const ExperimentConfig& cfg) {
    return run_trials(prepare_experiment(dataset, cfg), cfg);
}

std::string experiment_summary_csv(const ExperimentConfig& cfg, const ExperimentResult& r) {
    std::ostringstream out;
    out << "scope,model,attack,tau,vote_k,n_trials,detection_rate,false_positive_rate,mean_abs_z,mean_forecast_shift_mw\n";
    const auto common = [&] {
        out << to_string(cfg.model) << ',' << to_string(cfg.attack.kind) << ',' << text::format_exact(cfg.tau) << ','
            << cfg.vote_k << ',' << r.n_trials << ',';
    };
    out << "overall,";
    common();
    out << text::format_exact(r.detection_rate) << ',' << text::format_exact(r.false_positive_rate) << ",,"
        << text::format_exact(r.mean_forecast_shift) << '\n';
    for (Measure m : kAllMeasures) {
        const auto k = static_cast<std::size_t>(m);
        out << measure_name(m) << ',';
        common();
        out << text::format_exact(r.measure_detection_rate[k]) << ',' << text::format_exact(r.measure_false_positive_rate[k])
            << ',' << text::format_exact(r.mean_abs_z[k]) << ",\n";
    }
    return out.str();
}

}  // namespace stlf
