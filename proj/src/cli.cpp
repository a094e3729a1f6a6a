#include "stlf/cli.hpp"

#include "stlf/attack.hpp"
#include "stlf/detect.hpp"
#include "stlf/error.hpp"
#include "stlf/ingest.hpp"
#include "stlf/regress.hpp"
#include "stlf/report.hpp"
#include "stlf/seed.hpp"
#include "stlf/synth.hpp"
#include "stlf/text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;

namespace stlf::cli {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void write_artifact(const RunConfig& cfg, const std::string& name, const std::string& content, std::ostream& log) {
    const fs::path p = fs::path(cfg.out_dir) / name;
    fs::create_directories(p.parent_path());
    text::write_file(p.string(), content);
    if (cfg.verbose) log << "wrote " << p.string() << '\n';
}

ZonalDataset select_zones(const ZonalDataset& all, const std::vector<std::string>& zones) {
    if (zones.empty()) return all;
    std::map<std::string, ZoneSeries> picked;
    for (const auto& z : zones) {
        if (!all.has_zone(z)) throw Error(ErrorKind::InvalidArgument, "zone '" + z + "' is not in the dataset");
        picked.emplace(z, all.zone(z));
    }
    return ZonalDataset(std::move(picked));
}

ZonalDataset load_dataset(const RunConfig& cfg) {
    ZonalDataset ds;
    if (!cfg.load_file.empty() || !cfg.temperature_file.empty()) {
        if (cfg.load_file.empty() || cfg.temperature_file.empty()) {
            throw Error(ErrorKind::InvalidArgument, "load_file and temperature_file must be given together");
        }
        ds = ingest_files(cfg.load_file, cfg.temperature_file, cfg.clean).dataset;
    } else {
        const fs::path dir = cfg.dataset_dir.empty() ? fs::path(cfg.out_dir) : fs::path(cfg.dataset_dir);
        ds = read_dataset((dir / "load.csv").string(), (dir / "temperature.csv").string());
    }
    return select_zones(ds, cfg.zones);
}

std::string model_name(const std::string& zone, ModelKind kind) {
    return "models/" + zone + "_" + to_string(kind) + ".model";
}

std::optional<FittedModel> try_load_model(const RunConfig& cfg, const std::string& zone, ModelKind kind) {
    const std::string p = out_path(cfg, model_name(zone, kind));
    if (!fs::exists(p)) return std::nullopt;
    return FittedModel::deserialize(text::read_file(p));
}

FittedModel load_model(const RunConfig& cfg, const std::string& zone, ModelKind kind) {
    auto m = try_load_model(cfg, zone, kind);
    if (!m) {
        throw Error(ErrorKind::Io, "model file not found: " + out_path(cfg, model_name(zone, kind)) + " (run fit first)");
    }
    return *m;
}

std::string target_zone(const RunConfig& cfg, const ZonalDataset& ds) {
    if (!cfg.attack.target_zone.empty()) {
        if (!ds.has_zone(cfg.attack.target_zone)) {
            throw Error(ErrorKind::InvalidArgument, "attack zone '" + cfg.attack.target_zone + "' is not in the dataset");
        }
        return cfg.attack.target_zone;
    }
    return ds.zone_ids().front();
}

std::string reference_zone(const RunConfig& cfg, const ZonalDataset& ds, const std::string& target) {
    ds.require_pairwise();
    if (!cfg.reference_zone.empty()) {
        if (!ds.has_zone(cfg.reference_zone) || cfg.reference_zone == target) {
            throw Error(ErrorKind::InvalidArgument, "reference zone must be another zone of the dataset");
        }
        return cfg.reference_zone;
    }
    for (const auto& id : ds.zone_ids()) {
        if (id != target) return id;
    }
    throw Error(ErrorKind::InsufficientData, "pairwise similarity requires at least 2 zones");
}

/// Attacked temperatures written by `attack`, keyed by zone; empty when absent.
std::map<std::string, TimeSeries> load_attacked(const RunConfig& cfg, const ZonalDataset& ds) {
    std::map<std::string, TimeSeries> out;
    const std::string p = out_path(cfg, "attacked_temperature.csv");
    if (!fs::exists(p)) return out;
    const auto parsed = parse_temperature_file(p);
    for (const auto& [station, s] : parsed.series) {
        if (!ds.has_zone(station)) continue;
        auto cleaned = clean(s, {}, station).series;
        const auto& ref = ds.zone(station).temperature;
        if (cleaned.start() != ref.start() || cleaned.size() != ref.size()) {
            throw Error(ErrorKind::FormatError, p + ": station " + station + " does not cover the dataset's hours");
        }
        out.emplace(station, std::move(cleaned));
    }
    return out;
}

ZoneSeries with_temperature(const ZoneSeries& z, const TimeSeries& t) { return {z.load, t}; }

/// Forecast of `model` at the given zone positions (all must be design rows).
std::vector<double> forecast_at(const FittedModel& model, const ZoneSeries& zone,
                                const std::vector<std::size_t>& positions) {
    const auto rows = design_rows(model.kind, zone, model.options);
    const auto y = forecast(model, zone);
    std::vector<double> out;
    out.reserve(positions.size());
    for (std::size_t p : positions) {
        const auto it = std::lower_bound(rows.begin(), rows.end(), p);
        if (it == rows.end() || *it != p) throw Error(ErrorKind::InvalidArgument, "position is not a forecast row");
        out.push_back(y[static_cast<std::size_t>(it - rows.begin())]);
    }
    return out;
}

std::vector<double> values_at(std::span<const double> v, const std::vector<std::size_t>& positions) {
    std::vector<double> out;
    out.reserve(positions.size());
    for (std::size_t p : positions) out.push_back(v[p]);
    return out;
}

AttackSpec attack_spec(const RunConfig& cfg, const std::string& target) {
    AttackSpec spec = cfg.attack;
    spec.target_zone = target;
    spec.seed = derive_seed(cfg.seed, "attack");
    spec.validate();
    return spec;
}

}  // namespace

void cmd_synth(const RunConfig& cfg, std::ostream& log) {
    SynthConfig sc = cfg.synth;
    sc.seed = cfg.seed;
    const ZonalDataset ds = generate_synthetic(sc);
    write_artifact(cfg, "load.csv", format_load_file(ds), log);
    write_artifact(cfg, "temperature.csv", format_temperature_file(ds), log);
    log << "synthesized " << ds.zones().size() << " zones x " << ds.hours() << " hours from "
        << ds.start().to_string() << '\n';
}

void cmd_ingest(const RunConfig& cfg, std::ostream& log) {
    if (cfg.load_file.empty() || cfg.temperature_file.empty()) {
        throw Error(ErrorKind::InvalidArgument, "ingest needs load_file and temperature_file (or --load/--temperature)");
    }
    const IngestResult r = ingest_files(cfg.load_file, cfg.temperature_file, cfg.clean);
    const ZonalDataset ds = select_zones(r.dataset, cfg.zones);
    write_artifact(cfg, "load.csv", format_load_file(ds), log);
    write_artifact(cfg, "temperature.csv", format_temperature_file(ds), log);
    write_artifact(cfg, "cleaning_report.csv", r.report.to_csv(), log);
    log << "ingested " << ds.zones().size() << " zones x " << ds.hours() << " hours; rows read "
        << r.report.rows_read << ", kept " << r.report.rows_kept << ", dropped " << r.report.rows_dropped
        << ", interpolated " << r.report.rows_interpolated << '\n';
    if (cfg.verbose) {
        for (const auto& issue : r.report.issues) log << "  " << issue << '\n';
    }
}

void cmd_fit(const RunConfig& cfg, std::ostream& log) {
    const ZonalDataset ds = load_dataset(cfg);
    std::vector<MetricsRow> rows;
    for (const auto& [zone, series] : ds.zones()) {
        for (ModelKind kind : cfg.models) {
            const DesignMatrix x = build_design(kind, series, cfg.design);
            auto [train, test] = train_test_split(x, cfg.split_ratio, derive_seed(cfg.seed, "split/" + zone));
            const FittedModel m = fit_and_evaluate(train, test);
            write_artifact(cfg, model_name(zone, kind), m.serialize(), log);
            rows.push_back({zone, kind, "train", m.train_stats});
            rows.push_back({zone, kind, "test", *m.test_stats});
            if (cfg.verbose) {
                log << zone << ' ' << to_string(kind) << ": " << x.cols() << " columns, " << train.rows() << " train / "
                    << test.rows() << " test rows\n";
            }
        }
    }
    write_artifact(cfg, "metrics.csv", metrics_csv(rows), log);
    const std::string table = render_metrics_table(rows);
    write_artifact(cfg, "table_iii.txt", table, log);
    log << table;
}

void cmd_predict(const RunConfig& cfg, std::ostream& log) {
    const ZonalDataset ds = load_dataset(cfg);
    const auto attacked = load_attacked(cfg, ds);
    std::ostringstream out;
    out << "timestamp,zone,model,actual,forecast,forecast_attacked\n";
    std::size_t written = 0;
    for (const auto& [zone, series] : ds.zones()) {
        for (ModelKind kind : cfg.models) {
            const FittedModel m = load_model(cfg, zone, kind);
            const auto rows = design_rows(kind, series, m.options);
            const auto clean = forecast(m, series);
            std::vector<double> att;
            if (const auto it = attacked.find(zone); it != attacked.end()) {
                att = forecast(m, with_temperature(series, it->second));
            }
            for (std::size_t r = 0; r < rows.size(); ++r) {
                out << series.load.timestamp(rows[r]).to_string() << ',' << zone << ',' << to_string(kind) << ','
                    << text::format_exact(series.load[rows[r]]) << ',' << text::format_exact(clean[r]) << ','
                    << (att.empty() ? "" : text::format_exact(att[r])) << '\n';
            }
            written += rows.size();
        }
    }
    write_artifact(cfg, "forecasts.csv", out.str(), log);
    log << "wrote " << written << " forecast rows" << (attacked.empty() ? "" : " (with attacked forecasts)") << '\n';
}

void cmd_attack(const RunConfig& cfg, std::ostream& log) {
    const ZonalDataset ds = load_dataset(cfg);
    const std::string target = target_zone(cfg, ds);
    const AttackSpec spec = attack_spec(cfg, target);
    const ZoneSeries& zone = ds.zone(target);

    TimeSeries perturbed;
    std::string summary = "model," + attack_summary_header() + "\n";
    if (spec.kind == AttackKind::BoundedOpt) {
        const FittedModel m = load_model(cfg, target, cfg.attack_model);
        const AttackResult r = optimize_attack(m, zone, spec);
        perturbed = r.perturbed_temperature;
        summary += std::string(to_string(cfg.attack_model)) + "," + attack_summary_row(spec, r);
    } else {
        perturbed = inject_gaussian(zone.temperature, spec);
        for (ModelKind kind : cfg.models) {
            const auto m = try_load_model(cfg, target, kind);
            if (!m) continue;
            const AttackResult r = gaussian_attack(*m, zone, spec);
            summary += std::string(to_string(kind)) + "," + attack_summary_row(spec, r);
        }
    }

    std::map<std::string, TimeSeries> stations;
    for (const auto& [id, z] : ds.zones()) stations.emplace(id, id == target ? perturbed : z.temperature);
    write_artifact(cfg, "attacked_temperature.csv", format_temperature_file(stations), log);
    write_artifact(cfg, "attack_summary.csv", summary, log);
    log << summary;
}

void cmd_measure(const RunConfig& cfg, std::ostream& log) {
    const ZonalDataset ds = load_dataset(cfg);
    ds.require_pairwise();
    const std::string x_id = target_zone(cfg, ds);
    const std::string y_id = reference_zone(cfg, ds, x_id);
    const ZoneSeries& xz = ds.zone(x_id);
    const ZoneSeries& yz = ds.zone(y_id);
    // Common hours: those where every model produces a forecast.
    const auto positions = design_rows(ModelKind::F1, xz, cfg.design);
    const auto attacked = load_attacked(cfg, ds);

    std::vector<std::pair<std::string, similarity::SimilarityVector>> rows;
    const auto add = [&](const std::string& label, const std::vector<double>& x, const std::vector<double>& y) {
        rows.emplace_back(label, similarity::similarity_vector(x, y, cfg.similarity, x_id, y_id));
    };
    add("raw", values_at(xz.load.values(), positions), values_at(yz.load.values(), positions));

    for (const bool attacked_column : {false, true}) {
        for (ModelKind kind : {ModelKind::F1, ModelKind::F2}) {
            const auto mx = try_load_model(cfg, x_id, kind);
            const auto my = try_load_model(cfg, y_id, kind);
            if (!mx || !my) continue;
            ZoneSeries xs = xz;
            ZoneSeries ys = yz;
            if (attacked_column) {
                if (attacked.empty()) continue;
                if (const auto it = attacked.find(x_id); it != attacked.end()) xs.temperature = it->second;
                if (const auto it = attacked.find(y_id); it != attacked.end()) ys.temperature = it->second;
            }
            add(std::string(to_string(kind)) + (attacked_column ? "_attacked" : "_clean"), forecast_at(*mx, xs, positions),
                forecast_at(*my, ys, positions));
        }
    }
    const std::string csv = measures_csv(rows);
    write_artifact(cfg, "measures.csv", csv, log);
    log << render_measure_grid(read_measure_grid(csv));
}

void cmd_detect(const RunConfig& cfg, std::ostream& log) {
    const ZonalDataset ds = load_dataset(cfg);
    ds.require_pairwise();
    const std::string target = target_zone(cfg, ds);
    std::string summary;
    for (ModelKind kind : cfg.models) {
        ExperimentConfig e;
        e.model = kind;
        e.attack = cfg.attack;
        e.attack.target_zone = target;
        e.reference_zone = reference_zone(cfg, ds, target);
        e.tau = cfg.tau;
        e.vote_k = cfg.vote_k;
        e.n_trials = cfg.trials;
        e.seed = cfg.seed;
        e.window_length = cfg.window;
        e.n_windows = cfg.windows;
        e.split_ratio = cfg.split_ratio;
        e.params = cfg.similarity;
        const PreparedExperiment p = prepare_experiment(ds, e);
        const ExperimentResult r = run_trials(p, e);

        const std::string k = to_string(kind);
        write_artifact(cfg, "baseline_" + k + ".csv", p.baseline.to_csv(), log);
        std::string verdicts = verdicts_csv_header();
        for (std::size_t i = 0; i < r.n_trials; ++i) {
            verdicts += verdict_csv_row("trial" + std::to_string(i) + "_attacked", r.attacked_verdicts[i]);
            verdicts += verdict_csv_row("trial" + std::to_string(i) + "_clean", r.clean_verdicts[i]);
        }
        write_artifact(cfg, "verdicts_" + k + ".csv", verdicts, log);
        std::string s = experiment_summary_csv(e, r);
        if (!summary.empty()) s = s.substr(s.find('\n') + 1);
        summary += s;
        log << k << ": detection rate " << text::format_sig(r.detection_rate, 4) << ", false positive rate "
            << text::format_sig(r.false_positive_rate, 4) << ", mean shift "
            << text::format_sig(r.mean_forecast_shift, 4) << " MW over " << r.n_trials << " trials\n";
    }
    write_artifact(cfg, "detection_summary.csv", summary, log);
}

void cmd_report(const RunConfig& cfg, std::ostream& log) {
    const std::string measures_file = out_path(cfg, "measures.csv");
    if (!fs::exists(measures_file)) throw Error(ErrorKind::Io, "file not found: " + measures_file + " (run measure first)");
    const std::string grid = render_measure_grid(read_measure_grid(text::read_file(measures_file)));
    write_artifact(cfg, "table_iv.txt", grid, log);
    log << grid;

    const std::string metrics_file = out_path(cfg, "metrics.csv");
    if (fs::exists(metrics_file)) {
        write_artifact(cfg, "table_iii.txt", render_metrics_table(read_metrics_csv(text::read_file(metrics_file))), log);
    }

    const ZonalDataset ds = load_dataset(cfg);
    const auto attacked = load_attacked(cfg, ds);
    constexpr std::size_t kPlotHours = 336;
    for (const auto& [zone, series] : ds.zones()) {
        const auto positions = design_rows(ModelKind::F1, series, cfg.design);
        const std::vector<std::size_t> shown(positions.begin(),
                                             positions.begin() + static_cast<std::ptrdiff_t>(std::min(kPlotHours, positions.size())));
        const std::string from = series.load.timestamp(shown.front()).to_string();
        for (ModelKind kind : {ModelKind::F1, ModelKind::F2}) {
            const auto m = try_load_model(cfg, zone, kind);
            if (!m) continue;
            const auto fc = forecast_at(*m, series, shown);
            const std::string k = to_string(kind);
            write_artifact(cfg, "plots/forecast_" + zone + "_" + k + ".svg",
                           svg_line_plot(zone + " load, " + k + " forecast vs actual", "MW",
                                         {{"actual", values_at(series.load.values(), shown), "#1f77b4"},
                                          {k + " forecast", fc, "#d62728"}},
                                         from),
                           log);
            if (const auto it = attacked.find(zone); it != attacked.end() && it->second != series.temperature) {
                const auto fa = forecast_at(*m, with_temperature(series, it->second), shown);
                write_artifact(cfg, "plots/attack_" + zone + "_" + k + ".svg",
                               svg_line_plot(zone + " " + k + " forecast, clean vs attacked temperature", "MW",
                                             {{"clean", fc, "#2ca02c"}, {"attacked", fa, "#ff7f0e"}}, from),
                               log);
            }
        }
    }
}

int exit_code_for(const std::exception& e) noexcept {
    // Library errors and filesystem failures come from bad input or setup.
    if (dynamic_cast<const Error*>(&e) != nullptr) return kExitUsage;
    if (dynamic_cast<const fs::filesystem_error*>(&e) != nullptr) return kExitUsage;
    return kExitInternal;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Short-term load forecasting with similarity-based false data injection checks", "stlfguard"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--seed", seed, "run seed; every stage derives its own stream from it");
    app.add_flag("-v,--verbose", verbose, "log every artifact written");
    app.add_option("--set", overrides, "override a config key, e.g. --set attack.sd=2")->expected(1)->take_all();

    std::optional<std::size_t> hours;
    std::string load_file;
    std::string temperature_file;
    auto* synth = app.add_subcommand("synth", "generate a seeded synthetic dataset");
    synth->add_option("--hours", hours, "series length in hours (>= 336)");
    auto* ingest = app.add_subcommand("ingest", "parse and clean load and temperature files");
    ingest->add_option("--load", load_file, "load file");
    ingest->add_option("--temperature", temperature_file, "temperature file");
    app.add_subcommand("fit", "fit f1/f2 per zone and write the metrics table");
    app.add_subcommand("predict", "write forecasts for every zone and model");
    app.add_subcommand("attack", "perturb the target zone's temperature");
    app.add_subcommand("measure", "similarity measures for raw, clean and attacked pairs");
    app.add_subcommand("detect", "calibrate the baseline and run detection trials");
    app.add_subcommand("report", "render tables and plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg.apply_file(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--set expects key=value, got '" + kv + "'");
            cfg.set(std::string(text::trim(kv.substr(0, eq))), std::string(text::trim(kv.substr(eq + 1))));
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed) cfg.seed = *seed;
        if (hours) cfg.synth.n_hours = *hours;
        if (!load_file.empty()) cfg.load_file = load_file;
        if (!temperature_file.empty()) cfg.temperature_file = temperature_file;
        cfg.verbose = verbose;

        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "synth") cmd_synth(cfg, out);
        else if (name == "ingest") cmd_ingest(cfg, out);
        else if (name == "fit") cmd_fit(cfg, out);
        else if (name == "predict") cmd_predict(cfg, out);
        else if (name == "attack") cmd_attack(cfg, out);
        else if (name == "measure") cmd_measure(cfg, out);
        else if (name == "detect") cmd_detect(cfg, out);
        else if (name == "report") cmd_report(cfg, out);
        return kExitOk;
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        err << (code == kExitUsage ? "error: " : "internal error: ") << e.what() << '\n';
        return code;
    }
}

}  // namespace stlf::cli
