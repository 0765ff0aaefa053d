// peakcast: day-ahead peak load forecasting front end.
//
// Subcommands: ingest, decompose, train, evaluate, compare.
// Exit codes: 0 success, 1 internal error, 2 user/input error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "peakcast/csv.hpp"
#include "peakcast/evaluation.hpp"
#include "peakcast/ingest.hpp"
#include "peakcast/memd.hpp"
#include "peakcast/metrics.hpp"
#include "peakcast/pipeline.hpp"
#include "peakcast/svg.hpp"
#include "peakcast/windows.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace peakcast;

namespace {

struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_file(const std::string& path, const std::string& what) {
    if (!fs::exists(path)) throw UserError(what + " not found: " + path);
}

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw UserError("config: unknown key '" + it.key() + "' in " + where);
        }
    }
}

template <typename T>
void maybe(const ordered_json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

// Config file: JSON mirroring PipelineConfig; every field optional.
PipelineConfig load_run_config(const std::string& path) {
    PipelineConfig cfg;
    if (path.empty()) return cfg;
    require_file(path, "config file");
    std::ifstream in(path);
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw UserError(std::string("config: parse failure: ") + e.what());
    }
    reject_unknown_keys(j,
                        {"d", "seed", "holdout_fraction", "tuning_max_steps", "kkt_tolerance", "strict_causal",
                         "eemd_nstd", "eemd_ne", "sift", "pso", "baseline"},
                        "top level");
    maybe(j, "d", cfg.d);
    maybe(j, "seed", cfg.seed);
    maybe(j, "holdout_fraction", cfg.holdout_fraction);
    maybe(j, "tuning_max_steps", cfg.tuning_max_steps);
    maybe(j, "kkt_tolerance", cfg.kkt_tolerance);
    maybe(j, "strict_causal", cfg.strict_causal);
    maybe(j, "eemd_nstd", cfg.eemd_nstd);
    maybe(j, "eemd_ne", cfg.eemd_ne);
    if (j.contains("sift")) {
        const auto& s = j.at("sift");
        reject_unknown_keys(
            s, {"max_sift_iterations", "sift_tolerance", "min_extrema", "num_directions", "parallel"},
            "sift");
        maybe(s, "max_sift_iterations", cfg.sift.max_sift_iterations);
        maybe(s, "sift_tolerance", cfg.sift.sift_tolerance);
        maybe(s, "min_extrema", cfg.sift.min_extrema);
        maybe(s, "num_directions", cfg.sift.num_directions);
        maybe(s, "parallel", cfg.sift.parallel);
    }
    if (j.contains("pso")) {
        const auto& p = j.at("pso");
        reject_unknown_keys(
            p, {"pop", "iterations", "c1", "c2", "w_max", "w_min", "velocity_fraction"}, "pso");
        maybe(p, "pop", cfg.pso.pop);
        maybe(p, "iterations", cfg.pso.iterations);
        maybe(p, "c1", cfg.pso.c1);
        maybe(p, "c2", cfg.pso.c2);
        maybe(p, "w_max", cfg.pso.w_max);
        maybe(p, "w_min", cfg.pso.w_min);
        maybe(p, "velocity_fraction", cfg.pso.velocity_fraction);
    }
    if (j.contains("baseline")) {
        const auto& b = j.at("baseline");
        reject_unknown_keys(b, {"C", "epsilon", "gamma"}, "baseline");
        maybe(b, "C", cfg.baseline.C);
        maybe(b, "epsilon", cfg.baseline.epsilon);
        maybe(b, "gamma", cfg.baseline.gamma);
    }
    return cfg;
}

ordered_json effective_config_json(const PipelineConfig& cfg) {
    return ordered_json{
        {"d", cfg.d},
        {"seed", cfg.seed},
        {"holdout_fraction", cfg.holdout_fraction},
        {"tuning_max_steps", cfg.tuning_max_steps},
        {"kkt_tolerance", cfg.kkt_tolerance},
        {"strict_causal", cfg.strict_causal},
        {"eemd_nstd", cfg.eemd_nstd},
        {"eemd_ne", cfg.eemd_ne},
        {"sift",
         {{"max_sift_iterations", cfg.sift.max_sift_iterations},
          {"sift_tolerance", cfg.sift.sift_tolerance},
          {"min_extrema", cfg.sift.min_extrema},
          {"num_directions", cfg.sift.num_directions},
          {"parallel", cfg.sift.parallel}}},
        {"pso",
         {{"pop", cfg.pso.pop},
          {"iterations", cfg.pso.iterations},
          {"c1", cfg.pso.c1},
          {"c2", cfg.pso.c2},
          {"w_max", cfg.pso.w_max},
          {"w_min", cfg.pso.w_min},
          {"velocity_fraction", cfg.pso.velocity_fraction}}},
        {"baseline",
         {{"C", cfg.baseline.C}, {"epsilon", cfg.baseline.epsilon}, {"gamma", cfg.baseline.gamma}}},
    };
}

void echo_config(const PipelineConfig& cfg, const std::string& dir) {
    fs::create_directories(dir);
    std::ofstream out(fs::path(dir) / "effective_config.json");
    if (!out) throw std::runtime_error("cannot write effective config in " + dir);
    out << effective_config_json(cfg).dump(2) << "\n";
}

int cmd_ingest(const std::string& demand_path, const std::string& temp_path,
               const std::string& region, const std::string& out_path) {
    require_file(demand_path, "demand file");
    require_file(temp_path, "temperature file");
    const auto rows = parse_demand_csv(demand_path, region);
    auto [daily, report] = aggregate_daily(rows);
    const auto temps = parse_temperature_csv(temp_path);
    const MultiSeries series = join_temperature(daily, temps, report);
    csv::write_daily_csv(out_path, series);
    std::cout << "ingest: " << series.size() << " days (" << series.start_date().to_string()
              << " .. " << series.end_date().to_string() << "), "
              << report.days_with_missing_intervals << " days with missing intervals, "
              << report.interpolated_intervals << " interpolated, " << report.dropped_days
              << " dropped\n";
    for (const std::string& w : report.warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

int cmd_decompose(const std::string& data_path, std::size_t directions,
                  const std::string& out_dir) {
    require_file(data_path, "data file");
    const MultiSeries series = csv::read_daily_csv(data_path);
    SiftConfig sift;
    sift.num_directions = directions;
    const ChannelMatrix raw = series.channels();
    const ImfSet result = memd(raw, sift);
    fs::create_directories(out_dir);
    for (std::size_t c = 0; c < raw.dim(); ++c) {
        std::ofstream out(fs::path(out_dir) / ("channel_" + raw.labels[c] + ".csv"));
        out << "t";
        for (std::size_t i = 0; i < result.n_modes(); ++i) out << ",imf" << (i + 1);
        out << ",residue\n";
        for (std::size_t t = 0; t < raw.length(); ++t) {
            out << t;
            for (std::size_t i = 0; i < result.n_modes(); ++i) {
                out << "," << csv::format_double(result.modes[i].channels[c][t]);
            }
            out << "," << csv::format_double(result.residue.channels[c][t]) << "\n";
        }
    }
    std::cout << "decompose: " << result.n_modes() << " modes, reconstruction error "
              << result.reconstruction_error(raw) << "\n";
    return 0;
}

int cmd_train(const std::string& data_path, const std::string& config_path,
              const std::string& variant_name_str, const std::string& model_out,
              long long seed_override) {
    require_file(data_path, "data file");
    const MultiSeries train = csv::read_daily_csv(data_path);
    PipelineConfig cfg = load_run_config(config_path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    Variant variant;
    try {
        variant = parse_variant(variant_name_str);
    } catch (const std::exception& e) {
        throw UserError(e.what());
    }
    const auto t0 = std::chrono::steady_clock::now();
    const HybridModel model = train_variant(train, variant, cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    save_model(model, model_out);
    echo_config(cfg, model_out);
    std::cout << "train: " << variant_name(variant) << ", " << model.components.size()
              << " component models, runtime " << secs << " s\n";
    return 0;
}

void write_forecast_csv(const std::string& path, const MultiSeries& test,
                        const std::vector<double>& predicted) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "date,actual,predicted,abs_error\n";
    for (std::size_t i = 0; i < test.size(); ++i) {
        out << test[i].date.to_string() << "," << csv::format_double(test[i].peak) << ","
            << csv::format_double(predicted[i]) << ","
            << csv::format_double(std::fabs(test[i].peak - predicted[i])) << "\n";
    }
}

int cmd_evaluate(const std::string& model_dir, const std::string& data_path,
                 const std::string& out_dir) {
    require_file((fs::path(model_dir) / "manifest.json").string(), "model manifest");
    require_file(data_path, "data file");
    const HybridModel model = load_model(model_dir);
    const MultiSeries full = csv::read_daily_csv(data_path);
    if (full.size() <= model.train_series.size()) {
        throw UserError("evaluate: data does not extend past the training series");
    }
    const MultiSeries test = full.slice(model.train_series.size(),
                                        full.size() - model.train_series.size());
    const std::vector<double> predicted = evaluate_once(model, model.train_series, test);
    std::vector<double> actual(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) actual[i] = test[i].peak;
    const MetricReport m = compute_metrics(actual, predicted);

    fs::create_directories(out_dir);
    write_forecast_csv((fs::path(out_dir) / "forecast.csv").string(), test, predicted);
    std::ofstream mout(fs::path(out_dir) / "metrics.csv");
    mout << "model,da,mape,rmse,r2,n\n"
         << model.model_id() << "," << csv::format_double(m.da) << ","
         << csv::format_double(m.mape) << "," << csv::format_double(m.rmse) << ","
         << csv::format_double(m.r2) << "," << m.n << "\n";
    std::cout << "evaluate: N=" << m.n << " DA=" << m.da << " MAPE=" << m.mape
              << " RMSE=" << m.rmse << " R2=" << m.r2 << "\n";
    return 0;
}

int cmd_compare(const std::string& data_path, const std::string& config_path,
                const std::vector<std::string>& variant_names, std::size_t runs,
                double train_fraction, const std::string& out_dir, long long seed_override) {
    require_file(data_path, "data file");
    if (variant_names.empty()) throw UserError("compare: at least one --variant required");
    PipelineConfig cfg = load_run_config(config_path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);

    const MultiSeries series = csv::read_daily_csv(data_path);
    SplitSpec split;
    split.train_fraction = train_fraction;
    const auto [train, test] = split_train_test(series, split);

    std::vector<Variant> variants;
    for (const std::string& name : variant_names) {
        try {
            variants.push_back(parse_variant(name));
        } catch (const std::exception& e) {
            throw UserError(e.what());
        }
    }

    fs::create_directories(out_dir);
    echo_config(cfg, out_dir);

    std::vector<RepetitionReport> reports;
    for (Variant v : variants) {
        std::cout << "compare: running " << variant_name(v) << " x" << runs << "...\n";
        reports.push_back(repeat_runs(train, test, v, cfg, runs, cfg.seed));
    }

    // Table 6 layout: per-model mean metrics plus runtime.
    {
        std::ofstream out(fs::path(out_dir) / "metrics.csv");
        out << "model,da,mape,rmse,r2,runtime_seconds,runs,failures\n";
        for (const RepetitionReport& r : reports) {
            out << variant_name(r.variant) << "," << csv::format_double(r.mean_metrics.da) << ","
                << csv::format_double(r.mean_metrics.mape) << ","
                << csv::format_double(r.mean_metrics.rmse) << ","
                << csv::format_double(r.mean_metrics.r2) << ","
                << csv::format_double(r.mean_runtime_seconds) << "," << r.runs.size() << ","
                << r.failures << "\n";
        }
    }
    // Table 7 layout: pairwise DM statistics on mean absolute-error series.
    {
        std::ofstream out(fs::path(out_dir) / "dm.csv");
        out << "model_a,model_b,dm,p_value\n";
        for (std::size_t a = 0; a < reports.size(); ++a) {
            for (std::size_t b = 0; b < reports.size(); ++b) {
                if (a == b) continue;
                out << variant_name(reports[a].variant) << ","
                    << variant_name(reports[b].variant) << ",";
                try {
                    const DmResult dm =
                        dm_test(reports[a].mean_abs_errors, reports[b].mean_abs_errors);
                    out << csv::format_double(dm.dm) << "," << csv::format_double(dm.p_value)
                        << "\n";
                } catch (const std::exception&) {
                    out << "nan,nan\n";
                }
            }
        }
    }
    // Actual vs predicted line chart from one representative run per variant.
    {
        std::vector<svg::LineSeries> lines;
        std::vector<double> actual(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) actual[i] = test[i].peak;
        lines.push_back({"actual", actual});
        for (Variant v : variants) {
            PipelineConfig run_cfg = cfg;
            const HybridModel model = train_variant(train, v, run_cfg);
            lines.push_back({variant_name(v), evaluate_once(model, train, test)});
        }
        svg::write_line_chart((fs::path(out_dir) / "forecast.svg").string(),
                              "actual vs predicted peak load", lines);
    }
    std::cout << "compare: wrote metrics.csv, dm.csv, forecast.svg to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"peakcast: MEMD-PSO-SVR day-ahead peak load forecasting"};
    app.require_subcommand(1);

    std::string demand_path, temp_path, region, out_path;
    auto* ingest = app.add_subcommand("ingest", "aggregate raw demand + temperature to daily CSV");
    ingest->add_option("--demand", demand_path, "half-hourly demand CSV")->required();
    ingest->add_option("--temp", temp_path, "daily mean temperature CSV")->required();
    ingest->add_option("--region", region, "region identifier, e.g. NSW")->required();
    ingest->add_option("--out", out_path, "output daily CSV path")->required();

    std::string data_path;
    std::size_t directions = 256;
    std::string out_dir;
    auto* decompose = app.add_subcommand("decompose", "run MEMD on a daily CSV");
    decompose->add_option("--data", data_path, "daily CSV")->required();
    decompose->add_option("--directions", directions, "projection direction count");
    decompose->add_option("--out", out_dir, "output directory")->required();

    std::string config_path, variant, model_dir;
    long long seed_override = -1;
    auto* train = app.add_subcommand("train", "train a forecasting model");
    train->add_option("--data", data_path, "training daily CSV")->required();
    train->add_option("--config", config_path, "run config JSON");
    train->add_option("--variant", variant, "model variant")->required();
    train->add_option("--model-out", model_dir, "model output directory")->required();
    train->add_option("--seed", seed_override, "seed override");

    auto* evaluate = app.add_subcommand("evaluate", "forecast a test period and report metrics");
    evaluate->add_option("--model", model_dir, "model directory")->required();
    evaluate->add_option("--data", data_path, "full daily CSV (train + test)")->required();
    evaluate->add_option("--out", out_dir, "output directory")->required();

    std::vector<std::string> variant_names;
    std::size_t runs = 50;
    double train_fraction = 2.0 / 3.0;
    auto* compare = app.add_subcommand("compare", "repeated-run comparison of model variants");
    compare->add_option("--data", data_path, "full daily CSV")->required();
    compare->add_option("--config", config_path, "run config JSON");
    compare->add_option("--variant", variant_names, "variant (repeatable)")->required();
    compare->add_option("--runs", runs, "repetitions per variant");
    compare->add_option("--train-fraction", train_fraction, "train split fraction");
    compare->add_option("--out", out_dir, "output directory")->required();
    compare->add_option("--seed", seed_override, "base seed override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(demand_path, temp_path, region, out_path);
        if (decompose->parsed()) return cmd_decompose(data_path, directions, out_dir);
        if (train->parsed())
            return cmd_train(data_path, config_path, variant, model_dir, seed_override);
        if (evaluate->parsed()) return cmd_evaluate(model_dir, data_path, out_dir);
        if (compare->parsed())
            return cmd_compare(data_path, config_path, variant_names, runs, train_fraction,
                               out_dir, seed_override);
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
