#include "semuq/config.hpp"
#include "semuq/errors.hpp"
#include "semuq/evaluate.hpp"
#include "semuq/text_io.hpp"
#include "semuq/train.hpp"
#include "semuq/visualize.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace semuq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInfeasible = 4;

struct CommonOpts {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<std::string> out;
    std::string split = "validation";
};

RunConfig load_config(const CommonOpts& opts) {
    RunConfig cfg = parse_config_file(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.out) cfg.output_dir = *opts.out;
    return cfg;
}

/// Effective config is dropped into the run directory for provenance.
void write_run_config(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    write_text_file(fs::path(cfg.output_dir) / "run_config.txt",
                    canonical_config_text(cfg));
}

std::vector<DifficultyLevel> difficulty_levels(const RunConfig& cfg) {
    std::vector<DifficultyLevel> levels;
    if (cfg.corruption == CorruptionKind::Downsample) {
        for (int f : {1, 8, 32}) {
            CorruptionSpec c;
            c.kind = CorruptionKind::Downsample;
            c.downsample_factor = f;
            levels.push_back({std::to_string(f) + "x", c});
        }
    } else if (cfg.corruption == CorruptionKind::Mask) {
        for (double t : {0.3, 0.6, 0.9}) {
            CorruptionSpec c;
            c.kind = CorruptionKind::Mask;
            c.mask_threshold = t;
            levels.push_back({"mask" + fmt_double(t), c});
        }
    }
    return levels;
}

int cmd_generate(const RunConfig& cfg) {
    write_run_config(cfg);
    DatasetSplit data = make_dataset(cfg.dataset_n, cfg.policy(), cfg.seed,
                                     cfg.generator_spec());
    DatasetMeta meta;
    meta.generator = cfg.generator_spec();
    meta.channels = cfg.policy().input_channels();
    meta.seed = cfg.seed;
    meta.policy = cfg.policy();
    save_dataset(fs::path(cfg.output_dir) / "dataset", data, meta);
    std::cout << "dataset: " << data.train.size() << " train / "
              << data.calibration.size() << " calibration / "
              << data.validation.size() << " validation\n";
    return kExitOk;
}

int cmd_train(const RunConfig& cfg) {
    write_run_config(cfg);
    DatasetSplit data = load_dataset(fs::path(cfg.output_dir) / "dataset");
    TrainResult res = train(data.train, cfg.dim_mask(), cfg.train_config(),
                            cfg.trunk_widths);
    save_encoder(fs::path(cfg.output_dir) / "encoder.suqe", res.params);
    save_trace(fs::path(cfg.output_dir) / "train_trace.csv", res.trace);
    if (!res.trace.empty())
        std::cout << "final point loss: " << fmt_double(res.trace.back().point)
                  << "\n";
    return kExitOk;
}

int cmd_calibrate(const RunConfig& cfg) {
    write_run_config(cfg);
    EncoderParams params =
        load_encoder(fs::path(cfg.output_dir) / "encoder.suqe");
    DatasetSplit data = load_dataset(fs::path(cfg.output_dir) / "dataset");
    if (data.calibration.empty())
        throw InvalidArgument("calibration split is empty");
    CalibrationResult res =
        calibrate(params, data.calibration, cfg.dim_mask(), cfg.lambda_grid(),
                  cfg.risk_spec(), cfg.bound);
    save_calibration(fs::path(cfg.output_dir) / "calibration_curve.csv",
                     fs::path(cfg.output_dir) / "calibration_summary.json",
                     res);
    if (!res.lambda_hat) {
        std::cerr << "calibration infeasible: no lambda on the grid controls "
                     "risk at alpha="
                  << fmt_double(cfg.alpha) << "\n";
        return kExitInfeasible;
    }
    std::cout << "lambda_hat: " << fmt_double(*res.lambda_hat) << "\n";
    return kExitOk;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& split) {
    write_run_config(cfg);
    EncoderParams params =
        load_encoder(fs::path(cfg.output_dir) / "encoder.suqe");
    CalibrationSummary cal = load_calibration_summary(
        fs::path(cfg.output_dir) / "calibration_summary.json");
    if (!cal.lambda_hat) {
        std::cerr << "cannot evaluate: calibration was infeasible\n";
        return kExitInfeasible;
    }
    DatasetSplit data = load_dataset(fs::path(cfg.output_dir) / "dataset");
    const std::vector<Sample>* samples = nullptr;
    if (split == "train") samples = &data.train;
    else if (split == "calibration") samples = &data.calibration;
    else if (split == "validation") samples = &data.validation;
    else throw InvalidArgument("unknown split: " + split);
    if (samples->empty()) throw InvalidArgument("split is empty: " + split);

    DimMask mask = cfg.dim_mask();
    double risk_post = empirical_risk(params, *cal.lambda_hat, *samples, mask);
    double risk_pre = empirical_risk(params, 1.0, *samples, mask);

    nlohmann::json j;
    j["split"] = split;
    j["n"] = samples->size();
    j["lambda_hat"] = *cal.lambda_hat;
    j["risk_post"] = risk_post;
    j["risk_pre_lambda1"] = risk_pre;
    j["alpha"] = cfg.alpha;
    j["delta"] = cfg.delta;
    write_text_file(fs::path(cfg.output_dir) / "evaluation.json",
                    j.dump(2) + "\n");
    std::cout << "risk at lambda_hat on " << split << ": "
              << fmt_double(risk_post) << "\n";

    if (cfg.corruption != CorruptionKind::None) {
        AdaptivityReport rep = adaptivity_study(
            params, *cal.lambda_hat, difficulty_levels(cfg), cfg.adaptivity_n,
            mask, derive_seed(cfg.seed, "adaptivity/eval"),
            cfg.generator_spec());
        save_adaptivity_report(
            fs::path(cfg.output_dir) / "adaptivity_samples.csv",
            fs::path(cfg.output_dir) / "adaptivity_summary.json", rep);
        for (const LevelStats& s : rep.levels)
            std::cout << "mean set size [" << s.label
                      << "]: " << fmt_double(s.mean) << "\n";
    }
    return kExitOk;
}

int cmd_coverage(const RunConfig& cfg) {
    write_run_config(cfg);
    EncoderParams params =
        load_encoder(fs::path(cfg.output_dir) / "encoder.suqe");
    uint64_t pool_seed = derive_seed(cfg.seed, "coverage/pool");
    std::vector<Sample> pool;
    pool.reserve(cfg.coverage_pool);
    for (std::size_t i = 0; i < cfg.coverage_pool; ++i)
        pool.push_back(make_sample(derive_seed(pool_seed, i), cfg.policy(),
                                   cfg.generator_spec()));
    CoverageTrialReport rep = coverage_trials(
        params, pool, cfg.dim_mask(), cfg.risk_spec(), cfg.lambda_grid(),
        cfg.bound, cfg.coverage_trials, cfg.seed);
    save_coverage_report(fs::path(cfg.output_dir) / "coverage_trials.csv",
                         fs::path(cfg.output_dir) / "coverage_summary.json",
                         rep);
    std::size_t violations = 0;
    for (const TrialRow& r : rep.trials)
        if (r.risk_post > cfg.alpha) ++violations;
    std::cout << "trials with post-calibration risk > alpha: " << violations
              << " / " << rep.trials.size() << "\n";
    return kExitOk;
}

int cmd_visualize(const RunConfig& cfg) {
    write_run_config(cfg);
    EncoderParams params =
        load_encoder(fs::path(cfg.output_dir) / "encoder.suqe");
    CalibrationSummary cal = load_calibration_summary(
        fs::path(cfg.output_dir) / "calibration_summary.json");
    if (!cal.lambda_hat) {
        std::cerr << "cannot visualize: calibration was infeasible\n";
        return kExitInfeasible;
    }
    Sample s = make_sample(derive_seed(cfg.seed, "viz/sample"), cfg.policy(),
                           cfg.generator_spec());
    fs::path viz_dir = fs::path(cfg.output_dir) / "viz";
    render_panel(params, *cal.lambda_hat, s.x, cfg.effective_viz_dims(),
                 cfg.dim_mask(), viz_dir, cfg.generator_spec());
    EncoderOutput out = forward(params, s.x);
    export_interval_plot_data(viz_dir / "intervals.csv", out, *cal.lambda_hat,
                              s.z, cfg.dim_mask());
    std::cout << "panels written to " << viz_dir.string() << "\n";
    return kExitOk;
}

int cmd_ablate(const RunConfig& cfg) {
    if (cfg.corruption == CorruptionKind::None)
        throw InvalidArgument(
            "ablate requires a corruption policy (downsample or mask)");
    write_run_config(cfg);
    DatasetSplit data = make_dataset(cfg.dataset_n, cfg.policy(), cfg.seed,
                                     cfg.generator_spec());
    DimMask mask = cfg.dim_mask();
    std::vector<DifficultyLevel> levels = difficulty_levels(cfg);

    std::string csv =
        "recon_weight,level,corruption_kind,corruption_param,lambda_hat,"
        "mean_set_size,median_set_size\n";
    for (double c : cfg.ablate_recon_weights) {
        TrainConfig tc = cfg.train_config();
        tc.recon_weight = c;
        TrainResult res = train(data.train, mask, tc, cfg.trunk_widths);
        CalibrationResult cal =
            calibrate(res.params, data.calibration, mask, cfg.lambda_grid(),
                      cfg.risk_spec(), cfg.bound);
        std::string lhat =
            cal.lambda_hat ? fmt_double(*cal.lambda_hat) : "infeasible";
        if (!cal.lambda_hat) {
            for (const DifficultyLevel& lv : levels)
                csv += fmt_double(c) + "," + lv.label + "," +
                       to_string(lv.corruption.kind) + ",," + lhat + ",,\n";
            continue;
        }
        AdaptivityReport rep = adaptivity_study(
            res.params, *cal.lambda_hat, levels, cfg.adaptivity_n, mask,
            derive_seed(cfg.seed, "adaptivity/ablate"), cfg.generator_spec());
        for (const LevelStats& s : rep.levels) {
            double param = s.corruption.kind == CorruptionKind::Downsample
                               ? s.corruption.downsample_factor
                               : s.corruption.mask_threshold;
            csv += fmt_double(c) + "," + s.label + "," +
                   to_string(s.corruption.kind) + "," + fmt_double(param) +
                   "," + lhat + "," + fmt_double(s.mean) + "," +
                   fmt_double(s.median) + "\n";
        }
    }
    write_text_file(fs::path(cfg.output_dir) / "ablation.csv", csv);
    std::cout << "ablation written to "
              << (fs::path(cfg.output_dir) / "ablation.csv").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "semuq: calibrated per-factor uncertainty intervals for a synthetic "
        "disentangled generator"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", opts.config_path, "run config file")
            ->required();
        sub->add_option("--seed", opts.seed, "override the config seed");
        sub->add_option("-o,--out", opts.out, "override the output directory");
    };

    CLI::App* generate =
        app.add_subcommand("generate", "sample a dataset and write it to disk");
    add_common(generate);
    CLI::App* train_cmd =
        app.add_subcommand("train", "train the quantile encoder");
    add_common(train_cmd);
    CLI::App* calibrate_cmd = app.add_subcommand(
        "calibrate", "select lambda_hat with a risk upper confidence bound");
    add_common(calibrate_cmd);
    CLI::App* evaluate_cmd = app.add_subcommand(
        "evaluate", "empirical risk and set-size adaptivity on a split");
    add_common(evaluate_cmd);
    evaluate_cmd->add_option("--split", opts.split,
                             "train | calibration | validation");
    CLI::App* coverage_cmd = app.add_subcommand(
        "coverage", "repeated 50-50 calibrate/evaluate coverage trials");
    add_common(coverage_cmd);
    CLI::App* visualize_cmd = app.add_subcommand(
        "visualize", "render calibrated interval endpoints through the "
                     "generator");
    add_common(visualize_cmd);
    CLI::App* ablate_cmd = app.add_subcommand(
        "ablate", "sweep the reconstruction weight and report set sizes");
    add_common(ablate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        RunConfig cfg = load_config(opts);
        if (app.got_subcommand(generate)) return cmd_generate(cfg);
        if (app.got_subcommand(train_cmd)) return cmd_train(cfg);
        if (app.got_subcommand(calibrate_cmd)) return cmd_calibrate(cfg);
        if (app.got_subcommand(evaluate_cmd))
            return cmd_evaluate(cfg, opts.split);
        if (app.got_subcommand(coverage_cmd)) return cmd_coverage(cfg);
        if (app.got_subcommand(visualize_cmd)) return cmd_visualize(cfg);
        if (app.got_subcommand(ablate_cmd)) return cmd_ablate(cfg);
        std::cerr << "no subcommand\n";
        return kExitValidation;
    } catch (const TrainingFailure& e) {
        std::cerr << "training failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
