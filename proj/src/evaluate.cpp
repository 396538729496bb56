#include "semuq/evaluate.hpp"

#include "semuq/errors.hpp"
#include "semuq/text_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace semuq {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= sorted.size()) return sorted.back();
    double frac = pos - static_cast<double>(i);
    return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

}  // namespace

double empirical_risk(const std::vector<EncoderOutput>& outputs,
                      const std::vector<LatentVector>& zs, double lambda,
                      const DimMask& mask) {
    if (outputs.empty()) throw InvalidArgument("empirical_risk: empty data");
    if (outputs.size() != zs.size())
        throw InvalidArgument("empirical_risk: outputs and latents disagree");
    double sum = 0.0;
    for (std::size_t i = 0; i < outputs.size(); ++i)
        sum += coverage_loss(interval_at(outputs[i], lambda), zs[i], mask);
    return sum / static_cast<double>(outputs.size());
}

double empirical_risk(const EncoderParams& params, double lambda,
                      std::span<const Sample> data, const DimMask& mask) {
    if (data.empty()) throw InvalidArgument("empirical_risk: empty data");
    std::vector<EncoderOutput> outs = forward_all(params, data);
    std::vector<LatentVector> zs;
    zs.reserve(data.size());
    for (const Sample& s : data) zs.push_back(s.z);
    return empirical_risk(outs, zs, lambda, mask);
}

CoverageTrialReport coverage_trials(const EncoderParams& params,
                                    std::span<const Sample> pool,
                                    const DimMask& mask, const RiskSpec& spec,
                                    const LambdaGrid& grid, BoundKind bound,
                                    int n_trials, uint64_t seed) {
    if (pool.size() < 100)
        throw InvalidArgument("coverage_trials: pool must hold >= 100 samples");
    if (n_trials < 1)
        throw InvalidArgument("coverage_trials: need at least one trial");

    std::vector<EncoderOutput> outputs = forward_all(params, pool);
    std::vector<LatentVector> zs;
    zs.reserve(pool.size());
    for (const Sample& s : pool) zs.push_back(s.z);

    std::size_t half = pool.size() / 2;
    CoverageTrialReport report;
    report.spec = spec;
    report.bound_kind = bound;
    report.pool_n = pool.size();
    report.calib_n = half;
    report.eval_n = pool.size() - half;

    std::vector<std::size_t> idx(pool.size());
    uint64_t base = derive_seed(seed, "coverage/trial");
    for (int trial = 0; trial < n_trials; ++trial) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        RngStream rng(derive_seed(base, static_cast<uint64_t>(trial)));
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.uniform_index(static_cast<uint32_t>(i))]);

        std::vector<EncoderOutput> calib_out, eval_out;
        std::vector<LatentVector> calib_z, eval_z;
        calib_out.reserve(half);
        eval_out.reserve(pool.size() - half);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (i < half) {
                calib_out.push_back(outputs[idx[i]]);
                calib_z.push_back(zs[idx[i]]);
            } else {
                eval_out.push_back(outputs[idx[i]]);
                eval_z.push_back(zs[idx[i]]);
            }
        }

        std::vector<double> risks = risk_curve(calib_out, calib_z, mask, grid);
        std::optional<double> lhat =
            select_lambda(risks, grid, static_cast<int64_t>(calib_out.size()),
                          spec, bound);

        TrialRow row;
        row.feasible = lhat.has_value();
        row.lambda_hat = lhat.value_or(grid.values.back());
        row.risk_pre = empirical_risk(eval_out, eval_z, 1.0, mask);
        row.risk_post = empirical_risk(eval_out, eval_z, row.lambda_hat, mask);
        report.trials.push_back(row);
    }
    return report;
}

void save_coverage_report(const std::filesystem::path& trials_csv,
                          const std::filesystem::path& summary_json,
                          const CoverageTrialReport& report) {
    std::string csv = "trial,lambda_hat,feasible,risk_pre,risk_post\n";
    for (std::size_t i = 0; i < report.trials.size(); ++i) {
        const TrialRow& r = report.trials[i];
        csv += fmt_int(static_cast<int64_t>(i)) + "," +
               fmt_double(r.lambda_hat) + "," + (r.feasible ? "1" : "0") +
               "," + fmt_double(r.risk_pre) + "," + fmt_double(r.risk_post) +
               "\n";
    }
    write_text_file(trials_csv, csv);

    std::size_t violations = 0;
    std::size_t infeasible = 0;
    double mean_pre = 0.0, mean_post = 0.0;
    for (const TrialRow& r : report.trials) {
        if (r.risk_post > report.spec.alpha) ++violations;
        if (!r.feasible) ++infeasible;
        mean_pre += r.risk_pre;
        mean_post += r.risk_post;
    }
    double inv = report.trials.empty()
                     ? 0.0
                     : 1.0 / static_cast<double>(report.trials.size());
    nlohmann::json j;
    j["n_trials"] = report.trials.size();
    j["alpha"] = report.spec.alpha;
    j["delta"] = report.spec.delta;
    j["bound_kind"] = to_string(report.bound_kind);
    j["pool_n"] = report.pool_n;
    j["calib_n"] = report.calib_n;
    j["eval_n"] = report.eval_n;
    j["post_risk_violations"] = violations;
    j["infeasible_trials"] = infeasible;
    j["mean_risk_pre"] = mean_pre * inv;
    j["mean_risk_post"] = mean_post * inv;
    write_text_file(summary_json, j.dump(2) + "\n");
}

double set_size(const EncoderOutput& out, double lambda_hat,
                const DimMask& mask) {
    IntervalSet iv = interval_at(out, lambda_hat);
    if (mask.size() != iv.lo.size())
        throw InvalidArgument("set_size: mask length mismatch");
    double sum = 0.0;
    std::size_t relevant = 0;
    for (std::size_t k = 0; k < iv.lo.size(); ++k) {
        if (!mask[k]) continue;
        ++relevant;
        sum += iv.hi[k] - iv.lo[k];
    }
    if (relevant == 0)
        throw InvalidArgument("set_size: mask selects no dimensions");
    return sum / static_cast<double>(relevant);
}

AdaptivityReport adaptivity_study(const EncoderParams& params,
                                  double lambda_hat,
                                  const std::vector<DifficultyLevel>& levels,
                                  int n_per_level, const DimMask& mask,
                                  uint64_t seed, const GeneratorSpec& g) {
    if (levels.size() < 2)
        throw InvalidArgument("adaptivity_study: need at least 2 levels");
    if (n_per_level < 1)
        throw InvalidArgument("adaptivity_study: need samples per level");

    AdaptivityReport report;
    uint64_t base = derive_seed(seed, "adaptivity");
    for (std::size_t li = 0; li < levels.size(); ++li) {
        const DifficultyLevel& level = levels[li];
        LevelStats stats;
        stats.label = level.label;
        stats.corruption = level.corruption;
        uint64_t level_seed = derive_seed(base, static_cast<uint64_t>(li));
        for (int i = 0; i < n_per_level; ++i) {
            RngStream rng(derive_seed(level_seed, static_cast<uint64_t>(i)));
            LatentVector z = sample_latent(rng);
            ImageGrid x = apply_corruption(render(z, g), level.corruption, rng);
            EncoderOutput out = forward(params, x);
            stats.sizes.push_back(set_size(out, lambda_hat, mask));
        }
        std::vector<double> sorted = stats.sizes;
        std::sort(sorted.begin(), sorted.end());
        stats.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
                     static_cast<double>(sorted.size());
        stats.median = quantile_sorted(sorted, 0.5);
        stats.q25 = quantile_sorted(sorted, 0.25);
        stats.q75 = quantile_sorted(sorted, 0.75);
        report.levels.push_back(std::move(stats));
    }
    return report;
}

void save_adaptivity_report(const std::filesystem::path& samples_csv,
                            const std::filesystem::path& summary_json,
                            const AdaptivityReport& report) {
    std::string csv = "level,corruption_kind,corruption_param,sample,set_size\n";
    double max_size = 0.0;
    for (const LevelStats& s : report.levels)
        for (double v : s.sizes) max_size = std::max(max_size, v);
    for (const LevelStats& s : report.levels) {
        double param = s.corruption.kind == CorruptionKind::Downsample
                           ? s.corruption.downsample_factor
                           : s.corruption.mask_threshold;
        for (std::size_t i = 0; i < s.sizes.size(); ++i) {
            csv += s.label + "," + to_string(s.corruption.kind) + "," +
                   fmt_double(param) + "," + fmt_int(static_cast<int64_t>(i)) +
                   "," + fmt_double(s.sizes[i]) + "\n";
        }
    }
    write_text_file(samples_csv, csv);

    // 30 equal bins from 0 to the largest observed size.
    constexpr int kBins = 30;
    double hi = max_size > 0.0 ? max_size : 1.0;
    std::vector<double> edges(kBins + 1);
    for (int i = 0; i <= kBins; ++i)
        edges[static_cast<std::size_t>(i)] =
            hi * static_cast<double>(i) / kBins;

    nlohmann::json j;
    j["histogram_bin_edges"] = edges;
    nlohmann::json levels = nlohmann::json::array();
    for (const LevelStats& s : report.levels) {
        std::vector<int> counts(kBins, 0);
        for (double v : s.sizes) {
            int b = std::min(kBins - 1,
                             static_cast<int>(v / hi * kBins));
            counts[static_cast<std::size_t>(std::max(0, b))]++;
        }
        nlohmann::json lj;
        lj["label"] = s.label;
        lj["corruption_kind"] = to_string(s.corruption.kind);
        lj["corruption_param"] =
            s.corruption.kind == CorruptionKind::Downsample
                ? static_cast<double>(s.corruption.downsample_factor)
                : s.corruption.mask_threshold;
        lj["n"] = s.sizes.size();
        lj["mean"] = s.mean;
        lj["median"] = s.median;
        lj["q25"] = s.q25;
        lj["q75"] = s.q75;
        lj["histogram_counts"] = counts;
        levels.push_back(lj);
    }
    j["levels"] = levels;
    write_text_file(summary_json, j.dump(2) + "\n");
}

}  // namespace semuq
