#pragma once

#include "semuq/calibration.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace semuq {

/// Mean coverage loss of the lambda-scaled intervals over a sample set.
double empirical_risk(const EncoderParams& params, double lambda,
                      std::span<const Sample> data, const DimMask& mask);
double empirical_risk(const std::vector<EncoderOutput>& outputs,
                      const std::vector<LatentVector>& zs, double lambda,
                      const DimMask& mask);

struct TrialRow {
    double lambda_hat = 0.0;  // grid max when infeasible
    bool feasible = false;
    double risk_pre = 0.0;   // eval-half risk at lambda = 1 (raw quantiles)
    double risk_post = 0.0;  // eval-half risk at lambda_hat
};

struct CoverageTrialReport {
    std::vector<TrialRow> trials;
    RiskSpec spec;
    BoundKind bound_kind = BoundKind::HoeffdingBentkus;
    std::size_t pool_n = 0;
    std::size_t calib_n = 0;
    std::size_t eval_n = 0;
};

/// Repeated 50-50 split of the pool: calibrate on one half, evaluate the
/// same eval half before (lambda = 1) and after (lambda = lambda_hat)
/// calibration. Deterministic per seed; encoder outputs are computed once.
CoverageTrialReport coverage_trials(const EncoderParams& params,
                                    std::span<const Sample> pool,
                                    const DimMask& mask, const RiskSpec& spec,
                                    const LambdaGrid& grid, BoundKind bound,
                                    int n_trials, uint64_t seed);

void save_coverage_report(const std::filesystem::path& trials_csv,
                          const std::filesystem::path& summary_json,
                          const CoverageTrialReport& report);

/// Mean calibrated interval width over masked dimensions.
double set_size(const EncoderOutput& out, double lambda_hat,
                const DimMask& mask);

struct DifficultyLevel {
    std::string label;
    CorruptionSpec corruption;
};

struct LevelStats {
    std::string label;
    CorruptionSpec corruption;
    std::vector<double> sizes;
    double mean = 0.0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
};

struct AdaptivityReport {
    std::vector<LevelStats> levels;
};

/// Fresh samples at each corruption level, set-size distribution per
/// level. Needs at least two levels.
AdaptivityReport adaptivity_study(const EncoderParams& params,
                                  double lambda_hat,
                                  const std::vector<DifficultyLevel>& levels,
                                  int n_per_level, const DimMask& mask,
                                  uint64_t seed, const GeneratorSpec& g = {});

/// Per-sample CSV plus a JSON summary; the summary includes fixed
/// histogram bin edges so plots can be rebuilt elsewhere.
void save_adaptivity_report(const std::filesystem::path& samples_csv,
                            const std::filesystem::path& summary_json,
                            const AdaptivityReport& report);

}  // namespace semuq
