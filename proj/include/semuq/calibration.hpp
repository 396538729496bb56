#pragma once

#include "semuq/dataset.hpp"
#include "semuq/encoder.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace semuq {

struct RiskSpec {
    double alpha = 0.1;  // target risk level
    double delta = 0.1;  // error probability of the calibration itself
};

enum class BoundKind { Hoeffding, HoeffdingBentkus };

std::string to_string(BoundKind k);
BoundKind bound_kind_from_string(const std::string& s);

/// Per-dimension closed intervals; lo <= hi by construction.
struct IntervalSet {
    LatentVector lo;
    LatentVector hi;
};

/// Encoder outputs for a whole sample set, batched internally.
std::vector<EncoderOutput> forward_all(const EncoderParams& params,
                                       std::span<const Sample> samples);

struct LambdaGrid {
    std::vector<double> values;

    /// count evenly spaced points from lo to hi inclusive; must start at 0
    /// and be strictly increasing.
    static LambdaGrid uniform(double lo, double hi, int count);
};

/// The lambda-indexed interval family, anchored at the point prediction:
/// [f_d - lambda (f_d - qlo_d)_+ , f_d + lambda (qhi_d - f_d)_+]. Crossed
/// quantiles clamp to zero width on the crossed side.
IntervalSet interval_at(const EncoderOutput& out, double lambda);

/// Fraction of masked dimensions whose true value falls outside its
/// interval. Endpoint containment counts as covered.
double coverage_loss(const IntervalSet& intervals, const LatentVector& z,
                     const DimMask& mask);

/// mean + sqrt(log(1/delta) / (2n)), clipped above at 1.
double hoeffding_ucb(double mean, int64_t n, double delta);

/// Smallest r in [mean, 1] whose Hoeffding-Bentkus tail p-value is at most
/// delta; binary search to absolute tolerance 1e-9 on the monotone p-value.
double hb_ucb(double mean, int64_t n, double delta);

double risk_ucb(BoundKind kind, double mean, int64_t n, double delta);

/// log P(Binomial(n, r) <= m); stable log-space summation. Exposed for the
/// bound tests.
double log_binom_cdf(int64_t m, int64_t n, double r);

/// Mean coverage loss per grid value; nonincreasing in lambda.
std::vector<double> risk_curve(const std::vector<EncoderOutput>& outputs,
                               const std::vector<LatentVector>& zs,
                               const DimMask& mask, const LambdaGrid& grid);
std::vector<double> risk_curve(const EncoderParams& params,
                               std::span<const Sample> calib,
                               const DimMask& mask, const LambdaGrid& grid);

/// Scans the grid from large to small lambda and returns the smallest grid
/// value whose risk UCB stays at or below alpha for every larger grid
/// value. nullopt when even the largest lambda fails (infeasible).
std::optional<double> select_lambda(const std::vector<double>& risks,
                                    const LambdaGrid& grid, int64_t n,
                                    const RiskSpec& spec, BoundKind bound);

/// interval_at endpoints exposed as the calibrated quantile vectors.
std::pair<LatentVector, LatentVector> calibrated_quantiles(
    const EncoderOutput& out, double lambda_hat);

struct CalibrationResult {
    std::optional<double> lambda_hat;
    LambdaGrid grid;
    std::vector<double> risks;  // empirical risk per grid value
    std::vector<double> ucbs;   // risk UCB per grid value
    int64_t n = 0;
    RiskSpec spec;
    BoundKind bound_kind = BoundKind::HoeffdingBentkus;
};

CalibrationResult calibrate(const EncoderParams& params,
                            std::span<const Sample> calib, const DimMask& mask,
                            const LambdaGrid& grid, const RiskSpec& spec,
                            BoundKind bound);

/// curve CSV (lambda, empirical_risk, ucb) and a JSON summary with
/// lambda_hat, alpha, delta, n, and the bound kind.
void save_calibration(const std::filesystem::path& curve_csv,
                      const std::filesystem::path& summary_json,
                      const CalibrationResult& result);

struct CalibrationSummary {
    std::optional<double> lambda_hat;
    RiskSpec spec;
    int64_t n = 0;
    BoundKind bound_kind = BoundKind::HoeffdingBentkus;
};

CalibrationSummary load_calibration_summary(
    const std::filesystem::path& summary_json);

}  // namespace semuq
