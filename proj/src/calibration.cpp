#include "semuq/calibration.hpp"

#include "semuq/errors.hpp"
#include "semuq/text_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace semuq {

namespace {

constexpr double kHbTolerance = 1e-9;

void check_risk_args(double mean, int64_t n, double delta) {
    if (!(mean >= 0.0 && mean <= 1.0))
        throw InvalidArgument("empirical mean must lie in [0, 1]");
    if (n < 1) throw InvalidArgument("n must be at least 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidArgument("delta must lie in (0, 1)");
}

/// Bernoulli KL divergence h1(a, b) for a <= b, with the usual limits at
/// a = 0 and b = 1.
double bernoulli_kl(double a, double b) {
    if (b >= 1.0) return a >= 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    if (b <= 0.0) return a <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    double term1 = a <= 0.0 ? 0.0 : a * std::log(a / b);
    double term2 = a >= 1.0 ? 0.0 : (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
    return term1 + term2;
}

/// Hoeffding-Bentkus p-value for true risk r given empirical mean on n
/// samples: min of the KL-Hoeffding tail and e times the binomial CDF.
double hb_p_value(double mean, int64_t n, double r) {
    double a = std::min(mean, r);
    double hoeffding = std::exp(-static_cast<double>(n) * bernoulli_kl(a, r));
    auto m = static_cast<int64_t>(
        std::ceil(static_cast<double>(n) * mean));
    double bentkus = std::exp(1.0 + log_binom_cdf(m, n, r));
    return std::min(hoeffding, bentkus);
}

}  // namespace

std::vector<EncoderOutput> forward_all(const EncoderParams& params,
                                       std::span<const Sample> samples) {
    std::vector<EncoderOutput> outs;
    outs.reserve(samples.size());
    constexpr std::size_t kChunk = 512;
    int d = params.latent_dim();
    for (std::size_t start = 0; start < samples.size(); start += kChunk) {
        std::size_t end = std::min(samples.size(), start + kChunk);
        Eigen::MatrixXd X(params.input_width(),
                          static_cast<Eigen::Index>(end - start));
        for (std::size_t j = start; j < end; ++j) {
            if (static_cast<int>(samples[j].x.pixels.size()) !=
                params.input_width())
                throw InvalidArgument(
                    "sample does not match encoder input width");
            X.col(static_cast<Eigen::Index>(j - start)) = flatten(samples[j].x);
        }
        BatchOutput b = forward_batch(params, X);
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            EncoderOutput o;
            o.point.assign(b.point.col(j).data(), b.point.col(j).data() + d);
            o.q_lo.assign(b.q_lo.col(j).data(), b.q_lo.col(j).data() + d);
            o.q_hi.assign(b.q_hi.col(j).data(), b.q_hi.col(j).data() + d);
            outs.push_back(std::move(o));
        }
    }
    return outs;
}

std::string to_string(BoundKind k) {
    return k == BoundKind::Hoeffding ? "hoeffding" : "hoeffding-bentkus";
}

BoundKind bound_kind_from_string(const std::string& s) {
    if (s == "hoeffding") return BoundKind::Hoeffding;
    if (s == "hoeffding-bentkus") return BoundKind::HoeffdingBentkus;
    throw InvalidArgument("unknown bound kind: " + s);
}

LambdaGrid LambdaGrid::uniform(double lo, double hi, int count) {
    if (count < 2) throw InvalidArgument("lambda grid needs at least 2 points");
    if (lo != 0.0) throw InvalidArgument("lambda grid must start at 0");
    if (!(hi > lo)) throw InvalidArgument("lambda grid must be increasing");
    LambdaGrid g;
    g.values.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        g.values[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) /
                     static_cast<double>(count - 1);
    return g;
}

IntervalSet interval_at(const EncoderOutput& out, double lambda) {
    if (!(lambda >= 0.0))
        throw InvalidArgument("lambda must be nonnegative");
    std::size_t d = out.point.size();
    if (out.q_lo.size() != d || out.q_hi.size() != d)
        throw InvalidArgument("encoder output dimensions disagree");
    IntervalSet iv;
    iv.lo.resize(d);
    iv.hi.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        double f = out.point[k];
        double down = std::max(f - out.q_lo[k], 0.0);
        double up = std::max(out.q_hi[k] - f, 0.0);
        iv.lo[k] = f - lambda * down;
        iv.hi[k] = f + lambda * up;
    }
    return iv;
}

double coverage_loss(const IntervalSet& intervals, const LatentVector& z,
                     const DimMask& mask) {
    std::size_t d = z.size();
    if (intervals.lo.size() != d || intervals.hi.size() != d ||
        mask.size() != d)
        throw InvalidArgument("coverage_loss: length mismatch");
    std::size_t relevant = 0;
    std::size_t covered = 0;
    for (std::size_t k = 0; k < d; ++k) {
        if (!mask[k]) continue;
        ++relevant;
        if (z[k] >= intervals.lo[k] && z[k] <= intervals.hi[k]) ++covered;
    }
    if (relevant == 0)
        throw InvalidArgument("coverage_loss: mask selects no dimensions");
    return 1.0 - static_cast<double>(covered) / static_cast<double>(relevant);
}

double hoeffding_ucb(double mean, int64_t n, double delta) {
    check_risk_args(mean, n, delta);
    double ucb = mean + std::sqrt(std::log(1.0 / delta) /
                                  (2.0 * static_cast<double>(n)));
    return std::min(ucb, 1.0);
}

double log_binom_cdf(int64_t m, int64_t n, double r) {
    if (n < 1) throw InvalidArgument("log_binom_cdf: n must be positive");
    if (m < 0) return -std::numeric_limits<double>::infinity();
    if (m >= n) return 0.0;
    if (r <= 0.0) return 0.0;  // all mass at zero successes
    if (r >= 1.0) return -std::numeric_limits<double>::infinity();

    double log_r = std::log(r);
    double log_1mr = std::log1p(-r);
    double nd = static_cast<double>(n);
    // log C(n,k) + k log r + (n-k) log(1-r), summed stably via max shift.
    std::vector<double> terms(static_cast<std::size_t>(m) + 1);
    double lgn = std::lgamma(nd + 1.0);
    double max_term = -std::numeric_limits<double>::infinity();
    for (int64_t k = 0; k <= m; ++k) {
        double kd = static_cast<double>(k);
        double t = lgn - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) +
                   kd * log_r + (nd - kd) * log_1mr;
        terms[static_cast<std::size_t>(k)] = t;
        max_term = std::max(max_term, t);
    }
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - max_term);
    return std::min(0.0, max_term + std::log(sum));
}

double hb_ucb(double mean, int64_t n, double delta) {
    check_risk_args(mean, n, delta);
    if (hb_p_value(mean, n, 1.0) > delta) return 1.0;
    double lo = mean;
    double hi = 1.0;
    while (hi - lo > kHbTolerance) {
        double mid = 0.5 * (lo + hi);
        if (hb_p_value(mean, n, mid) <= delta)
            hi = mid;
        else
            lo = mid;
    }
    return hi;  // upper end of the bracket keeps the bound valid
}

double risk_ucb(BoundKind kind, double mean, int64_t n, double delta) {
    return kind == BoundKind::Hoeffding ? hoeffding_ucb(mean, n, delta)
                                        : hb_ucb(mean, n, delta);
}

std::vector<double> risk_curve(const std::vector<EncoderOutput>& outputs,
                               const std::vector<LatentVector>& zs,
                               const DimMask& mask, const LambdaGrid& grid) {
    if (outputs.empty()) throw InvalidArgument("risk_curve: empty data");
    if (outputs.size() != zs.size())
        throw InvalidArgument("risk_curve: outputs and latents disagree");
    std::vector<double> risks(grid.values.size());
    double inv_n = 1.0 / static_cast<double>(outputs.size());
    for (std::size_t gi = 0; gi < grid.values.size(); ++gi) {
        double lambda = grid.values[gi];
        double sum = 0.0;
        for (std::size_t i = 0; i < outputs.size(); ++i)
            sum += coverage_loss(interval_at(outputs[i], lambda), zs[i], mask);
        risks[gi] = sum * inv_n;
    }
    return risks;
}

std::vector<double> risk_curve(const EncoderParams& params,
                               std::span<const Sample> calib,
                               const DimMask& mask, const LambdaGrid& grid) {
    if (calib.empty()) throw InvalidArgument("risk_curve: empty data");
    std::vector<EncoderOutput> outs = forward_all(params, calib);
    std::vector<LatentVector> zs;
    zs.reserve(calib.size());
    for (const Sample& s : calib) zs.push_back(s.z);
    return risk_curve(outs, zs, mask, grid);
}

std::optional<double> select_lambda(const std::vector<double>& risks,
                                    const LambdaGrid& grid, int64_t n,
                                    const RiskSpec& spec, BoundKind bound) {
    if (risks.size() != grid.values.size())
        throw InvalidArgument("select_lambda: curve does not match grid");
    if (risks.empty()) throw InvalidArgument("select_lambda: empty curve");
    std::optional<double> best;
    for (std::size_t i = risks.size(); i-- > 0;) {
        if (risk_ucb(bound, risks[i], n, spec.delta) > spec.alpha) break;
        best = grid.values[i];
    }
    return best;
}

std::pair<LatentVector, LatentVector> calibrated_quantiles(
    const EncoderOutput& out, double lambda_hat) {
    IntervalSet iv = interval_at(out, lambda_hat);
    return {std::move(iv.lo), std::move(iv.hi)};
}

CalibrationResult calibrate(const EncoderParams& params,
                            std::span<const Sample> calib, const DimMask& mask,
                            const LambdaGrid& grid, const RiskSpec& spec,
                            BoundKind bound) {
    if (calib.empty())
        throw InvalidArgument("calibrate: calibration set is empty");
    CalibrationResult res;
    res.grid = grid;
    res.spec = spec;
    res.bound_kind = bound;
    res.n = static_cast<int64_t>(calib.size());
    res.risks = risk_curve(params, calib, mask, grid);
    res.ucbs.resize(res.risks.size());
    for (std::size_t i = 0; i < res.risks.size(); ++i)
        res.ucbs[i] = risk_ucb(bound, res.risks[i], res.n, spec.delta);
    res.lambda_hat = select_lambda(res.risks, grid, res.n, spec, bound);
    return res;
}

void save_calibration(const std::filesystem::path& curve_csv,
                      const std::filesystem::path& summary_json,
                      const CalibrationResult& result) {
    std::string csv = "lambda,empirical_risk,ucb\n";
    for (std::size_t i = 0; i < result.grid.values.size(); ++i) {
        csv += fmt_double(result.grid.values[i]) + "," +
               fmt_double(result.risks[i]) + "," + fmt_double(result.ucbs[i]) +
               "\n";
    }
    write_text_file(curve_csv, csv);

    nlohmann::json j;
    j["feasible"] = result.lambda_hat.has_value();
    if (result.lambda_hat)
        j["lambda_hat"] = *result.lambda_hat;
    else
        j["lambda_hat"] = nullptr;
    j["alpha"] = result.spec.alpha;
    j["delta"] = result.spec.delta;
    j["n"] = result.n;
    j["bound_kind"] = to_string(result.bound_kind);
    j["grid"] = {{"min", result.grid.values.front()},
                 {"max", result.grid.values.back()},
                 {"count", result.grid.values.size()}};
    write_text_file(summary_json, j.dump(2) + "\n");
}

CalibrationSummary load_calibration_summary(
    const std::filesystem::path& summary_json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(summary_json));
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError("malformed calibration summary " +
                      summary_json.string() + ": " + e.what());
    }
    try {
        CalibrationSummary s;
        if (!j.at("lambda_hat").is_null())
            s.lambda_hat = j.at("lambda_hat").get<double>();
        s.spec.alpha = j.at("alpha").get<double>();
        s.spec.delta = j.at("delta").get<double>();
        s.n = j.at("n").get<int64_t>();
        s.bound_kind = bound_kind_from_string(j.at("bound_kind").get<std::string>());
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("calibration summary missing fields " +
                      summary_json.string() + ": " + e.what());
    }
}

}  // namespace semuq
