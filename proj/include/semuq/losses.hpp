#pragma once

#include "semuq/dataset.hpp"
#include "semuq/encoder.hpp"
#include "semuq/generator.hpp"

#include <span>

namespace semuq {

/// Quantile (pinball) loss at level beta: (z - q) beta when z > q, else
/// (q - z)(1 - beta). Nonnegative, zero iff q == z.
double pinball_loss(double q, double z, double beta);

/// L1 distance in latent space (sum of absolute coordinate differences).
double point_loss(const LatentVector& pred, const LatentVector& z);

/// Mean absolute pixel difference between two images of the same shape.
double recon_loss(const ImageGrid& g_pred, const ImageGrid& g_true);

struct TrainConfig {
    double alpha = 0.1;          // miscoverage level; heads at alpha/2, 1-alpha/2
    int epochs = 50;
    int batch_size = 64;
    double learning_rate = 0.001;
    double recon_weight = 10.0;  // weight c on the pixel reconstruction term
    uint64_t seed = 20240501;
    GeneratorSpec generator{};   // recon renders G(f(x)) at this size
};

struct LossComponents {
    double point = 0.0;
    double recon = 0.0;       // unweighted mean absolute pixel error
    double pinball_lo = 0.0;
    double pinball_hi = 0.0;
    double recon_weight = 0.0;

    double total() const {
        return point + recon_weight * recon + pinball_lo + pinball_hi;
    }
    bool finite() const;
};

/// Batch-mean loss: point L1 over all dimensions, weighted reconstruction
/// error between G(f(x)) and G(z), and pinball terms over masked
/// dimensions only.
LossComponents total_loss_components(const EncoderParams& params,
                                     std::span<const Sample> batch,
                                     const DimMask& mask,
                                     const TrainConfig& cfg);

double total_loss(const EncoderParams& params, std::span<const Sample> batch,
                  const DimMask& mask, const TrainConfig& cfg);

/// Analytic gradient of total_loss in parameter space. At kinks of the L1,
/// pinball, and leaky-rectifier terms the non-strict branch of each
/// definition applies (a tie z == q contributes the (1 - beta) branch), so
/// gradients are deterministic.
struct GradResult {
    EncoderParams grad;
    LossComponents loss;
};

GradResult loss_gradient(const EncoderParams& params,
                         std::span<const Sample> batch, const DimMask& mask,
                         const TrainConfig& cfg);

}  // namespace semuq
