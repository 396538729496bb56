#pragma once

#include "semuq/image.hpp"
#include "semuq/rng.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <vector>

namespace semuq {

inline constexpr double kLeakySlope = 0.01;

struct DenseLayer {
    Eigen::MatrixXd W;  // out x in
    Eigen::VectorXd b;
};

/// Shared fully connected trunk with leaky-rectifier activations and three
/// linear heads: point prediction, lower quantile, upper quantile. Each
/// head outputs one value per latent dimension.
struct EncoderParams {
    std::vector<DenseLayer> trunk;
    DenseLayer head_point;
    DenseLayer head_lo;
    DenseLayer head_hi;

    int input_width() const {
        return trunk.empty() ? static_cast<int>(head_point.W.cols())
                             : static_cast<int>(trunk.front().W.cols());
    }
    int latent_dim() const { return static_cast<int>(head_point.W.rows()); }
};

/// Symmetric uniform init scaled by fan-in; biases start at zero. The draw
/// order (trunk layers, then point/lo/hi heads, row-major weights) is fixed
/// so a seed pins the parameters exactly.
EncoderParams make_encoder(int input_width,
                           const std::vector<int>& trunk_widths,
                           int latent_dim, RngStream& rng);

struct EncoderOutput {
    LatentVector point;  // f(X)
    LatentVector q_lo;   // estimated lower conditional quantile
    LatentVector q_hi;   // estimated upper conditional quantile
};

Eigen::VectorXd flatten(const ImageGrid& x);

/// Inputs are affinely rescaled from [0, 1] to [-1, 1] ahead of the first
/// trunk layer; centering the features keeps flat-rate SGD well behaved.
inline constexpr double kInputScale = 2.0;
inline constexpr double kInputShift = -1.0;

EncoderOutput forward(const EncoderParams& params, const ImageGrid& x);

/// Batched forward; X has one flattened sample per column.
struct BatchOutput {
    Eigen::MatrixXd point;  // D x B
    Eigen::MatrixXd q_lo;
    Eigen::MatrixXd q_hi;
};
BatchOutput forward_batch(const EncoderParams& params,
                          const Eigen::MatrixXd& X);

// Parameter-space helpers (used for gradients, which share the shape).
EncoderParams zeros_like(const EncoderParams& p);
void axpy(EncoderParams& y, double a, const EncoderParams& x);  // y += a x
bool all_finite(const EncoderParams& p);

// Checkpoint format: magic "SUQENC\0\0", u32 version, u32 input width,
// u32 latent dim, layer manifest, then flat little-endian float32 blocks
// (W row-major, then b) for trunk layers and the three heads in order.
void save_encoder(const std::filesystem::path& file, const EncoderParams& p);
EncoderParams load_encoder(const std::filesystem::path& file);

}  // namespace semuq
