#pragma once

#include "semuq/losses.hpp"

#include <filesystem>
#include <vector>

namespace semuq {

/// Mean loss components over one epoch's batches.
struct EpochTrace {
    double point = 0.0;
    double pinball_lo = 0.0;
    double pinball_hi = 0.0;
    double recon = 0.0;
};

struct TrainResult {
    EncoderParams params;
    std::vector<EpochTrace> trace;
};

/// Minibatch gradient descent at a flat learning rate. Initialization,
/// per-epoch shuffles, and batch order all derive from cfg.seed, so the
/// same seed and data give bit-identical parameters. Throws
/// TrainingFailure with the epoch index if the loss becomes non-finite.
TrainResult train(const std::vector<Sample>& train_split, const DimMask& mask,
                  const TrainConfig& cfg, const std::vector<int>& trunk_widths);

void save_trace(const std::filesystem::path& file,
                const std::vector<EpochTrace>& trace);

}  // namespace semuq
