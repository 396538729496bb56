#pragma once

#include "semuq/corruption.hpp"
#include "semuq/generator.hpp"
#include "semuq/image.hpp"
#include "semuq/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace semuq {

/// Per-dataset corruption family. One policy yields a homogeneous dataset:
/// every sample has the same kind (and hence the same channel count), with
/// the level drawn per sample from the listed values.
struct CorruptionPolicy {
    CorruptionKind kind = CorruptionKind::None;
    std::vector<int> downsample_factors = {1, 4, 8, 16, 32};
    std::vector<double> mask_thresholds = {0.3, 0.6, 0.9};

    /// Channel count of corrupted inputs (the mask adds one channel).
    int input_channels() const {
        return kind == CorruptionKind::Mask ? 2 : 1;
    }
};

struct Sample {
    ImageGrid x;        // corrupted input, mask channel appended when masked
    LatentVector z;     // ground-truth factors
    CorruptionSpec corruption;
};

struct DatasetSplit {
    std::vector<Sample> train;
    std::vector<Sample> calibration;
    std::vector<Sample> validation;
};

struct SplitSizes {
    std::size_t train;
    std::size_t calibration;
    std::size_t validation;
};

/// floor(0.8 n) / floor(0.1 n) / remainder.
SplitSizes split_sizes(std::size_t n);

/// D independent standard-normal draws.
LatentVector sample_latent(RngStream& rng);

/// One (x, z) pair from the per-sample seed; corruption level drawn from
/// the policy. Independent of any other sample.
Sample make_sample(uint64_t sample_seed, const CorruptionPolicy& policy,
                   const GeneratorSpec& g = {});

/// n samples split 80-10-10, each generated from its own substream of
/// `seed`, so the result is independent of generation order.
DatasetSplit make_dataset(std::size_t n, const CorruptionPolicy& policy,
                          uint64_t seed, const GeneratorSpec& g = {});

struct DatasetMeta {
    GeneratorSpec generator;
    int channels = 1;
    uint64_t seed = 0;
    CorruptionPolicy policy;
};

// Binary split format (little-endian): magic "SUQDATA\0", u32 version,
// u32 D/H/W/C, u64 n, u64 seed, policy block, then n*D float32 latents
// followed by n*H*W*C float32 pixels. Per-sample corruption parameters go
// to a sidecar CSV next to the file.
void save_split(const std::filesystem::path& file,
                const std::vector<Sample>& samples, const DatasetMeta& meta);
std::vector<Sample> load_split(const std::filesystem::path& file,
                               DatasetMeta* meta_out = nullptr);

/// Writes train/calibration/validation.suqd plus sidecars and a JSON
/// manifest under `dir`.
void save_dataset(const std::filesystem::path& dir, const DatasetSplit& data,
                  const DatasetMeta& meta);
DatasetSplit load_dataset(const std::filesystem::path& dir,
                          DatasetMeta* meta_out = nullptr);

}  // namespace semuq
