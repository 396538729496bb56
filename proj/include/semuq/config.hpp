#pragma once

#include "semuq/calibration.hpp"
#include "semuq/dataset.hpp"
#include "semuq/losses.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace semuq {

/// One run = one plain-text config. Lines are `key = value`, `#` starts a
/// comment; unknown and duplicate keys are rejected so a config never
/// silently drifts from the code that reads it.
struct RunConfig {
    uint64_t seed = 7;
    int latent_dim = kLatentDim;  // structural; must equal the generator's
    int image_size = 32;

    CorruptionKind corruption = CorruptionKind::Downsample;
    std::vector<int> downsample_factors = {1, 4, 8, 16, 32};
    std::vector<double> mask_thresholds = {0.3, 0.6, 0.9};

    std::size_t dataset_n = 6000;
    std::vector<int> trunk_widths = {256, 128};
    int epochs = 50;
    int batch_size = 64;
    double learning_rate = 0.001;
    double recon_weight = 10.0;

    double alpha = 0.1;
    double delta = 0.1;
    double lambda_max = 10.0;
    int lambda_count = 1000;
    BoundKind bound = BoundKind::HoeffdingBentkus;
    std::vector<int> relevant_dims;  // empty = all dimensions

    int coverage_trials = 100;
    std::size_t coverage_pool = 2000;
    int adaptivity_n = 500;
    std::vector<int> viz_dims;  // empty = all relevant dimensions
    std::vector<double> ablate_recon_weights = {0.0, 1.0, 10.0};

    std::string output_dir = "runs/default";

    GeneratorSpec generator_spec() const { return {image_size, image_size}; }
    CorruptionPolicy policy() const;
    TrainConfig train_config() const;
    RiskSpec risk_spec() const { return {alpha, delta}; }
    LambdaGrid lambda_grid() const {
        return LambdaGrid::uniform(0.0, lambda_max, lambda_count);
    }
    DimMask dim_mask() const;
    std::vector<int> effective_viz_dims() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& file);

/// Every key in a fixed order with the run's effective values; written
/// into the run directory for provenance.
std::string canonical_config_text(const RunConfig& cfg);

}  // namespace semuq
