#pragma once

#include "semuq/calibration.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace semuq {

enum class Endpoint { Lower, Upper };

/// Copy of the point prediction with coordinate d replaced by the
/// calibrated lower or upper interval endpoint; all other factors held
/// fixed.
LatentVector endpoint_latent(const EncoderOutput& out, double lambda_hat,
                             int d, Endpoint which);

struct PanelEntry {
    int dim = -1;                 // -1 for the shared input/point images
    std::string which;            // "input", "input_mask", "point", "lower", "upper"
    std::string file;             // path relative to the output directory
    double latent_value = 0.0;    // endpoint value rendered (0 for inputs)
};

/// Renders the corrupted input, the point reconstruction, and per-dim
/// lower/upper endpoint images as PGM files under out_dir; writes a
/// manifest CSV listing relative paths and endpoint values. dims must be
/// a subset of the masked dimensions.
std::vector<PanelEntry> render_panel(const EncoderParams& params,
                                     double lambda_hat, const ImageGrid& x,
                                     const std::vector<int>& dims,
                                     const DimMask& mask,
                                     const std::filesystem::path& out_dir,
                                     const GeneratorSpec& g = {});

/// One CSV row per masked dimension: raw and calibrated quantile edges,
/// the true factor value, and whether the calibrated interval covers it.
void export_interval_plot_data(const std::filesystem::path& csv_file,
                               const EncoderOutput& out, double lambda_hat,
                               const LatentVector& z_true, const DimMask& mask);

}  // namespace semuq
