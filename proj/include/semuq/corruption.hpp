#pragma once

#include "semuq/image.hpp"
#include "semuq/rng.hpp"

#include <string>

namespace semuq {

enum class CorruptionKind { None, Downsample, Mask };

std::string to_string(CorruptionKind k);
CorruptionKind corruption_kind_from_string(const std::string& s);

struct CorruptionSpec {
    CorruptionKind kind = CorruptionKind::None;
    int downsample_factor = 1;    // meaningful when kind == Downsample
    double mask_threshold = 0.0;  // meaningful when kind == Mask
};

/// Block-average pooling by `factor` followed by nearest-neighbor
/// upsampling back to the original size. The factor must divide both
/// height and width; factor 1 is the identity.
ImageGrid corrupt_downsample(const ImageGrid& y, int factor);

/// Draws an H x W uniform field, masks pixels where the field value is
/// below `threshold` (all channels zeroed), and appends the mask as an
/// extra channel. Expected masked fraction equals the threshold.
ImageGrid corrupt_mask(const ImageGrid& y, double threshold, RngStream& rng);

ImageGrid apply_corruption(const ImageGrid& y, const CorruptionSpec& spec,
                           RngStream& rng);

}  // namespace semuq
