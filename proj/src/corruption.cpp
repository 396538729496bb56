#include "semuq/corruption.hpp"

#include "semuq/errors.hpp"

#include <algorithm>
#include <cmath>

namespace semuq {

std::string to_string(CorruptionKind k) {
    switch (k) {
        case CorruptionKind::None: return "none";
        case CorruptionKind::Downsample: return "downsample";
        case CorruptionKind::Mask: return "mask";
    }
    return "none";
}

CorruptionKind corruption_kind_from_string(const std::string& s) {
    if (s == "none") return CorruptionKind::None;
    if (s == "downsample") return CorruptionKind::Downsample;
    if (s == "mask") return CorruptionKind::Mask;
    throw InvalidArgument("unknown corruption kind: " + s);
}

ImageGrid corrupt_downsample(const ImageGrid& y, int factor) {
    if (factor < 1)
        throw InvalidArgument("downsample factor must be >= 1");
    if (y.height % factor != 0 || y.width % factor != 0)
        throw InvalidArgument(
            "downsample factor " + std::to_string(factor) +
            " does not divide image size " + std::to_string(y.height) + "x" +
            std::to_string(y.width));
    if (factor == 1) return y;

    ImageGrid out = ImageGrid::zeros(y.height, y.width, y.channels);
    int bh = y.height / factor;
    int bw = y.width / factor;
    double inv = 1.0 / (static_cast<double>(factor) * factor);
    for (int c = 0; c < y.channels; ++c) {
        for (int bi = 0; bi < bh; ++bi) {
            for (int bj = 0; bj < bw; ++bj) {
                double sum = 0.0;
                for (int i = 0; i < factor; ++i)
                    for (int j = 0; j < factor; ++j)
                        sum += y.at(bi * factor + i, bj * factor + j, c);
                double mean = std::clamp(sum * inv, 0.0, 1.0);
                for (int i = 0; i < factor; ++i)
                    for (int j = 0; j < factor; ++j)
                        out.at(bi * factor + i, bj * factor + j, c) = mean;
            }
        }
    }
    return out;
}

ImageGrid corrupt_mask(const ImageGrid& y, double threshold, RngStream& rng) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw InvalidArgument("mask threshold must lie in [0, 1]");

    ImageGrid out = ImageGrid::zeros(y.height, y.width, y.channels + 1);
    for (int i = 0; i < y.height; ++i) {
        for (int j = 0; j < y.width; ++j) {
            double field = rng.uniform01();
            bool masked = field < threshold;
            for (int c = 0; c < y.channels; ++c)
                out.at(i, j, c) = masked ? 0.0 : y.at(i, j, c);
            out.at(i, j, y.channels) = masked ? 1.0 : 0.0;
        }
    }
    return out;
}

ImageGrid apply_corruption(const ImageGrid& y, const CorruptionSpec& spec,
                           RngStream& rng) {
    switch (spec.kind) {
        case CorruptionKind::None: return y;
        case CorruptionKind::Downsample:
            return corrupt_downsample(y, spec.downsample_factor);
        case CorruptionKind::Mask:
            return corrupt_mask(y, spec.mask_threshold, rng);
    }
    return y;
}

}  // namespace semuq
