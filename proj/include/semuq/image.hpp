#pragma once

#include <cstddef>
#include <vector>

namespace semuq {

/// Real-valued factor coordinates; the ground truth Z and the space of
/// encoder outputs.
using LatentVector = std::vector<double>;

/// Per-dimension relevance flags; true marks a disentangled factor the
/// quantile losses and coverage accounting apply to.
using DimMask = std::vector<bool>;

DimMask all_dims(std::size_t d);
std::size_t count_masked(const DimMask& mask);

/// H x W x C image with pixels in [0, 1], stored row-major as (row, col,
/// channel).
struct ImageGrid {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> pixels;

    static ImageGrid zeros(int h, int w, int c);

    double& at(int i, int j, int c) {
        return pixels[(static_cast<std::size_t>(i) * width + j) * channels + c];
    }
    double at(int i, int j, int c) const {
        return pixels[(static_cast<std::size_t>(i) * width + j) * channels + c];
    }
    std::size_t size() const { return pixels.size(); }
    bool same_shape(const ImageGrid& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

}  // namespace semuq
