#include "semuq/image.hpp"

#include "semuq/errors.hpp"

namespace semuq {

DimMask all_dims(std::size_t d) { return DimMask(d, true); }

std::size_t count_masked(const DimMask& mask) {
    std::size_t n = 0;
    for (bool b : mask)
        if (b) ++n;
    return n;
}

ImageGrid ImageGrid::zeros(int h, int w, int c) {
    if (h <= 0 || w <= 0 || c <= 0)
        throw InvalidArgument("ImageGrid::zeros: dimensions must be positive");
    ImageGrid img;
    img.height = h;
    img.width = w;
    img.channels = c;
    img.pixels.assign(static_cast<std::size_t>(h) * w * c, 0.0);
    return img;
}

}  // namespace semuq
