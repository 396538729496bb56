#pragma once

#include "semuq/image.hpp"

#include <filesystem>
#include <string>

namespace semuq {

/// Binary PGM (P5, maxval 255, row-major). One channel of the image is
/// written; pixels are clamped to [0, 1] and quantized by rounding to the
/// nearest of 256 levels, so output bytes are deterministic.
void write_pgm(const std::filesystem::path& file, const ImageGrid& img,
               int channel = 0);

std::string pgm_bytes(const ImageGrid& img, int channel = 0);

}  // namespace semuq
