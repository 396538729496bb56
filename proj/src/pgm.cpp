#include "semuq/pgm.hpp"

#include "semuq/errors.hpp"
#include "semuq/text_io.hpp"

#include <algorithm>
#include <cmath>

namespace semuq {

std::string pgm_bytes(const ImageGrid& img, int channel) {
    if (channel < 0 || channel >= img.channels)
        throw InvalidArgument("pgm: channel out of range");
    std::string out = "P5\n" + std::to_string(img.width) + " " +
                      std::to_string(img.height) + "\n255\n";
    out.reserve(out.size() +
                static_cast<std::size_t>(img.height) * img.width);
    for (int i = 0; i < img.height; ++i)
        for (int j = 0; j < img.width; ++j) {
            double v = std::clamp(img.at(i, j, channel), 0.0, 1.0);
            out.push_back(static_cast<char>(
                static_cast<unsigned char>(std::lround(v * 255.0))));
        }
    return out;
}

void write_pgm(const std::filesystem::path& file, const ImageGrid& img,
               int channel) {
    write_text_file(file, pgm_bytes(img, channel));
}

}  // namespace semuq
