#pragma once

#include <filesystem>
#include <stdexcept>
#include <vector>

#include "colorenh/image.hpp"

namespace colorenh {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads PNG (any bit depth/color type, reduced to 8-bit RGB with alpha
/// stripped) or binary PPM (P6). Format is sniffed from the file header.
RgbImage read_image(const std::filesystem::path& path);

/// Writes PNG unless the extension is .ppm, which selects P6.
void write_image(const RgbImage& img, const std::filesystem::path& path);

RgbImage read_png(const std::filesystem::path& path);
void write_png(const RgbImage& img, const std::filesystem::path& path);
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbImage& img, const std::filesystem::path& path);

/// 8-bit grayscale PGM (P5), `maxval` written to the header.
void write_pgm(const std::vector<std::uint8_t>& gray, int width, int height, int maxval,
               const std::filesystem::path& path);

}  // namespace colorenh
