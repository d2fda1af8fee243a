#pragma once

#include <filesystem>

#include "mvface/capture.hpp"

namespace mvf {

// 8-bit RGB PNG. Values are mapped to [0,1] by division by 255 on load and
// quantized with round(v * 255) (clamped) on save.
Image load_png(const std::filesystem::path& path);
void save_png(const std::filesystem::path& path, const Image& image);

// Quantization applied by save_png, exposed so renders can be compared
// bit-exactly against files that went through an 8-bit round trip.
Image quantize_8bit(const Image& image);

}  // namespace mvf
