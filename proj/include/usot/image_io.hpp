#pragma once

#include <filesystem>

#include "usot/flow.hpp"

namespace usot {

/// Decodes a PNG or binary PGM (P5) file to 8-bit grayscale.
GrayImage load_gray(const std::filesystem::path& path);

/// Writes 8-bit grayscale PNG (.png) or PGM (.pgm), chosen by extension.
void save_gray(const std::filesystem::path& path, const GrayImage& image);

bool is_image_file(const std::filesystem::path& path);

}  // namespace usot
