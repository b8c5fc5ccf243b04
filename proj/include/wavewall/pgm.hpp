#pragma once

// Binary portable graymap (P5, maxval 255) for fixture frames.

#include <filesystem>
#include <string>
#include <string_view>

#include "wavewall/vision.hpp"

namespace wavewall::vision {

std::string encode_pgm(const Frame& frame);
Frame decode_pgm(std::string_view bytes);

Frame read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Frame& frame);

}  // namespace wavewall::vision
