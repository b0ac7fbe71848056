#include "usot/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>
#include <vector>

namespace usot {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

GrayImage load_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw FormatError("png: " + std::string(image.message) + " (" + path.string() + ")");
  image.format = PNG_FORMAT_GRAY;
  GrayImage out(image.height, image.width);
  if (!png_image_finish_read(&image, nullptr, out.data(), 0, nullptr)) {
    png_image_free(&image);
    throw FormatError("png: " + std::string(image.message) + " (" + path.string() + ")");
  }
  return out;
}

void skip_pgm_space(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("pgm: cannot open " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P5") throw FormatError("pgm: only binary P5 supported (" + path.string() + ")");
  long width = 0, height = 0, maxval = 0;
  skip_pgm_space(in);
  in >> width;
  skip_pgm_space(in);
  in >> height;
  skip_pgm_space(in);
  in >> maxval;
  in.get();
  if (!in || width <= 0 || height <= 0 || maxval != 255)
    throw FormatError("pgm: bad header (" + path.string() + ")");
  GrayImage out(height, width);
  in.read(reinterpret_cast<char*>(out.data()), width * height);
  if (in.gcount() != width * height) throw FormatError("pgm: truncated payload (" + path.string() + ")");
  return out;
}

}  // namespace

bool is_image_file(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  return ext == ".png" || ext == ".pgm";
}

GrayImage load_gray(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return load_png(path);
  if (ext == ".pgm") return load_pgm(path);
  throw FormatError("unsupported image format: " + path.string());
}

void save_gray(const std::filesystem::path& path, const GrayImage& image) {
  if (lower_ext(path) == ".pgm") {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.data()), image.size());
    if (!out) throw std::runtime_error("pgm: write failed for " + path.string());
    return;
  }
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.cols());
  png.height = static_cast<png_uint_32>(image.rows());
  png.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.c_str(), 0, image.data(), 0, nullptr))
    throw std::runtime_error("png: " + std::string(png.message) + " (" + path.string() + ")");
}

}  // namespace usot
