#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "usot/flow.hpp"

namespace usot {

namespace {

constexpr char kMagic[4] = {'P', 'I', 'E', 'H'};  // 202021.25f little-endian

std::uint32_t read_u32_le(const char* p) {
  const auto* b = reinterpret_cast<const unsigned char*>(p);
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
         (std::uint32_t(b[3]) << 24);
}

void write_u32_le(std::string& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xFF));
}

}  // namespace

FlowFieldF decode_flow(const std::string& bytes) {
  if (bytes.size() < 12) throw FormatError("flow: file shorter than header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("flow: bad magic");
  const auto width = static_cast<std::int32_t>(read_u32_le(bytes.data() + 4));
  const auto height = static_cast<std::int32_t>(read_u32_le(bytes.data() + 8));
  if (width <= 0 || height <= 0 || width > (1 << 16) || height > (1 << 16))
    throw FormatError("flow: invalid dimensions");
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() != 12 + 8 * count)
    throw FormatError("flow: payload size does not match dimensions");

  FlowFieldF flow(width, height);
  const char* p = bytes.data() + 12;
  for (std::int32_t y = 0; y < height; ++y) {
    for (std::int32_t x = 0; x < width; ++x) {
      flow.u(y, x) = std::bit_cast<float>(read_u32_le(p));
      flow.v(y, x) = std::bit_cast<float>(read_u32_le(p + 4));
      p += 8;
    }
  }
  if (!flow.all_finite()) throw FormatError("flow: non-finite values");
  return flow;
}

std::string encode_flow(const FlowFieldF& flow) {
  std::string out;
  out.reserve(12 + 8 * static_cast<std::size_t>(flow.u.size()));
  out.append(kMagic, 4);
  write_u32_le(out, static_cast<std::uint32_t>(flow.width()));
  write_u32_le(out, static_cast<std::uint32_t>(flow.height()));
  for (Eigen::Index y = 0; y < flow.height(); ++y) {
    for (Eigen::Index x = 0; x < flow.width(); ++x) {
      write_u32_le(out, std::bit_cast<std::uint32_t>(flow.u(y, x)));
      write_u32_le(out, std::bit_cast<std::uint32_t>(flow.v(y, x)));
    }
  }
  return out;
}

FlowFieldF load_flow(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("flow: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return decode_flow(ss.str());
  } catch (const FormatError& e) {
    throw FormatError(std::string(e.what()) + " (" + path.string() + ")");
  }
}

void save_flow(const std::filesystem::path& path, const FlowFieldF& flow) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("flow: cannot write " + path.string());
  const std::string bytes = encode_flow(flow);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("flow: write failed for " + path.string());
}

}  // namespace usot
